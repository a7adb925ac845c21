#include <latmix/latf.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <limits>
#include <string>

namespace latmix {

namespace {

constexpr std::byte kMagic[4] = {std::byte{'L'}, std::byte{'A'}, std::byte{'T'}, std::byte{'F'}};

template <typename UInt>
std::byte* put_le(std::byte* out, UInt value) {
    for (std::size_t i = 0; i < sizeof(UInt); ++i) *out++ = static_cast<std::byte>((value >> (8 * i)) & 0xFFu);
    return out;
}

template <typename UInt>
UInt get_le(std::span<const std::byte> bytes, std::size_t offset) {
    UInt value = 0;
    for (std::size_t i = 0; i < sizeof(UInt); ++i)
        value |= static_cast<UInt>(std::to_integer<unsigned>(bytes[offset + i])) << (8 * i);
    return value;
}

std::uint32_t checked_u32(Index v, const char* what) {
    if (v > std::numeric_limits<std::uint32_t>::max())
        throw InvalidArgument(std::string(what) + " does not fit the LATF header");
    return static_cast<std::uint32_t>(v);
}

std::size_t value_size(Dtype dtype) { return dtype == Dtype::Float32 ? 4 : 8; }

}  // namespace

std::vector<std::byte> encode_latents(const LatentTensorSet& set, Dtype dtype) {
    if (dtype != Dtype::Float32 && dtype != Dtype::Float64) throw UnsupportedDtype("unknown dtype");
    const LatentShape& s = set.shape();
    std::vector<std::byte> out(kLatfHeaderSize + set.size() * static_cast<std::size_t>(s.size()) * value_size(dtype));
    std::byte* cursor = std::copy(std::begin(kMagic), std::end(kMagic), out.data());
    cursor = put_le(cursor, kLatfVersion);
    cursor = put_le(cursor, static_cast<std::uint32_t>(dtype));
    cursor = put_le(cursor, checked_u32(s.channels, "channel count"));
    cursor = put_le(cursor, checked_u32(s.height, "height"));
    cursor = put_le(cursor, checked_u32(s.width, "width"));
    cursor = put_le(cursor, checked_u32(static_cast<Index>(set.size()), "latent count"));

    for (std::size_t n = 0; n < set.size(); ++n) {
        const auto& v = set[n].values();
        for (Index i = 0; i < v.size(); ++i) {
            if (dtype == Dtype::Float64) {
                cursor = put_le(cursor, std::bit_cast<std::uint64_t>(v[i]));
            } else {
                const float f = static_cast<float>(v[i]);
                if (!std::isfinite(f))
                    throw NonFiniteValue("latent " + std::to_string(n) + " element " + std::to_string(i) +
                                         " overflows float32");
                cursor = put_le(cursor, std::bit_cast<std::uint32_t>(f));
            }
        }
    }
    return out;
}

LatentFileHeader decode_header(std::span<const std::byte> bytes) {
    if (bytes.size() < 4) throw TruncatedHeader("file ends inside the magic", bytes.size());
    for (std::size_t i = 0; i < 4; ++i)
        if (bytes[i] != kMagic[i]) throw BadMagic("expected \"LATF\"", 0);
    if (bytes.size() < kLatfHeaderSize) throw TruncatedHeader("file ends inside the header", bytes.size());

    LatentFileHeader h;
    h.version = get_le<std::uint32_t>(bytes, 4);
    if (h.version != kLatfVersion)
        throw UnsupportedVersion("version " + std::to_string(h.version) + ", expected 1", 4);
    const auto dtype = get_le<std::uint32_t>(bytes, 8);
    if (dtype != 1 && dtype != 2) throw UnsupportedDtype("dtype code " + std::to_string(dtype), 8);
    h.dtype = static_cast<Dtype>(dtype);
    h.channels = get_le<std::uint32_t>(bytes, 12);
    h.height = get_le<std::uint32_t>(bytes, 16);
    h.width = get_le<std::uint32_t>(bytes, 20);
    h.count = get_le<std::uint32_t>(bytes, 24);
    if (h.channels == 0 || h.height == 0 || h.width == 0) throw InvalidHeader("zero dimension", 12);
    if (h.count == 0) throw InvalidHeader("file holds no latents", 24);
    return h;
}

LatentTensorSet decode_latents(std::span<const std::byte> bytes) {
    const LatentFileHeader h = decode_header(bytes);
    const std::size_t width = value_size(h.dtype);

    // Saturates at UINT64_MAX, which no in-memory file can reach.
    std::uint64_t expected = width;
    for (std::uint64_t f : {h.channels, h.height, h.width, h.count})
        expected = expected > std::numeric_limits<std::uint64_t>::max() / f
                       ? std::numeric_limits<std::uint64_t>::max()
                       : expected * f;
    const std::uint64_t available = bytes.size() - kLatfHeaderSize;
    if (expected > available)
        throw TruncatedPayload("header promises more values than the file holds", bytes.size());
    if (expected < available)
        throw TrailingBytes("unexpected data after the last latent", kLatfHeaderSize + expected);

    const LatentShape shape(h.channels, h.height, h.width);
    std::vector<LatentTensor> members;
    members.reserve(h.count);
    std::size_t offset = kLatfHeaderSize;
    for (std::uint32_t n = 0; n < h.count; ++n) {
        LatentTensor::Vector v(shape.size());
        for (Index i = 0; i < v.size(); ++i, offset += width) {
            const double value = h.dtype == Dtype::Float64
                                     ? std::bit_cast<double>(get_le<std::uint64_t>(bytes, offset))
                                     : static_cast<double>(std::bit_cast<float>(get_le<std::uint32_t>(bytes, offset)));
            if (!std::isfinite(value)) throw NonFiniteValue("NaN or Inf in payload", offset);
            v[i] = value;
        }
        members.emplace_back(shape, std::move(v));
    }
    return LatentTensorSet(std::move(members));
}

void write_latents(const std::filesystem::path& path, const LatentTensorSet& set, Dtype dtype) {
    const std::vector<std::byte> bytes = encode_latents(set, dtype);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("failed writing " + path.string());
}

LatentTensorSet read_latents(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::vector<char> raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError("failed reading " + path.string());
    return decode_latents(std::as_bytes(std::span(raw)));
}

}  // namespace latmix
