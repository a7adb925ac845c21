#pragma once

#include <latmix/latent.hpp>

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace latmix {

// LATF: a 28-byte little-endian header followed by count*C*H*W values.
//
//   offset  size  field
//        0     4  magic "LATF"
//        4     4  version (u32) = 1
//        8     4  dtype   (u32) 1 = float32, 2 = float64
//       12     4  C       (u32)
//       16     4  H       (u32)
//       20     4  W       (u32)
//       24     4  count   (u32)
//       28     .  payload, latents concatenated, each channel-major
//                 (channel, row, column)

enum class Dtype : std::uint32_t { Float32 = 1, Float64 = 2 };

inline constexpr std::uint32_t kLatfVersion = 1;
inline constexpr std::size_t kLatfHeaderSize = 28;

struct LatentFileHeader {
    std::uint32_t version = kLatfVersion;
    Dtype dtype = Dtype::Float64;
    std::uint32_t channels = 0;
    std::uint32_t height = 0;
    std::uint32_t width = 0;
    std::uint32_t count = 0;
};

std::vector<std::byte> encode_latents(const LatentTensorSet& set, Dtype dtype);
LatentTensorSet decode_latents(std::span<const std::byte> bytes);

/// Header fields only; validates magic, version and dtype.
LatentFileHeader decode_header(std::span<const std::byte> bytes);

void write_latents(const std::filesystem::path& path, const LatentTensorSet& set, Dtype dtype = Dtype::Float64);
LatentTensorSet read_latents(const std::filesystem::path& path);

}  // namespace latmix
