#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace latmix {

/// Base of every error thrown by the library. `name()` is the stable
/// identifier the CLI prints on failure.
class Error : public std::runtime_error {
public:
    Error(std::string name, const std::string& what)
        : std::runtime_error(name + ": " + what), name_(std::move(name)) {}

    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

#define LATMIX_DEFINE_ERROR(Type)                                              \
    class Type : public Error {                                                \
    public:                                                                    \
        explicit Type(const std::string& what) : Error(#Type, what) {}         \
    }

LATMIX_DEFINE_ERROR(InvalidShape);
LATMIX_DEFINE_ERROR(ShapeMismatch);
LATMIX_DEFINE_ERROR(LengthMismatch);
LATMIX_DEFINE_ERROR(InvalidWeights);
LATMIX_DEFINE_ERROR(InvalidMethod);
LATMIX_DEFINE_ERROR(InvalidBias);
LATMIX_DEFINE_ERROR(RegionOutOfBounds);
LATMIX_DEFINE_ERROR(EmptySet);
LATMIX_DEFINE_ERROR(DegenerateDirection);
LATMIX_DEFINE_ERROR(Antipodal);
LATMIX_DEFINE_ERROR(InvalidArgument);
LATMIX_DEFINE_ERROR(IoError);

#undef LATMIX_DEFINE_ERROR

/// Errors raised while decoding a LATF file carry the byte offset at which
/// the problem was detected, when one exists.
class FormatError : public Error {
public:
    FormatError(std::string name, const std::string& what,
                std::optional<std::uint64_t> offset = std::nullopt)
        : Error(std::move(name),
                offset ? what + " (at byte " + std::to_string(*offset) + ")" : what),
          offset_(offset) {}

    std::optional<std::uint64_t> offset() const noexcept { return offset_; }

private:
    std::optional<std::uint64_t> offset_;
};

#define LATMIX_DEFINE_FORMAT_ERROR(Type)                                       \
    class Type : public FormatError {                                          \
    public:                                                                    \
        explicit Type(const std::string& what,                                 \
                      std::optional<std::uint64_t> offset = std::nullopt)      \
            : FormatError(#Type, what, offset) {}                              \
    }

LATMIX_DEFINE_FORMAT_ERROR(BadMagic);
LATMIX_DEFINE_FORMAT_ERROR(UnsupportedVersion);
LATMIX_DEFINE_FORMAT_ERROR(UnsupportedDtype);
LATMIX_DEFINE_FORMAT_ERROR(InvalidHeader);
LATMIX_DEFINE_FORMAT_ERROR(TruncatedHeader);
LATMIX_DEFINE_FORMAT_ERROR(TruncatedPayload);
LATMIX_DEFINE_FORMAT_ERROR(TrailingBytes);
LATMIX_DEFINE_FORMAT_ERROR(NonFiniteValue);

#undef LATMIX_DEFINE_FORMAT_ERROR

}  // namespace latmix
