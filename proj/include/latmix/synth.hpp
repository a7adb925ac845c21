#pragma once

#include <latmix/interpolate.hpp>
#include <latmix/latent.hpp>

#include <Eigen/Core>

#include <cstdint>
#include <variant>
#include <vector>

namespace latmix {

/// (base_seed, stream_index) fully determines a generated latent. Streams
/// with different indices are independent Philox sequences under one key.
struct SeedSpec {
    std::uint64_t base_seed = 0;
    std::uint64_t stream_index = 0;

    SeedSpec with_stream(std::uint64_t stream) const { return {base_seed, stream}; }
};

/// Rows [row0, row0 + rows) and columns [col0, col0 + cols) of every channel.
struct Region {
    Index row0 = 0;
    Index col0 = 0;
    Index rows = 0;
    Index cols = 0;

    Index area() const noexcept { return rows * cols; }

    /// The top quarter of an H x W plane (at least one row).
    static Region top_quarter(const LatentShape& shape);
};

namespace bias {

struct None {};
struct GlobalConstant {
    double value = 0.0;
};
struct PerChannel {
    Eigen::VectorXd values;
};
struct RegionOffset {
    Region region;
    Eigen::VectorXd offsets;  // one per channel
};

}  // namespace bias

/// The deterministic component added on top of i.i.d. noise.
using BiasSpec = std::variant<bias::None, bias::GlobalConstant, bias::PerChannel, bias::RegionOffset>;

/// Throws InvalidBias / RegionOutOfBounds if `spec` does not fit `shape`.
void validate_bias(const BiasSpec& spec, const LatentShape& shape);

/// The latent d described by `spec`.
LatentTensor deterministic_part(const BiasSpec& spec, const LatentShape& shape);

/// Channel-mean contribution of `spec` for each channel.
Eigen::VectorXd injected_channel_means(const BiasSpec& spec, const LatentShape& shape);

/// L i.i.d. N(0, 1) values drawn from the Philox stream (seed.base_seed,
/// seed.stream_index) through Boost's ziggurat normal sampler.
LatentTensor sample_gaussian_latent(const LatentShape& shape, const SeedSpec& seed);

/// Members z_n = d + e_n where e_n uses stream seed.stream_index + n. Sets
/// of different size built from one seed therefore share their prefix.
LatentTensorSet make_biased_set(std::size_t count, const LatentShape& shape, const BiasSpec& spec,
                                const SeedSpec& seed);

/// Adds the per-channel offsets of a RegionOffset spec inside its region.
LatentTensor apply_region_offset(const LatentTensor& z, const BiasSpec& spec);

/// Channel offsets (-b, +b, 0, ...) that leave the global mean unchanged.
Eigen::VectorXd balanced_offsets(Index channels, double b);

struct Toy2dPaths {
    std::vector<double> t;
    std::vector<Eigen::Vector2d> lin;
    std::vector<Eigen::Vector2d> fix;
    std::vector<Eigen::Vector2d> slerp;
    std::vector<Eigen::Vector2d> nin;
};

/// Default inputs: norm sqrt(2), ninety degrees apart.
inline const Eigen::Vector2d kToyStart{1.4142135623730951, 0.0};
inline const Eigen::Vector2d kToyEnd{0.0, 1.4142135623730951};

/// Paths of lerp, fix_norm, slerp2 and nin for t on a uniform grid over [0, 1],
/// treating the inputs as L = 2 latents.
Toy2dPaths toy2d_paths(const Eigen::Vector2d& z1, const Eigen::Vector2d& z2, std::size_t steps);

}  // namespace latmix
