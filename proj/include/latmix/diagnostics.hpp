#pragma once

#include <latmix/interpolate.hpp>
#include <latmix/synth.hpp>

#include <Eigen/Core>

#include <optional>
#include <vector>

namespace latmix {

/// sqrt(N): the factor by which fixed normalization scales a small bias
/// shared by N i.i.d. latents.
double predicted_amplification(std::size_t n);

/// Centroid channel means divided by the injected per-channel bias.
/// Channels without injected bias come back empty.
std::vector<std::optional<double>> measured_amplification(const LatentTensorSet& set, const InterpMethod& method,
                                                          const BiasSpec& spec);

/// Least-squares slope of y against x for a line through the origin.
double through_origin_slope(const Eigen::VectorXd& x, const Eigen::VectorXd& y);

/// Centroid channel-mean statistics over trials, one row per N and one
/// column per channel.
struct AmplificationReport {
    InterpMethod method;
    LatentShape shape;
    SeedSpec seed;
    std::size_t trials = 0;
    std::vector<std::size_t> n_values;

    Eigen::VectorXd injected;   ///< per-channel injected mean
    Eigen::VectorXd predicted;  ///< sqrt(N) per row
    Eigen::MatrixXd mean;       ///< trial average of the centroid channel mean
    Eigen::MatrixXd stddev;     ///< sample standard deviation over trials (NaN when trials == 1)
    Eigen::MatrixXd stderr_of_mean;
    Eigen::VectorXd slope;      ///< per-channel through-origin fit of mean against sqrt(N)

    /// mean / injected, or empty where the channel carries no bias.
    std::optional<double> amplification(Index row, Index channel) const;
};

struct ExperimentConfig {
    LatentShape shape{4, 64, 64};
    BiasSpec bias = bias::GlobalConstant{0.02};
    std::vector<std::size_t> n_values{2, 8, 32, 48, 64, 96};
    std::size_t trials = 100;
    std::vector<InterpMethod> methods{InterpMethod(NormMode::Fix, MeanMode::Zero)};
    SeedSpec seed{};
    unsigned threads = 0;  ///< 0 = hardware concurrency
};

/// Trial t draws one biased set of max(N) members on stream
/// seed.stream_index + (t << 32); each N uses its first N members. Results do
/// not depend on the thread count.
std::vector<AmplificationReport> bias_growth_experiment(const ExperimentConfig& config);

struct NormSample {
    WeightVector weights;
    double norm;
};

/// Norm of the interpolated latent at each point of a weight grid.
std::vector<NormSample> norm_profile(const LatentTensorSet& set, const std::vector<WeightVector>& grid,
                                     const InterpMethod& method);

}  // namespace latmix
