#include <latmix/diagnostics.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

namespace latmix {

double predicted_amplification(std::size_t n) {
    if (n < 1) throw InvalidArgument("N must be at least 1");
    return std::sqrt(static_cast<double>(n));
}

std::vector<std::optional<double>> measured_amplification(const LatentTensorSet& set, const InterpMethod& method,
                                                          const BiasSpec& spec) {
    const Eigen::VectorXd injected = injected_channel_means(spec, set.shape());
    const Eigen::VectorXd means = channel_means(centroid(set, method));
    std::vector<std::optional<double>> out(static_cast<std::size_t>(means.size()));
    for (Index c = 0; c < means.size(); ++c)
        if (injected[c] != 0.0) out[static_cast<std::size_t>(c)] = means[c] / injected[c];
    return out;
}

double through_origin_slope(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    if (x.size() != y.size() || x.size() == 0) throw LengthMismatch("slope fit needs equal, non-empty inputs");
    const double sxy = pairwise_sum<double>(x.size(), [&](Index i) { return x[i] * y[i]; });
    const double sxx = pairwise_sum<double>(x.size(), [&](Index i) { return x[i] * x[i]; });
    if (sxx == 0.0) throw InvalidArgument("slope fit needs a nonzero abscissa");
    return sxy / sxx;
}

std::optional<double> AmplificationReport::amplification(Index row, Index channel) const {
    if (injected[channel] == 0.0) return std::nullopt;
    return mean(row, channel) / injected[channel];
}

namespace {

// per_trial[t][m](row, c): centroid channel mean for trial t, method m.
using TrialResult = std::vector<Eigen::MatrixXd>;

TrialResult run_trial(const ExperimentConfig& cfg, std::size_t trial) {
    const SeedSpec seed = cfg.seed.with_stream(cfg.seed.stream_index + (static_cast<std::uint64_t>(trial) << 32));
    const LatentTensorSet full = make_biased_set(cfg.n_values.back(), cfg.shape, cfg.bias, seed);
    const auto rows = static_cast<Index>(cfg.n_values.size());

    TrialResult result(cfg.methods.size(), Eigen::MatrixXd(rows, cfg.shape.channels));
    for (Index row = 0; row < rows; ++row) {
        const std::size_t n = cfg.n_values[static_cast<std::size_t>(row)];
        const LatentTensorSet set = n == full.size() ? full : full.prefix(n);
        for (std::size_t m = 0; m < cfg.methods.size(); ++m)
            result[m].row(row) = channel_means(centroid(set, cfg.methods[m])).transpose();
    }
    return result;
}

void validate(const ExperimentConfig& cfg) {
    if (cfg.trials < 1) throw InvalidArgument("trials must be at least 1");
    if (cfg.methods.empty()) throw InvalidArgument("no interpolation methods given");
    if (cfg.n_values.empty()) throw InvalidArgument("no N values given");
    for (std::size_t i = 0; i < cfg.n_values.size(); ++i) {
        if (cfg.n_values[i] < 2) throw InvalidArgument("every N must be at least 2");
        if (i > 0 && cfg.n_values[i] <= cfg.n_values[i - 1])
            throw InvalidArgument("N values must be strictly increasing");
    }
    validate_bias(cfg.bias, cfg.shape);
}

}  // namespace

std::vector<AmplificationReport> bias_growth_experiment(const ExperimentConfig& cfg) {
    validate(cfg);

    std::vector<TrialResult> per_trial(cfg.trials);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto worker = [&] {
        for (std::size_t t = next++; t < cfg.trials; t = next++) {
            try {
                per_trial[t] = run_trial(cfg, t);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next = cfg.trials;
            }
        }
    };

    unsigned threads = cfg.threads != 0 ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, cfg.trials));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);

    const auto rows = static_cast<Index>(cfg.n_values.size());
    const Index channels = cfg.shape.channels;
    const auto trials = static_cast<Index>(cfg.trials);
    const double nan = std::numeric_limits<double>::quiet_NaN();

    Eigen::VectorXd sqrt_n(rows);
    for (Index r = 0; r < rows; ++r) sqrt_n[r] = predicted_amplification(cfg.n_values[static_cast<std::size_t>(r)]);

    std::vector<AmplificationReport> reports;
    for (std::size_t m = 0; m < cfg.methods.size(); ++m) {
        AmplificationReport rep;
        rep.method = cfg.methods[m];
        rep.shape = cfg.shape;
        rep.seed = cfg.seed;
        rep.trials = cfg.trials;
        rep.n_values = cfg.n_values;
        rep.injected = injected_channel_means(cfg.bias, cfg.shape);
        rep.predicted = sqrt_n;
        rep.mean.resize(rows, channels);
        rep.stddev.resize(rows, channels);
        rep.stderr_of_mean.resize(rows, channels);
        rep.slope.resize(channels);

        for (Index r = 0; r < rows; ++r) {
            for (Index c = 0; c < channels; ++c) {
                auto sample = [&](Index t) { return per_trial[static_cast<std::size_t>(t)][m](r, c); };
                const double mu = pairwise_sum<double>(trials, sample) / static_cast<double>(trials);
                double sd = nan;
                if (trials > 1) {
                    const double ss = pairwise_sum<double>(trials, [&](Index t) {
                        const double dev = sample(t) - mu;
                        return dev * dev;
                    });
                    sd = std::sqrt(ss / static_cast<double>(trials - 1));
                }
                rep.mean(r, c) = mu;
                rep.stddev(r, c) = sd;
                rep.stderr_of_mean(r, c) = sd / std::sqrt(static_cast<double>(trials));
            }
        }
        for (Index c = 0; c < channels; ++c) rep.slope[c] = through_origin_slope(sqrt_n, rep.mean.col(c));
        reports.push_back(std::move(rep));
    }
    return reports;
}

std::vector<NormSample> norm_profile(const LatentTensorSet& set, const std::vector<WeightVector>& grid,
                                     const InterpMethod& method) {
    std::vector<NormSample> out;
    out.reserve(grid.size());
    for (const auto& w : grid) out.push_back({w, norm(interpolate(set, w, method))});
    return out;
}

}  // namespace latmix
