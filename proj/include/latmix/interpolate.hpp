#pragma once

#include <latmix/latent.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <string_view>

namespace latmix {

/// How the interpolated latent's norm is restored.
enum class NormMode {
    Lin,  ///< none, plain convex combination
    Fix,  ///< rescale to sqrt(L)
    Nin,  ///< rescale to the weighted mean of the input norms
};

/// What is split off each latent as its deterministic part before mixing.
enum class MeanMode {
    Zero,         ///< d = 0
    GlobalMean,   ///< d = mean over all elements
    ChannelMean,  ///< d = per-channel mean, constant over the spatial plane
};

inline std::string_view to_string(NormMode mode);
inline std::string_view to_string(MeanMode mode);
inline NormMode parse_norm_mode(std::string_view label);
inline MeanMode parse_mean_mode(std::string_view label);

/// A norm mode paired with a mean mode, e.g. "fix/chm". Lin only pairs with Zero.
struct InterpMethod {
    NormMode norm = NormMode::Lin;
    MeanMode mean = MeanMode::Zero;

    InterpMethod() = default;
    InterpMethod(NormMode n, MeanMode m) : norm(n), mean(m) {
        if (n == NormMode::Lin && m != MeanMode::Zero)
            throw InvalidMethod("linear interpolation takes no mean adjustment");
    }

    std::string label() const { return std::string(to_string(norm)) + "/" + std::string(to_string(mean)); }

    friend bool operator==(const InterpMethod&, const InterpMethod&) = default;
};

/// Parses labels such as "fix/chm", "nin/m", "lin" or "lin/0".
inline InterpMethod parse_method(std::string_view label);

/// z = deterministic + noise.
template <typename Scalar = double>
struct Decomposition {
    Latent<Scalar> deterministic;
    Latent<Scalar> noise;
    MeanMode mode;
};

namespace detail {

template <typename Scalar>
void require_matching(const LatentSet<Scalar>& set, const WeightVector& w) {
    if (set.size() != w.size())
        throw LengthMismatch(std::to_string(set.size()) + " latents but " + std::to_string(w.size()) +
                             " weights");
}

template <typename Scalar>
Latent<Scalar> rescale_to(const Latent<Scalar>& direction, Scalar target_norm) {
    const Scalar current = norm(direction);
    const Scalar floor = Scalar(1e-12) * std::sqrt(static_cast<Scalar>(direction.size()));
    if (!(current > floor))
        throw DegenerateDirection("weighted sum has norm " + std::to_string(current) +
                                  "; its direction is undefined");
    return (target_norm / current) * direction;
}

}  // namespace detail

/// Convex combination sum_n w_n z_n.
template <typename Scalar>
Latent<Scalar> lerp(const LatentSet<Scalar>& set, const WeightVector& w) {
    detail::require_matching(set, w);
    typename Latent<Scalar>::Vector acc = Latent<Scalar>::Vector::Zero(set.shape().size());
    for (std::size_t n = 0; n < set.size(); ++n)
        acc.noalias() += static_cast<Scalar>(w[n]) * set[n].values();
    return Latent<Scalar>(set.shape(), std::move(acc));
}

/// Convex combination rescaled to the nominal norm sqrt(L).
template <typename Scalar>
Latent<Scalar> fix_norm(const LatentSet<Scalar>& set, const WeightVector& w) {
    return detail::rescale_to(lerp(set, w), std::sqrt(static_cast<Scalar>(set.shape().size())));
}

/// Convex combination rescaled to the weighted mean of the input norms.
/// Vertex weights return the selected input unchanged.
template <typename Scalar>
Latent<Scalar> nin(const LatentSet<Scalar>& set, const WeightVector& w) {
    Latent<Scalar> mixed = lerp(set, w);
    const Scalar target = pairwise_sum<Scalar>(static_cast<Index>(set.size()), [&](Index n) {
        const auto k = static_cast<std::size_t>(n);
        return static_cast<Scalar>(w[k]) * norm(set[k]);
    });
    return detail::rescale_to(mixed, target);
}

/// Two-point spherical interpolation. The angle is measured between the
/// normalized inputs; the inputs themselves are combined unnormalized.
template <typename Scalar>
Latent<Scalar> slerp2(const Latent<Scalar>& p1, const Latent<Scalar>& p2, Scalar t) {
    require_same_shape(p1.shape(), p2.shape());
    if (!(t >= Scalar(0) && t <= Scalar(1)))
        throw InvalidArgument("slerp parameter must lie in [0, 1]");
    const Scalar n1 = norm(p1);
    const Scalar n2 = norm(p2);
    if (n1 == Scalar(0) || n2 == Scalar(0))
        throw DegenerateDirection("slerp of a zero latent is undefined");

    const Scalar cosine = std::clamp(dot(p1, p2) / (n1 * n2), Scalar(-1), Scalar(1));
    const Scalar theta = std::acos(cosine);
    if (theta > std::numbers::pi_v<Scalar> - Scalar(1e-6))
        throw Antipodal("inputs are antipodal; the rotation plane is undefined");

    const Scalar sin_theta = std::sin(theta);
    if (sin_theta < Scalar(1e-6)) {
        const double td = static_cast<double>(t);
        return lerp(LatentSet<Scalar>{p1, p2}, WeightVector{1.0 - td, td});
    }
    const Scalar a = std::sin((Scalar(1) - t) * theta) / sin_theta;
    const Scalar b = std::sin(t * theta) / sin_theta;
    return Latent<Scalar>(p1.shape(), a * p1.values() + b * p2.values());
}

/// Splits z into a deterministic part chosen by `mode` and the remainder.
template <typename Scalar>
Decomposition<Scalar> decompose(const Latent<Scalar>& z, MeanMode mode) {
    Latent<Scalar> d(z.shape());
    switch (mode) {
        case MeanMode::Zero:
            break;
        case MeanMode::GlobalMean:
            d = Latent<Scalar>::constant(z.shape(), global_mean(z));
            break;
        case MeanMode::ChannelMean:
            d = broadcast_channels<Scalar>(z.shape(), channel_means(z));
            break;
    }
    Latent<Scalar> e = z - d;
    return {std::move(d), std::move(e), mode};
}

/// Mixes the deterministic parts linearly and the noise parts with the
/// method's norm mode, then adds the two results. With MeanMode::Zero this is
/// exactly lerp, fix_norm or nin.
template <typename Scalar>
Latent<Scalar> mean_adjusted_interp(const LatentSet<Scalar>& set, const WeightVector& w,
                                    const InterpMethod& method) {
    detail::require_matching(set, w);
    auto mix = [&](const LatentSet<Scalar>& parts) {
        switch (method.norm) {
            case NormMode::Lin: return lerp(parts, w);
            case NormMode::Fix: return fix_norm(parts, w);
            case NormMode::Nin: return nin(parts, w);
        }
        throw InvalidMethod("unknown norm mode");
    };
    if (method.mean == MeanMode::Zero) return mix(set);
    if (method.norm == NormMode::Lin)
        throw InvalidMethod("linear interpolation takes no mean adjustment");

    std::vector<Latent<Scalar>> det;
    std::vector<Latent<Scalar>> noise;
    det.reserve(set.size());
    noise.reserve(set.size());
    for (const auto& z : set) {
        auto parts = decompose(z, method.mean);
        det.push_back(std::move(parts.deterministic));
        noise.push_back(std::move(parts.noise));
    }
    return lerp(LatentSet<Scalar>(std::move(det)), w) + mix(LatentSet<Scalar>(std::move(noise)));
}

template <typename Scalar>
Latent<Scalar> interpolate(const LatentSet<Scalar>& set, const WeightVector& w, const InterpMethod& method) {
    return mean_adjusted_interp(set, w, method);
}

/// Interpolation with uniform weights 1/N.
template <typename Scalar>
Latent<Scalar> centroid(const LatentSet<Scalar>& set, const InterpMethod& method) {
    return mean_adjusted_interp(set, WeightVector::uniform(set.size()), method);
}

// ---------------------------------------------------------------------------

inline std::string_view to_string(NormMode mode) {
    switch (mode) {
        case NormMode::Lin: return "lin";
        case NormMode::Fix: return "fix";
        case NormMode::Nin: return "nin";
    }
    return "?";
}

inline std::string_view to_string(MeanMode mode) {
    switch (mode) {
        case MeanMode::Zero: return "0";
        case MeanMode::GlobalMean: return "m";
        case MeanMode::ChannelMean: return "chm";
    }
    return "?";
}

inline NormMode parse_norm_mode(std::string_view label) {
    if (label == "lin") return NormMode::Lin;
    if (label == "fix") return NormMode::Fix;
    if (label == "nin") return NormMode::Nin;
    throw InvalidMethod("unknown norm mode '" + std::string(label) + "' (expected lin, fix or nin)");
}

inline MeanMode parse_mean_mode(std::string_view label) {
    if (label == "0") return MeanMode::Zero;
    if (label == "m") return MeanMode::GlobalMean;
    if (label == "chm") return MeanMode::ChannelMean;
    throw InvalidMethod("unknown mean mode '" + std::string(label) + "' (expected 0, m or chm)");
}

inline InterpMethod parse_method(std::string_view label) {
    const auto slash = label.find('/');
    if (slash == std::string_view::npos) return InterpMethod(parse_norm_mode(label), MeanMode::Zero);
    return InterpMethod(parse_norm_mode(label.substr(0, slash)), parse_mean_mode(label.substr(slash + 1)));
}

}  // namespace latmix
