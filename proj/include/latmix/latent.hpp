#pragma once

#include <latmix/errors.hpp>

#include <Eigen/Core>

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace latmix {

using Index = Eigen::Index;

/// Channel count, height and width of a latent feature map.
struct LatentShape {
    Index channels = 1;
    Index height = 1;
    Index width = 1;

    LatentShape() = default;
    LatentShape(Index c, Index h, Index w) : channels(c), height(h), width(w) {
        if (c < 1 || h < 1 || w < 1)
            throw InvalidShape("dimensions must be >= 1, got " + to_string());
    }

    Index plane() const noexcept { return height * width; }
    Index size() const noexcept { return channels * height * width; }

    std::string to_string() const {
        return std::to_string(channels) + "x" + std::to_string(height) + "x" +
               std::to_string(width);
    }

    friend bool operator==(const LatentShape&, const LatentShape&) = default;
};

inline void require_same_shape(const LatentShape& a, const LatentShape& b) {
    if (a != b)
        throw ShapeMismatch(a.to_string() + " vs " + b.to_string());
}

// Pairwise (tree) summation of term(0) + ... + term(n-1). The split points
// depend only on n, so the result is reproducible bit for bit.
template <typename Scalar, typename Term>
Scalar pairwise_sum(Index first, Index count, const Term& term) {
    constexpr Index kBlock = 64;
    if (count <= kBlock) {
        Scalar acc(0);
        for (Index i = first; i < first + count; ++i) acc += term(i);
        return acc;
    }
    const Index half = count / 2;
    return pairwise_sum<Scalar>(first, half, term) +
           pairwise_sum<Scalar>(first + half, count - half, term);
}

template <typename Scalar, typename Term>
Scalar pairwise_sum(Index count, const Term& term) {
    return pairwise_sum<Scalar>(Index{0}, count, term);
}

/// A C x H x W latent stored channel-major (channel, row, column). Values
/// are immutable once constructed and always finite.
template <typename Scalar = double>
class Latent {
public:
    using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

    explicit Latent(const LatentShape& shape)
        : shape_(shape), values_(Vector::Zero(shape.size())) {}

    Latent(const LatentShape& shape, Vector values)
        : shape_(shape), values_(std::move(values)) {
        if (values_.size() != shape_.size())
            throw LengthMismatch("latent of shape " + shape_.to_string() + " needs " +
                                 std::to_string(shape_.size()) + " values, got " +
                                 std::to_string(values_.size()));
        if (!values_.allFinite())
            throw NonFiniteValue("latent contains NaN or Inf");
    }

    static Latent constant(const LatentShape& shape, Scalar value) {
        return Latent(shape, Vector::Constant(shape.size(), value));
    }

    const LatentShape& shape() const noexcept { return shape_; }
    Index size() const noexcept { return values_.size(); }
    const Vector& values() const noexcept { return values_; }
    const Scalar* data() const noexcept { return values_.data(); }

    Scalar operator()(Index c, Index row, Index col) const {
        return values_[(c * shape_.height + row) * shape_.width + col];
    }
    Scalar operator[](Index i) const { return values_[i]; }

    /// Contiguous H*W block holding channel c.
    auto channel(Index c) const { return values_.segment(c * shape_.plane(), shape_.plane()); }

    template <typename Other>
    Latent<Other> cast() const {
        return Latent<Other>(shape_, values_.template cast<Other>());
    }

private:
    LatentShape shape_;
    Vector values_;
};

using LatentTensor = Latent<double>;

template <typename Scalar>
Latent<Scalar> operator+(const Latent<Scalar>& a, const Latent<Scalar>& b) {
    require_same_shape(a.shape(), b.shape());
    return Latent<Scalar>(a.shape(), a.values() + b.values());
}

template <typename Scalar>
Latent<Scalar> operator-(const Latent<Scalar>& a, const Latent<Scalar>& b) {
    require_same_shape(a.shape(), b.shape());
    return Latent<Scalar>(a.shape(), a.values() - b.values());
}

template <typename Scalar>
Latent<Scalar> operator*(Scalar s, const Latent<Scalar>& z) {
    return Latent<Scalar>(z.shape(), s * z.values());
}

/// Ordered, non-empty collection of same-shape latents.
template <typename Scalar = double>
class LatentSet {
public:
    using value_type = Latent<Scalar>;

    explicit LatentSet(std::vector<Latent<Scalar>> members) : members_(std::move(members)) {
        if (members_.empty()) throw EmptySet("a latent set needs at least one member");
        for (const auto& m : members_) require_same_shape(members_.front().shape(), m.shape());
    }

    LatentSet(std::initializer_list<Latent<Scalar>> members)
        : LatentSet(std::vector<Latent<Scalar>>(members)) {}

    std::size_t size() const noexcept { return members_.size(); }
    const LatentShape& shape() const noexcept { return members_.front().shape(); }
    const Latent<Scalar>& operator[](std::size_t i) const { return members_[i]; }
    auto begin() const noexcept { return members_.begin(); }
    auto end() const noexcept { return members_.end(); }
    const std::vector<Latent<Scalar>>& members() const noexcept { return members_; }

    /// The first n members.
    LatentSet prefix(std::size_t n) const {
        if (n < 1 || n > members_.size())
            throw InvalidArgument("prefix length " + std::to_string(n) + " outside [1, " +
                                  std::to_string(members_.size()) + "]");
        return LatentSet(std::vector<Latent<Scalar>>(members_.begin(), members_.begin() + n));
    }

private:
    std::vector<Latent<Scalar>> members_;
};

using LatentTensorSet = LatentSet<double>;

/// Nonnegative mixing weights summing to one.
class WeightVector {
public:
    static constexpr double kSumTolerance = 1e-9;

    explicit WeightVector(Eigen::VectorXd weights) : weights_(std::move(weights)) {
        if (weights_.size() < 1) throw InvalidWeights("no weights given");
        bool any_positive = false;
        for (Index i = 0; i < weights_.size(); ++i) {
            const double w = weights_[i];
            if (!std::isfinite(w) || w < 0.0)
                throw InvalidWeights("weight " + std::to_string(i) + " is negative or non-finite");
            any_positive = any_positive || w > 0.0;
        }
        if (!any_positive) throw InvalidWeights("all weights are zero");
        const double total = pairwise_sum<double>(weights_.size(), [&](Index i) { return weights_[i]; });
        if (std::abs(total - 1.0) > kSumTolerance)
            throw InvalidWeights("weights sum to " + std::to_string(total) + ", expected 1");
    }

    WeightVector(std::initializer_list<double> w)
        : WeightVector(Eigen::Map<const Eigen::VectorXd>(w.begin(), static_cast<Index>(w.size()))) {}

    static WeightVector uniform(std::size_t n) {
        return WeightVector(Eigen::VectorXd::Constant(static_cast<Index>(n), 1.0 / static_cast<double>(n)));
    }

    static WeightVector vertex(std::size_t n, std::size_t k) {
        Eigen::VectorXd w = Eigen::VectorXd::Zero(static_cast<Index>(n));
        w[static_cast<Index>(k)] = 1.0;
        return WeightVector(std::move(w));
    }

    std::size_t size() const noexcept { return static_cast<std::size_t>(weights_.size()); }
    double operator[](std::size_t i) const { return weights_[static_cast<Index>(i)]; }
    const Eigen::VectorXd& values() const noexcept { return weights_; }

private:
    Eigen::VectorXd weights_;
};

// ---------------------------------------------------------------------------
// Reductions

template <typename Scalar>
Scalar squared_norm(const Latent<Scalar>& z) {
    const Scalar* v = z.data();
    return pairwise_sum<Scalar>(z.size(), [v](Index i) { return v[i] * v[i]; });
}

/// Euclidean norm over all C*H*W elements.
template <typename Scalar>
Scalar norm(const Latent<Scalar>& z) {
    return std::sqrt(squared_norm(z));
}

template <typename Scalar>
Scalar dot(const Latent<Scalar>& a, const Latent<Scalar>& b) {
    require_same_shape(a.shape(), b.shape());
    const Scalar* x = a.data();
    const Scalar* y = b.data();
    return pairwise_sum<Scalar>(a.size(), [x, y](Index i) { return x[i] * y[i]; });
}

// Mean of count values starting at v, accumulated as offsets from v[0] so a
// constant run returns its value exactly.
template <typename Scalar>
Scalar shifted_mean(const Scalar* v, Index count) {
    const Scalar pivot = v[0];
    return pivot + pairwise_sum<Scalar>(count, [v, pivot](Index i) { return v[i] - pivot; }) /
                       static_cast<Scalar>(count);
}

/// Mean of each channel's H*W values.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> channel_means(const Latent<Scalar>& z) {
    const LatentShape& s = z.shape();
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> means(s.channels);
    for (Index c = 0; c < s.channels; ++c) means[c] = shifted_mean(z.data() + c * s.plane(), s.plane());
    return means;
}

/// Mean over every element.
template <typename Scalar>
Scalar global_mean(const Latent<Scalar>& z) {
    return shifted_mean(z.data(), z.size());
}

/// Latent whose every element of channel c equals per_channel[c].
template <typename Scalar, typename Derived>
Latent<Scalar> broadcast_channels(const LatentShape& shape, const Eigen::MatrixBase<Derived>& per_channel) {
    if (per_channel.size() != shape.channels)
        throw LengthMismatch("expected " + std::to_string(shape.channels) + " channel values, got " +
                             std::to_string(per_channel.size()));
    typename Latent<Scalar>::Vector v(shape.size());
    for (Index c = 0; c < shape.channels; ++c)
        v.segment(c * shape.plane(), shape.plane()).setConstant(static_cast<Scalar>(per_channel[c]));
    return Latent<Scalar>(shape, std::move(v));
}

}  // namespace latmix
