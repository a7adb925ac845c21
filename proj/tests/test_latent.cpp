#include "test_util.hpp"

#include <latmix/latent.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

using namespace latmix;
using latmix::testing::naive_mean;
using latmix::testing::naive_norm;
using latmix::testing::random_latent;

namespace {

LatentTensor make(Index c, Index h, Index w, std::initializer_list<double> values) {
    LatentTensor::Vector v(static_cast<Index>(values.size()));
    Index i = 0;
    for (double x : values) v[i++] = x;
    return LatentTensor(LatentShape(c, h, w), v);
}

}  // namespace

TEST(LatentShape, RejectsNonPositiveDims) {
    EXPECT_THROW(LatentShape(0, 1, 1), InvalidShape);
    EXPECT_THROW(LatentShape(1, -1, 1), InvalidShape);
    EXPECT_THROW(LatentShape(1, 1, 0), InvalidShape);
    EXPECT_EQ(LatentShape(4, 64, 64).size(), 16384);
}

TEST(Latent, RejectsWrongLengthAndNonFinite) {
    EXPECT_THROW(LatentTensor(LatentShape(1, 1, 2), LatentTensor::Vector::Zero(3)), LengthMismatch);
    LatentTensor::Vector v(2);
    v << 1.0, std::numeric_limits<double>::quiet_NaN();
    EXPECT_THROW(LatentTensor(LatentShape(1, 1, 2), v), NonFiniteValue);
    v << 1.0, std::numeric_limits<double>::infinity();
    EXPECT_THROW(LatentTensor(LatentShape(1, 1, 2), v), NonFiniteValue);
}

TEST(Latent, ElementAccessIsChannelMajor) {
    const LatentTensor z = make(2, 2, 3, {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11});
    EXPECT_EQ(z(0, 0, 0), 0);
    EXPECT_EQ(z(0, 1, 2), 5);
    EXPECT_EQ(z(1, 0, 1), 7);
    EXPECT_EQ(z.channel(1)[5], 11);
}

TEST(Latent, ArithmeticChecksShape) {
    const LatentTensor a(LatentShape(1, 1, 2));
    const LatentTensor b(LatentShape(2, 1, 1));
    EXPECT_THROW(a + b, ShapeMismatch);
    EXPECT_THROW(a - b, ShapeMismatch);
}

TEST(Norm, PythagoreanPair) {
    EXPECT_DOUBLE_EQ(norm(make(1, 1, 2, {3, 4})), 5.0);
}

TEST(Norm, ZeroLatent) {
    EXPECT_EQ(norm(LatentTensor(LatentShape(4, 8, 8))), 0.0);
}

TEST(Norm, MatchesNaiveReference) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const LatentShape shape = latmix::testing::random_shape(rng, 4, 40);
        const LatentTensor z = random_latent(rng, shape, 2.0);
        EXPECT_NEAR(norm(z), static_cast<double>(naive_norm(z)), 1e-12 * static_cast<double>(naive_norm(z)));
    }
}

TEST(Norm, GaussianConcentratesAtSqrtL) {
    // chi distribution with L = 16384 degrees of freedom: sd of norm/sqrt(L) is about 0.0055
    std::mt19937_64 rng(2024);
    const LatentShape shape(4, 64, 64);
    const double sqrt_l = std::sqrt(static_cast<double>(shape.size()));
    for (int trial = 0; trial < 100; ++trial) {
        const double ratio = norm(random_latent(rng, shape)) / sqrt_l;
        EXPECT_GE(ratio, 0.98);
        EXPECT_LE(ratio, 1.02);
    }
}

TEST(Norm, AbsoluteHomogeneity) {
    std::mt19937_64 rng(3);
    const LatentTensor z = random_latent(rng, LatentShape(3, 5, 7));
    for (double a : {-3.5, -1.0, 0.0, 0.25, 1e3}) {
        EXPECT_NEAR(norm(a * z), std::abs(a) * norm(z), 1e-13 * std::max(1.0, std::abs(a) * norm(z)));
    }
}

TEST(ChannelMeans, DirectAveraging) {
    const auto means = channel_means(make(2, 1, 2, {1, 3, 2, 2}));
    ASSERT_EQ(means.size(), 2);
    EXPECT_DOUBLE_EQ(means[0], 2.0);
    EXPECT_DOUBLE_EQ(means[1], 2.0);
}

TEST(ChannelMeans, ZeroAndConstant) {
    const LatentShape shape(3, 4, 5);
    EXPECT_TRUE(channel_means(LatentTensor(shape)).isZero(0.0));
    const auto means = channel_means(LatentTensor::constant(shape, 0.37));
    for (Index c = 0; c < 3; ++c) EXPECT_EQ(means[c], 0.37);
}

TEST(ChannelMeans, ConstantChannelsAreExact) {
    Eigen::VectorXd values(4);
    values << 0.1, -2.75, 3.0, 1e-3;
    const LatentTensor z = broadcast_channels<double>(LatentShape(4, 9, 11), values);
    const auto means = channel_means(z);
    for (Index c = 0; c < 4; ++c) EXPECT_EQ(means[c], values[c]);
}

TEST(ChannelMeans, MatchesNaiveReference) {
    std::mt19937_64 rng(5);
    const LatentTensor z = random_latent(rng, LatentShape(4, 33, 17), 1.0, 0.3);
    const auto means = channel_means(z);
    for (Index c = 0; c < 4; ++c)
        EXPECT_NEAR(means[c], static_cast<double>(naive_mean(z, c * 33 * 17, 33 * 17)), 1e-14);
}

TEST(GlobalMean, DirectAveraging) {
    EXPECT_DOUBLE_EQ(global_mean(make(2, 1, 2, {1, 3, 2, 2})), 2.0);
    EXPECT_EQ(global_mean(LatentTensor(LatentShape(2, 3, 3))), 0.0);
}

TEST(GlobalMean, EqualsMeanOfChannelMeans) {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 20; ++trial) {
        const LatentTensor z = random_latent(rng, latmix::testing::random_shape(rng, 6, 20), 1.5, 0.2);
        EXPECT_NEAR(global_mean(z), channel_means(z).mean(), 1e-14);
    }
}

TEST(GlobalMean, BroadcastChannelMeansKeepsGlobalMean) {
    std::mt19937_64 rng(9);
    const LatentTensor z = random_latent(rng, LatentShape(4, 8, 8), 1.0, 0.1);
    const LatentTensor d = broadcast_channels<double>(z.shape(), channel_means(z));
    EXPECT_NEAR(global_mean(d), global_mean(z), 1e-15);
}

TEST(PairwiseSum, MatchesLongDoubleAndIsOrderFixed) {
    std::mt19937_64 rng(10);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> v(100003);
    for (auto& x : v) x = u(rng);
    long double ref = 0;
    for (double x : v) ref += x;
    const auto term = [&](Index i) { return v[static_cast<std::size_t>(i)]; };
    const double s = pairwise_sum<double>(static_cast<Index>(v.size()), term);
    EXPECT_NEAR(s, static_cast<double>(ref), 1e-11);
    EXPECT_EQ(s, pairwise_sum<double>(static_cast<Index>(v.size()), term));
}

TEST(WeightVector, Validation) {
    EXPECT_NO_THROW(WeightVector({1.0, 0.0, 0.0}));
    EXPECT_THROW(WeightVector({0.5, -0.1, 0.6}), InvalidWeights);
    EXPECT_THROW(WeightVector({0.0, 0.0}), InvalidWeights);
    EXPECT_THROW(WeightVector({0.5, 0.4}), InvalidWeights);
    EXPECT_NO_THROW(WeightVector({0.5, 0.5 + 5e-10}));
    EXPECT_THROW(WeightVector({0.5, 0.5 + 5e-9}), InvalidWeights);
    EXPECT_THROW(WeightVector(Eigen::VectorXd()), InvalidWeights);
    const auto u = WeightVector::uniform(3);
    EXPECT_EQ(u.size(), 3u);
    EXPECT_DOUBLE_EQ(u[1], 1.0 / 3.0);
    const auto v = WeightVector::vertex(4, 2);
    EXPECT_EQ(v[2], 1.0);
    EXPECT_EQ(v[0], 0.0);
}

TEST(LatentSet, RequiresMembersOfOneShape) {
    EXPECT_THROW(LatentTensorSet(std::vector<LatentTensor>{}), EmptySet);
    EXPECT_THROW((LatentTensorSet{LatentTensor(LatentShape(1, 1, 2)), LatentTensor(LatentShape(1, 2, 1))}),
                 ShapeMismatch);
    const LatentTensorSet set{LatentTensor(LatentShape(1, 1, 2)), LatentTensor(LatentShape(1, 1, 2))};
    EXPECT_EQ(set.prefix(1).size(), 1u);
    EXPECT_THROW(set.prefix(3), InvalidArgument);
}

TEST(Latent, SinglePrecisionInstantiation) {
    const Latent<float> z = make(1, 1, 2, {3, 4}).cast<float>();
    EXPECT_FLOAT_EQ(norm(z), 5.0f);
    EXPECT_FLOAT_EQ(global_mean(z), 3.5f);
}
