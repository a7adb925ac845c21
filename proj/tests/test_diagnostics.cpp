#include "test_util.hpp"

#include <latmix/diagnostics.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace latmix;

namespace {

const InterpMethod kFix0{NormMode::Fix, MeanMode::Zero};
const InterpMethod kFixChm{NormMode::Fix, MeanMode::ChannelMean};
const InterpMethod kLin{NormMode::Lin, MeanMode::Zero};

}  // namespace

TEST(PredictedAmplification, ClosedForm) {
    EXPECT_EQ(predicted_amplification(1), 1.0);
    EXPECT_EQ(predicted_amplification(16), 4.0);
    EXPECT_NEAR(predicted_amplification(96), 9.798, 5e-4);
    EXPECT_THROW(predicted_amplification(0), InvalidArgument);
}

TEST(ThroughOriginSlope, ExactLine) {
    Eigen::VectorXd x(3), y(3);
    x << 1, 2, 3;
    y = 0.7 * x;
    EXPECT_NEAR(through_origin_slope(x, y), 0.7, 1e-15);
    y << 1, 1, 1;  // sum xy / sum xx = 6 / 14
    EXPECT_NEAR(through_origin_slope(x, y), 6.0 / 14.0, 1e-15);
    EXPECT_THROW(through_origin_slope(x, Eigen::VectorXd(2)), LengthMismatch);
}

TEST(MeasuredAmplification, SingleSet) {
    const LatentShape shape(4, 64, 64);
    const auto set = make_biased_set(64, shape, bias::GlobalConstant{0.02}, {3, 0});
    const auto amp = measured_amplification(set, kFix0, bias::GlobalConstant{0.02});
    ASSERT_EQ(amp.size(), 4u);
    for (const auto& a : amp) {
        ASSERT_TRUE(a.has_value());
        // one trial: noise sd of the centroid channel mean is 1/64, i.e. 0.78 in units of the bias
        EXPECT_NEAR(*a, 8.0, 4.0);
    }
}

TEST(MeasuredAmplification, UnbiasedChannelsAreAbsent) {
    const LatentShape shape(4, 16, 16);
    Eigen::VectorXd v(4);
    v << 0.05, 0.0, -0.05, 0.0;
    const auto set = make_biased_set(8, shape, bias::PerChannel{v}, {4, 0});
    const auto amp = measured_amplification(set, kLin, bias::PerChannel{v});
    EXPECT_TRUE(amp[0].has_value());
    EXPECT_FALSE(amp[1].has_value());
    EXPECT_TRUE(amp[2].has_value());
    EXPECT_FALSE(amp[3].has_value());
    for (const auto& a : measured_amplification(set, kLin, bias::None{})) EXPECT_FALSE(a.has_value());
}

TEST(MeasuredAmplification, HundredTrialsAtN64) {
    ExperimentConfig cfg;
    cfg.n_values = {64};
    cfg.trials = 100;
    cfg.methods = {kFix0, kFixChm, kLin};
    cfg.seed = {123, 0};
    const auto reports = bias_growth_experiment(cfg);
    ASSERT_EQ(reports.size(), 3u);
    for (Index c = 0; c < 4; ++c) {
        EXPECT_NEAR(*reports[0].amplification(0, c), 8.0, 0.8);
        EXPECT_NEAR(*reports[1].amplification(0, c), 1.0, 0.1);
        EXPECT_NEAR(*reports[2].amplification(0, c), 1.0, 0.1);
    }
}

TEST(BiasGrowth, SlopeAndFlatness) {
    ExperimentConfig cfg;  // defaults: 4x64x64, bias 0.02, N = 2..96, 100 trials
    cfg.trials = 40;
    cfg.methods = {kFix0, kFixChm};
    cfg.seed = {2, 0};
    const auto reports = bias_growth_experiment(cfg);
    for (Index c = 0; c < 4; ++c) {
        EXPECT_NEAR(reports[0].slope[c], 0.02, 0.002);
        for (Index r = 0; r < 6; ++r) EXPECT_NEAR(reports[1].mean(r, c), 0.02, 0.01);
    }
}

TEST(BiasGrowth, FixAmplificationMonotoneInN) {
    ExperimentConfig cfg;
    cfg.shape = LatentShape(4, 32, 32);
    cfg.bias = bias::GlobalConstant{0.02};
    cfg.n_values = {2, 8, 32};
    cfg.trials = 200;
    cfg.seed = {17, 0};
    const auto rep = bias_growth_experiment(cfg).front();
    for (Index c = 0; c < 4; ++c)
        for (Index r = 1; r < 3; ++r)
            EXPECT_GE(rep.mean(r, c) + 2.0 * rep.stderr_of_mean(r, c),
                      rep.mean(r - 1, c) - 2.0 * rep.stderr_of_mean(r - 1, c));
}

TEST(BiasGrowth, NullDistribution) {
    // No bias, fix/0: centroid channel means have sd sqrt(C/L) = 1/sqrt(H*W).
    ExperimentConfig cfg;
    cfg.shape = LatentShape(4, 16, 16);
    cfg.bias = bias::None{};
    cfg.n_values = {2, 8};
    cfg.trials = 1000;
    cfg.seed = {5, 0};
    const auto rep = bias_growth_experiment(cfg).front();
    const double expected_sd = 1.0 / 16.0;
    for (Index r = 0; r < 2; ++r)
        for (Index c = 0; c < 4; ++c) {
            EXPECT_NEAR(rep.stddev(r, c), expected_sd, 0.25 * expected_sd);
            EXPECT_LE(std::abs(rep.mean(r, c)), 3.0 * rep.stderr_of_mean(r, c));
            EXPECT_FALSE(rep.amplification(r, c).has_value());
        }
}

TEST(BiasGrowth, ShapeContractForSingleTrial) {
    ExperimentConfig cfg;
    cfg.shape = LatentShape(3, 8, 8);
    cfg.n_values = {4};
    cfg.trials = 1;
    cfg.methods = {kFix0, kFixChm};
    const auto reports = bias_growth_experiment(cfg);
    ASSERT_EQ(reports.size(), 2u);
    for (const auto& rep : reports) {
        EXPECT_EQ(rep.mean.rows(), 1);
        EXPECT_EQ(rep.mean.cols(), 3);
        EXPECT_EQ(rep.slope.size(), 3);
        EXPECT_TRUE(std::isnan(rep.stddev(0, 0)));
        EXPECT_EQ(rep.trials, 1u);
    }
}

TEST(BiasGrowth, DeterministicAcrossThreadCounts) {
    ExperimentConfig cfg;
    cfg.shape = LatentShape(2, 8, 8);
    cfg.n_values = {2, 5, 9};
    cfg.trials = 13;
    cfg.methods = {kFix0, InterpMethod(NormMode::Nin, MeanMode::GlobalMean)};
    cfg.seed = {99, 0};
    cfg.threads = 1;
    const auto a = bias_growth_experiment(cfg);
    cfg.threads = 4;
    const auto b = bias_growth_experiment(cfg);
    for (std::size_t m = 0; m < a.size(); ++m) {
        EXPECT_EQ(a[m].mean, b[m].mean);
        EXPECT_EQ(a[m].slope, b[m].slope);
    }
}

TEST(BiasGrowth, RejectsBadConfigs) {
    ExperimentConfig cfg;
    cfg.shape = LatentShape(2, 4, 4);
    cfg.n_values = {1, 4};
    EXPECT_THROW(bias_growth_experiment(cfg), InvalidArgument);
    cfg.n_values = {4, 4};
    EXPECT_THROW(bias_growth_experiment(cfg), InvalidArgument);
    cfg.n_values = {4};
    cfg.trials = 0;
    EXPECT_THROW(bias_growth_experiment(cfg), InvalidArgument);
    cfg.trials = 1;
    cfg.methods.clear();
    EXPECT_THROW(bias_growth_experiment(cfg), InvalidArgument);
}

TEST(BiasGrowth, DegenerateDrawPropagates) {
    // A zero-noise set under chm leaves nothing to normalize.
    ExperimentConfig cfg;
    cfg.shape = LatentShape(1, 1, 1);
    cfg.n_values = {2};
    cfg.trials = 1;
    cfg.methods = {kFixChm};
    EXPECT_THROW(bias_growth_experiment(cfg), DegenerateDirection);
}

TEST(NormProfile, Examples) {
    const LatentShape shape(1, 1, 2);
    const LatentTensorSet set{LatentTensor(shape, Eigen::Vector2d(3, 0)), LatentTensor(shape, Eigen::Vector2d(0, 3))};
    std::vector<WeightVector> grid;
    for (int i = 0; i <= 10; ++i) grid.push_back(WeightVector{1.0 - i / 10.0, i / 10.0});

    for (const auto& s : norm_profile(set, grid, kFix0)) EXPECT_NEAR(s.norm, std::numbers::sqrt2, 1e-14);

    const auto lin = norm_profile(set, grid, kLin);
    EXPECT_NEAR(lin[5].norm, 3.0 / std::numbers::sqrt2, 1e-14);

    const auto nin = norm_profile(set, grid, InterpMethod(NormMode::Nin, MeanMode::Zero));
    EXPECT_EQ(nin.front().norm, 3.0);
    EXPECT_EQ(nin.back().norm, 3.0);
    EXPECT_EQ(nin.size(), grid.size());
}
