#include <latmix/philox.hpp>
#include <latmix/synth.hpp>

#include <boost/random/normal_distribution.hpp>

#include <algorithm>
#include <string>

namespace latmix {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void check_region(const Region& r, const LatentShape& shape) {
    const bool ok = r.row0 >= 0 && r.col0 >= 0 && r.rows >= 1 && r.cols >= 1 &&
                    r.row0 + r.rows <= shape.height && r.col0 + r.cols <= shape.width;
    if (!ok)
        throw RegionOutOfBounds("region rows [" + std::to_string(r.row0) + ", " + std::to_string(r.row0 + r.rows) +
                                ") cols [" + std::to_string(r.col0) + ", " + std::to_string(r.col0 + r.cols) +
                                ") does not fit " + shape.to_string());
}

void check_channel_vector(const Eigen::VectorXd& v, const LatentShape& shape) {
    if (v.size() != shape.channels)
        throw InvalidBias("expected " + std::to_string(shape.channels) + " channel values, got " +
                          std::to_string(v.size()));
    if (!v.allFinite()) throw InvalidBias("bias values must be finite");
}

}  // namespace

Region Region::top_quarter(const LatentShape& shape) {
    return Region{0, 0, std::max<Index>(1, shape.height / 4), shape.width};
}

void validate_bias(const BiasSpec& spec, const LatentShape& shape) {
    std::visit(overloaded{
                   [](const bias::None&) {},
                   [](const bias::GlobalConstant& b) {
                       if (!std::isfinite(b.value)) throw InvalidBias("bias value must be finite");
                   },
                   [&](const bias::PerChannel& b) { check_channel_vector(b.values, shape); },
                   [&](const bias::RegionOffset& b) {
                       check_channel_vector(b.offsets, shape);
                       check_region(b.region, shape);
                   },
               },
               spec);
}

LatentTensor deterministic_part(const BiasSpec& spec, const LatentShape& shape) {
    validate_bias(spec, shape);
    return std::visit(overloaded{
                          [&](const bias::None&) { return LatentTensor(shape); },
                          [&](const bias::GlobalConstant& b) { return LatentTensor::constant(shape, b.value); },
                          [&](const bias::PerChannel& b) { return broadcast_channels<double>(shape, b.values); },
                          [&](const bias::RegionOffset&) { return apply_region_offset(LatentTensor(shape), spec); },
                      },
                      spec);
}

Eigen::VectorXd injected_channel_means(const BiasSpec& spec, const LatentShape& shape) {
    validate_bias(spec, shape);
    return std::visit(
        overloaded{
            [&](const bias::None&) { return Eigen::VectorXd::Zero(shape.channels).eval(); },
            [&](const bias::GlobalConstant& b) { return Eigen::VectorXd::Constant(shape.channels, b.value).eval(); },
            [&](const bias::PerChannel& b) { return b.values; },
            [&](const bias::RegionOffset& b) {
                const double fraction =
                    static_cast<double>(b.region.area()) / static_cast<double>(shape.plane());
                return (b.offsets * fraction).eval();
            },
        },
        spec);
}

LatentTensor sample_gaussian_latent(const LatentShape& shape, const SeedSpec& seed) {
    Philox4x32 engine(seed.base_seed, seed.stream_index);
    boost::random::normal_distribution<double> normal(0.0, 1.0);
    LatentTensor::Vector v(shape.size());
    for (Index i = 0; i < v.size(); ++i) v[i] = normal(engine);
    return LatentTensor(shape, std::move(v));
}

LatentTensorSet make_biased_set(std::size_t count, const LatentShape& shape, const BiasSpec& spec,
                                const SeedSpec& seed) {
    if (count < 1) throw InvalidArgument("a biased set needs at least one member");
    const LatentTensor d = deterministic_part(spec, shape);
    const bool unbiased = std::holds_alternative<bias::None>(spec);
    std::vector<LatentTensor> members;
    members.reserve(count);
    for (std::size_t n = 0; n < count; ++n) {
        LatentTensor e = sample_gaussian_latent(shape, seed.with_stream(seed.stream_index + n));
        members.push_back(unbiased ? std::move(e) : d + e);
    }
    return LatentTensorSet(std::move(members));
}

LatentTensor apply_region_offset(const LatentTensor& z, const BiasSpec& spec) {
    const auto* offset = std::get_if<bias::RegionOffset>(&spec);
    if (offset == nullptr) throw InvalidBias("apply_region_offset needs a RegionOffset bias");
    const LatentShape& shape = z.shape();
    check_channel_vector(offset->offsets, shape);
    check_region(offset->region, shape);

    LatentTensor::Vector v = z.values();
    const Region& r = offset->region;
    for (Index c = 0; c < shape.channels; ++c) {
        const double b = offset->offsets[c];
        if (b == 0.0) continue;
        for (Index row = r.row0; row < r.row0 + r.rows; ++row) {
            auto span = v.segment((c * shape.height + row) * shape.width + r.col0, r.cols);
            span.array() += b;
        }
    }
    return LatentTensor(shape, std::move(v));
}

Eigen::VectorXd balanced_offsets(Index channels, double b) {
    if (channels < 2) throw InvalidBias("balanced offsets need at least two channels");
    Eigen::VectorXd offsets = Eigen::VectorXd::Zero(channels);
    offsets[0] = -b;
    offsets[1] = b;
    return offsets;
}

Toy2dPaths toy2d_paths(const Eigen::Vector2d& z1, const Eigen::Vector2d& z2, std::size_t steps) {
    if (steps < 2) throw InvalidArgument("toy paths need at least two steps");
    const LatentShape shape(1, 1, 2);
    const LatentTensor a(shape, z1);
    const LatentTensor b(shape, z2);
    const LatentTensorSet pair{a, b};

    Toy2dPaths paths;
    paths.t.reserve(steps);
    for (std::size_t i = 0; i < steps; ++i) {
        const double t = (i + 1 == steps) ? 1.0 : static_cast<double>(i) / static_cast<double>(steps - 1);
        const WeightVector w{1.0 - t, t};
        paths.t.push_back(t);
        paths.lin.push_back(lerp(pair, w).values());
        paths.fix.push_back(fix_norm(pair, w).values());
        paths.slerp.push_back(slerp2(a, b, t).values());
        paths.nin.push_back(nin(pair, w).values());
    }
    return paths;
}

}  // namespace latmix
