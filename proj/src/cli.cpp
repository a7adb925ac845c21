#include <latmix/cli.hpp>
#include <latmix/csv.hpp>
#include <latmix/diagnostics.hpp>
#include <latmix/interpolate.hpp>
#include <latmix/latf.hpp>
#include <latmix/synth.hpp>

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>

namespace latmix {

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::string part;
    std::istringstream in(text);
    while (std::getline(in, part, sep)) parts.push_back(part);
    if (!text.empty() && text.back() == sep) parts.emplace_back();
    return parts;
}

double parse_double(const std::string& token, const char* what) {
    double value = 0.0;
    const char* first = token.data();
    const char* last = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || !std::isfinite(value))
        throw UsageError(std::string("invalid ") + what + " '" + token + "'");
    return value;
}

template <typename Int>
Int parse_int(const std::string& token, const char* what) {
    Int value{};
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size())
        throw UsageError(std::string("invalid ") + what + " '" + token + "'");
    return value;
}

Eigen::VectorXd parse_list(const std::string& text, const char* what) {
    const auto parts = split(text, ',');
    if (parts.empty()) throw UsageError(std::string("empty ") + what);
    Eigen::VectorXd v(static_cast<Index>(parts.size()));
    for (std::size_t i = 0; i < parts.size(); ++i) v[static_cast<Index>(i)] = parse_double(parts[i], what);
    return v;
}

LatentShape parse_shape(const std::string& text) {
    const auto parts = split(text, 'x');
    if (parts.size() != 3) throw UsageError("shape must look like CxHxW, got '" + text + "'");
    const auto c = parse_int<Index>(parts[0], "shape");
    const auto h = parse_int<Index>(parts[1], "shape");
    const auto w = parse_int<Index>(parts[2], "shape");
    if (c < 1 || h < 1 || w < 1) throw UsageError("shape dimensions must be positive");
    return LatentShape(c, h, w);
}

// Accepts weights within 1e-6 of summing to one and rescales them exactly.
WeightVector parse_weights(const std::string& text) {
    Eigen::VectorXd w = parse_list(text, "weight");
    if ((w.array() < 0.0).any()) throw UsageError("weights must be nonnegative");
    const double total = pairwise_sum<double>(w.size(), [&](Index i) { return w[i]; });
    if (std::abs(total - 1.0) > 1e-6)
        throw UsageError("weights sum to " + csv::format(total) + "; they must sum to 1");
    return WeightVector(w / total);
}

// "r0:r1" as a half-open range.
std::pair<Index, Index> parse_range(const std::string& text, const char* what) {
    const auto parts = split(text, ':');
    if (parts.size() != 2) throw UsageError(std::string(what) + " must look like start:end");
    const auto a = parse_int<Index>(parts[0], what);
    const auto b = parse_int<Index>(parts[1], what);
    if (b <= a) throw UsageError(std::string(what) + " range is empty");
    return {a, b};
}

Dtype parse_dtype(const std::string& text) {
    if (text == "f64") return Dtype::Float64;
    if (text == "f32") return Dtype::Float32;
    throw UsageError("dtype must be f32 or f64");
}

// Writes CSV to `path`, or to `out` when path is empty.
template <typename Emit>
void emit_csv(const std::string& path, std::ostream& out, Emit&& emit) {
    if (path.empty()) {
        emit(out);
        return;
    }
    std::ofstream file(path, std::ios::trunc);
    if (!file) throw IoError("cannot open " + path + " for writing");
    emit(file);
    if (!file) throw IoError("failed writing " + path);
}

struct MethodFlags {
    std::string norm = "nin";
    std::string mean = "chm";

    InterpMethod method() const { return InterpMethod(parse_norm_mode(norm), parse_mean_mode(mean)); }
};

void add_method_flags(CLI::App* cmd, MethodFlags& flags) {
    cmd->add_option("--norm", flags.norm, "norm restoration: lin, fix or nin")
        ->check(CLI::IsMember({"lin", "fix", "nin"}))
        ->capture_default_str();
    cmd->add_option("--mean", flags.mean, "mean adjustment: 0, m or chm")
        ->check(CLI::IsMember({"0", "m", "chm"}))
        ->capture_default_str();
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Latent interpolation with mean-adjusted normalization"};
    app.name(args.empty() ? "latmix" : args.front());
    app.require_subcommand(1);

    // interp
    std::string interp_input, interp_output, interp_weights, interp_dtype = "f64", interp_report;
    MethodFlags interp_method;
    auto* interp = app.add_subcommand("interp", "interpolate the latents of a file with given weights");
    interp->add_option("--input,-i", interp_input, "LATF input")->required();
    interp->add_option("--weights,-w", interp_weights, "comma-separated weights summing to 1")->required();
    interp->add_option("--output,-o", interp_output, "LATF output")->required();
    interp->add_option("--dtype", interp_dtype, "output dtype: f32 or f64")->capture_default_str();
    interp->add_option("--report", interp_report, "norm report CSV path (default stdout)");
    add_method_flags(interp, interp_method);

    // centroid
    std::string cen_input, cen_output, cen_dtype = "f64", cen_report;
    std::optional<std::size_t> cen_prefix;
    MethodFlags cen_method;
    auto* cen = app.add_subcommand("centroid", "uniform-weight interpolation of a file's latents");
    cen->add_option("--input,-i", cen_input, "LATF input")->required();
    cen->add_option("--output,-o", cen_output, "LATF output")->required();
    cen->add_option("--prefix", cen_prefix, "use only the first N latents")->check(CLI::PositiveNumber);
    cen->add_option("--dtype", cen_dtype, "output dtype: f32 or f64")->capture_default_str();
    cen->add_option("--report", cen_report, "norm report CSV path (default stdout)");
    add_method_flags(cen, cen_method);

    // simulate
    std::string sim_shape = "4x64x64", sim_n = "2,8,32,48,64,96", sim_output, sim_methods, sim_bias_channels;
    double sim_bias = 0.02;
    std::size_t sim_trials = 100;
    std::uint64_t sim_seed = 0;
    unsigned sim_threads = 0;
    MethodFlags sim_method{"fix", "0"};
    auto* sim = app.add_subcommand("simulate", "bias-growth experiment on synthetic latents, as CSV");
    sim->add_option("--shape", sim_shape, "latent shape CxHxW")->capture_default_str();
    auto* bias_opt = sim->add_option("--bias", sim_bias, "global constant bias (0 = none)")->capture_default_str();
    sim->add_option("--bias-channels", sim_bias_channels, "comma-separated per-channel bias")->excludes(bias_opt);
    sim->add_option("--n", sim_n, "comma-separated, strictly increasing N values")->capture_default_str();
    sim->add_option("--trials", sim_trials, "trials per N")->check(CLI::PositiveNumber)->capture_default_str();
    sim->add_option("--seed", sim_seed, "base seed")->required();
    sim->add_option("--methods", sim_methods, "comma-separated labels such as fix/0,fix/chm (overrides --norm/--mean)");
    sim->add_option("--threads", sim_threads, "worker threads (0 = all cores)")->capture_default_str();
    sim->add_option("--output,-o", sim_output, "CSV path (default stdout)");
    add_method_flags(sim, sim_method);

    // toy2d
    std::size_t toy_steps = 101;
    std::string toy_z1, toy_z2, toy_output;
    auto* toy = app.add_subcommand("toy2d", "2D interpolation paths of lin, fix, slerp and nin, as CSV");
    toy->add_option("--steps", toy_steps, "points per path")->check(CLI::Range(std::size_t{2}, std::size_t{100000000}))
        ->capture_default_str();
    toy->add_option("--z1", toy_z1, "start point x,y (default sqrt2,0)");
    toy->add_option("--z2", toy_z2, "end point x,y (default 0,sqrt2)");
    toy->add_option("--output,-o", toy_output, "CSV path (default stdout)");

    // diagnose
    std::string diag_input, diag_output;
    auto* diag = app.add_subcommand("diagnose", "per-latent norms and channel means of a file, as CSV");
    diag->add_option("--input,-i", diag_input, "LATF input")->required();
    diag->add_option("--output,-o", diag_output, "CSV path (default stdout)");

    // offset
    std::string off_input, off_output, off_offsets, off_rows, off_cols, off_dtype = "f64";
    double off_b = 0.0;
    auto* off = app.add_subcommand("offset", "add per-channel offsets inside a spatial region");
    off->add_option("--input,-i", off_input, "LATF input")->required();
    off->add_option("--output,-o", off_output, "LATF output")->required();
    auto* b_opt = off->add_option("--b", off_b, "balanced offset: channel 0 by -b, channel 1 by +b");
    off->add_option("--offsets", off_offsets, "comma-separated per-channel offsets")->excludes(b_opt);
    off->add_option("--rows", off_rows, "row range start:end (default top quarter)");
    off->add_option("--cols", off_cols, "column range start:end (default all)");
    off->add_option("--dtype", off_dtype, "output dtype: f32 or f64")->capture_default_str();

    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    for (const auto& a : args) argv.push_back(a.c_str());
    if (argv.empty()) argv.push_back("latmix");

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (interp->parsed()) {
            const LatentTensorSet set = read_latents(interp_input);
            const LatentTensor result = interpolate(set, parse_weights(interp_weights), interp_method.method());
            write_latents(interp_output, LatentTensorSet{result}, parse_dtype(interp_dtype));
            emit_csv(interp_report, out, [&](std::ostream& os) { csv::write_norm_report(os, set, result); });
        } else if (cen->parsed()) {
            LatentTensorSet set = read_latents(cen_input);
            if (cen_prefix) {
                if (*cen_prefix > set.size())
                    throw UsageError("--prefix exceeds the " + std::to_string(set.size()) + " latents in the file");
                set = set.prefix(*cen_prefix);
            }
            const LatentTensor result = centroid(set, cen_method.method());
            write_latents(cen_output, LatentTensorSet{result}, parse_dtype(cen_dtype));
            emit_csv(cen_report, out, [&](std::ostream& os) { csv::write_norm_report(os, set, result); });
        } else if (sim->parsed()) {
            ExperimentConfig cfg;
            cfg.shape = parse_shape(sim_shape);
            if (!sim_bias_channels.empty())
                cfg.bias = bias::PerChannel{parse_list(sim_bias_channels, "bias")};
            else if (sim_bias == 0.0)
                cfg.bias = bias::None{};
            else
                cfg.bias = bias::GlobalConstant{sim_bias};
            cfg.n_values.clear();
            for (const auto& tok : split(sim_n, ',')) cfg.n_values.push_back(parse_int<std::size_t>(tok, "N"));
            cfg.trials = sim_trials;
            cfg.seed = SeedSpec{sim_seed, 0};
            cfg.threads = sim_threads;
            cfg.methods.clear();
            if (!sim_methods.empty())
                for (const auto& label : split(sim_methods, ',')) cfg.methods.push_back(parse_method(label));
            else
                cfg.methods.push_back(sim_method.method());
            const auto reports = bias_growth_experiment(cfg);
            emit_csv(sim_output, out, [&](std::ostream& os) { csv::write_reports(os, reports); });
        } else if (toy->parsed()) {
            auto point = [](const std::string& text, const Eigen::Vector2d& fallback) -> Eigen::Vector2d {
                if (text.empty()) return fallback;
                const Eigen::VectorXd v = parse_list(text, "point");
                if (v.size() != 2) throw UsageError("points need exactly two coordinates");
                return Eigen::Vector2d(v[0], v[1]);
            };
            const Toy2dPaths paths = toy2d_paths(point(toy_z1, kToyStart), point(toy_z2, kToyEnd), toy_steps);
            emit_csv(toy_output, out, [&](std::ostream& os) { csv::write_toy2d(os, paths); });
        } else if (diag->parsed()) {
            const LatentTensorSet set = read_latents(diag_input);
            emit_csv(diag_output, out, [&](std::ostream& os) { csv::write_latent_stats(os, set); });
        } else if (off->parsed()) {
            const LatentTensorSet set = read_latents(off_input);
            const LatentShape& shape = set.shape();
            bias::RegionOffset spec;
            spec.region = Region::top_quarter(shape);
            if (!off_rows.empty()) {
                const auto [r0, r1] = parse_range(off_rows, "rows");
                spec.region.row0 = r0;
                spec.region.rows = r1 - r0;
            }
            if (!off_cols.empty()) {
                const auto [c0, c1] = parse_range(off_cols, "cols");
                spec.region.col0 = c0;
                spec.region.cols = c1 - c0;
            }
            spec.offsets = off_offsets.empty() ? balanced_offsets(shape.channels, off_b)
                                               : parse_list(off_offsets, "offset");
            const BiasSpec bias_spec = spec;
            std::vector<LatentTensor> shifted;
            shifted.reserve(set.size());
            for (const auto& z : set) shifted.push_back(apply_region_offset(z, bias_spec));
            write_latents(off_output, LatentTensorSet(std::move(shifted)), parse_dtype(off_dtype));
        }
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const Error& e) {
        err << e.what() << '\n';
        return kExitFailure;
    }
    return 0;
}

}  // namespace latmix
