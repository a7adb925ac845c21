#include <latmix/csv.hpp>

#include <cmath>
#include <iomanip>
#include <locale>
#include <sstream>

namespace latmix::csv {

std::string format(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os << std::setprecision(17) << value;
    return os.str();
}

void write_reports(std::ostream& out, const std::vector<AmplificationReport>& reports) {
    out << "method,n,sqrt_n,channel,mean,stddev,stderr,injected,amplification,slope\n";
    for (const auto& rep : reports) {
        for (Index r = 0; r < static_cast<Index>(rep.n_values.size()); ++r) {
            for (Index c = 0; c < rep.shape.channels; ++c) {
                const auto amp = rep.amplification(r, c);
                out << rep.method.label() << ',' << rep.n_values[static_cast<std::size_t>(r)] << ','
                    << format(rep.predicted[r]) << ',' << c << ',' << format(rep.mean(r, c)) << ','
                    << format(rep.stddev(r, c)) << ',' << format(rep.stderr_of_mean(r, c)) << ','
                    << format(rep.injected[c]) << ',' << (amp ? format(*amp) : std::string()) << ','
                    << format(rep.slope[c]) << '\n';
            }
        }
    }
}

void write_toy2d(std::ostream& out, const Toy2dPaths& paths) {
    out << "t,lin_x,lin_y,fix_x,fix_y,slerp_x,slerp_y,nin_x,nin_y\n";
    for (std::size_t i = 0; i < paths.t.size(); ++i) {
        out << format(paths.t[i]);
        for (const auto* path : {&paths.lin, &paths.fix, &paths.slerp, &paths.nin})
            out << ',' << format((*path)[i].x()) << ',' << format((*path)[i].y());
        out << '\n';
    }
}

void write_latent_stats(std::ostream& out, const LatentTensorSet& set) {
    const Index channels = set.shape().channels;
    out << "index,norm,norm_over_sqrt_l,global_mean";
    for (Index c = 0; c < channels; ++c) out << ",mean_ch" << c;
    out << '\n';
    const double sqrt_l = std::sqrt(static_cast<double>(set.shape().size()));
    for (std::size_t n = 0; n < set.size(); ++n) {
        const double nz = norm(set[n]);
        out << n << ',' << format(nz) << ',' << format(nz / sqrt_l) << ',' << format(global_mean(set[n]));
        const Eigen::VectorXd means = channel_means(set[n]);
        for (Index c = 0; c < channels; ++c) out << ',' << format(means[c]);
        out << '\n';
    }
}

void write_norm_report(std::ostream& out, const LatentTensorSet& inputs, const LatentTensor& output) {
    out << "latent,norm\n";
    for (std::size_t n = 0; n < inputs.size(); ++n) out << "input_" << n << ',' << format(norm(inputs[n])) << '\n';
    out << "output," << format(norm(output)) << '\n';
}

}  // namespace latmix::csv
