#pragma once

#include <latmix/diagnostics.hpp>
#include <latmix/synth.hpp>

#include <ostream>
#include <string>
#include <vector>

namespace latmix::csv {

/// 17 significant digits, '.' separator, "nan"/"inf" for non-finite values.
std::string format(double value);

/// method,n,sqrt_n,channel,mean,stddev,stderr,injected,amplification,slope
/// (amplification is empty for channels without injected bias)
void write_reports(std::ostream& out, const std::vector<AmplificationReport>& reports);

/// t,lin_x,lin_y,fix_x,fix_y,slerp_x,slerp_y,nin_x,nin_y
void write_toy2d(std::ostream& out, const Toy2dPaths& paths);

/// index,norm,norm_over_sqrt_l,global_mean,mean_ch0,...,mean_ch{C-1}
void write_latent_stats(std::ostream& out, const LatentTensorSet& set);

/// latent,norm with one row per input and a final "output" row.
void write_norm_report(std::ostream& out, const LatentTensorSet& inputs, const LatentTensor& output);

}  // namespace latmix::csv
