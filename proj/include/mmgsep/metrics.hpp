#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mmgsep/separation.hpp"
#include "mmgsep/signal_core.hpp"

namespace mmgsep {

// Coefficient of determination 1 - SS_res / SS_tot of `estimate` against
// `reference`. Negative for estimates worse than the reference mean.
template <typename DerivedEst, typename DerivedRef>
double r_squared(const Eigen::MatrixBase<DerivedEst>& estimate,
                 const Eigen::MatrixBase<DerivedRef>& reference) {
  if (estimate.size() != reference.size()) {
    throw ValidationError("R^2 needs equal-length signals");
  }
  const double mean = reference.mean();
  const double ss_tot = (reference.array() - mean).square().sum();
  if (!(ss_tot > 0.0)) throw ValidationError("undefined R^2: constant reference");
  const double ss_res = (reference - estimate).squaredNorm();
  return 1.0 - ss_res / ss_tot;
}

double r_squared(const TimeSeries& estimate, const TimeSeries& reference);

struct BandValue {
  FrequencyBand band;
  double value;
};

using BandValues = std::vector<BandValue>;

// Per band, sum over bins of |PSD_raw(f) - PSD_filtered(f)|.
BandValues delta_psd(const TimeSeries& filtered, const TimeSeries& raw,
                     std::span<const FrequencyBand> bands = canonical_bands(),
                     const WelchConfig& welch = {});

struct ComparisonReport {
  std::string method;
  double r_squared = 0.0;      // motion vs reference motion
  BandValues delta_psd;        // filtered MMG vs raw, canonical bands
  double mpf_filtered = 0.0;   // Hz
  double rms_filtered = 0.0;
  double rms_raw = 0.0;
  double rms_ratio_to_other = 0.0;  // rms_filtered / other method's rms_filtered
  std::vector<std::pair<std::string, std::string>> metadata;
};

ComparisonReport make_report(const TimeSeries& raw, const TimeSeries& reference_motion,
                             const MmgSeparation& sep);

// Reports for two separations of the same raw signal, with RMS ratios filled
// in relative to each other.
std::pair<ComparisonReport, ComparisonReport> compare_methods(const TimeSeries& raw,
                                                              const TimeSeries& reference_motion,
                                                              const MmgSeparation& sep_a,
                                                              const MmgSeparation& sep_b);

}  // namespace mmgsep
