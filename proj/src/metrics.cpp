#include "mmgsep/metrics.hpp"

namespace mmgsep {

double r_squared(const TimeSeries& estimate, const TimeSeries& reference) {
  require_aligned(estimate, reference, "R^2");
  return r_squared(estimate.samples(), reference.samples());
}

BandValues delta_psd(const TimeSeries& filtered, const TimeSeries& raw,
                     std::span<const FrequencyBand> bands, const WelchConfig& welch) {
  require_aligned(filtered, raw, "delta PSD");
  const SpectralDensity p_raw = welch_psd(raw, welch);
  const SpectralDensity p_filt = welch_psd(filtered, welch);
  SpectralDensity diff{p_raw.freqs, (p_raw.power - p_filt.power).cwiseAbs()};
  BandValues out;
  out.reserve(bands.size());
  for (const FrequencyBand& b : bands) out.push_back({b, band_power(diff, b)});
  return out;
}

ComparisonReport make_report(const TimeSeries& raw, const TimeSeries& reference_motion,
                             const MmgSeparation& sep) {
  require_aligned(sep.mmg, raw, "report");
  ComparisonReport r;
  r.method = std::string(to_string(sep.method));
  r.r_squared = r_squared(sep.motion, reference_motion);
  r.delta_psd = delta_psd(sep.mmg, raw);
  r.mpf_filtered = mean_power_frequency(welch_psd(sep.mmg));
  r.rms_filtered = rms(sep.mmg.samples());
  r.rms_raw = rms(raw.samples());
  return r;
}

std::pair<ComparisonReport, ComparisonReport> compare_methods(const TimeSeries& raw,
                                                              const TimeSeries& reference_motion,
                                                              const MmgSeparation& sep_a,
                                                              const MmgSeparation& sep_b) {
  ComparisonReport a = make_report(raw, reference_motion, sep_a);
  ComparisonReport b = make_report(raw, reference_motion, sep_b);
  a.rms_ratio_to_other = b.rms_filtered > 0.0 ? a.rms_filtered / b.rms_filtered : 0.0;
  b.rms_ratio_to_other = a.rms_filtered > 0.0 ? b.rms_filtered / a.rms_filtered : 0.0;
  return {std::move(a), std::move(b)};
}

}  // namespace mmgsep
