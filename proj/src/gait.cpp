#include "mmgsep/gait.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "mmgsep/bandpass.hpp"

namespace mmgsep {

TimeSeries inclination_angle(const TimeSeries& acc, double gravity_cutoff_hz) {
  if (!(gravity_cutoff_hz > 0.1 && gravity_cutoff_hz < 3.0)) {
    throw ValidationError("gravity cutoff must lie in (0.1, 3) Hz");
  }
  const IirFilter lp = design_butterworth_lowpass(gravity_cutoff_hz, 2, acc.fs());
  const TimeSeries gravity = filtfilt(lp, acc);
  Vector angle = gravity.samples().unaryExpr([](double g) {
    return std::asin(std::clamp(g / kStandardGravity, -1.0, 1.0)) * 180.0 / std::numbers::pi;
  });
  return TimeSeries(std::move(angle), acc.fs());
}

std::vector<WalkWindow> walking_windows(const TimeSeries& angle_deg, const WalkConfig& cfg) {
  if (!(cfg.lo_deg < cfg.hi_deg)) throw ValidationError("walking thresholds need lo < hi");
  if (!(cfg.min_duration_s >= 0.0)) throw ValidationError("minimum duration must be >= 0");
  const Vector& a = angle_deg.samples();
  const double min_len = cfg.min_duration_s * angle_deg.fs();
  std::vector<WalkWindow> out;
  Index i = 0;
  while (i < a.size()) {
    if (!(a[i] >= cfg.lo_deg && a[i] <= cfg.hi_deg)) {
      ++i;
      continue;
    }
    Index j = i;
    while (j < a.size() && a[j] >= cfg.lo_deg && a[j] <= cfg.hi_deg) ++j;
    if (static_cast<double>(j - i) >= min_len) out.push_back({i, j});
    i = j;
  }
  return out;
}

}  // namespace mmgsep
