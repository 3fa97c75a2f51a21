#pragma once

#include <vector>

#include "mmgsep/signal_core.hpp"

namespace mmgsep {

inline constexpr double kStandardGravity = 9.81;

// Trunk inclination in degrees from one accelerometer axis (m/s^2):
// gravity projection by a zero-phase 2nd-order Butterworth low-pass at
// gravity_cutoff_hz, then asin(clamp(g / 9.81, -1, 1)).
TimeSeries inclination_angle(const TimeSeries& acc, double gravity_cutoff_hz = 1.0);

// Half-open sample range [start, end).
struct WalkWindow {
  Index start;
  Index end;

  friend bool operator==(const WalkWindow&, const WalkWindow&) = default;
};

struct WalkConfig {
  double lo_deg = -10.0;
  double hi_deg = 10.0;
  double min_duration_s = 0.5;
};

// Maximal runs with lo <= angle <= hi, dropping runs shorter than
// min_duration_s.
std::vector<WalkWindow> walking_windows(const TimeSeries& angle_deg, const WalkConfig& cfg = {});

}  // namespace mmgsep
