#pragma once

#include <complex>
#include <vector>

#include "mmgsep/separation.hpp"
#include "mmgsep/signal_core.hpp"

namespace mmgsep {

// Normalized biquad, transposed direct form II:
//   H(z) = (b0 + b1 z^-1 + b2 z^-2) / (1 + a1 z^-1 + a2 z^-2)
struct Biquad {
  double b0 = 1.0, b1 = 0.0, b2 = 0.0;
  double a1 = 0.0, a2 = 0.0;

  std::complex<double> response(std::complex<double> z_inv) const {
    return (b0 + z_inv * (b1 + z_inv * b2)) / (1.0 + z_inv * (a1 + z_inv * a2));
  }
};

enum class FilterKind { LowPass, BandPass };

struct FilterDesign {
  FilterKind kind;
  int order;       // overall transfer-function order
  double lo_hz;    // band-pass lower edge; unused for low-pass
  double hi_hz;    // band-pass upper edge, or low-pass cutoff
  double fs;
};

// Immutable cascade of second-order sections. Construction rejects any
// section with a pole modulus >= 1 - 1e-8.
class IirFilter {
 public:
  IirFilter(std::vector<Biquad> sections, FilterDesign design);

  const std::vector<Biquad>& sections() const noexcept { return sections_; }
  const FilterDesign& design() const noexcept { return design_; }

  std::complex<double> response(double freq_hz) const;
  double magnitude(double freq_hz) const { return std::abs(response(freq_hz)); }
  std::vector<std::complex<double>> poles() const;

  // Edge padding used by filtfilt (odd-symmetric extension).
  Index pad_length() const noexcept { return 3 * design_.order; }

  // Single causal pass. With steady_state, section states start at the
  // step response for x[0], which removes the start-up transient of a
  // constant offset.
  Vector apply(const Eigen::Ref<const Vector>& x, bool steady_state = true) const;

 private:
  std::vector<Biquad> sections_;
  FilterDesign design_;
};

// Digital Butterworth band-pass of total order `order` (2, 4, 6 or 8; the
// analog low-pass prototype has order/2 poles). Bilinear transform with
// pre-warped edges; unit gain at the pre-warped geometric center.
IirFilter design_butterworth_bandpass(double lo_hz, double hi_hz, int order, double fs);

// Digital Butterworth low-pass with unit DC gain.
IirFilter design_butterworth_lowpass(double cutoff_hz, int order, double fs);

// Zero-phase forward-backward filtering with odd-symmetric padding of
// pad_length() samples. Requires more than 3 * pad_length() samples.
TimeSeries filtfilt(const IirFilter& f, const TimeSeries& x);

struct BandpassConfig {
  double lo_hz = 5.0;
  double hi_hz = 100.0;
  int order = 4;
  bool zero_phase = true;  // false: single causal pass
};

// Reference separation: mmg = band-passed raw, motion = raw - mmg.
// Requires fs > 2 * hi and at least one period of the lower edge.
MmgSeparation separate_bandpass(const TimeSeries& raw, const BandpassConfig& cfg = {});

}  // namespace mmgsep
