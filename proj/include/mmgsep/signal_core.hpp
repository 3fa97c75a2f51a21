#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <span>
#include <string_view>
#include <vector>

#include "mmgsep/errors.hpp"

namespace mmgsep {

using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

// Uniformly sampled real signal. Construction validates length >= 2,
// fs > 0 and finite samples, so every TimeSeries in the pipeline is usable.
class TimeSeries {
 public:
  TimeSeries(Vector samples, double fs);

  const Vector& samples() const noexcept { return samples_; }
  double fs() const noexcept { return fs_; }
  Index size() const noexcept { return samples_.size(); }
  double duration() const noexcept { return static_cast<double>(samples_.size() - 1) / fs_; }

 private:
  Vector samples_;
  double fs_;
};

// Throws ValidationError unless a and b share length and sampling rate.
void require_aligned(const TimeSeries& a, const TimeSeries& b, std::string_view what);

// One-sided PSD on a uniform grid starting at 0 Hz.
struct SpectralDensity {
  Vector freqs;
  Vector power;  // power per Hz

  double resolution() const { return freqs.size() > 1 ? freqs[1] - freqs[0] : 0.0; }
  double max_frequency() const { return freqs.size() ? freqs[freqs.size() - 1] : 0.0; }
};

// Half-open band [lo, hi) in Hz.
struct FrequencyBand {
  double lo;
  double hi;

  FrequencyBand(double lo_hz, double hi_hz);

  friend bool operator==(const FrequencyBand&, const FrequencyBand&) = default;
};

// The eight analysis bands 0-2.5, 2.5-5, 5-7.5, 7.5-10, 10-15, 15-20, 20-25, 25-30 Hz.
std::span<const FrequencyBand> canonical_bands();

struct WelchConfig {
  double segment_seconds = 1.0;
  double overlap_fraction = 0.5;
};

// Welch-averaged periodogram with periodic Hann segments, no detrending.
// Scaled as a density so that sum(power) * resolution equals the mean square.
SpectralDensity welch_psd(const TimeSeries& x, const WelchConfig& cfg = {});

// Power-weighted mean frequency. Throws ValidationError("empty spectrum")
// when the spectrum carries no power.
double mean_power_frequency(const SpectralDensity& psd);

// Sum of bins with lo <= f < hi. A band whose upper edge reaches the top
// of the spectrum also includes the top bin, so a set of bands ending at
// fs/2 partitions the spectrum.
double band_power(const SpectralDensity& psd, const FrequencyBand& band);

// Sum of all bins (same units as band_power).
double total_power(const SpectralDensity& psd);

struct Extrema {
  std::vector<Index> maxima;
  std::vector<Index> minima;
};

// Strict interior local extrema. A plateau bounded by lower (higher) values
// on both sides is a single maximum (minimum) located at its center.
template <typename Derived>
Extrema find_extrema(const Eigen::DenseBase<Derived>& x) {
  Extrema out;
  const Index n = x.size();
  Index a = 0;
  while (a < n) {
    Index b = a;
    while (b + 1 < n && x(b + 1) == x(a)) ++b;
    if (a > 0 && b < n - 1) {
      const auto v = x(a);
      const auto left = x(a - 1);
      const auto right = x(b + 1);
      if (v > left && v > right) {
        out.maxima.push_back((a + b) / 2);
      } else if (v < left && v < right) {
        out.minima.push_back((a + b) / 2);
      }
    }
    a = b + 1;
  }
  return out;
}

struct ExtremaCount {
  Index extrema = 0;
  Index zero_crossings = 0;
};

// Zero crossings are sign changes between nonzero samples; exact zeros are
// skipped, so +,0,+ is no crossing and +,0,- is one.
template <typename Derived>
ExtremaCount count_extrema_and_zero_crossings(const Eigen::DenseBase<Derived>& x) {
  ExtremaCount c;
  if (x.size() < 3) return c;
  const Extrema e = find_extrema(x);
  c.extrema = static_cast<Index>(e.maxima.size() + e.minima.size());
  int last_sign = 0;
  for (Index i = 0; i < x.size(); ++i) {
    const int s = (x(i) > 0) - (x(i) < 0);
    if (s == 0) continue;
    if (last_sign != 0 && s != last_sign) ++c.zero_crossings;
    last_sign = s;
  }
  return c;
}

template <typename Derived>
double population_std(const Eigen::MatrixBase<Derived>& x) {
  if (x.size() == 0) return 0.0;
  const double mean = x.mean();
  return std::sqrt((x.array() - mean).square().sum() / static_cast<double>(x.size()));
}

template <typename Derived>
double rms(const Eigen::MatrixBase<Derived>& x) {
  if (x.size() == 0) return 0.0;
  return std::sqrt(x.squaredNorm() / static_cast<double>(x.size()));
}

}  // namespace mmgsep
