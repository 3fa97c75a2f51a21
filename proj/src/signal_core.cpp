#include "mmgsep/signal_core.hpp"

#include <unsupported/Eigen/FFT>

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

namespace mmgsep {

TimeSeries::TimeSeries(Vector samples, double fs) : samples_(std::move(samples)), fs_(fs) {
  if (!(fs_ > 0.0) || !std::isfinite(fs_)) {
    throw ValidationError("sampling rate must be positive and finite");
  }
  if (samples_.size() < 2) {
    throw ValidationError("time series needs at least 2 samples");
  }
  if (!samples_.allFinite()) {
    throw ValidationError("time series contains non-finite samples");
  }
}

void require_aligned(const TimeSeries& a, const TimeSeries& b, std::string_view what) {
  if (a.size() != b.size() || a.fs() != b.fs()) {
    throw ValidationError(std::string(what) + ": signals differ in length or sampling rate (" +
                          std::to_string(a.size()) + " @ " + std::to_string(a.fs()) + " Hz vs " +
                          std::to_string(b.size()) + " @ " + std::to_string(b.fs()) + " Hz)");
  }
}

FrequencyBand::FrequencyBand(double lo_hz, double hi_hz) : lo(lo_hz), hi(hi_hz) {
  if (!(lo >= 0.0) || !(hi > lo) || !std::isfinite(hi)) {
    throw ValidationError("frequency band requires 0 <= lo < hi");
  }
}

std::span<const FrequencyBand> canonical_bands() {
  static const std::array<FrequencyBand, 8> bands{
      FrequencyBand{0.0, 2.5},  FrequencyBand{2.5, 5.0},   FrequencyBand{5.0, 7.5},
      FrequencyBand{7.5, 10.0}, FrequencyBand{10.0, 15.0}, FrequencyBand{15.0, 20.0},
      FrequencyBand{20.0, 25.0}, FrequencyBand{25.0, 30.0}};
  return bands;
}

SpectralDensity welch_psd(const TimeSeries& x, const WelchConfig& cfg) {
  if (!(cfg.segment_seconds > 0.0)) throw ValidationError("segment length must be positive");
  if (!(cfg.overlap_fraction >= 0.0 && cfg.overlap_fraction < 1.0)) {
    throw ValidationError("overlap fraction must lie in [0, 1)");
  }
  const double fs = x.fs();
  const auto seg = static_cast<Index>(std::llround(cfg.segment_seconds * fs));
  if (seg < 8) throw SizingError("Welch segment must span at least 8 samples");
  if (x.size() < seg) {
    throw SizingError("signal of " + std::to_string(x.size()) +
                      " samples is shorter than one Welch segment (" + std::to_string(seg) + ")");
  }
  const Index step =
      std::max<Index>(1, seg - static_cast<Index>(std::llround(cfg.overlap_fraction * seg)));

  Vector window(seg);
  for (Index i = 0; i < seg; ++i) {
    window[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                      static_cast<double>(seg));
  }
  const double window_energy = window.squaredNorm();

  const Index bins = seg / 2 + 1;
  Vector acc = Vector::Zero(bins);
  Eigen::FFT<double> fft;
  std::vector<double> buf(static_cast<std::size_t>(seg));
  std::vector<std::complex<double>> spec;
  Index segments = 0;
  const Vector& s = x.samples();
  for (Index start = 0; start + seg <= x.size(); start += step) {
    for (Index i = 0; i < seg; ++i) buf[static_cast<std::size_t>(i)] = s[start + i] * window[i];
    fft.fwd(spec, buf);
    for (Index k = 0; k < bins; ++k) acc[k] += std::norm(spec[static_cast<std::size_t>(k)]);
    ++segments;
  }

  SpectralDensity out;
  out.freqs.resize(bins);
  out.power = acc / (static_cast<double>(segments) * fs * window_energy);
  for (Index k = 0; k < bins; ++k) {
    out.freqs[k] = static_cast<double>(k) * fs / static_cast<double>(seg);
    const bool nyquist = (seg % 2 == 0) && k == bins - 1;
    if (k != 0 && !nyquist) out.power[k] *= 2.0;
  }
  return out;
}

double mean_power_frequency(const SpectralDensity& psd) {
  const double total = psd.power.sum();
  if (!(total > 0.0)) throw ValidationError("empty spectrum");
  return psd.freqs.dot(psd.power) / total;
}

double band_power(const SpectralDensity& psd, const FrequencyBand& band) {
  const double top = psd.max_frequency();
  const double slack = 1e-9 * std::max(1.0, top);
  if (band.hi > top + slack) {
    throw ValidationError("band [" + std::to_string(band.lo) + ", " + std::to_string(band.hi) +
                          ") exceeds the spectrum's maximum frequency " + std::to_string(top));
  }
  const bool closed_top = band.hi >= top - slack;
  double sum = 0.0;
  for (Index k = 0; k < psd.freqs.size(); ++k) {
    const double f = psd.freqs[k];
    if (f >= band.lo && (f < band.hi || (closed_top && k == psd.freqs.size() - 1))) {
      sum += psd.power[k];
    }
  }
  return sum;
}

double total_power(const SpectralDensity& psd) { return psd.power.sum(); }

}  // namespace mmgsep
