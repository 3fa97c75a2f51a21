#include "mmgsep/synth.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "mmgsep/random.hpp"

namespace mmgsep {
namespace {

constexpr double kMotionBandCapHz = 15.0;
constexpr double kMmgBandLoHz = 5.0;
constexpr double kMmgBandHiHz = 60.0;
constexpr double kImpactDecaySeconds = 0.02;
constexpr double kImpactTaperSeconds = 0.03;

// Sub-stream ids under the recipe seed.
constexpr std::uint64_t kMotionStream = 1;
constexpr std::uint64_t kMmgStream = 2;
constexpr std::uint64_t kImpactStream = 3;

void validate_timebase(double fs, double duration_s) {
  if (!(fs > 0.0) || !std::isfinite(fs)) throw ValidationError("fs must be positive");
  if (!(duration_s > 0.0) || !std::isfinite(duration_s)) {
    throw ValidationError("duration must be positive");
  }
  if (sample_count(fs, duration_s) < 2) throw ValidationError("duration too short for fs");
}

Vector scaled_to_rms(Vector v, double target) {
  const double current = rms(v);
  if (target == 0.0 || current == 0.0) return Vector::Zero(v.size());
  return v * (target / current);
}

double shaped_power(double f, double shape, double scale) {
  return std::pow(f, shape - 1.0) * std::exp(-f / scale);
}

// Centroid of the shaped power over the in-band grid bins.
double grid_centroid(const std::vector<double>& freqs, double shape, double scale) {
  double num = 0.0;
  double den = 0.0;
  for (double f : freqs) {
    const double p = shaped_power(f, shape, scale);
    num += f * p;
    den += p;
  }
  return den > 0.0 ? num / den : 0.0;
}

}  // namespace

Index sample_count(double fs, double duration_s) {
  return static_cast<Index>(std::llround(fs * duration_s));
}

void SynthRecipe::validate() const {
  validate_timebase(fs, duration_s);
  if (duration_s < 2.0) throw ValidationError("synthetic trials need at least 2 s");
  if (!(motion.f_lo > 0.0 && motion.f_lo < motion.f_hi && motion.f_hi <= kMotionBandCapHz)) {
    throw ValidationError("motion band must satisfy 0 < f_lo < f_hi <= 15 Hz");
  }
  if (!(motion.amplitude_rms >= 0.0)) throw ValidationError("motion amplitude must be >= 0");
  if (!(mmg.target_mpf >= 5.0 && mmg.target_mpf <= 30.0)) {
    throw ValidationError("MMG target MPF must lie in [5, 30] Hz");
  }
  if (!(mmg.amplitude_rms >= 0.0)) throw ValidationError("MMG amplitude must be >= 0");
  if (!(mmg.spectral_shape >= 1.0)) throw ValidationError("MMG spectral shape must be >= 1");
  if (!(impacts.rate_hz >= 0.0) || !std::isfinite(impacts.rate_hz)) {
    throw ValidationError("impact rate must be >= 0");
  }
  if (!(fs > 2.0 * kMmgBandHiHz)) throw ValidationError("fs must exceed 120 Hz for MMG synthesis");
}

SynthRecipe standard_recipe(std::uint64_t seed) {
  SynthRecipe r;
  r.seed = seed;
  return r;
}

TimeSeries gen_motion(double fs, double duration_s, double f_lo, double f_hi, double amplitude_rms,
                      std::uint64_t seed, const std::vector<double>& sinusoid_hz) {
  validate_timebase(fs, duration_s);
  if (duration_s < 2.0) throw ValidationError("motion synthesis needs at least 2 s");
  if (!(f_lo > 0.0 && f_lo < f_hi && f_hi <= kMotionBandCapHz)) {
    throw ValidationError("motion band must satisfy 0 < f_lo < f_hi <= 15 Hz (got " +
                          std::to_string(f_lo) + " - " + std::to_string(f_hi) + ")");
  }
  if (!(amplitude_rms >= 0.0)) throw ValidationError("motion amplitude must be >= 0");
  for (double f : sinusoid_hz) {
    if (!(f > 0.0 && f <= f_hi)) {
      throw ValidationError("motion sinusoid frequencies must lie in (0, f_hi]");
    }
  }

  NoiseSource rng(seed);
  const Index n = sample_count(fs, duration_s);
  const double two_pi = 2.0 * std::numbers::pi;
  const double sweep = (f_hi - f_lo) / duration_s;
  const double chirp_phase = rng.uniform(0.0, two_pi);
  Vector v(n);
  for (Index i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / fs;
    v[i] = std::sin(two_pi * (f_lo * t + 0.5 * sweep * t * t) + chirp_phase);
  }
  for (double f : sinusoid_hz) {
    const double weight = rng.uniform(0.6, 1.0);
    const double phase = rng.uniform(0.0, two_pi);
    for (Index i = 0; i < n; ++i) {
      v[i] += weight * std::sin(two_pi * f * static_cast<double>(i) / fs + phase);
    }
  }
  return TimeSeries(scaled_to_rms(std::move(v), amplitude_rms), fs);
}

TimeSeries gen_mmg(double fs, double duration_s, double target_mpf, double amplitude_rms,
                   std::uint64_t seed, double spectral_shape) {
  validate_timebase(fs, duration_s);
  if (!(target_mpf >= 5.0 && target_mpf <= 30.0)) {
    throw ValidationError("infeasible MMG target MPF " + std::to_string(target_mpf) +
                          " Hz (must lie in [5, 30])");
  }
  if (!(fs > 2.0 * kMmgBandHiHz)) throw ValidationError("fs must exceed 120 Hz for MMG synthesis");
  if (!(amplitude_rms >= 0.0)) throw ValidationError("MMG amplitude must be >= 0");
  if (!(spectral_shape >= 1.0)) throw ValidationError("MMG spectral shape must be >= 1");

  const Index n = sample_count(fs, duration_s);
  const double df = fs / static_cast<double>(n);
  std::vector<Index> bins;
  std::vector<double> freqs;
  for (Index k = 1; k <= n / 2; ++k) {
    const double f = static_cast<double>(k) * df;
    if (f >= kMmgBandLoHz && f <= kMmgBandHiHz) {
      bins.push_back(k);
      freqs.push_back(f);
    }
  }
  if (freqs.size() < 2) throw ValidationError("duration too short to shape MMG spectrum");

  // Centroid grows monotonically with the gamma scale; bisect in log space.
  double lo = std::log(1e-3);
  double hi = std::log(1e4);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (grid_centroid(freqs, spectral_shape, std::exp(mid)) < target_mpf ? lo : hi) = mid;
  }
  const double scale = std::exp(0.5 * (lo + hi));
  if (std::abs(grid_centroid(freqs, spectral_shape, scale) - target_mpf) > 0.25) {
    throw ValidationError("infeasible MMG target MPF " + std::to_string(target_mpf) + " Hz");
  }

  NoiseSource rng(seed);
  std::vector<std::complex<double>> spectrum(static_cast<std::size_t>(n));
  for (std::size_t j = 0; j < bins.size(); ++j) {
    const double mag = std::sqrt(shaped_power(freqs[j], spectral_shape, scale));
    const double re = rng.gaussian();
    const double im = rng.gaussian();
    const auto k = static_cast<std::size_t>(bins[j]);
    spectrum[k] = std::complex<double>(re, im) * mag;
    spectrum[static_cast<std::size_t>(n) - k] = std::conj(spectrum[k]);
  }
  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> time;
  fft.inv(time, spectrum);
  Vector v(n);
  for (Index i = 0; i < n; ++i) v[i] = time[static_cast<std::size_t>(i)].real();
  return TimeSeries(scaled_to_rms(std::move(v), amplitude_rms), fs);
}

ImpactTrain gen_impacts(double fs, double duration_s, double rate_hz, std::uint64_t seed,
                        double peak_amplitude) {
  validate_timebase(fs, duration_s);
  if (!(rate_hz >= 0.0) || !std::isfinite(rate_hz)) throw ValidationError("impact rate must be >= 0");
  const Index n = sample_count(fs, duration_s);
  Vector v = Vector::Zero(n);
  std::vector<double> onsets;
  if (rate_hz > 0.0) {
    NoiseSource rng(seed);
    const double two_pi = 2.0 * std::numbers::pi;
    const auto support = static_cast<Index>(std::llround(kImpactSupportSeconds * fs));
    double t = 0.0;
    for (;;) {
      t += -std::log(1.0 - rng.uniform()) / rate_hz;
      if (t >= duration_s) break;
      onsets.push_back(t);
      const double f0 = rng.uniform(17.0, 23.0);
      const double amp = peak_amplitude * rng.uniform(0.7, 1.0);
      const auto start = static_cast<Index>(std::ceil(t * fs));
      for (Index j = 0; j < support && start + j < n; ++j) {
        const double tau = static_cast<double>(start + j) / fs - t;
        double env = tau / kImpactDecaySeconds * std::exp(1.0 - tau / kImpactDecaySeconds);
        const double remaining = kImpactSupportSeconds - tau;
        if (remaining < kImpactTaperSeconds) {
          env *= 0.5 - 0.5 * std::cos(std::numbers::pi * std::max(remaining, 0.0) /
                                      kImpactTaperSeconds);
        }
        v[start + j] += amp * env * std::sin(two_pi * f0 * tau);
      }
    }
  }
  return ImpactTrain{TimeSeries(std::move(v), fs), std::move(onsets)};
}

SyntheticTrial mix(const TimeSeries& motion, const TimeSeries& mmg, const TimeSeries& impacts) {
  require_aligned(motion, mmg, "mix");
  require_aligned(motion, impacts, "mix");
  Vector raw = motion.samples() + mmg.samples() + impacts.samples();
  return SyntheticTrial{TimeSeries(std::move(raw), motion.fs()), motion, mmg, impacts};
}

SyntheticTrial generate_trial(const SynthRecipe& recipe) {
  recipe.validate();
  const TimeSeries motion =
      gen_motion(recipe.fs, recipe.duration_s, recipe.motion.f_lo, recipe.motion.f_hi,
                 recipe.motion.amplitude_rms, derive_seed(recipe.seed, kMotionStream),
                 recipe.motion.sinusoid_hz);
  const TimeSeries mmg = gen_mmg(recipe.fs, recipe.duration_s, recipe.mmg.target_mpf,
                                 recipe.mmg.amplitude_rms, derive_seed(recipe.seed, kMmgStream),
                                 recipe.mmg.spectral_shape);
  ImpactTrain impacts =
      gen_impacts(recipe.fs, recipe.duration_s, recipe.impacts.rate_hz,
                  derive_seed(recipe.seed, kImpactStream), recipe.impacts.peak_amplitude);
  SyntheticTrial trial = mix(motion, mmg, impacts.signal);
  trial.recipe = recipe;
  trial.impact_onsets_s = std::move(impacts.onsets_s);
  return trial;
}

}  // namespace mmgsep
