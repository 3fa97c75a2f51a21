#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mmgsep/signal_core.hpp"

namespace mmgsep {

// Motion artifacts: a linear chirp f_lo -> f_hi plus fixed-frequency
// sinusoids with seeded phases and weights, scaled to amplitude_rms.
struct MotionRecipe {
  double f_lo = 0.5;
  double f_hi = 8.0;
  double amplitude_rms = 3.0;
  std::vector<double> sinusoid_hz{1.2, 2.7};
};

// MMG-like Gaussian noise shaped to 5-60 Hz with a spectral centroid at
// target_mpf.
struct MmgRecipe {
  double target_mpf = 16.0;
  double amplitude_rms = 1.0;
  double spectral_shape = 8.0;  // gamma order k of the power profile f^(k-1) exp(-f / scale)
};

// Poisson train of damped 17-23 Hz transients.
struct ImpactRecipe {
  double rate_hz = 0.0;
  double peak_amplitude = 3.0;
};

struct SynthRecipe {
  double fs = 1000.0;
  double duration_s = 10.0;
  MotionRecipe motion{};
  MmgRecipe mmg{};
  ImpactRecipe impacts{};
  std::uint64_t seed = 42;

  void validate() const;
};

// fs 1000 Hz, 10 s, chirp 0.5 -> 8 Hz + 1.2 / 2.7 Hz, MMG MPF 16 Hz,
// motion:MMG RMS 3:1, no impacts.
SynthRecipe standard_recipe(std::uint64_t seed = 42);

Index sample_count(double fs, double duration_s);

TimeSeries gen_motion(double fs, double duration_s, double f_lo, double f_hi, double amplitude_rms,
                      std::uint64_t seed, const std::vector<double>& sinusoid_hz = {1.2, 2.7});

TimeSeries gen_mmg(double fs, double duration_s, double target_mpf, double amplitude_rms,
                   std::uint64_t seed, double spectral_shape = MmgRecipe{}.spectral_shape);

// Longest support of one impact transient.
inline constexpr double kImpactSupportSeconds = 0.15;

struct ImpactTrain {
  TimeSeries signal;
  std::vector<double> onsets_s;
};

ImpactTrain gen_impacts(double fs, double duration_s, double rate_hz, std::uint64_t seed,
                        double peak_amplitude = 1.0);

struct SyntheticTrial {
  TimeSeries raw;
  TimeSeries truth_motion;
  TimeSeries truth_mmg;
  TimeSeries truth_impacts;
  std::optional<SynthRecipe> recipe{};
  std::vector<double> impact_onsets_s{};
};

// raw = motion + mmg + impacts, sample by sample.
SyntheticTrial mix(const TimeSeries& motion, const TimeSeries& mmg, const TimeSeries& impacts);

SyntheticTrial generate_trial(const SynthRecipe& recipe);

}  // namespace mmgsep
