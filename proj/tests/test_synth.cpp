#include <doctest.h>

#include <limits>

#include "mmgsep/errors.hpp"
#include "mmgsep/synth.hpp"
#include "support.hpp"

using namespace mmgsep;

namespace {

double energy_share(const TimeSeries& x, double lo, double hi) {
  const SpectralDensity psd = welch_psd(x);
  return band_power(psd, {lo, hi}) / total_power(psd);
}

}  // namespace

TEST_CASE("gen_motion spectral content and determinism") {
  const TimeSeries m = gen_motion(1000.0, 10.0, 0.5, 8.0, 3.0, 42);
  CHECK(mean_power_frequency(welch_psd(m)) < 8.0);
  CHECK(energy_share(m, 0.0, 9.0) >= 0.95);
  CHECK(rms(m.samples()) == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(m.samples() == gen_motion(1000.0, 10.0, 0.5, 8.0, 3.0, 42).samples());
  CHECK(m.samples() != gen_motion(1000.0, 10.0, 0.5, 8.0, 3.0, 43).samples());
  CHECK(gen_motion(1000.0, 10.0, 0.5, 8.0, 0.0, 42).samples().cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("gen_motion validates its band") {
  CHECK_THROWS_AS(gen_motion(1000.0, 10.0, 0.5, 40.0, 3.0, 1), ValidationError);
  CHECK_THROWS_AS(gen_motion(1000.0, 10.0, 8.0, 0.5, 3.0, 1), ValidationError);
  CHECK_THROWS_AS(gen_motion(1000.0, 10.0, 0.0, 8.0, 3.0, 1), ValidationError);
  CHECK_THROWS_AS(gen_motion(1000.0, 1.5, 0.5, 8.0, 3.0, 1), ValidationError);
}

TEST_CASE("gen_motion keeps energy below f_hi + 1 Hz across bands and seeds") {
  test::Gen g(71);
  for (int trial = 0; trial < 10; ++trial) {
    const double lo = g.uniform(0.2, 3.0);
    const double hi = g.uniform(lo + 1.0, 15.0);
    const TimeSeries m = gen_motion(1000.0, g.uniform(2.0, 8.0), lo, hi, 1.0, g.seed(), {1.2, 0.7 * hi});
    CHECK(energy_share(m, 0.0, hi + 1.0) >= 0.95);
  }
}

TEST_CASE("gen_mmg hits its MPF, band and RMS targets") {
  for (std::uint64_t seed : {1u, 2u, 3u, 42u}) {
    const TimeSeries z = gen_mmg(1000.0, 10.0, 16.0, 1.0, seed);
    CHECK(std::abs(mean_power_frequency(welch_psd(z)) - 16.0) <= 2.0);
    CHECK(energy_share(z, 5.0, 60.0) >= 0.95);
    CHECK(rms(z.samples()) == doctest::Approx(1.0).epsilon(0.02));
  }
  for (double target : {8.0, 25.0}) {
    const TimeSeries z = gen_mmg(1000.0, 10.0, target, 1.0, 5);
    CHECK(std::abs(mean_power_frequency(welch_psd(z)) - target) <= 2.0);
  }
  CHECK(gen_mmg(1000.0, 10.0, 16.0, 1.0, 9).samples() == gen_mmg(1000.0, 10.0, 16.0, 1.0, 9).samples());
  CHECK_THROWS_AS(gen_mmg(1000.0, 10.0, 4.0, 1.0, 1), ValidationError);
  CHECK_THROWS_AS(gen_mmg(1000.0, 10.0, 31.0, 1.0, 1), ValidationError);
}

TEST_CASE("gen_impacts: count, support and band") {
  const double fs = 1000.0;
  const double duration = 20.0;
  const ImpactTrain train = gen_impacts(fs, duration, 0.5, 123, 2.0);
  const auto count = static_cast<double>(train.onsets_s.size());
  // Poisson with mean 10: stay inside 4 standard deviations.
  CHECK(std::abs(count - 10.0) <= 4.0 * std::sqrt(10.0));
  CHECK(energy_share(train.signal, 10.0, 30.0) >= 0.80);

  const Vector& x = train.signal.samples();
  for (double onset : train.onsets_s) {
    const auto start = static_cast<Index>(std::ceil(onset * fs));
    const Index len = std::min<Index>(static_cast<Index>(kImpactSupportSeconds * fs), x.size() - start);
    CHECK(x.segment(start, len).cwiseAbs().maxCoeff() > 0.5);
  }
  // Outside every transient's support the signal is exactly zero.
  for (Index i = 0; i < x.size(); ++i) {
    const double t = static_cast<double>(i) / fs;
    bool inside = false;
    for (double onset : train.onsets_s) inside = inside || (t >= onset && t < onset + kImpactSupportSeconds);
    if (!inside) CHECK(x[i] == 0.0);
  }
}

TEST_CASE("gen_impacts with rate zero is silent") {
  const ImpactTrain quiet = gen_impacts(1000.0, 5.0, 0.0, 1);
  CHECK(quiet.onsets_s.empty());
  CHECK(quiet.signal.samples().cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(gen_impacts(1000.0, 5.0, -1.0, 1), ValidationError);
}

TEST_CASE("mix is an exact sum and validates alignment") {
  const TimeSeries m = gen_motion(1000.0, 3.0, 0.5, 8.0, 3.0, 1);
  const TimeSeries z(Vector::Zero(m.size()), 1000.0);
  const SyntheticTrial only = mix(m, z, z);
  CHECK(only.raw.samples() == m.samples());

  const SyntheticTrial t = generate_trial(standard_recipe());
  const Vector sum = t.truth_motion.samples() + t.truth_mmg.samples() + t.truth_impacts.samples();
  CHECK(t.raw.samples() == sum);
  // Subtracting back is exact up to rounding of the intermediate sums.
  const Vector diff = t.raw.samples() - t.truth_motion.samples() - t.truth_mmg.samples() -
                      t.truth_impacts.samples();
  CHECK(diff.cwiseAbs().maxCoeff() <= 4.0 * std::numeric_limits<double>::epsilon() *
                                          t.raw.samples().cwiseAbs().maxCoeff());
  CHECK_THROWS_AS(mix(m, TimeSeries(Vector::Zero(10), 1000.0), z), ValidationError);
}

TEST_CASE("standard trial regenerates bit-identically") {
  const SynthRecipe r = standard_recipe();
  CHECK(r.fs == 1000.0);
  CHECK(r.duration_s == 10.0);
  CHECK(r.seed == 42);
  CHECK(r.motion.f_lo == 0.5);
  CHECK(r.motion.f_hi == 8.0);
  CHECK(r.mmg.target_mpf == 16.0);
  CHECK(r.motion.amplitude_rms == 3.0 * r.mmg.amplitude_rms);
  CHECK(r.impacts.rate_hz == 0.0);

  const SyntheticTrial a = generate_trial(r);
  const SyntheticTrial b = generate_trial(r);
  CHECK(a.raw.size() == 10000);
  CHECK(a.raw.samples() == b.raw.samples());
  CHECK(a.truth_mmg.samples() == b.truth_mmg.samples());
  REQUIRE(a.recipe.has_value());
  CHECK(a.recipe->seed == 42);
  CHECK(generate_trial(standard_recipe(43)).raw.samples() != a.raw.samples());
}

TEST_CASE("SynthRecipe validation") {
  SynthRecipe r = standard_recipe();
  r.motion.f_hi = 40.0;
  CHECK_THROWS_AS(r.validate(), ValidationError);
  r = standard_recipe();
  r.mmg.target_mpf = 2.0;
  CHECK_THROWS_AS(r.validate(), ValidationError);
  r = standard_recipe();
  r.duration_s = 1.0;
  CHECK_THROWS_AS(r.validate(), ValidationError);
  CHECK_NOTHROW(standard_recipe().validate());
}
