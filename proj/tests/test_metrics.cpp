#include <doctest.h>

#include "mmgsep/bandpass.hpp"
#include "mmgsep/ceemdan.hpp"
#include "mmgsep/errors.hpp"
#include "mmgsep/metrics.hpp"
#include "mmgsep/mmg_select.hpp"
#include "mmgsep/synth.hpp"
#include "support.hpp"

using namespace mmgsep;
using mmgsep::test::tone;

namespace {

double band_value(const BandValues& v, double lo) {
  for (const auto& bv : v) {
    if (bv.band.lo == lo) return bv.value;
  }
  FAIL("band not found");
  return 0.0;
}

}  // namespace

TEST_CASE("r_squared examples") {
  Vector ref(4);
  ref << 1, 2, 3, 4;
  Vector est(4);
  est << 1, 2, 3, 5;
  CHECK(r_squared(est, ref) == doctest::Approx(0.8));
  CHECK(r_squared(ref, ref) == 1.0);
  CHECK(r_squared(Vector::Constant(4, ref.mean()), ref) == doctest::Approx(0.0));
  CHECK_THROWS_WITH_AS(r_squared(ref, Vector::Constant(4, 2.0)), "undefined R^2: constant reference",
                       ValidationError);
  CHECK_THROWS_AS(r_squared(ref, Vector::Ones(3)), ValidationError);
}

TEST_CASE("r_squared is bounded and translation invariant") {
  test::Gen g(61);
  for (int trial = 0; trial < 50; ++trial) {
    const Index n = g.length(10, 500);
    const Vector ref = g.gaussian(n);
    const Vector est = ref + g.gaussian(n, g.uniform(0.0, 2.0));
    const double r = r_squared(est, ref);
    CHECK(r <= 1.0);
    const double c = g.uniform(-100.0, 100.0);
    const Vector shift = Vector::Constant(n, c);
    CHECK(r_squared(Vector(est + shift), Vector(ref + shift)) == doctest::Approx(r).epsilon(1e-9));
  }
}

TEST_CASE("delta_psd examples") {
  const double fs = 1000.0;
  const Index n = 10000;
  const TimeSeries raw1(tone(1.0, fs, n), fs);
  const BandValues same = delta_psd(raw1, raw1);
  REQUIRE(same.size() == 8);
  for (const auto& bv : same) CHECK(bv.value == 0.0);

  const BandValues gone = delta_psd(TimeSeries(Vector::Zero(n), fs), raw1);
  const double low = band_value(gone, 0.0);
  CHECK(low > 0.0);
  for (const auto& bv : gone) {
    if (bv.band.lo > 0.0) CHECK(bv.value < 0.01 * low);
  }

  const Vector hi = tone(12.0, fs, n);
  const BandValues two = delta_psd(TimeSeries(hi, fs), TimeSeries(Vector(tone(1.0, fs, n) + hi), fs));
  const SpectralDensity p1 = welch_psd(raw1);
  CHECK(band_value(two, 0.0) == doctest::Approx(band_power(p1, {0.0, 2.5})).epsilon(0.01));
  CHECK(band_value(two, 10.0) < 0.05 * band_value(two, 0.0));
}

TEST_CASE("delta_psd is non-negative and rejects misaligned inputs") {
  test::Gen g(62);
  for (int trial = 0; trial < 10; ++trial) {
    const Vector a = g.signal(3000);
    const Vector b = g.signal(3000);
    for (const auto& bv : delta_psd(TimeSeries(a, 1000.0), TimeSeries(b, 1000.0))) {
      CHECK(bv.value >= 0.0);
    }
  }
  CHECK_THROWS_AS(delta_psd(TimeSeries(Vector::Zero(2000), 1000.0), TimeSeries(Vector::Zero(2001), 1000.0)),
                  ValidationError);
}

TEST_CASE("reports carry the canonical bands and reciprocal RMS ratios") {
  const double fs = 1000.0;
  test::Gen g(63);
  const Vector motion = tone(2.0, fs, 4000, 3.0);
  const Vector raw = motion + g.gaussian(4000, 0.5);
  const TimeSeries r(raw, fs);
  const MmgSeparation band = separate_bandpass(r);
  const MmgSeparation exact{TimeSeries(Vector(raw - motion), fs), TimeSeries(motion, fs),
                            SeparationMethod::CeemdanFuzzEn};
  const auto [a, b] = compare_methods(r, TimeSeries(motion, fs), exact, band);
  CHECK(a.method == "ceemdan");
  CHECK(b.method == "band");
  CHECK(a.r_squared == 1.0);
  REQUIRE(a.delta_psd.size() == 8);
  const auto canon = canonical_bands();
  for (std::size_t i = 0; i < 8; ++i) CHECK(a.delta_psd[i].band == canon[i]);
  CHECK(a.rms_ratio_to_other * b.rms_ratio_to_other == doctest::Approx(1.0));
  CHECK(a.rms_raw == doctest::Approx(rms(raw)));

  const auto [a2, b2] = compare_methods(r, TimeSeries(motion, fs), exact, band);
  CHECK(a2.r_squared == a.r_squared);
  CHECK(b2.mpf_filtered == b.mpf_filtered);
}

TEST_CASE("standard mixture: ceemdan beats the band-pass reference") {
  const SyntheticTrial t = generate_trial(standard_recipe());
  const Decomposition d = decompose_iceemdan(t.raw, DecompParams{});
  const MmgSeparation c = separate_ceemdan(t.raw, d);
  const MmgSeparation b = separate_bandpass(t.raw);
  const auto [rc, rb] = compare_methods(t.raw, t.truth_motion, c, b);
  CHECK(rc.r_squared > rb.r_squared);
  CHECK(band_value(rc.delta_psd, 5.0) > band_value(rb.delta_psd, 5.0));
  CHECK(band_value(rc.delta_psd, 7.5) > band_value(rb.delta_psd, 7.5));
}
