#include <doctest.h>

#include "mmgsep/errors.hpp"
#include "mmgsep/gait.hpp"
#include "support.hpp"

using namespace mmgsep;

namespace {

constexpr double kFs = 100.0;

double deg_to_acc(double deg) { return kStandardGravity * std::sin(deg * test::kPi / 180.0); }

// Piecewise-constant angle trace from (degrees, seconds) phases.
TimeSeries phases(std::initializer_list<std::pair<double, double>> spec) {
  std::vector<double> v;
  for (auto [deg, sec] : spec) {
    for (Index i = 0; i < static_cast<Index>(std::lround(sec * kFs)); ++i) v.push_back(deg);
  }
  return TimeSeries(Eigen::Map<const Vector>(v.data(), static_cast<Index>(v.size())), kFs);
}

}  // namespace

TEST_CASE("inclination of a static tilt") {
  for (double deg : {-60.0, -10.0, 0.0, 25.0, 80.0}) {
    const TimeSeries acc(Vector::Constant(1000, deg_to_acc(deg)), kFs);
    const TimeSeries angle = inclination_angle(acc);
    CHECK(angle.samples().mean() == doctest::Approx(deg).epsilon(1e-6));
  }
}

TEST_CASE("inclination stays within +-90 degrees") {
  test::Gen g(81);
  for (int trial = 0; trial < 10; ++trial) {
    const Vector acc = g.gaussian(2000, g.uniform(1.0, 30.0));
    const TimeSeries angle = inclination_angle(TimeSeries(acc, kFs));
    CHECK(angle.samples().maxCoeff() <= 90.0);
    CHECK(angle.samples().minCoeff() >= -90.0);
  }
}

TEST_CASE("inclination cutoff is validated") {
  const TimeSeries acc(Vector::Zero(500), kFs);
  CHECK_THROWS_AS(inclination_angle(acc, 0.05), ValidationError);
  CHECK_THROWS_AS(inclination_angle(acc, 5.0), ValidationError);
}

TEST_CASE("walking windows on constructed angle traces") {
  // bent 2 s, walking 3 s, bent 2 s, walking 4 s, bent 1 s
  const TimeSeries trace = phases({{40.0, 2.0}, {3.0, 3.0}, {35.0, 2.0}, {-8.0, 4.0}, {50.0, 1.0}});
  const std::vector<WalkWindow> w = walking_windows(trace);
  REQUIRE(w.size() == 2);
  CHECK(w[0] == WalkWindow{200, 500});
  CHECK(w[1] == WalkWindow{700, 1100});

  const std::vector<WalkWindow> all = walking_windows(phases({{0.0, 5.0}}));
  REQUIRE(all.size() == 1);
  CHECK(all[0] == WalkWindow{0, 500});

  CHECK(walking_windows(phases({{45.0, 5.0}})).empty());
}

TEST_CASE("walking windows keep the threshold edges and drop short runs") {
  const TimeSeries edge = phases({{20.0, 1.0}, {10.0, 1.0}, {-10.0, 1.0}, {-10.5, 1.0}});
  const std::vector<WalkWindow> w = walking_windows(edge);
  REQUIRE(w.size() == 1);
  CHECK(w[0] == WalkWindow{100, 300});

  const TimeSeries blip = phases({{30.0, 1.0}, {0.0, 0.3}, {30.0, 1.0}, {0.0, 0.6}, {30.0, 1.0}});
  const std::vector<WalkWindow> kept = walking_windows(blip);
  REQUIRE(kept.size() == 1);
  CHECK(kept[0] == WalkWindow{230, 290});

  WalkConfig narrow;
  narrow.lo_deg = -2.0;
  narrow.hi_deg = 2.0;
  CHECK(walking_windows(phases({{3.0, 5.0}}), narrow).empty());

  CHECK_THROWS_AS(walking_windows(edge, WalkConfig{10.0, -10.0, 0.5}), ValidationError);
  CHECK_THROWS_AS(walking_windows(edge, WalkConfig{-10.0, 10.0, -1.0}), ValidationError);
}

TEST_CASE("segmentation through the accelerometer path finds the phases") {
  // Acceleration from the constructed angle trace; the gravity low-pass
  // smears each transition by a few tenths of a second.
  const TimeSeries trace = phases({{40.0, 3.0}, {0.0, 4.0}, {40.0, 3.0}, {5.0, 4.0}, {40.0, 3.0}});
  const Vector acc = trace.samples().unaryExpr([](double d) { return deg_to_acc(d); });
  const TimeSeries angle = inclination_angle(TimeSeries(acc, kFs));
  const std::vector<WalkWindow> w = walking_windows(angle);
  REQUIRE(w.size() == 2);
  const Index tol = static_cast<Index>(0.3 * kFs);
  CHECK(std::abs(w[0].start - 300) <= tol);
  CHECK(std::abs(w[0].end - 700) <= tol);
  CHECK(std::abs(w[1].start - 1000) <= tol);
  CHECK(std::abs(w[1].end - 1400) <= tol);
}
