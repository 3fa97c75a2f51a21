#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "mmgsep/signal_core.hpp"

namespace mmgsep::test {

inline constexpr double kPi = std::numbers::pi;

inline Vector tone(double f_hz, double fs, Index n, double amplitude = 1.0, double phase = 0.0) {
  Vector x(n);
  for (Index i = 0; i < n; ++i) {
    x[i] = amplitude * std::sin(2.0 * kPi * f_hz * static_cast<double>(i) / fs + phase);
  }
  return x;
}

inline double pearson(const Vector& a, const Vector& b) {
  const Eigen::ArrayXd da = a.array() - a.mean();
  const Eigen::ArrayXd db = b.array() - b.mean();
  const double den = std::sqrt((da * da).sum() * (db * db).sum());
  return den > 0.0 ? (da * db).sum() / den : 0.0;
}

// Frequency of the largest plain DFT magnitude over bins 1..n/2.
inline double dft_peak_hz(const Vector& x, double fs) {
  const Index n = x.size();
  double best = -1.0;
  Index best_k = 0;
  for (Index k = 1; k <= n / 2; ++k) {
    std::complex<double> acc = 0.0;
    const double w = -2.0 * kPi * static_cast<double>(k) / static_cast<double>(n);
    for (Index i = 0; i < n; ++i) acc += x[i] * std::polar(1.0, w * static_cast<double>(i));
    if (std::abs(acc) > best) {
      best = std::abs(acc);
      best_k = k;
    }
  }
  return static_cast<double>(best_k) * fs / static_cast<double>(n);
}

// Fuzzy entropy written directly from its definition with plain loops.
inline double brute_fuzzen(const std::vector<double>& x, int m, double r, double n) {
  const std::size_t len = x.size();
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(len);
  double var = 0.0;
  for (double v : x) var += (v - mean) * (v - mean);
  const double sd = std::sqrt(var / static_cast<double>(len));
  if (sd == 0.0) return 0.0;
  const double tol = r * sd;
  const std::size_t count = len - static_cast<std::size_t>(m);

  auto phi = [&](int dim) {
    std::vector<std::vector<double>> t(count, std::vector<double>(static_cast<std::size_t>(dim)));
    for (std::size_t i = 0; i < count; ++i) {
      double base = 0.0;
      for (int j = 0; j < dim; ++j) base += x[i + static_cast<std::size_t>(j)];
      base /= dim;
      for (int j = 0; j < dim; ++j) t[i][static_cast<std::size_t>(j)] = x[i + static_cast<std::size_t>(j)] - base;
    }
    double total = 0.0;
    double pairs = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
      for (std::size_t j = 0; j < count; ++j) {
        if (i == j) continue;
        double d = 0.0;
        for (int k = 0; k < dim; ++k) {
          d = std::max(d, std::abs(t[i][static_cast<std::size_t>(k)] - t[j][static_cast<std::size_t>(k)]));
        }
        total += std::exp(-std::pow(d / tol, n));
        pairs += 1.0;
      }
    }
    return total / pairs;
  };
  return std::log(phi(m)) - std::log(phi(m + 1));
}

// Squared magnitude of the analog Butterworth band-pass prototype evaluated
// at the bilinear-warped frequency; `order` is the total band-pass order.
inline double butter_bandpass_gain2(double f, double lo, double hi, int order, double fs) {
  auto warp = [fs](double hz) { return 2.0 * fs * std::tan(kPi * hz / fs); };
  const double w = warp(f);
  const double w1 = warp(lo);
  const double w2 = warp(hi);
  const double ratio = (w * w - w1 * w2) / (w * (w2 - w1));
  return 1.0 / (1.0 + std::pow(ratio * ratio, order / 2));
}

inline double db(double magnitude) { return 20.0 * std::log10(magnitude); }

// Seeded generator for property tests.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  std::uint64_t seed() { return rng_(); }
  Index length(Index lo, Index hi) {
    return std::uniform_int_distribution<Index>(lo, hi)(rng_);
  }
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  Vector gaussian(Index n, double sd = 1.0) {
    std::normal_distribution<double> d(0.0, sd);
    Vector x(n);
    for (Index i = 0; i < n; ++i) x[i] = d(rng_);
    return x;
  }

  // Random tones, a drift and a little noise, at fs = 1000 Hz.
  Vector signal(Index n) {
    Vector x = gaussian(n, uniform(0.0, 0.3));
    const int tones = integer(1, 4);
    for (int k = 0; k < tones; ++k) {
      x += tone(uniform(0.5, 120.0), 1000.0, n, uniform(0.1, 5.0), uniform(0.0, 2.0 * kPi));
    }
    const double slope = uniform(-2.0, 2.0);
    for (Index i = 0; i < n; ++i) x[i] += slope * static_cast<double>(i) / static_cast<double>(n);
    return x * std::pow(10.0, uniform(-3.0, 3.0));
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace mmgsep::test
