#pragma once

#include <cmath>
#include <vector>

#include "mmgsep/decomposition.hpp"
#include "mmgsep/separation.hpp"
#include "mmgsep/signal_core.hpp"

namespace mmgsep {

struct FuzzEnParams {
  int m = 2;        // embedding dimension
  double r = 0.2;   // tolerance as a fraction of the sequence std
  double n = 2.0;   // exponent of the membership function

  void validate() const;
};

// Fuzzy entropy: N - m templates of length m and m + 1, each with its own
// mean removed; similarity exp(-(d / r_abs)^n) on the Chebyshev distance,
// r_abs = r * std(seq) (population std). Returns ln(phi_m) - ln(phi_{m+1}).
// A zero-variance sequence scores 0.
template <typename Derived>
double fuzzy_entropy(const Eigen::MatrixBase<Derived>& seq, const FuzzEnParams& p) {
  p.validate();
  const Index len = seq.size();
  if (len < p.m + 2) {
    throw SizingError("fuzzy entropy needs at least m + 2 = " + std::to_string(p.m + 2) +
                      " samples, got " + std::to_string(len));
  }
  const Eigen::VectorXd x = seq.template cast<double>();
  const double sd = population_std(x);
  if (!(sd > 0.0)) return 0.0;
  const double r_abs = p.r * sd;
  const Index count = len - p.m;

  auto phi = [&](int dim) {
    Eigen::MatrixXd templates(dim, count);
    for (Index i = 0; i < count; ++i) {
      templates.col(i) = x.segment(i, dim);
      templates.col(i).array() -= templates.col(i).mean();
    }
    double sum = 0.0;
    for (Index i = 0; i < count; ++i) {
      for (Index j = i + 1; j < count; ++j) {
        const double d = (templates.col(i) - templates.col(j)).cwiseAbs().maxCoeff();
        sum += std::exp(-std::pow(d / r_abs, p.n));
      }
    }
    return 2.0 * sum / (static_cast<double>(count) * static_cast<double>(count - 1));
  };

  const double phi_m = phi(p.m);
  const double phi_m1 = phi(p.m + 1);
  if (!(phi_m > 0.0) || !(phi_m1 > 0.0)) {
    throw InvariantError("fuzzy entropy undefined: no similar templates");
  }
  return std::log(phi_m) - std::log(phi_m1);
}

// Upper frequency of the PSD window scored by spectral_fuzzen.
inline constexpr double kSpectralScoreMaxHz = 100.0;

// An IMF competes for the argmax only if at least this fraction of its power
// lies inside the 0-100 Hz scoring window; otherwise its score describes a
// leakage tail rather than the IMF.
inline constexpr double kMinWindowFraction = 0.5;

// An IMF competes for the argmax only if it carries at least this share of
// the decomposed signal's energy. Fuzzy entropy is scale invariant, so a
// numerically empty IMF (ensemble noise residue) can otherwise win.
inline constexpr double kMinEnergyShare = 1e-3;

struct SpectralScore {
  double fuzzen = 0.0;
  double window_fraction = 0.0;  // share of PSD power at or below 100 Hz
};

// Fuzzy entropy of the sequence's Welch PSD restricted to 0-100 Hz and
// normalized to unit sum. A zero sequence scores 0.
SpectralScore spectral_score(const Eigen::Ref<const Vector>& imf, double fs,
                             const FuzzEnParams& p = {});

inline double spectral_fuzzen(const Eigen::Ref<const Vector>& imf, double fs,
                              const FuzzEnParams& p = {}) {
  return spectral_score(imf, fs, p).fuzzen;
}

// Spectral scores for each IMF of d, in IMF order.
std::vector<SpectralScore> score_imfs(const Decomposition& d, const FuzzEnParams& p = {});

struct Selection {
  int argmax = 0;  // 1-based
  ImfRange range;
};

// Index rule on precomputed scores. k* = argmax over eligible IMFs (all IMFs
// when the mask is empty or nothing is eligible), ties to the smaller index.
// The range grows from k* toward higher order while each next score is
// >= theta * s_{k*}. IMFs 1..k* are always kept.
Selection select_mmg_range(const std::vector<double>& scores, double theta,
                           const std::vector<bool>& eligible = {});

// MMG = IMF_1..c, motion = IMF_{c+1..n} + residual.
MmgSeparation separate_ceemdan(const TimeSeries& raw, const Decomposition& d,
                               const FuzzEnParams& p = {}, double theta = 0.5);

}  // namespace mmgsep
