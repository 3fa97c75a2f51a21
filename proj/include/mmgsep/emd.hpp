#pragma once

#include <optional>

#include "mmgsep/decomposition.hpp"
#include "mmgsep/signal_core.hpp"

namespace mmgsep {

struct Envelopes {
  Vector upper;
  Vector lower;
};

// True when x has at least two maxima and two minima, i.e. both envelopes
// can be built.
bool is_decomposable(const Eigen::Ref<const Vector>& x);

// Natural cubic splines through the local maxima (upper) and minima (lower).
// The two outermost extrema of each kind are mirrored across each edge.
// Throws MonotoneComponentError when either kind has fewer than two points.
Envelopes envelopes(const Eigen::Ref<const Vector>& x);

// (upper + lower) / 2
Vector local_mean(const Eigen::Ref<const Vector>& x);

struct SiftResult {
  Vector mode;
  int sifts = 0;
  bool converged = false;
};

// Sifts the first mode out of x. Returns nullopt when x is not decomposable.
std::optional<SiftResult> sift_first_mode(const Eigen::Ref<const Vector>& x,
                                          const SiftConfig& cfg);

// x minus its first sifted mode; x itself when x is not decomposable.
// This is the local-mean operator the iCEEMDAN stages average.
Vector sifted_local_mean(const Eigen::Ref<const Vector>& x, const SiftConfig& cfg);

struct Modes {
  std::vector<Imf> imfs;
  Vector residual;
};

// Plain EMD on a raw sequence; each accepted mode is subtracted from the
// running residual, so the decomposition is complete by construction.
Modes emd_modes(const Eigen::Ref<const Vector>& x, const SiftConfig& cfg);

Decomposition extract_imfs(const TimeSeries& x, const SiftConfig& cfg = {});

}  // namespace mmgsep
