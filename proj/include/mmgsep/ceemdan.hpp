#pragma once

#include <cstdint>
#include <vector>

#include "mmgsep/decomposition.hpp"
#include "mmgsep/signal_core.hpp"

namespace mmgsep {

// Zero-mean, unit-variance Gaussian white noise for realization `index`
// under `master_seed`.
Vector white_noise(Index length, std::uint64_t master_seed, std::uint64_t index);

// k-th EMD mode (1-based) of w. Throws ValidationError naming the available
// depth when w has fewer than k modes.
Vector noise_mode(const Eigen::Ref<const Vector>& w, int k, const SiftConfig& cfg);

// N white-noise realizations with their EMD modes E_1..E_K precomputed once.
class NoiseBank {
 public:
  NoiseBank(Index length, const DecompParams& params, int workers = 1);

  std::size_t size() const noexcept { return modes_.size(); }
  Index length() const noexcept { return length_; }
  int depth(std::size_t realization) const {
    return static_cast<int>(modes_.at(realization).size());
  }
  // Throws ValidationError when k exceeds the realization's depth.
  const Vector& mode(std::size_t realization, int k) const;

 private:
  Index length_;
  std::vector<std::vector<Vector>> modes_;
};

// Improved CEEMDAN. Ensemble members run on up to `workers` threads; the
// result is bit-identical for every worker count because each member owns a
// derived seed and the ensemble average is summed in member order.
Decomposition decompose_iceemdan(const TimeSeries& x, const DecompParams& params,
                                 int workers = 1);

}  // namespace mmgsep
