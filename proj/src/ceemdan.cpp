#include "mmgsep/ceemdan.hpp"

#include <optional>
#include <string>

#include "mmgsep/emd.hpp"
#include "mmgsep/parallel.hpp"
#include "mmgsep/random.hpp"

namespace mmgsep {

Vector white_noise(Index length, std::uint64_t master_seed, std::uint64_t index) {
  NoiseSource src(derive_seed(master_seed, index));
  Vector w = src.gaussian(length);
  w.array() -= w.mean();
  const double sd = population_std(w);
  if (sd > 0.0) w /= sd;
  return w;
}

Vector noise_mode(const Eigen::Ref<const Vector>& w, int k, const SiftConfig& cfg) {
  if (k < 1) throw ValidationError("noise mode index must be >= 1");
  Modes m = emd_modes(w, cfg);
  if (k > static_cast<int>(m.imfs.size())) {
    throw ValidationError("noise mode " + std::to_string(k) + " requested but the realization has " +
                          std::to_string(m.imfs.size()) + " modes");
  }
  return std::move(m.imfs[static_cast<std::size_t>(k - 1)].samples);
}

NoiseBank::NoiseBank(Index length, const DecompParams& params, int workers)
    : length_(length) {
  params.validate();
  if (workers < 1) throw ValidationError("workers must be >= 1");
  modes_.resize(static_cast<std::size_t>(params.ensemble_size));
  parallel_for(modes_.size(), workers, [&](std::size_t i) {
    Modes m = emd_modes(white_noise(length, params.seed, i), params.sift);
    auto& dst = modes_[i];
    dst.reserve(m.imfs.size());
    for (Imf& imf : m.imfs) dst.push_back(std::move(imf.samples));
  });
}

const Vector& NoiseBank::mode(std::size_t realization, int k) const {
  const auto& modes = modes_.at(realization);
  if (k < 1 || k > static_cast<int>(modes.size())) {
    throw ValidationError("noise mode " + std::to_string(k) + " requested but realization " +
                          std::to_string(realization) + " has " + std::to_string(modes.size()) +
                          " modes");
  }
  return modes[static_cast<std::size_t>(k - 1)];
}

namespace {

// Index-ordered ensemble average.
Vector ordered_mean(const std::vector<Vector>& members) {
  Vector sum = Vector::Zero(members.front().size());
  for (const Vector& m : members) sum += m;
  return sum / static_cast<double>(members.size());
}

}  // namespace

Decomposition decompose_iceemdan(const TimeSeries& x, const DecompParams& params, int workers) {
  params.validate();
  if (workers < 1) throw ValidationError("workers must be >= 1");
  const Vector& signal = x.samples();
  const SiftConfig& sift = params.sift;

  Decomposition d;
  d.method = DecompMethod::CEEMDAN;
  d.params = params;
  d.sift = sift;
  d.source_fs = x.fs();
  d.residual = signal;
  if (!is_decomposable(signal)) return d;

  const NoiseBank bank(signal.size(), params, workers);
  const std::size_t n = bank.size();
  const double eps = params.noise_amplitude;
  std::vector<Vector> members(n);

  // Stage 1: each member's first noise mode is scaled to eps * std(x).
  const double std_x = population_std(signal);
  parallel_for(n, workers, [&](std::size_t i) {
    const Vector& e1 = bank.mode(i, 1);
    const double beta = eps * std_x / population_std(e1);
    members[i] = sifted_local_mean(signal + beta * e1, sift);
  });
  Vector residual = ordered_mean(members);
  d.imfs.push_back(Imf{signal - residual, 1, 0, false});

  // Stage k >= 2 perturbs r_{k-1} with eps * std(r_{k-1}) * E_k(w_i).
  // Members whose noise has fewer than k modes use the unperturbed residual.
  for (int k = 2; k <= sift.max_imfs && is_decomposable(residual); ++k) {
    const double beta = eps * population_std(residual);
    std::optional<Vector> unperturbed;
    for (std::size_t i = 0; i < n; ++i) {
      if (bank.depth(i) < k) {
        unperturbed = sifted_local_mean(residual, sift);
        break;
      }
    }
    parallel_for(n, workers, [&](std::size_t i) {
      if (bank.depth(i) < k) {
        members[i] = *unperturbed;
      } else {
        members[i] = sifted_local_mean(residual + beta * bank.mode(i, k), sift);
      }
    });
    Vector next = ordered_mean(members);
    d.imfs.push_back(Imf{residual - next, k, 0, false});
    residual = std::move(next);
  }
  d.residual = std::move(residual);
  return d;
}

}  // namespace mmgsep
