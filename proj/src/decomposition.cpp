#include "mmgsep/decomposition.hpp"

#include <algorithm>

namespace mmgsep {

void SiftConfig::validate() const {
  if (!(sd_threshold > 0.0)) throw ValidationError("sd_threshold must be positive");
  if (max_sifts < 1) throw ValidationError("max_sifts must be >= 1");
  if (max_imfs < 1) throw ValidationError("max_imfs must be >= 1");
}

void DecompParams::validate() const {
  if (ensemble_size < 1) throw ValidationError("ensemble size must be >= 1");
  if (!(noise_amplitude > 0.0 && noise_amplitude <= 1.0)) {
    throw ValidationError("noise amplitude must lie in (0, 1]");
  }
  sift.validate();
}

std::string_view to_string(DecompMethod m) {
  return m == DecompMethod::EMD ? "emd" : "ceemdan";
}

Vector Decomposition::reconstruct() const {
  Vector sum = residual;
  for (const Imf& imf : imfs) sum += imf.samples;
  return sum;
}

Vector Decomposition::sum_imfs(int first, int last) const {
  Vector sum = Vector::Zero(residual.size());
  for (int k = std::max(first, 1); k <= last && k <= static_cast<int>(imfs.size()); ++k) {
    sum += imfs[static_cast<std::size_t>(k - 1)].samples;
  }
  return sum;
}

double reconstruction_error(const Decomposition& d, const Vector& source) {
  if (source.size() != d.residual.size()) {
    throw ValidationError("reconstruction check: decomposition length differs from source");
  }
  return (source - d.reconstruct()).cwiseAbs().maxCoeff();
}

}  // namespace mmgsep
