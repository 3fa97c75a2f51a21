#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "mmgsep/signal_core.hpp"

namespace mmgsep {

// Sifting controls shared by EMD and the noise modes of iCEEMDAN.
struct SiftConfig {
  double sd_threshold = 0.2;  // Cauchy criterion sum((h_prev - h)^2) / sum(h_prev^2)
  int max_sifts = 100;
  int max_imfs = 12;

  void validate() const;
};

struct DecompParams {
  int ensemble_size = 100;
  double noise_amplitude = 0.2;  // fraction of the running residual's std
  std::uint64_t seed = 42;
  SiftConfig sift{};

  void validate() const;
};

struct Imf {
  Vector samples;
  int index = 0;  // 1-based, 1 = highest frequency
  int sifts = 0;
  bool converged = false;  // SD and extrema/zero-crossing criteria both met
};

enum class DecompMethod { EMD, CEEMDAN };

std::string_view to_string(DecompMethod m);

struct Decomposition {
  std::vector<Imf> imfs;
  Vector residual;
  DecompMethod method = DecompMethod::EMD;
  std::optional<DecompParams> params;  // set for CEEMDAN
  SiftConfig sift{};
  double source_fs = 0.0;

  // Sum of all IMFs plus the residual.
  Vector reconstruct() const;
  // Sum of IMFs first..last (1-based, inclusive); empty range gives zeros.
  Vector sum_imfs(int first, int last) const;
};

// max |source - reconstruct()|
double reconstruction_error(const Decomposition& d, const Vector& source);

}  // namespace mmgsep
