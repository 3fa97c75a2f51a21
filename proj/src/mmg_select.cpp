#include "mmgsep/mmg_select.hpp"

#include <algorithm>
#include <optional>
#include <string>

namespace mmgsep {

void FuzzEnParams::validate() const {
  if (m < 1) throw ValidationError("fuzzy entropy embedding m must be >= 1");
  if (!(r > 0.0)) throw ValidationError("fuzzy entropy tolerance r must be positive");
  if (!(n > 0.0)) throw ValidationError("fuzzy entropy power n must be positive");
}

SpectralScore spectral_score(const Eigen::Ref<const Vector>& imf, double fs,
                             const FuzzEnParams& p) {
  const SpectralDensity psd = welch_psd(TimeSeries(imf, fs));
  Index bins = 0;
  while (bins < psd.freqs.size() && psd.freqs[bins] <= kSpectralScoreMaxHz) ++bins;
  const Vector window = psd.power.head(bins);
  const double in_window = window.sum();
  if (!(in_window > 0.0)) return {};
  return {fuzzy_entropy(window / in_window, p), in_window / psd.power.sum()};
}

std::vector<SpectralScore> score_imfs(const Decomposition& d, const FuzzEnParams& p) {
  std::vector<SpectralScore> scores;
  scores.reserve(d.imfs.size());
  for (const Imf& imf : d.imfs) scores.push_back(spectral_score(imf.samples, d.source_fs, p));
  return scores;
}

Selection select_mmg_range(const std::vector<double>& scores, double theta,
                           const std::vector<bool>& eligible) {
  if (scores.empty()) throw ValidationError("cannot select IMFs from an empty decomposition");
  if (!(theta > 0.0 && theta <= 1.0)) throw ValidationError("theta must lie in (0, 1]");
  if (!eligible.empty() && eligible.size() != scores.size()) {
    throw ValidationError("eligibility mask length differs from score count");
  }
  const bool masked = std::find(eligible.begin(), eligible.end(), true) != eligible.end();
  std::optional<std::size_t> best;
  for (std::size_t k = 0; k < scores.size(); ++k) {
    if (masked && !eligible[k]) continue;
    if (!best || scores[k] > scores[*best]) best = k;
  }
  const double floor = theta * scores[*best];
  std::size_t cut = *best;
  while (cut + 1 < scores.size() && scores[cut + 1] >= floor) ++cut;
  return Selection{static_cast<int>(*best) + 1, ImfRange{1, static_cast<int>(cut) + 1}};
}

MmgSeparation separate_ceemdan(const TimeSeries& raw, const Decomposition& d,
                               const FuzzEnParams& p, double theta) {
  if (d.imfs.empty()) throw ValidationError("cannot separate an empty decomposition");
  if (d.residual.size() != raw.size()) {
    throw ValidationError("decomposition length " + std::to_string(d.residual.size()) +
                          " does not match raw signal length " + std::to_string(raw.size()));
  }
  std::vector<double> scores;
  std::vector<double> fractions;
  std::vector<bool> eligible;
  const double energy = raw.samples().squaredNorm();
  const std::vector<SpectralScore> scored = score_imfs(d, p);
  for (std::size_t k = 0; k < scored.size(); ++k) {
    scores.push_back(scored[k].fuzzen);
    fractions.push_back(scored[k].window_fraction);
    const double share = energy > 0.0 ? d.imfs[k].samples.squaredNorm() / energy : 0.0;
    eligible.push_back(scored[k].window_fraction >= kMinWindowFraction && share >= kMinEnergyShare);
  }
  const Selection sel = select_mmg_range(scores, theta, eligible);
  const int n = static_cast<int>(d.imfs.size());
  Vector motion = d.sum_imfs(sel.range.last + 1, n) + d.residual;
  return MmgSeparation{TimeSeries(d.sum_imfs(sel.range.first, sel.range.last), raw.fs()),
                       TimeSeries(std::move(motion), raw.fs()),
                       SeparationMethod::CeemdanFuzzEn,
                       std::move(scores),
                       std::move(fractions),
                       sel.argmax,
                       sel.range};
}

}  // namespace mmgsep
