#include "mmgsep/emd.hpp"

#include <cmath>
#include <cstdlib>
#include <vector>

namespace mmgsep {
namespace {

// Natural cubic spline through (xs, ys), evaluated at 0, 1, ..., n-1.
// xs must be strictly increasing and bracket [0, n-1].
void natural_spline_on_grid(const std::vector<double>& xs, const std::vector<double>& ys,
                            Eigen::Ref<Vector> out) {
  const std::size_t k = xs.size();
  std::vector<double> h(k - 1);
  for (std::size_t i = 0; i + 1 < k; ++i) h[i] = xs[i + 1] - xs[i];

  // Second derivatives; natural ends m[0] = m[k-1] = 0. Thomas algorithm on
  // the interior tridiagonal system.
  std::vector<double> m(k, 0.0);
  if (k > 2) {
    const std::size_t n = k - 2;
    std::vector<double> diag(n), upper(n), rhs(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double hl = h[i];
      const double hr = h[i + 1];
      diag[i] = 2.0 * (hl + hr);
      upper[i] = hr;
      rhs[i] = 6.0 * ((ys[i + 2] - ys[i + 1]) / hr - (ys[i + 1] - ys[i]) / hl);
    }
    for (std::size_t i = 1; i < n; ++i) {
      const double w = h[i] / diag[i - 1];
      diag[i] -= w * upper[i - 1];
      rhs[i] -= w * rhs[i - 1];
    }
    m[n] = rhs[n - 1] / diag[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) m[i + 1] = (rhs[i] - upper[i] * m[i + 2]) / diag[i];
  }

  std::size_t seg = 0;
  for (Index t = 0; t < out.size(); ++t) {
    const double x = static_cast<double>(t);
    while (seg + 2 < k && x > xs[seg + 1]) ++seg;
    const double hs = h[seg];
    const double a = (xs[seg + 1] - x) / hs;
    const double b = (x - xs[seg]) / hs;
    out[t] = a * ys[seg] + b * ys[seg + 1] +
             ((a * a * a - a) * m[seg] + (b * b * b - b) * m[seg + 1]) * hs * hs / 6.0;
  }
}

// Knots are the extrema plus the two outermost extrema mirrored across each edge.
void envelope_through(const Eigen::Ref<const Vector>& x, const std::vector<Index>& idx,
                      Eigen::Ref<Vector> out) {
  const double last = static_cast<double>(x.size() - 1);
  const std::size_t e = idx.size();
  std::vector<double> xs;
  std::vector<double> ys;
  xs.reserve(e + 4);
  ys.reserve(e + 4);
  for (std::size_t j : {std::size_t{1}, std::size_t{0}}) {
    xs.push_back(-static_cast<double>(idx[j]));
    ys.push_back(x[idx[j]]);
  }
  for (Index i : idx) {
    xs.push_back(static_cast<double>(i));
    ys.push_back(x[i]);
  }
  for (std::size_t j : {e - 1, e - 2}) {
    xs.push_back(2.0 * last - static_cast<double>(idx[j]));
    ys.push_back(x[idx[j]]);
  }
  natural_spline_on_grid(xs, ys, out);
}

bool has_envelopes(const Extrema& e) { return e.maxima.size() >= 2 && e.minima.size() >= 2; }

Vector mean_envelope(const Eigen::Ref<const Vector>& x, const Extrema& e) {
  Vector upper(x.size());
  Vector lower(x.size());
  envelope_through(x, e.maxima, upper);
  envelope_through(x, e.minima, lower);
  return 0.5 * (upper + lower);
}

}  // namespace

bool is_decomposable(const Eigen::Ref<const Vector>& x) { return has_envelopes(find_extrema(x)); }

Envelopes envelopes(const Eigen::Ref<const Vector>& x) {
  const Extrema e = find_extrema(x);
  if (!has_envelopes(e)) {
    throw MonotoneComponentError("monotone component: " + std::to_string(e.maxima.size()) +
                                 " maxima, " + std::to_string(e.minima.size()) + " minima");
  }
  Envelopes env{Vector(x.size()), Vector(x.size())};
  envelope_through(x, e.maxima, env.upper);
  envelope_through(x, e.minima, env.lower);
  return env;
}

Vector local_mean(const Eigen::Ref<const Vector>& x) {
  Envelopes env = envelopes(x);
  return 0.5 * (env.upper + env.lower);
}

std::optional<SiftResult> sift_first_mode(const Eigen::Ref<const Vector>& x,
                                          const SiftConfig& cfg) {
  Extrema e = find_extrema(x);
  if (!has_envelopes(e)) return std::nullopt;

  SiftResult r{x, 0, false};
  while (r.sifts < cfg.max_sifts) {
    const Vector mean = mean_envelope(r.mode, e);
    const double prev_energy = r.mode.squaredNorm();
    r.mode -= mean;
    ++r.sifts;
    const double sd = prev_energy > 0.0 ? mean.squaredNorm() / prev_energy : 0.0;
    e = find_extrema(r.mode);
    if (sd < cfg.sd_threshold) {
      const ExtremaCount c = count_extrema_and_zero_crossings(r.mode);
      if (std::abs(c.extrema - c.zero_crossings) <= 1) {
        r.converged = true;
        break;
      }
    }
    if (!has_envelopes(e)) break;
  }
  return r;
}

Vector sifted_local_mean(const Eigen::Ref<const Vector>& x, const SiftConfig& cfg) {
  auto first = sift_first_mode(x, cfg);
  if (!first) return x;
  return x - first->mode;
}

Modes emd_modes(const Eigen::Ref<const Vector>& x, const SiftConfig& cfg) {
  cfg.validate();
  Modes out;
  out.residual = x;
  while (static_cast<int>(out.imfs.size()) < cfg.max_imfs) {
    auto mode = sift_first_mode(out.residual, cfg);
    if (!mode) break;
    out.residual -= mode->mode;
    out.imfs.push_back(Imf{std::move(mode->mode), static_cast<int>(out.imfs.size()) + 1,
                           mode->sifts, mode->converged});
  }
  return out;
}

Decomposition extract_imfs(const TimeSeries& x, const SiftConfig& cfg) {
  Modes modes = emd_modes(x.samples(), cfg);
  Decomposition d;
  d.imfs = std::move(modes.imfs);
  d.residual = std::move(modes.residual);
  d.method = DecompMethod::EMD;
  d.sift = cfg;
  d.source_fs = x.fs();
  return d;
}

}  // namespace mmgsep
