#include "mmgsep/bandpass.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

namespace mmgsep {
namespace {

using cplx = std::complex<double>;

cplx z_inverse(double freq_hz, double fs) {
  return std::polar(1.0, -2.0 * std::numbers::pi * freq_hz / fs);
}

double prewarp(double freq_hz, double fs) {
  return 2.0 * fs * std::tan(std::numbers::pi * freq_hz / fs);
}

cplx bilinear(cplx s, double fs) { return (2.0 * fs + s) / (2.0 * fs - s); }

// Analog Butterworth prototype poles with non-negative imaginary part.
std::vector<cplx> upper_prototype_poles(int n) {
  std::vector<cplx> poles;
  for (int k = 1; k <= (n + 1) / 2; ++k) {
    const double angle = std::numbers::pi * (2.0 * k + n - 1) / (2.0 * n);
    cplx p = std::polar(1.0, angle);
    if (2 * k == n + 1) p = cplx(-1.0, 0.0);
    poles.push_back(p);
  }
  return poles;
}

Biquad section_from_poles(cplx p1, cplx p2, double b0, double b1, double b2) {
  Biquad q;
  q.b0 = b0;
  q.b1 = b1;
  q.b2 = b2;
  q.a1 = -(p1 + p2).real();
  q.a2 = (p1 * p2).real();
  return q;
}

void normalize_at(Biquad& q, cplx z_inv) {
  const double g = std::abs(q.response(z_inv));
  q.b0 /= g;
  q.b1 /= g;
  q.b2 /= g;
}

std::vector<cplx> section_poles(const Biquad& q) {
  if (q.a2 == 0.0) return {cplx(-q.a1, 0.0)};
  const cplx disc = std::sqrt(cplx(q.a1 * q.a1 - 4.0 * q.a2, 0.0));
  return {(-q.a1 + disc) / 2.0, (-q.a1 - disc) / 2.0};
}

// Steady-state DF2T states of each section for a unit step at the input of
// the cascade.
std::vector<std::array<double, 2>> step_states(const std::vector<Biquad>& sections) {
  std::vector<std::array<double, 2>> zi(sections.size());
  double input = 1.0;
  for (std::size_t i = 0; i < sections.size(); ++i) {
    const Biquad& q = sections[i];
    const double g = (q.b0 + q.b1 + q.b2) / (1.0 + q.a1 + q.a2);
    const double z2 = (q.b2 - q.a2 * g) * input;
    const double z1 = (q.b1 - q.a1 * g) * input + z2;
    zi[i] = {z1, z2};
    input *= g;
  }
  return zi;
}

}  // namespace

IirFilter::IirFilter(std::vector<Biquad> sections, FilterDesign design)
    : sections_(std::move(sections)), design_(design) {
  for (const cplx& p : poles()) {
    if (!(std::abs(p) < 1.0 - 1e-8)) {
      throw InvariantError("unstable filter: pole modulus " + std::to_string(std::abs(p)));
    }
  }
}

cplx IirFilter::response(double freq_hz) const {
  const cplx zi = z_inverse(freq_hz, design_.fs);
  cplx h = 1.0;
  for (const Biquad& q : sections_) h *= q.response(zi);
  return h;
}

std::vector<cplx> IirFilter::poles() const {
  std::vector<cplx> out;
  for (const Biquad& q : sections_) {
    for (const cplx& p : section_poles(q)) out.push_back(p);
  }
  return out;
}

Vector IirFilter::apply(const Eigen::Ref<const Vector>& x, bool steady_state) const {
  Vector y = x;
  if (x.size() == 0) return y;
  const auto zi = step_states(sections_);
  double scale = steady_state ? x[0] : 0.0;
  for (std::size_t s = 0; s < sections_.size(); ++s) {
    const Biquad& q = sections_[s];
    double z1 = zi[s][0] * scale;
    double z2 = zi[s][1] * scale;
    for (Index i = 0; i < y.size(); ++i) {
      const double in = y[i];
      const double out = q.b0 * in + z1;
      z1 = q.b1 * in - q.a1 * out + z2;
      z2 = q.b2 * in - q.a2 * out;
      y[i] = out;
    }
  }
  return y;
}

IirFilter design_butterworth_bandpass(double lo_hz, double hi_hz, int order, double fs) {
  if (!(fs > 0.0) || !(lo_hz > 0.0) || !(hi_hz > lo_hz) || !(hi_hz < fs / 2.0)) {
    throw ValidationError("band-pass design requires 0 < lo < hi < fs/2");
  }
  if (order < 2 || order > 8 || order % 2 != 0) {
    throw ValidationError("band-pass order must be one of 2, 4, 6, 8");
  }
  const int n = order / 2;
  const double w1 = prewarp(lo_hz, fs);
  const double w2 = prewarp(hi_hz, fs);
  const double bw = w2 - w1;
  const double w0sq = w1 * w2;
  const double center_hz = fs / std::numbers::pi * std::atan(std::sqrt(w0sq) / (2.0 * fs));
  const cplx center = z_inverse(center_hz, fs);

  std::vector<Biquad> sections;
  for (const cplx& p : upper_prototype_poles(n)) {
    // s^2 - p*bw*s + w0^2 = 0 maps one prototype pole to two band-pass poles.
    const cplx half = p * bw / 2.0;
    const cplx root = std::sqrt(half * half - w0sq);
    const cplx s1 = half + root;
    const cplx s2 = half - root;
    if (p.imag() > 0.0) {
      for (const cplx& s : {s1, s2}) {
        const cplx z = bilinear(s, fs);
        sections.push_back(section_from_poles(z, std::conj(z), 1.0, 0.0, -1.0));
      }
    } else {
      sections.push_back(section_from_poles(bilinear(s1, fs), bilinear(s2, fs), 1.0, 0.0, -1.0));
    }
  }
  for (Biquad& q : sections) normalize_at(q, center);
  return IirFilter(std::move(sections), FilterDesign{FilterKind::BandPass, order, lo_hz, hi_hz, fs});
}

IirFilter design_butterworth_lowpass(double cutoff_hz, int order, double fs) {
  if (!(fs > 0.0) || !(cutoff_hz > 0.0) || !(cutoff_hz < fs / 2.0)) {
    throw ValidationError("low-pass design requires 0 < cutoff < fs/2");
  }
  if (order < 1 || order > 8) throw ValidationError("low-pass order must lie in 1..8");
  const double wc = prewarp(cutoff_hz, fs);
  const cplx dc = 1.0;

  std::vector<Biquad> sections;
  for (const cplx& p : upper_prototype_poles(order)) {
    const cplx z = bilinear(p * wc, fs);
    Biquad q;
    if (p.imag() > 0.0) {
      q = section_from_poles(z, std::conj(z), 1.0, 2.0, 1.0);
    } else {
      q.b0 = 1.0;
      q.b1 = 1.0;
      q.a1 = -z.real();
    }
    normalize_at(q, dc);
    sections.push_back(q);
  }
  return IirFilter(std::move(sections),
                   FilterDesign{FilterKind::LowPass, order, 0.0, cutoff_hz, fs});
}

TimeSeries filtfilt(const IirFilter& f, const TimeSeries& x) {
  const Index pad = f.pad_length();
  const Index n = x.size();
  if (n <= 3 * pad) {
    throw SizingError("filtfilt needs more than " + std::to_string(3 * pad) + " samples, got " +
                      std::to_string(n));
  }
  const Vector& s = x.samples();
  Vector ext(n + 2 * pad);
  for (Index i = 0; i < pad; ++i) {
    ext[i] = 2.0 * s[0] - s[pad - i];
    ext[n + pad + i] = 2.0 * s[n - 1] - s[n - 2 - i];
  }
  ext.segment(pad, n) = s;

  Vector fwd = f.apply(ext);
  Vector back = f.apply(fwd.reverse());
  return TimeSeries(back.reverse().segment(pad, n), x.fs());
}

MmgSeparation separate_bandpass(const TimeSeries& raw, const BandpassConfig& cfg) {
  if (!(raw.fs() > 2.0 * cfg.hi_hz)) {
    throw ValidationError("band-pass reference needs fs > " + std::to_string(2.0 * cfg.hi_hz) +
                          " Hz");
  }
  const auto min_len = static_cast<Index>(std::ceil(raw.fs() / cfg.lo_hz));
  if (raw.size() < min_len) {
    throw SizingError("band-pass reference needs at least one period of the " +
                      std::to_string(cfg.lo_hz) + " Hz edge (" + std::to_string(min_len) +
                      " samples), got " + std::to_string(raw.size()));
  }
  const IirFilter f = design_butterworth_bandpass(cfg.lo_hz, cfg.hi_hz, cfg.order, raw.fs());
  TimeSeries mmg = cfg.zero_phase ? filtfilt(f, raw)
                                  : TimeSeries(f.apply(raw.samples()), raw.fs());
  TimeSeries motion(raw.samples() - mmg.samples(), raw.fs());
  return MmgSeparation{std::move(mmg), std::move(motion), SeparationMethod::Bandpass};
}

}  // namespace mmgsep
