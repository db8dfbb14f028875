#pragma once

// Fourier spectral discretization on the periodic interval. Fields are
// expansions in the orthonormal waves e_j(x) = exp(2 pi i j x / L) / sqrt(L),
// j = -n_waves .. n_waves, stored with offset index j + n_waves. A real field
// keeps the conjugate symmetry c_{-j} = conj(c_j); all operations here
// preserve it.

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "vlaherm/errors.hpp"

namespace vlaherm {

struct SpectralField {
  int n_waves = 0;      // modes -n_waves..n_waves
  double length = 0.0;
  std::vector<std::complex<double>> m;

  static SpectralField zeros(int n_waves, double length) {
    if (n_waves < 0 || !(length > 0.0))
      throw std::invalid_argument("SpectralField: need n_waves >= 0 and length > 0");
    SpectralField f;
    f.n_waves = n_waves;
    f.length = length;
    f.m.assign(2 * size_t(n_waves) + 1, {0.0, 0.0});
    return f;
  }
  std::complex<double>& mode(int j) { return m[size_t(j + n_waves)]; }
  const std::complex<double>& mode(int j) const { return m[size_t(j + n_waves)]; }
  int n_modes_total() const { return 2 * n_waves + 1; }
};

inline void check_same_shape(const SpectralField& a, const SpectralField& b) {
  if (a.n_waves != b.n_waves || a.length != b.length)
    throw std::invalid_argument("spectral: field shape mismatch");
}

inline SpectralField zero_like(const SpectralField& f) {
  return SpectralField::zeros(f.n_waves, f.length);
}

inline void axpy(SpectralField& y, double a, const SpectralField& x) {
  check_same_shape(y, x);
  for (size_t i = 0; i < y.m.size(); ++i) y.m[i] += a * x.m[i];
}

inline void field_scale(SpectralField& y, double a) {
  for (auto& c : y.m) c *= a;
}

// squared L2 norm over [0, L]; the basis is orthonormal so this is sum |c_j|^2
inline double field_l2sq(const SpectralField& f) {
  double s = 0.0;
  for (const auto& c : f.m) s += std::norm(c);
  return s;
}

inline bool field_finite(const SpectralField& f) {
  for (const auto& c : f.m)
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
  return true;
}

inline double integral(const SpectralField& f) {
  return std::sqrt(f.length) * f.mode(0).real();
}

inline SpectralField derivative(const SpectralField& f) {
  SpectralField d = zero_like(f);
  const double two_pi_over_L = 2.0 * M_PI / f.length;
  for (int j = -f.n_waves; j <= f.n_waves; ++j)
    d.mode(j) = std::complex<double>(0.0, two_pi_over_L * j) * f.mode(j);
  return d;
}

inline double eval(const SpectralField& f, double x) {
  const double isl = 1.0 / std::sqrt(f.length);
  std::complex<double> s = f.mode(0);
  for (int j = 1; j <= f.n_waves; ++j) {
    double th = 2.0 * M_PI * j * x / f.length;
    std::complex<double> w(std::cos(th), std::sin(th));
    // conjugate pair of a real field; works for complex data too
    s += f.mode(j) * w + f.mode(-j) * std::conj(w);
  }
  return s.real() * isl;
}

// Galerkin projection of the pointwise product: (uv)^j = (1/sqrt(L)) *
// sum_{j1+j2=j} u^{j1} v^{j2}, truncated to |j| <= n_waves. Computed as a
// direct convolution; O(n^2) but exact in the retained band.
inline SpectralField galerkin_product(const SpectralField& u, const SpectralField& v) {
  check_same_shape(u, v);
  SpectralField w = zero_like(u);
  const int N = u.n_waves;
  const double isl = 1.0 / std::sqrt(u.length);
  for (int j = -N; j <= N; ++j) {
    std::complex<double> s{0.0, 0.0};
    int lo = std::max(-N, j - N), hi = std::min(N, j + N);
    for (int j1 = lo; j1 <= hi; ++j1) s += u.mode(j1) * v.mode(j - j1);
    w.mode(j) = s * isl;
  }
  return w;
}

// E from the charge density r = C_0 - rho0 via dE/dx = r: E^j = r^j / (i k_j),
// zero-mean E. The j = 0 component of r must vanish (net neutrality).
inline SpectralField spectral_poisson(const SpectralField& charge) {
  double def = std::abs(charge.mode(0));
  double scale = 1.0;
  for (const auto& c : charge.m) scale = std::max(scale, std::abs(c));
  if (def > 1e-10 * scale)
    throw NumericalError("spectral_poisson: nonzero mean charge " + std::to_string(def));
  SpectralField e = zero_like(charge);
  const double two_pi_over_L = 2.0 * M_PI / charge.length;
  for (int j = -charge.n_waves; j <= charge.n_waves; ++j) {
    if (j == 0) continue;
    e.mode(j) = charge.mode(j) / std::complex<double>(0.0, two_pi_over_L * j);
  }
  return e;
}

// sup-norm estimate by dense sampling; oversample >= 2 resolves the
// oscillation between collocation points well enough for step-size control.
inline double spectral_e_inf(const SpectralField& f, int oversample = 4) {
  if (oversample < 1) throw std::invalid_argument("spectral_e_inf: oversample >= 1");
  int n = oversample * (2 * f.n_waves + 1);
  double m = 0.0;
  for (int s = 0; s < n; ++s) m = std::max(m, std::abs(eval(f, f.length * s / n)));
  return m;
}

}  // namespace vlaherm
