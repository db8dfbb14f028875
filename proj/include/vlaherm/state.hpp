#pragma once

// Hermite mode stack of one species: spatial fields C_0..C_{N_H-1} plus the
// velocity scaling factor. Generic over the spatial representation (modal DG
// field or Fourier mode vector); field ops are found by overload.

#include <cmath>
#include <vector>

#include "vlaherm/errors.hpp"
#include "vlaherm/hermite.hpp"

namespace vlaherm {

template <class Field>
struct HermiteState {
  HermiteParams params;
  ScalingFactor scaling;
  std::vector<Field> coeffs;  // exactly params.n_modes fields

  void check() const {
    params.validate();
    if (int(coeffs.size()) != params.n_modes)
      throw NumericalError("HermiteState: coefficient count != n_modes");
    if (!(scaling.alpha > 0.0) || !std::isfinite(scaling.alpha))
      throw NumericalError("HermiteState: alpha must be finite and > 0");
  }
};

// Velocity moments as spatial fields:
//   density        rho = C_0
//   momentum       int v f dv   = C_1 / alpha
//   kinetic energy int v^2/2 f dv = (sqrt(2) C_2 + C_0) / (2 alpha^2)
template <class Field>
struct Moments {
  Field density, momentum, kinetic_energy;
};

template <class Field>
Moments<Field> moments(const HermiteState<Field>& st) {
  if (st.params.n_modes < 3)
    throw NumericalError("moments: needs n_modes >= 3 for the kinetic moment");
  double al = st.scaling.alpha;
  Moments<Field> m{st.coeffs[0], st.coeffs[1], st.coeffs[0]};
  field_scale(m.momentum, 1.0 / al);
  axpy(m.kinetic_energy, std::sqrt(2.0), st.coeffs[2]);
  field_scale(m.kinetic_energy, 0.5 / (al * al));
  return m;
}

// ||f||_omega^2 = alpha sum_n int C_n^2 dx, the Gaussian-weighted L2 norm of
// the reconstructed distribution.
template <class Field>
double weighted_l2_sq(const HermiteState<Field>& st) {
  double s = 0.0;
  for (const Field& f : st.coeffs) s += field_l2sq(f);
  return st.scaling.alpha * s;
}

template <class Field>
double weighted_l2_norm(const HermiteState<Field>& st) {
  return std::sqrt(weighted_l2_sq(st));
}

// Hou-Li spectral filter profile: identity on the lower 2/3 of the spectrum,
// exp(-36 s^36) beyond.
inline double houli_sigma(double s) {
  double a = std::abs(s);
  if (a <= 2.0 / 3.0) return 1.0;
  return std::exp(-36.0 * std::pow(a, 36.0));
}

// Applies sigma(n / N_H) to each mode, in place. Modes with 3n <= 2 N_H are
// left bit-identical (integer guard, no rounding at the knee), so C_0..C_2
// are never touched for any N_H >= 4; below N_H = 4 the filter is a no-op.
template <class Field>
void houli_filter(std::vector<Field>& coeffs, int n_modes) {
  if (int(coeffs.size()) != n_modes)
    throw std::invalid_argument("houli_filter: coefficient count != n_modes");
  if (n_modes < 4) return;
  for (int n = 0; n < n_modes; ++n)
    if (3 * n > 2 * n_modes) field_scale(coeffs[n], houli_sigma(double(n) / n_modes));
}

// f(x, v) from per-mode values C_n(x) already evaluated at x.
inline double reconstruct_from_values(const std::vector<double>& cn_at_x, double alpha, double v) {
  int nh = int(cn_at_x.size());
  std::vector<double> psi(nh);
  hermite_weighted_all(nh, alpha * v, psi.data());  // H_n(alpha v) e^{-(alpha v)^2/2}
  double s = 0.0;
  for (int n = 0; n < nh; ++n) s += cn_at_x[n] * psi[n];
  return s * alpha / std::sqrt(2.0 * M_PI);
}

}  // namespace vlaherm
