#pragma once

// Asymmetrically weighted Hermite basis in velocity with a time dependent
// scaling factor alpha.
//
// Basis functions  Psi_n(v) = alpha H_n(alpha v) exp(-(alpha v)^2/2) / sqrt(2 pi)
// against the dual polynomials H_m(alpha v), where H_n are the normalized
// probabilists' Hermite polynomials:
//   sqrt(n) H_n(x) = x H_{n-1}(x) - sqrt(n-1) H_{n-2}(x),  H_{-1} = 0, H_0 = 1,
//   H_n'(x) = sqrt(n) H_{n-1}(x),
//   integral Psi_n(v) H_m(alpha v) dv = delta_nm.
// Coefficients of a distribution f are C_n = integral f(v) H_n(alpha v) dv.

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "vlaherm/errors.hpp"

namespace vlaherm {

inline double hermite_eval(int n, double x) {
  if (n < 0) return 0.0;
  double hm1 = 0.0, h = 1.0;
  for (int k = 1; k <= n; ++k) {
    double hn = (x * h - std::sqrt(k - 1.0) * hm1) / std::sqrt(double(k));
    hm1 = h;
    h = hn;
  }
  return h;
}

// H_0..H_{count-1} at x.
inline void hermite_eval_all(int count, double x, double* out) {
  if (count <= 0) return;
  out[0] = 1.0;
  if (count == 1) return;
  out[1] = x;
  for (int k = 2; k < count; ++k)
    out[k] = (x * out[k - 1] - std::sqrt(k - 1.0) * out[k - 2]) / std::sqrt(double(k));
}

// Gaussian-weighted values H_n(x) exp(-x^2/2), n = 0..count-1. Bounded for all
// n and x, so safe where the raw polynomials would overflow.
inline void hermite_weighted_all(int count, double x, double* out) {
  if (count <= 0) return;
  double g = std::exp(-0.5 * x * x);
  out[0] = g;
  if (count == 1) return;
  out[1] = x * g;
  for (int k = 2; k < count; ++k)
    out[k] = (x * out[k - 1] - std::sqrt(k - 1.0) * out[k - 2]) / std::sqrt(double(k));
}

// Psi_n(v) for scaling factor alpha.
inline double basis_eval(int n, double alpha, double v) {
  double xi = alpha * v;
  double g = std::exp(-0.5 * xi * xi);
  return alpha * hermite_eval(n, xi) * g / std::sqrt(2.0 * M_PI);
}

struct HermiteParams {
  int n_modes = 0;        // number of retained modes N_H (C_0 .. C_{N_H-1})
  double alpha0 = 1.0;    // initial velocity scaling
  double gamma = 0.01;    // relaxation constant in the scaling-factor law
  double q_over_m = 1.0;  // charge-to-mass ratio entering the field coupling

  void validate() const {
    if (n_modes < 1) throw ConfigError("HermiteParams: n_modes must be >= 1");
    if (!(alpha0 > 0.0)) throw ConfigError("HermiteParams: alpha0 must be > 0");
    if (!(gamma > 0.0)) throw ConfigError("HermiteParams: gamma must be > 0");
    if (!std::isfinite(q_over_m)) throw ConfigError("HermiteParams: q_over_m must be finite");
  }
};

// alpha(t) = alpha0 (1 + gamma (q/m)^2 int_0^t |E|_inf^2 ds)^{-1/2}, tracked
// through its ODE  alpha' = -(gamma/2) (q/m)^2 |E|_inf^2 alpha^3.
struct ScalingFactor {
  double alpha = 1.0;
  double accumulated_integral = 0.0;  // int_0^t |E|_inf^2 ds, for diagnostics
};

inline double alpha_rhs(double alpha, double e_inf, const HermiteParams& p) {
  double qm2 = p.q_over_m * p.q_over_m;
  return -0.5 * p.gamma * qm2 * e_inf * e_inf * alpha * alpha * alpha;
}

// Velocity quadrature matched to the Gaussian envelope at scale alpha:
// integral g(v) dv ~ sum_i weights[i] g(nodes[i]) for g with Gaussian decay.
struct VelocityGrid {
  double alpha = 1.0;
  std::vector<double> nodes;    // strictly increasing
  std::vector<double> weights;  // positive
};

inline int default_quadrature_size(int n_modes) { return std::max(2 * n_modes, 64); }

// Gauss-Hermite rule for weight exp(-t^2): Golub-Welsch eigenvalues of the
// Jacobi matrix, two Newton polish sweeps, and Christoffel weights
//   w_i e^{t_i^2} = 1 / sum_{nu < m} phi_nu(t_i)^2
// over orthonormal Hermite functions phi_nu (Gaussian folded in, so the sum
// never overflows; usable up to ~500 nodes before phi_0 underflows).
inline VelocityGrid gauss_hermite_grid(int n_points, double alpha) {
  if (n_points < 1) throw ConfigError("gauss_hermite_grid: n_points must be >= 1");
  if (!(alpha > 0.0)) throw ConfigError("gauss_hermite_grid: alpha must be > 0");
  const int m = n_points;
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(m);
  Eigen::VectorXd sub(m > 1 ? m - 1 : 1);
  for (int k = 1; k < m; ++k) sub[k - 1] = std::sqrt(0.5 * k);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub.head(std::max(m - 1, 0)), Eigen::EigenvaluesOnly);
  Eigen::VectorXd t = es.eigenvalues();  // ascending

  std::vector<double> phi(m + 1);
  auto eval_phi = [&](double x) {
    // phi_0 = pi^{-1/4} e^{-x^2/2}; phi_{k+1} = x sqrt(2/(k+1)) phi_k - sqrt(k/(k+1)) phi_{k-1}
    phi[0] = std::pow(M_PI, -0.25) * std::exp(-0.5 * x * x);
    if (m >= 1) phi[1] = std::sqrt(2.0) * x * phi[0];
    for (int k = 1; k < m; ++k)
      phi[k + 1] = x * std::sqrt(2.0 / (k + 1)) * phi[k] - std::sqrt(double(k) / (k + 1)) * phi[k - 1];
  };

  VelocityGrid grid;
  grid.alpha = alpha;
  grid.nodes.resize(m);
  grid.weights.resize(m);
  const double map = std::sqrt(2.0) / alpha;  // v = sqrt(2) t / alpha
  for (int i = 0; i < m; ++i) {
    double x = t[i];
    for (int it = 0; it < 2; ++it) {
      eval_phi(x);
      double f = phi[m];
      double df = std::sqrt(2.0 * m) * phi[m - 1] - x * phi[m];
      if (df != 0.0 && std::isfinite(f / df)) x -= f / df;
    }
    eval_phi(x);
    double s = 0.0;
    for (int nu = 0; nu < m; ++nu) s += phi[nu] * phi[nu];
    double what = 1.0 / s;  // w_i e^{t_i^2}
    if (!std::isfinite(what) || !(what > 0.0))
      throw NumericalError("gauss_hermite_grid: weight not finite (node count too large)");
    grid.nodes[i] = map * x;
    grid.weights[i] = map * what;
  }
  return grid;
}

// C_n = integral f(v) H_n(alpha v) dv for n = 0..n_modes-1, by the grid's rule.
// The grid must target the same alpha as the expansion.
inline std::vector<double> project_velocity(const std::function<double(double)>& f,
                                            const HermiteParams& params,
                                            const VelocityGrid& grid) {
  params.validate();
  const int nh = params.n_modes;
  std::vector<double> c(nh, 0.0);
  std::vector<double> h(nh);
  for (size_t i = 0; i < grid.nodes.size(); ++i) {
    double v = grid.nodes[i];
    double fv = f(v);
    if (!std::isfinite(fv))
      throw NumericalError("project_velocity: f(v) not finite at v=" + std::to_string(v));
    if (fv == 0.0) continue;  // far tail; also avoids 0 * huge_polynomial
    double wf = grid.weights[i] * fv;
    hermite_eval_all(nh, grid.alpha * v, h.data());
    for (int n = 0; n < nh; ++n) c[n] += wf * h[n];
  }
  for (int n = 0; n < nh; ++n)
    if (!std::isfinite(c[n]))
      throw NumericalError("project_velocity: non-finite coefficient C_" + std::to_string(n));
  return c;
}

}  // namespace vlaherm
