#pragma once

// DG assembly of the Hermite mode equations. For mode n the advected quantity
// is
//   g_n = (1/alpha) (sqrt(n+1) C_{n+1} + sqrt(n) C_{n-1}),  C_{-1} = C_{N_H} = 0,
// discretized with the numerical flux
//   ghat_n = {g_n} - (delta_n / 2) [C_n],   [w] = w^+ - w^-,
// where delta_0 = 0 (centered flux keeps the total mass and the discrete
// energy exact) and delta_n = sqrt(N_H)/alpha for n >= 1 (global
// Lax-Friedrichs bound of the Hermite transport speeds).
//
// vlasov_transport returns the mass-inverted representation of -a_n(g_n, .),
// vlasov_source the representation of -b_n, so d/dt C_n = transport + source.

#include <cmath>
#include <vector>

#include "vlaherm/dg_field.hpp"
#include "vlaherm/mesh.hpp"
#include "vlaherm/state.hpp"

namespace vlaherm {

struct FluxSpec {
  std::vector<double> delta;  // one entry per mode

  static FluxSpec global_lax_friedrichs(int n_modes, double alpha) {
    if (n_modes < 1) throw ConfigError("FluxSpec: n_modes must be >= 1");
    if (!(alpha > 0.0)) throw ConfigError("FluxSpec: alpha must be > 0");
    FluxSpec f;
    f.delta.assign(n_modes, std::sqrt(double(n_modes)) / alpha);
    f.delta[0] = 0.0;
    return f;
  }
};

namespace detail {

// int_I phi_m phi_l' dx = S[l][m] / h with S[l][m] = 2 sqrt((2l+1)(2m+1)) for
// m < l, l+m odd, else 0.
inline double stiffness_entry(int l, int m) {
  if (m >= l || (l + m) % 2 == 0) return 0.0;
  return 2.0 * std::sqrt((2.0 * l + 1.0) * (2.0 * m + 1.0));
}

}  // namespace detail

// Mass-inverted -a_n(g_n, .): per cell j and test index l,
//   r_{jl} = int_{I_j} g_n phi_l' dx - ghat_{j+1/2} phi_l(right) + ghat_{j-1/2} phi_l(left).
inline DGField vlasov_transport(const Mesh& mesh, const HermiteState<DGField>& st,
                                const FluxSpec& flux, int n) {
  const int nh = st.params.n_modes;
  if (n < 0 || n >= nh) throw std::out_of_range("vlasov_transport: mode index");
  if (int(flux.delta.size()) != nh) throw std::invalid_argument("vlasov_transport: flux size");
  const int nl = mesh.n_local(), nc = mesh.n_cells;
  const double alpha = st.scaling.alpha, h = mesh.h(), ish = 1.0 / std::sqrt(h);

  const DGField* lo = (n >= 1) ? &st.coeffs[n - 1] : nullptr;
  const DGField* hi = (n + 1 < nh) ? &st.coeffs[n + 1] : nullptr;
  const double clo = std::sqrt(double(n)) / alpha, chi = std::sqrt(double(n) + 1.0) / alpha;

  // modal coefficients of g_n, cell-major
  std::vector<double> g(size_t(nc) * nl, 0.0);
  for (int i = 0; i < nc; ++i)
    for (int m = 0; m < nl; ++m) {
      double v = 0.0;
      if (lo) v += clo * lo->c(i, m);
      if (hi) v += chi * hi->c(i, m);
      g[size_t(i) * nl + m] = v;
    }

  // traces of g and C_n at cell ends
  std::vector<double> gR(nc, 0.0), gL(nc, 0.0), cR(nc, 0.0), cL(nc, 0.0);
  const DGField& cn = st.coeffs[n];
  for (int i = 0; i < nc; ++i)
    for (int m = 0; m < nl; ++m) {
      double b = std::sqrt(2.0 * m + 1.0) * ish;
      double bl = (m % 2 == 0) ? b : -b;
      gR[i] += g[size_t(i) * nl + m] * b;
      gL[i] += g[size_t(i) * nl + m] * bl;
      cR[i] += cn.c(i, m) * b;
      cL[i] += cn.c(i, m) * bl;
    }

  // ghat at edge e (between cell e and cell e+1)
  std::vector<double> ghat(nc);
  double dn = flux.delta[n];
  for (int e = 0; e < nc; ++e) {
    int r = mesh.next(e);
    ghat[e] = 0.5 * (gR[e] + gL[r]) - 0.5 * dn * (cL[r] - cR[e]);
  }

  DGField out = DGField::zeros(mesh);
  for (int i = 0; i < nc; ++i) {
    int eL = mesh.prev(i);  // edge at the left end of cell i
    for (int l = 0; l < nl; ++l) {
      double vol = 0.0;
      for (int m = 0; m < l; ++m) vol += detail::stiffness_entry(l, m) * g[size_t(i) * nl + m];
      vol /= h;
      double b = std::sqrt(2.0 * l + 1.0) * ish;
      double bl = (l % 2 == 0) ? b : -b;
      out.c(i, l) = vol - ghat[i] * b + ghat[eL] * bl;
    }
  }
  return out;
}

// Mass-inverted -b_n. With I = alpha_rhs(alpha, e_inf):
//   r = (I/alpha) (n C_n + sqrt((n-1) n) C_{n-2}) + (q/m) alpha sqrt(n) P(E C_{n-1}),
// where P is the L2 projection of the product using the cell rule in `basis`
// and e_at_quad are E values at the same nodes. b_0 = 0.
inline DGField vlasov_source(const Mesh& mesh, const HermiteState<DGField>& st,
                             const std::vector<double>& e_at_quad, double e_inf,
                             const CellBasis& basis, int n) {
  const int nh = st.params.n_modes;
  if (n < 0 || n >= nh) throw std::out_of_range("vlasov_source: mode index");
  DGField out = DGField::zeros(mesh);
  if (n == 0) return out;

  const int nl = mesh.n_local(), nc = mesh.n_cells;
  const int nq = int(basis.rule.nodes.size());
  if (int(e_at_quad.size()) != nc * nq) throw std::invalid_argument("vlasov_source: E sample size");
  const double alpha = st.scaling.alpha;
  const double I = alpha_rhs(alpha, e_inf, st.params);

  double scale_n = I / alpha * n;
  double scale_nm2 = (n >= 2) ? I / alpha * std::sqrt((n - 1.0) * n) : 0.0;
  for (int i = 0; i < nc; ++i)
    for (int l = 0; l < nl; ++l) {
      double v = scale_n * st.coeffs[n].c(i, l);
      if (n >= 2) v += scale_nm2 * st.coeffs[n - 2].c(i, l);
      out.c(i, l) = v;
    }

  // field coupling term, quadrature projection of E * C_{n-1}
  double cpl = st.params.q_over_m * alpha * std::sqrt(double(n));
  double h = mesh.h(), ish = 1.0 / std::sqrt(h);
  const DGField& cm1 = st.coeffs[n - 1];
  for (int i = 0; i < nc; ++i)
    for (int q = 0; q < nq; ++q) {
      double cv = 0.0;
      for (int m = 0; m < nl; ++m) cv += cm1.c(i, m) * basis.val[size_t(q) * nl + m];
      cv *= ish;
      double w = 0.5 * h * basis.rule.weights[q] * e_at_quad[size_t(i) * nq + q] * cv * cpl;
      for (int l = 0; l < nl; ++l) out.c(i, l) += w * basis.val[size_t(q) * nl + l] * ish;
    }
  return out;
}

}  // namespace vlaherm
