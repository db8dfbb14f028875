#pragma once

// Discrete Poisson solvers on the periodic mesh, driven by the charge density
// C_0 - rho0 with E = -d(Phi)/dx.
//
// LDG: find (Phi, E) in V_h^k x V_h^k with fluxes Phihat = {Phi} and
// Ehat = {E} - beta [Phi], [w] = w^+ - w^-. Testing the system with (E, Phi)
// gives int (C_0 - rho0) Phi = int E^2 + beta sum_e [Phi]^2, so beta > 0
// penalizes potential jumps and the solution is unique once the mean of Phi
// is pinned (Lagrange multiplier row; the multiplier lands in the charge
// equation block and reports the compatibility defect of the data).
//
// Mixed FE: E in the continuous piecewise P_{k+1} space, Phi in V_h^k, with
//   int Phi eta' = int E eta   and   int E' zeta = int (C_0 - rho0) zeta.
// The second equation forces E' = C_0 - rho0 cellwise, so ||E'||_2 <= ||C_0||_2.
//
// Both operators are stationary: assembled and LU-factored once per mesh.

#include <cmath>
#include <vector>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "vlaherm/dg_field.hpp"
#include "vlaherm/errors.hpp"
#include "vlaherm/mesh.hpp"
#include "vlaherm/quadrature.hpp"
#include "vlaherm/vlasov_dg.hpp"

namespace vlaherm {

inline double compute_rho0(const Mesh& mesh, const DGField& c0) {
  return integral(mesh, c0) / mesh.length;
}

struct LdgOptions {
  double beta = 1.0;
  bool beta_over_h = false;  // use beta / h instead of the constant
};

// E evaluated where the Vlasov source assembly needs it: the volume
// quadrature nodes of every cell plus both one-sided traces at every edge.
// |E|_inf is the max of |E| over all of these samples. Averaging two samples
// equals sampling the averaged field, since evaluation is linear.
struct EFieldSample {
  int n_cells = 0, n_quad = 0;
  std::vector<double> at_quad;      // [i * n_quad + q]
  std::vector<double> trace_minus;  // per edge e, from cell e
  std::vector<double> trace_plus;   // per edge e, from cell e+1
  double e_inf = 0.0;

  void compute_inf() {
    double m = 0.0;
    for (double v : at_quad) m = std::max(m, std::abs(v));
    for (double v : trace_minus) m = std::max(m, std::abs(v));
    for (double v : trace_plus) m = std::max(m, std::abs(v));
    e_inf = m;
  }
  static EFieldSample average(const EFieldSample& a, const EFieldSample& b) {
    if (a.n_cells != b.n_cells || a.n_quad != b.n_quad)
      throw std::invalid_argument("EFieldSample::average: shape mismatch");
    EFieldSample r = a;
    for (size_t i = 0; i < r.at_quad.size(); ++i) r.at_quad[i] = 0.5 * (a.at_quad[i] + b.at_quad[i]);
    for (size_t i = 0; i < r.trace_minus.size(); ++i) {
      r.trace_minus[i] = 0.5 * (a.trace_minus[i] + b.trace_minus[i]);
      r.trace_plus[i] = 0.5 * (a.trace_plus[i] + b.trace_plus[i]);
    }
    r.compute_inf();
    return r;
  }
};

struct ElectroState {
  DGField phi;
  DGField e_dg;               // LDG representation (empty for mixed)
  std::vector<double> e_cg;   // mixed-FE representation (empty for LDG)
  EFieldSample sample;
  double e_l2sq = 0.0;
  double jump_term = 0.0;     // beta sum_e [Phi]^2 (zero for mixed)
  double compat_residual = 0.0;  // Lagrange multiplier value
};

inline double e_infinity_norm(const ElectroState& es) { return es.sample.e_inf; }

namespace detail {

inline void require_compatible(const Mesh& mesh, const DGField& c0, double rho0) {
  double def = integral(mesh, c0) - rho0 * mesh.length;
  double scale = std::max(1.0, std::abs(integral(mesh, c0)));
  if (std::abs(def) > 1e-10 * scale)
    throw NumericalError("poisson: incompatible source, int(C_0 - rho0) = " + std::to_string(def));
}

}  // namespace detail

class LdgPoisson {
 public:
  LdgPoisson(const Mesh& mesh, const LdgOptions& opts, int n_quad)
      : mesh_(mesh), opts_(opts), basis_(CellBasis::make(mesh.degree, n_quad)) {
    assemble();
  }

  double beta_effective() const {
    return opts_.beta_over_h ? opts_.beta / mesh_.h() : opts_.beta;
  }

  ElectroState solve(const DGField& c0, double rho0) const {
    detail::require_compatible(mesh_, c0, rho0);
    const int nl = mesh_.n_local(), nc = mesh_.n_cells, N = nc * nl;
    double sh = std::sqrt(mesh_.h());
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(2 * N + 1);
    for (int i = 0; i < nc; ++i) {
      for (int l = 0; l < nl; ++l) rhs[N + i * nl + l] = c0.c(i, l);
      rhs[N + i * nl] -= rho0 * sh;
    }
    Eigen::VectorXd u = lu_.solve(rhs);
    if (lu_.info() != Eigen::Success) throw NumericalError("LdgPoisson: solve failed");

    ElectroState es;
    es.phi = DGField::zeros(mesh_);
    es.e_dg = DGField::zeros(mesh_);
    for (int i = 0; i < nc; ++i)
      for (int l = 0; l < nl; ++l) {
        es.phi.c(i, l) = u[i * nl + l];
        es.e_dg.c(i, l) = u[N + i * nl + l];
      }
    es.compat_residual = u[2 * N];
    es.e_l2sq = field_l2sq(es.e_dg);

    double beta = beta_effective(), js = 0.0;
    for (int e = 0; e < nc; ++e) {
      double j = traces(mesh_, es.phi, e).jump;
      js += j * j;
    }
    es.jump_term = beta * js;

    es.sample.n_cells = nc;
    es.sample.n_quad = int(basis_.rule.nodes.size());
    es.sample.at_quad = values_at_quadrature(mesh_, es.e_dg, basis_);
    es.sample.trace_minus.resize(nc);
    es.sample.trace_plus.resize(nc);
    for (int e = 0; e < nc; ++e) {
      Traces t = traces(mesh_, es.e_dg, e);
      es.sample.trace_minus[e] = t.minus;
      es.sample.trace_plus[e] = t.plus;
    }
    es.sample.compute_inf();
    return es;
  }

 private:
  void assemble() {
    const int nl = mesh_.n_local(), nc = mesh_.n_cells, N = nc * nl;
    const double h = mesh_.h(), ish = 1.0 / std::sqrt(h), sh = std::sqrt(h);
    const double beta = beta_effective();
    auto dof = [nl](int i, int l) { return i * nl + l; };
    auto bR = [ish](int l) { return std::sqrt(2.0 * l + 1.0) * ish; };
    auto bL = [&bR](int l) { return (l % 2 == 0) ? bR(l) : -bR(l); };

    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(size_t(N) * nl * 8);
    for (int i = 0; i < nc; ++i) {
      int ip = mesh_.next(i), im = mesh_.prev(i);
      for (int l = 0; l < nl; ++l) {
        int r1 = dof(i, l);       // eta equation: int Phi phi' - Phihat terms - int E phi = 0
        int r2 = N + dof(i, l);   // zeta equation: -int E phi' + Ehat terms + lambda int phi = (C0 - rho0, phi)
        for (int m = 0; m < nl; ++m) {
          double S = detail::stiffness_entry(l, m) / h;
          if (S != 0.0) {
            trip.emplace_back(r1, dof(i, m), S);        // int Phi phi_l'
            trip.emplace_back(r2, N + dof(i, m), -S);   // -int E phi_l'
          }
          // Phihat = {Phi}: -Phihat(i+1/2) bR(l) + Phihat(i-1/2) bL(l)
          trip.emplace_back(r1, dof(i, m), -0.5 * bR(l) * bR(m));
          trip.emplace_back(r1, dof(ip, m), -0.5 * bR(l) * bL(m));
          trip.emplace_back(r1, dof(im, m), 0.5 * bL(l) * bR(m));
          trip.emplace_back(r1, dof(i, m), 0.5 * bL(l) * bL(m));
          // Ehat = {E} - beta [Phi]: +Ehat(i+1/2) bR(l) - Ehat(i-1/2) bL(l)
          trip.emplace_back(r2, N + dof(i, m), 0.5 * bR(l) * bR(m));
          trip.emplace_back(r2, N + dof(ip, m), 0.5 * bR(l) * bL(m));
          trip.emplace_back(r2, dof(ip, m), -beta * bR(l) * bL(m));
          trip.emplace_back(r2, dof(i, m), beta * bR(l) * bR(m));
          trip.emplace_back(r2, N + dof(im, m), -0.5 * bL(l) * bR(m));
          trip.emplace_back(r2, N + dof(i, m), -0.5 * bL(l) * bL(m));
          trip.emplace_back(r2, dof(i, m), beta * bL(l) * bL(m));
          trip.emplace_back(r2, dof(im, m), -beta * bL(l) * bR(m));
        }
        trip.emplace_back(r1, N + dof(i, l), -1.0);  // -int E phi_l
      }
      trip.emplace_back(N + dof(i, 0), 2 * N, sh);  // lambda column
      trip.emplace_back(2 * N, dof(i, 0), sh);      // gauge row: mean of Phi = 0
    }
    Eigen::SparseMatrix<double> A(2 * N + 1, 2 * N + 1);
    A.setFromTriplets(trip.begin(), trip.end());
    A.makeCompressed();
    lu_.compute(A);
    if (lu_.info() != Eigen::Success)
      throw NumericalError("LdgPoisson: factorization failed (singular system)");
  }

  Mesh mesh_;
  LdgOptions opts_;
  CellBasis basis_;
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu_;
};

class MixedPoisson {
 public:
  MixedPoisson(const Mesh& mesh, int n_quad)
      : mesh_(mesh), basis_(CellBasis::make(mesh.degree, n_quad)) {
    build_shapes();
    assemble();
  }

  ElectroState solve(const DGField& c0, double rho0) const {
    detail::require_compatible(mesh_, c0, rho0);
    const int nl = mesh_.n_local(), nc = mesh_.n_cells, N = nc * nl;
    double sh = std::sqrt(mesh_.h());
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(2 * N + 1);
    for (int i = 0; i < nc; ++i) {
      for (int l = 0; l < nl; ++l) rhs[N + i * nl + l] = c0.c(i, l);
      rhs[N + i * nl] -= rho0 * sh;
    }
    Eigen::VectorXd u = lu_.solve(rhs);
    if (lu_.info() != Eigen::Success) throw NumericalError("MixedPoisson: solve failed");

    ElectroState es;
    es.e_cg.assign(u.data(), u.data() + N);
    es.phi = DGField::zeros(mesh_);
    for (int i = 0; i < nc; ++i)
      for (int l = 0; l < nl; ++l) es.phi.c(i, l) = u[N + i * nl + l];
    es.compat_residual = u[2 * N];
    es.jump_term = 0.0;

    // evaluate E on the cell rule and at the (shared) vertices
    const int nq = int(basis_.rule.nodes.size());
    es.sample.n_cells = nc;
    es.sample.n_quad = nq;
    es.sample.at_quad.assign(size_t(nc) * nq, 0.0);
    es.sample.trace_minus.resize(nc);
    es.sample.trace_plus.resize(nc);
    double l2 = 0.0, hw = 0.5 * mesh_.h();
    for (int i = 0; i < nc; ++i) {
      for (int q = 0; q < nq; ++q) {
        double v = 0.0;
        for (int a = 0; a < nw_local_; ++a) v += u[wdof(i, a)] * wval_[size_t(q) * nw_local_ + a];
        es.sample.at_quad[size_t(i) * nq + q] = v;
        l2 += hw * basis_.rule.weights[q] * v * v;
      }
      es.sample.trace_minus[i] = u[wdof(i, 1)];           // right vertex of cell i
      es.sample.trace_plus[i] = u[wdof(mesh_.next(i), 0)];  // same point, equal by continuity
    }
    es.e_l2sq = l2;
    es.sample.compute_inf();
    return es;
  }

 private:
  // continuous P_{k+1} space: local shapes [vertex-left, vertex-right,
  // bubbles m=2..k+1] with bubble_m = P_m - P_{m-2} (zero at both ends,
  // derivative (2m-1) P_{m-1}).
  int wdof(int cell, int a) const {
    int nc = mesh_.n_cells, k = mesh_.degree;
    if (a == 0) return cell;
    if (a == 1) return (cell + 1) % nc;
    return nc + cell * k + (a - 2);
  }

  void build_shapes() {
    nw_local_ = mesh_.degree + 2;
    const int nq = int(basis_.rule.nodes.size());
    wval_.assign(size_t(nq) * nw_local_, 0.0);
    wdval_.assign(size_t(nq) * nw_local_, 0.0);  // reference derivative
    std::vector<double> p(nw_local_ + 1);
    for (int q = 0; q < nq; ++q) {
      double xi = basis_.rule.nodes[q];
      legendre_eval_all(nw_local_ + 1, xi, p.data());
      wval_[size_t(q) * nw_local_ + 0] = 0.5 * (1.0 - xi);
      wval_[size_t(q) * nw_local_ + 1] = 0.5 * (1.0 + xi);
      wdval_[size_t(q) * nw_local_ + 0] = -0.5;
      wdval_[size_t(q) * nw_local_ + 1] = 0.5;
      for (int a = 2; a < nw_local_; ++a) {
        int m = a;  // polynomial degree of the bubble
        wval_[size_t(q) * nw_local_ + a] = p[m] - p[m - 2];
        wdval_[size_t(q) * nw_local_ + a] = (2.0 * m - 1.0) * p[m - 1];
      }
    }
  }

  void assemble() {
    const int nl = mesh_.n_local(), nc = mesh_.n_cells, N = nc * nl;
    const int nq = int(basis_.rule.nodes.size());
    const double h = mesh_.h(), ish = 1.0 / std::sqrt(h), sh = std::sqrt(h);
    // unknowns: [E (W dofs, 0..N-1), Phi (V dofs, N..2N-1), lambda]
    std::vector<Eigen::Triplet<double>> trip;
    for (int i = 0; i < nc; ++i) {
      for (int a = 0; a < nw_local_; ++a) {
        int ra = wdof(i, a);  // eta equation: int E eta - int Phi eta' = 0
        for (int b = 0; b < nw_local_; ++b) {
          double mass = 0.0;
          for (int q = 0; q < nq; ++q)
            mass += 0.5 * h * basis_.rule.weights[q] * wval_[size_t(q) * nw_local_ + a] *
                    wval_[size_t(q) * nw_local_ + b];
          trip.emplace_back(ra, wdof(i, b), mass);
        }
        for (int l = 0; l < nl; ++l) {
          // G[a][l] = int phi_l w_a' dx = sum_q w_q sqrt(2l+1) P_l w_a'(ref) / sqrt(h)
          double g = 0.0;
          for (int q = 0; q < nq; ++q)
            g += basis_.rule.weights[q] * basis_.val[size_t(q) * nl + l] *
                 wdval_[size_t(q) * nw_local_ + a];
          g *= ish;
          trip.emplace_back(ra, N + i * nl + l, -g);       // -int Phi eta'
          trip.emplace_back(N + i * nl + l, wdof(i, a), g);  // zeta equation: int E' zeta
        }
      }
      trip.emplace_back(N + i * nl, 2 * N, sh);  // lambda column
      trip.emplace_back(2 * N, N + i * nl, sh);  // gauge row: mean of Phi = 0
    }
    Eigen::SparseMatrix<double> A(2 * N + 1, 2 * N + 1);
    A.setFromTriplets(trip.begin(), trip.end());
    A.makeCompressed();
    lu_.compute(A);
    if (lu_.info() != Eigen::Success)
      throw NumericalError("MixedPoisson: factorization failed (singular system)");
  }

  Mesh mesh_;
  CellBasis basis_;
  int nw_local_ = 0;
  std::vector<double> wval_, wdval_;
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu_;
};

}  // namespace vlaherm
