#pragma once

// Discontinuous piecewise polynomial field in the orthonormal modal Legendre
// basis: on cell i, phi_l(x) = sqrt((2l+1)/h) P_l(xi), xi = 2(x - x_i)/h.
// The cell mass matrix is the identity, so L2 projections and inner products
// are plain coefficient operations.

#include <cmath>
#include <cstring>
#include <functional>
#include <vector>

#include "vlaherm/errors.hpp"
#include "vlaherm/mesh.hpp"
#include "vlaherm/quadrature.hpp"

namespace vlaherm {

struct DGField {
  int n_cells = 0;
  int n_local = 0;  // degree + 1
  std::vector<double> a;  // cell-major: a[i * n_local + l]

  static DGField zeros(const Mesh& mesh) {
    DGField f;
    f.n_cells = mesh.n_cells;
    f.n_local = mesh.n_local();
    f.a.assign(size_t(f.n_cells) * f.n_local, 0.0);
    return f;
  }
  double& c(int i, int l) { return a[size_t(i) * n_local + l]; }
  double c(int i, int l) const { return a[size_t(i) * n_local + l]; }
  bool compatible(const DGField& o) const { return n_cells == o.n_cells && n_local == o.n_local; }
};

// Generic field ops shared with the spectral representation.
inline DGField zero_like(const DGField& f) {
  DGField z = f;
  std::fill(z.a.begin(), z.a.end(), 0.0);
  return z;
}
inline void axpy(DGField& y, double a, const DGField& x) {
  if (!y.compatible(x)) throw std::invalid_argument("DGField axpy: shape mismatch");
  for (size_t i = 0; i < y.a.size(); ++i) y.a[i] += a * x.a[i];
}
inline void field_scale(DGField& f, double s) {
  for (double& v : f.a) v *= s;
}
inline double field_l2sq(const DGField& f) {
  double s = 0.0;
  for (double v : f.a) s += v * v;
  return s;
}
inline bool field_finite(const DGField& f) {
  for (double v : f.a)
    if (!std::isfinite(v)) return false;
  return true;
}

// integral over [0, L]; only the mean modes contribute, int phi_0 = sqrt(h).
inline double integral(const Mesh& mesh, const DGField& u) {
  double sh = std::sqrt(mesh.h()), s = 0.0;
  for (int i = 0; i < u.n_cells; ++i) s += u.c(i, 0);
  return sh * s;
}

inline double l2_inner(const Mesh& mesh, const DGField& u, const DGField& w) {
  if (u.n_cells != mesh.n_cells || !u.compatible(w))
    throw std::invalid_argument("l2_inner: field/mesh mismatch");
  double s = 0.0;
  for (size_t i = 0; i < u.a.size(); ++i) s += u.a[i] * w.a[i];
  return s;
}

inline double eval(const Mesh& mesh, const DGField& u, double x) {
  double h = mesh.h();
  double xm = std::fmod(x, mesh.length);
  if (xm < 0) xm += mesh.length;
  int i = std::min(int(xm / h), mesh.n_cells - 1);
  double xi = 2.0 * (xm - mesh.center(i)) / h;
  double s = 0.0, inv = 1.0 / std::sqrt(h);
  std::vector<double> p(u.n_local);
  legendre_eval_all(u.n_local, xi, p.data());
  for (int l = 0; l < u.n_local; ++l) s += u.c(i, l) * std::sqrt(2.0 * l + 1.0) * p[l] * inv;
  return s;
}

struct Traces {
  double minus = 0.0;    // from the cell left of the edge
  double plus = 0.0;     // from the cell right of the edge
  double jump = 0.0;     // plus - minus
  double average = 0.0;  // (plus + minus) / 2
};

// Edge e in [0, n_cells): interface between cell e and cell (e+1) mod N_x.
inline Traces traces(const Mesh& mesh, const DGField& u, int e) {
  if (u.n_cells != mesh.n_cells) throw std::invalid_argument("traces: field/mesh mismatch");
  if (e < 0 || e >= mesh.n_cells) throw std::out_of_range("traces: edge index");
  double inv = 1.0 / std::sqrt(mesh.h());
  int ir = mesh.next(e);
  Traces t;
  for (int l = 0; l < u.n_local; ++l) {
    double b = std::sqrt(2.0 * l + 1.0) * inv;           // phi_l at the right end
    double bl = (l % 2 == 0) ? b : -b;                   // phi_l at the left end
    t.minus += u.c(e, l) * b;
    t.plus += u.c(ir, l) * bl;
  }
  t.jump = t.plus - t.minus;
  t.average = 0.5 * (t.plus + t.minus);
  return t;
}

// Reference-cell basis data at a Gauss-Legendre rule: values and derivatives
// of sqrt(l+1/2) P_l at the quadrature nodes (a 1/sqrt(h) resp. 2/(h sqrt(h))
// cell scaling applies on use).
struct CellBasis {
  int n_local = 0;
  QuadratureRule rule;
  std::vector<double> val;   // [q * n_local + l] = sqrt(2l+1) P_l(xi_q) (note: sqrt(2l+1), pre-/sqrt(2) of L2-normalized)
  std::vector<double> dval;  // [q * n_local + l] = sqrt(2l+1) P_l'(xi_q)

  static CellBasis make(int degree, int n_quad) {
    CellBasis b;
    b.n_local = degree + 1;
    b.rule = gauss_legendre(n_quad);
    b.val.resize(size_t(n_quad) * b.n_local);
    b.dval.resize(size_t(n_quad) * b.n_local);
    for (int q = 0; q < n_quad; ++q) {
      double xi = b.rule.nodes[q];
      for (int l = 0; l < b.n_local; ++l) {
        double s = std::sqrt(2.0 * l + 1.0);
        b.val[size_t(q) * b.n_local + l] = s * legendre_eval(l, xi);
        b.dval[size_t(q) * b.n_local + l] = s * legendre_deriv(l, xi);
      }
    }
    return b;
  }
};

// L2 projection with an n_quad-point Gauss rule per cell.
inline DGField project_to_dg(const Mesh& mesh, const std::function<double(double)>& f, int n_quad) {
  DGField u = DGField::zeros(mesh);
  CellBasis basis = CellBasis::make(mesh.degree, n_quad);
  double h = mesh.h(), sh = std::sqrt(h);
  for (int i = 0; i < mesh.n_cells; ++i) {
    double xc = mesh.center(i);
    for (int q = 0; q < n_quad; ++q) {
      double x = xc + 0.5 * h * basis.rule.nodes[q];
      double wf = 0.5 * sh * basis.rule.weights[q] * f(x);  // (h/2) w_q f / sqrt(h)
      for (int l = 0; l < u.n_local; ++l) u.c(i, l) += wf * basis.val[size_t(q) * u.n_local + l];
    }
  }
  return u;
}

// Values of u at the mapped quadrature nodes of every cell, [i * nq + q].
inline std::vector<double> values_at_quadrature(const Mesh& mesh, const DGField& u,
                                                const CellBasis& basis) {
  if (u.n_cells != mesh.n_cells || u.n_local != basis.n_local)
    throw std::invalid_argument("values_at_quadrature: mismatch");
  int nq = int(basis.rule.nodes.size());
  std::vector<double> out(size_t(u.n_cells) * nq, 0.0);
  double inv = 1.0 / std::sqrt(mesh.h());
  for (int i = 0; i < u.n_cells; ++i)
    for (int q = 0; q < nq; ++q) {
      double s = 0.0;
      for (int l = 0; l < u.n_local; ++l)
        s += u.c(i, l) * basis.val[size_t(q) * u.n_local + l];
      out[size_t(i) * nq + q] = s * inv;
    }
  return out;
}

}  // namespace vlaherm
