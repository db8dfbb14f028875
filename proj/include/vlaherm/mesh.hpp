#pragma once

// Uniform periodic mesh of [0, L] with N_x cells and polynomial degree k.
// Cell i spans [i h, (i+1) h], h = L / N_x; edge i sits at x = (i+1) h, i.e.
// the interface between cell i and cell (i+1) mod N_x. Edge N_x - 1 is the
// periodic wrap at x = L = 0.

#include "vlaherm/errors.hpp"

namespace vlaherm {

struct Mesh {
  double length = 0.0;
  int n_cells = 0;
  int degree = 0;

  static Mesh uniform(double length, int n_cells, int degree) {
    if (!(length > 0.0)) throw ConfigError("Mesh: length must be > 0");
    if (n_cells < 1) throw ConfigError("Mesh: n_cells must be >= 1");
    if (degree < 0) throw ConfigError("Mesh: degree must be >= 0");
    return Mesh{length, n_cells, degree};
  }

  double h() const { return length / n_cells; }
  int n_local() const { return degree + 1; }
  int n_dofs() const { return n_cells * (degree + 1); }
  double left(int i) const { return i * h(); }
  double right(int i) const { return (i + 1) * h(); }
  double center(int i) const { return (i + 0.5) * h(); }
  int next(int i) const { return (i + 1) % n_cells; }
  int prev(int i) const { return (i + n_cells - 1) % n_cells; }

  bool same_as(const Mesh& o) const {
    return length == o.length && n_cells == o.n_cells && degree == o.degree;
  }
};

}  // namespace vlaherm
