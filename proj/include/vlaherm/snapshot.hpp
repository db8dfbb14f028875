#pragma once

// Phase-space snapshots: the distribution of one species reconstructed on a
// rectangular (x, v) grid, written as a self-describing text matrix. The x
// grid is periodic (right endpoint omitted), the v grid inclusive of both
// window ends. Values round-trip bit-identically through write/read.

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "vlaherm/errors.hpp"
#include "vlaherm/state.hpp"
#include "vlaherm/stepper.hpp"
#include "vlaherm/textio.hpp"

namespace vlaherm {

struct Snapshot {
  double time = 0.0;
  std::string species;
  std::vector<double> x, v;
  std::vector<double> f;  // row-major: f[i * v.size() + j] = f(x[i], v[j])

  double at(size_t i, size_t j) const { return f[i * v.size() + j]; }
};

// x_left shifts mesh coordinates to physical ones; the state is evaluated on
// the mesh coordinate.
template <class Space>
Snapshot make_snapshot(const Space& space, const System<Space>& sys, size_t species_index,
                       int nx, int nv, double v_min, double v_max, double x_left = 0.0) {
  if (species_index >= sys.species.size()) throw std::out_of_range("make_snapshot: species index");
  if (nx < 1 || nv < 2 || !(v_max > v_min))
    throw std::invalid_argument("make_snapshot: need nx >= 1, nv >= 2, v_max > v_min");
  const auto& st = sys.species[species_index];
  const int nh = st.params.n_modes;
  const double L = space.domain_length();

  Snapshot s;
  s.time = sys.time;
  s.species = sys.info[species_index].name;
  s.x.resize(size_t(nx));
  s.v.resize(size_t(nv));
  for (int i = 0; i < nx; ++i) s.x[size_t(i)] = x_left + L * i / nx;
  for (int j = 0; j < nv; ++j) s.v[size_t(j)] = v_min + (v_max - v_min) * j / (nv - 1);

  s.f.resize(size_t(nx) * nv);
  std::vector<double> cn(static_cast<size_t>(nh));
  for (int i = 0; i < nx; ++i) {
    double xm = L * i / nx;
    for (int n = 0; n < nh; ++n) cn[size_t(n)] = space.eval_coeff(st.coeffs[size_t(n)], xm);
    for (int j = 0; j < nv; ++j)
      s.f[size_t(i) * nv + j] = reconstruct_from_values(cn, st.scaling.alpha, s.v[size_t(j)]);
  }
  return s;
}

inline void write_snapshot(const Snapshot& s, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError(path, "cannot open snapshot file for writing");
  out << "# time " << detail::g17(s.time) << '\n';
  out << "# species " << s.species << '\n';
  out << "# nx " << s.x.size() << '\n';
  out << "# nv " << s.v.size() << '\n';
  out << "# x";
  for (double x : s.x) out << ' ' << detail::g17(x);
  out << "\n# v";
  for (double v : s.v) out << ' ' << detail::g17(v);
  out << '\n';
  for (size_t i = 0; i < s.x.size(); ++i) {
    for (size_t j = 0; j < s.v.size(); ++j) out << (j ? " " : "") << detail::g17(s.at(i, j));
    out << '\n';
  }
  if (!out) throw IoError(path, "snapshot write failed");
}

inline Snapshot read_snapshot(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path, "cannot open snapshot file");
  Snapshot s;
  std::string line, tag;
  size_t nx = 0, nv = 0;
  auto header = [&](const char* want) -> std::istringstream {
    if (!std::getline(in, line)) throw IoError(path, "truncated snapshot header");
    std::istringstream is(line);
    std::string hash;
    is >> hash >> tag;
    if (hash != "#" || tag != want) throw IoError(path, std::string("expected header '") + want + "'");
    return is;
  };
  {
    auto is = header("time");
    is >> s.time;
  }
  {
    auto is = header("species");
    is >> s.species;
  }
  {
    auto is = header("nx");
    is >> nx;
  }
  {
    auto is = header("nv");
    is >> nv;
  }
  if (nx < 1 || nv < 1) throw IoError(path, "bad snapshot dimensions");
  {
    auto is = header("x");
    s.x.resize(nx);
    for (auto& x : s.x)
      if (!(is >> x)) throw IoError(path, "short x grid");
  }
  {
    auto is = header("v");
    s.v.resize(nv);
    for (auto& v : s.v)
      if (!(is >> v)) throw IoError(path, "short v grid");
  }
  s.f.resize(nx * nv);
  for (auto& f : s.f)
    if (!(in >> f)) throw IoError(path, "short snapshot matrix");
  return s;
}

}  // namespace vlaherm
