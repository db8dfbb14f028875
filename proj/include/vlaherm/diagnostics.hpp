#pragma once

// Conserved-quantity bookkeeping. One record per output time holds the
// per-species moments and the field energies; deviations are always measured
// against the first record, so they are exactly zero at the initial time.
//
// Totals are mass-weighted sums over species, which makes total momentum and
// total energy (kinetic + electric + potential-jump) the discretely conserved
// combinations when charge = mass * (q/m) for every species.

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "vlaherm/errors.hpp"
#include "vlaherm/state.hpp"
#include "vlaherm/stepper.hpp"
#include "vlaherm/textio.hpp"

namespace vlaherm {

struct SpeciesDiagnostics {
  std::string name;
  double mass = 0.0;      // int C_0 dx (particle number)
  double momentum = 0.0;  // int C_1 / alpha dx
  double kinetic = 0.0;   // int (sqrt(2) C_2 + C_0) / (2 alpha^2) dx
  double wl2 = 0.0;       // weighted L2 norm of the distribution
  double alpha = 0.0;
};

struct DiagnosticsRecord {
  double time = 0.0;
  std::vector<SpeciesDiagnostics> species;
  double mass = 0.0, momentum = 0.0, kinetic = 0.0;
  double electric = 0.0, jump = 0.0, total_energy = 0.0;
  double e_l2 = 0.0, e_inf = 0.0;
};

template <class Space>
DiagnosticsRecord record_diagnostics(const Space& space, const System<Space>& sys) {
  DiagnosticsRecord r;
  r.time = sys.time;
  for (size_t s = 0; s < sys.species.size(); ++s) {
    const auto& st = sys.species[s];
    if (st.params.n_modes < 3)
      throw NumericalError("diagnostics: needs n_modes >= 3 for the kinetic moment");
    double al = st.scaling.alpha;
    SpeciesDiagnostics d;
    d.name = sys.info[s].name;
    d.alpha = al;
    d.mass = space.integral_of(st.coeffs[0]);
    d.momentum = space.integral_of(st.coeffs[1]) / al;
    d.kinetic = (std::sqrt(2.0) * space.integral_of(st.coeffs[2]) + d.mass) / (2.0 * al * al);
    d.wl2 = weighted_l2_norm(st);
    double m = sys.info[s].mass;
    r.mass += m * d.mass;
    r.momentum += m * d.momentum;
    r.kinetic += m * d.kinetic;
    r.species.push_back(std::move(d));
  }
  r.electric = 0.5 * sys.electro.e_l2sq;
  r.jump = 0.5 * sys.electro.jump_term;
  r.total_energy = r.kinetic + r.electric + r.jump;
  r.e_l2 = std::sqrt(sys.electro.e_l2sq);
  r.e_inf = sys.electro.sample.e_inf;
  return r;
}

inline double relative_deviation(double v, double v0) {
  double s = std::abs(v0);
  return s > 0.0 ? std::abs(v - v0) / s : std::abs(v - v0);
}

struct DiagnosticsLog {
  std::vector<DiagnosticsRecord> records;

  void add(DiagnosticsRecord r) { records.push_back(std::move(r)); }
  const DiagnosticsRecord& first() const {
    if (records.empty()) throw NumericalError("DiagnosticsLog: empty");
    return records.front();
  }

  double max_rel_mass_dev() const { return max_over([](const DiagnosticsRecord& r) { return r.mass; }, true); }
  double max_rel_energy_dev() const { return max_over([](const DiagnosticsRecord& r) { return r.total_energy; }, true); }
  double max_rel_momentum_dev() const { return max_over([](const DiagnosticsRecord& r) { return r.momentum; }, true); }
  double max_abs_momentum_dev() const { return max_over([](const DiagnosticsRecord& r) { return r.momentum; }, false); }

  template <class Get>
  double max_over(Get get, bool relative) const {
    double v0 = get(first()), m = 0.0;
    for (const auto& r : records) {
      double d = relative ? relative_deviation(get(r), v0) : std::abs(get(r) - v0);
      m = std::max(m, d);
    }
    return m;
  }
};

// ||f(t)|| <= ||f(0)|| e^{t / 4 gamma} per species, checked in log space so
// large exponents cannot overflow; slack absorbs roundoff of the comparison.
inline bool check_stability_bound(const DiagnosticsLog& log, double gamma, double slack = 1e-10) {
  if (log.records.empty()) return true;
  const auto& r0 = log.first();
  for (const auto& r : log.records) {
    double dt = r.time - r0.time;
    for (size_t s = 0; s < r.species.size(); ++s) {
      double lhs = std::log(r.species[s].wl2);
      double rhs = std::log(r0.species[s].wl2) + dt / (4.0 * gamma) + std::log1p(slack);
      if (lhs > rhs) return false;
    }
  }
  return true;
}

// One row per record. Column order is fixed: time, then per species
// <name>_mass, <name>_momentum, <name>_kinetic, <name>_wl2, <name>_alpha,
// then totals and deviations as in the header below.
inline void write_csv(std::ostream& os, const DiagnosticsLog& log) {
  if (log.records.empty()) return;
  const auto& r0 = log.first();
  os << "time";
  for (const auto& sp : r0.species)
    os << ',' << sp.name << "_mass," << sp.name << "_momentum," << sp.name << "_kinetic,"
       << sp.name << "_wl2," << sp.name << "_alpha";
  os << ",mass,momentum,kinetic_energy,electric_energy,jump_energy,total_energy,e_l2,e_inf"
     << ",dev_mass_rel,dev_momentum_rel,dev_momentum_abs,dev_energy_rel\n";
  for (const auto& r : log.records) {
    os << detail::g17(r.time);
    for (const auto& sp : r.species)
      os << ',' << detail::g17(sp.mass) << ',' << detail::g17(sp.momentum) << ','
         << detail::g17(sp.kinetic) << ',' << detail::g17(sp.wl2) << ',' << detail::g17(sp.alpha);
    os << ',' << detail::g17(r.mass) << ',' << detail::g17(r.momentum) << ','
       << detail::g17(r.kinetic) << ',' << detail::g17(r.electric) << ',' << detail::g17(r.jump)
       << ',' << detail::g17(r.total_energy) << ',' << detail::g17(r.e_l2) << ','
       << detail::g17(r.e_inf);
    os << ',' << detail::g17(relative_deviation(r.mass, r0.mass)) << ','
       << detail::g17(relative_deviation(r.momentum, r0.momentum)) << ','
       << detail::g17(std::abs(r.momentum - r0.momentum)) << ','
       << detail::g17(relative_deviation(r.total_energy, r0.total_energy)) << '\n';
  }
}

}  // namespace vlaherm
