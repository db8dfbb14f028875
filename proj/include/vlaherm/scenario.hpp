#pragma once

// Benchmark scenarios: initial distributions, domains, species parameters,
// and per-scenario numerical defaults. Physical x runs over
// [x_left, x_left + length]; the solver works on [0, length] and shifts.

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "vlaherm/errors.hpp"
#include "vlaherm/hermite.hpp"
#include "vlaherm/state.hpp"
#include "vlaherm/stepper.hpp"

namespace vlaherm {

struct SpeciesSpec {
  std::string name;
  double alpha0 = 1.0;
  double q_over_m = 1.0;
  double charge = 1.0;  // = mass * q_over_m, so mass-weighted totals are the conserved ones
  double mass = 1.0;
  std::function<double(double, double)> f0;  // physical x, v
};

struct ScenarioDefaults {
  int nx = 64, nh = 128, degree = 2;
  double t_final = 50.0, cfl = 0.5, gamma = 0.01;
};

struct Scenario {
  std::string name;
  double length = 0.0;
  double x_left = 0.0;
  double v_min = -6.0, v_max = 6.0;  // snapshot window
  double kappa = 0.0, k_pert = 0.0;  // leading perturbation amplitude / wavenumber
  std::vector<SpeciesSpec> species;
  ScenarioDefaults defaults;
  std::vector<double> default_snapshot_times;
};

inline std::vector<std::string> scenario_names() {
  return {"landau", "two_stream", "bump_on_tail", "ion_acoustic"};
}

inline double maxwellian(double v) {
  return std::exp(-0.5 * v * v) / std::sqrt(2.0 * M_PI);
}

inline Scenario build_scenario(const std::string& name) {
  Scenario sc;
  sc.name = name;
  if (name == "landau") {
    sc.length = 4.0 * M_PI;
    sc.kappa = 0.01;
    sc.k_pert = 0.5;
    sc.defaults = {32, 64, 2, 15.0, 0.5, 0.01};
    double kap = sc.kappa, k = sc.k_pert;
    SpeciesSpec e{"e", 1.0, 1.0, 1.0, 1.0,
                  [kap, k](double x, double v) { return (1.0 + kap * std::cos(k * x)) * maxwellian(v); }};
    sc.species.push_back(std::move(e));
  } else if (name == "two_stream") {
    sc.length = 4.0 * M_PI;
    sc.kappa = 0.01;
    sc.k_pert = 0.5;
    sc.defaults = {64, 128, 2, 50.0, 0.5, 0.01};
    double kap = sc.kappa, k = sc.k_pert;
    SpeciesSpec e{"e", 1.0, 1.0, 1.0, 1.0, [kap, k](double x, double v) {
                    double pert = kap * ((std::cos(2.0 * k * x) + std::cos(3.0 * k * x)) / 1.2 +
                                         std::cos(k * x));
                    return (2.0 / 7.0) * (1.0 + 5.0 * v * v) * (1.0 + pert) * maxwellian(v);
                  }};
    sc.species.push_back(std::move(e));
  } else if (name == "bump_on_tail") {
    sc.length = 20.0 * M_PI;
    sc.v_min = -8.0;
    sc.v_max = 8.0;
    sc.kappa = 0.04;
    sc.k_pert = 0.3;  // mode 3 of the fundamental k = 1/10
    sc.defaults = {64, 128, 2, 50.0, 0.5, 0.01};
    double kap = sc.kappa, k = sc.k_pert;
    const double np = 0.9, nb = 0.1, vd = 4.5;
    const double vp = std::sqrt(2.0), vb = std::sqrt(2.0) / 2.0;
    SpeciesSpec e{"e", 5.0 / 7.0, 1.0, 1.0, 1.0, [=](double x, double v) {
                    double bulk = np / vp * maxwellian(v / vp);
                    double bump = nb / vb * maxwellian((v - vd) / vb);
                    return (bulk + bump) * (1.0 + kap * std::cos(k * x));
                  }};
    sc.species.push_back(std::move(e));
  } else if (name == "ion_acoustic") {
    sc.length = 10.0;
    sc.x_left = -5.0;
    sc.v_min = -8.0;
    sc.v_max = 8.0;
    sc.kappa = 0.0001;
    sc.k_pert = 2.0 * M_PI / 10.0;
    sc.defaults = {128, 128, 2, 250.0, 0.5, 0.01};
    sc.default_snapshot_times = {175.0, 200.0, 250.0};
    double kap = sc.kappa, k = sc.k_pert;
    SpeciesSpec el{"electrons", 1.0, -1.0, -1.0, 1.0, [kap, k](double x, double v) {
                     return (1.0 + kap * std::cos(k * x)) * maxwellian(v - 2.0);
                   }};
    SpeciesSpec io{"ions", 50.0, 1.0 / 25.0, 1.0, 25.0,
                   [](double, double v) { return 50.0 * maxwellian(50.0 * v); }};
    sc.species.push_back(std::move(el));
    sc.species.push_back(std::move(io));
  } else {
    throw ConfigError("unknown scenario '" + name +
                      "' (known: landau, two_stream, bump_on_tail, ion_acoustic)");
  }
  return sc;
}

// Projects every species onto the mode stack, fixes the neutralizing
// background from the discrete initial charge, and solves the initial field.
// A species whose last retained mode is not small relative to its largest one
// is reported through `warnings`: the initial data is then unresolved at this
// N_H.
template <class Space>
System<Space> initialize(const Space& space, const Scenario& sc, int n_modes, double gamma,
                         std::vector<std::string>* warnings = nullptr) {
  System<Space> sys;
  for (const SpeciesSpec& sp : sc.species) {
    HermiteParams params;
    params.n_modes = n_modes;
    params.alpha0 = sp.alpha0;
    params.gamma = gamma;
    params.q_over_m = sp.q_over_m;
    params.validate();
    VelocityGrid grid = gauss_hermite_grid(default_quadrature_size(n_modes), sp.alpha0);
    double x_left = sc.x_left;
    auto f0 = [&sp, x_left](double x, double v) { return sp.f0(x_left + x, v); };

    HermiteState<typename Space::Field> st;
    st.params = params;
    st.scaling.alpha = sp.alpha0;
    st.coeffs = space.project_initial(f0, params, grid);
    st.check();

    if (warnings) {
      double mx = 0.0;
      for (const auto& f : st.coeffs) mx = std::max(mx, std::sqrt(space.l2sq(f)));
      double tail = std::sqrt(space.l2sq(st.coeffs[size_t(n_modes) - 1]));
      if (tail > 1e-8 * mx)
        warnings->push_back("species " + sp.name + ": initial data unresolved at n_modes = " +
                            std::to_string(n_modes) + " (relative tail " +
                            std::to_string(tail / (mx > 0.0 ? mx : 1.0)) + ")");
    }

    sys.info.push_back(SpeciesInfo{sp.name, sp.charge, sp.mass});
    sys.species.push_back(std::move(st));
  }
  sys.rho0 = neutralizing_background(space, sys);
  solve_fields(space, sys);
  return sys;
}

}  // namespace vlaherm
