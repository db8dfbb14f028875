#pragma once

// Two-stage second-order time integrator, staged so every Vlasov source
// evaluation sees a time-centered electric field:
//
//   stage 1: advance C_0 a half step by transport alone, solve for E^(1),
//            then advance the remaining modes a half step with the field
//            average (E^m + E^(1)) / 2,
//   stage 2: repeat over the full step from the half-step state, with the
//            field average (E^m + E^{m+1}) / 2.
//
// The velocity scaling alpha is advanced alongside with matching stage
// values. The Hou-Li filter is applied once per completed step.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "vlaherm/errors.hpp"
#include "vlaherm/hermite.hpp"
#include "vlaherm/state.hpp"

namespace vlaherm {

struct SpeciesInfo {
  std::string name = "species";
  double charge = 1.0;
  double mass = 1.0;
};

template <class Space>
struct System {
  using Field = typename Space::Field;
  std::vector<SpeciesInfo> info;
  std::vector<HermiteState<Field>> species;  // parallel to info
  typename Space::Electro electro;           // consistent with species once solve_fields ran
  double time = 0.0;
  double rho0 = 0.0;  // fixed neutralizing background
};

template <class Space>
double neutralizing_background(const Space& space, const System<Space>& sys) {
  double q = 0.0;
  for (size_t s = 0; s < sys.species.size(); ++s)
    q += sys.info[s].charge * space.integral_of(sys.species[s].coeffs[0]);
  return q / space.domain_length();
}

template <class Space>
typename Space::Field charge_density(const Space& space, const System<Space>& sys) {
  auto rho = space.zero_field();
  for (size_t s = 0; s < sys.species.size(); ++s)
    axpy(rho, sys.info[s].charge, sys.species[s].coeffs[0]);
  return rho;
}

template <class Space>
void solve_fields(const Space& space, System<Space>& sys) {
  sys.electro = space.solve(charge_density(space, sys), sys.rho0);
}

// step-size bound at the system's current scaling factors, at unit safety
// factor; callers apply their own margin
template <class Space>
double max_stable_dt(const Space& space, const System<Space>& sys) {
  double dt = std::numeric_limits<double>::infinity();
  for (const auto& st : sys.species)
    dt = std::min(dt, space.suggest_dt(st.params.n_modes, st.scaling.alpha, 1.0));
  return dt;
}

template <class Space>
void step(const Space& space, System<Space>& sys, double dt, bool filter = true) {
  using Field = typename Space::Field;
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("step: dt must be finite and > 0");
  const size_t ns = sys.species.size();
  if (ns == 0 || sys.info.size() != ns)
    throw NumericalError("step: empty or inconsistent system");

  // stage 1: half step
  std::vector<std::vector<Field>> rhs(ns);  // transport terms, reused as stage rhs
  std::vector<HermiteState<Field>> st1(ns);
  {
    auto rho = space.zero_field();
    for (size_t s = 0; s < ns; ++s) {
      const auto& st = sys.species[s];
      const int nh = st.params.n_modes;
      rhs[s].reserve(size_t(nh));
      for (int n = 0; n < nh; ++n) rhs[s].push_back(space.transport(st, n));
      Field c0 = st.coeffs[0];
      axpy(c0, 0.5 * dt, rhs[s][0]);
      axpy(rho, sys.info[s].charge, c0);
      st1[s] = st;
      st1[s].coeffs[0] = std::move(c0);
    }
    auto e1 = space.solve(rho, sys.rho0);
    auto eq = Space::average(sys.electro.sample, e1.sample);
    for (size_t s = 0; s < ns; ++s) {
      const auto& st = sys.species[s];
      for (int n = 1; n < st.params.n_modes; ++n) {
        Field r = space.source(st, eq, n);
        axpy(r, 1.0, rhs[s][size_t(n)]);
        Field c = st.coeffs[size_t(n)];
        axpy(c, 0.5 * dt, r);
        st1[s].coeffs[size_t(n)] = std::move(c);
      }
      st1[s].scaling.alpha =
          st.scaling.alpha + 0.5 * dt * alpha_rhs(st.scaling.alpha, eq.e_inf, st.params);
    }
  }

  // stage 2: full step from the original state, rhs at the half-step state
  std::vector<HermiteState<Field>> out(ns);
  auto rho = space.zero_field();
  for (size_t s = 0; s < ns; ++s) {
    const int nh = st1[s].params.n_modes;
    for (int n = 0; n < nh; ++n) rhs[s][size_t(n)] = space.transport(st1[s], n);
    Field c0 = sys.species[s].coeffs[0];
    axpy(c0, dt, rhs[s][0]);
    axpy(rho, sys.info[s].charge, c0);
    out[s] = sys.species[s];
    out[s].coeffs[0] = std::move(c0);
  }
  auto e2 = space.solve(rho, sys.rho0);
  auto eh = Space::average(sys.electro.sample, e2.sample);
  for (size_t s = 0; s < ns; ++s) {
    const auto& st0 = sys.species[s];
    for (int n = 1; n < st0.params.n_modes; ++n) {
      Field r = space.source(st1[s], eh, n);
      axpy(r, 1.0, rhs[s][size_t(n)]);
      Field c = st0.coeffs[size_t(n)];
      axpy(c, dt, r);
      out[s].coeffs[size_t(n)] = std::move(c);
    }
    out[s].scaling.alpha =
        st0.scaling.alpha + dt * alpha_rhs(st1[s].scaling.alpha, eh.e_inf, st0.params);
    out[s].scaling.accumulated_integral =
        st0.scaling.accumulated_integral + dt * eh.e_inf * eh.e_inf;

    if (filter) houli_filter(out[s].coeffs, st0.params.n_modes);

    if (!(out[s].scaling.alpha > 0.0) || !std::isfinite(out[s].scaling.alpha))
      throw NumericalError("step: velocity scaling collapsed at t = " + std::to_string(sys.time));
    for (const Field& f : out[s].coeffs)
      if (!field_finite(f))
        throw NumericalError("step: non-finite coefficients at t = " + std::to_string(sys.time) +
                             " (unstable step size?)");
  }

  sys.species = std::move(out);
  sys.electro = std::move(e2);
  sys.time += dt;
}

}  // namespace vlaherm
