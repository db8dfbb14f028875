#pragma once

// Space adapters: a uniform interface over the DG and Fourier spatial
// discretizations so the time stepper and diagnostics are written once.
// A space provides
//   Field    coefficient container for one Hermite mode
//   Electro  solved field state (E, energies, sampled values)
//   Sample   E in the form the Vlasov source assembly consumes
// plus transport/source right-hand sides, the field solve, initialization
// by L2 projection, and pointwise evaluation for output.

#include <cmath>
#include <functional>
#include <optional>
#include <vector>

#include "vlaherm/dg_field.hpp"
#include "vlaherm/errors.hpp"
#include "vlaherm/hermite.hpp"
#include "vlaherm/mesh.hpp"
#include "vlaherm/poisson_dg.hpp"
#include "vlaherm/spectral.hpp"
#include "vlaherm/state.hpp"
#include "vlaherm/vlasov_dg.hpp"

namespace vlaherm {

enum class PoissonKind { ldg, mixed, spectral };

class DgSpace {
 public:
  using Field = DGField;
  using Electro = ElectroState;
  using Sample = EFieldSample;

  DgSpace(const Mesh& mesh, PoissonKind kind, LdgOptions opts = {})
      : mesh_(mesh),
        basis_(CellBasis::make(mesh.degree, mesh.degree + 2)),
        init_basis_(CellBasis::make(mesh.degree, std::max(mesh.degree + 2, 6))) {
    if (kind == PoissonKind::ldg)
      ldg_.emplace(mesh, opts, mesh.degree + 2);
    else if (kind == PoissonKind::mixed)
      mixed_.emplace(mesh, mesh.degree + 2);
    else
      throw ConfigError("DgSpace: field solver must be ldg or mixed");
  }

  const Mesh& mesh() const { return mesh_; }
  const CellBasis& basis() const { return basis_; }
  double domain_length() const { return mesh_.length; }

  Field zero_field() const { return DGField::zeros(mesh_); }
  double integral_of(const Field& f) const { return integral(mesh_, f); }
  double l2sq(const Field& f) const { return field_l2sq(f); }
  double eval_coeff(const Field& f, double x) const { return eval(mesh_, f, x); }

  Electro solve(const Field& charge, double rho0) const {
    return ldg_ ? ldg_->solve(charge, rho0) : mixed_->solve(charge, rho0);
  }
  static Sample average(const Sample& a, const Sample& b) { return EFieldSample::average(a, b); }

  Field transport(const HermiteState<Field>& st, int n) const {
    FluxSpec flux = FluxSpec::global_lax_friedrichs(st.params.n_modes, st.scaling.alpha);
    return vlasov_transport(mesh_, st, flux, n);
  }
  Field source(const HermiteState<Field>& st, const Sample& e, int n) const {
    return vlasov_source(mesh_, st, e.at_quad, e.e_inf, basis_, n);
  }

  // largest stable step scales with the cell size and the inverse of the
  // fastest Hermite characteristic sqrt(2 N_H) / alpha
  double suggest_dt(int n_modes, double alpha, double cfl) const {
    return cfl * mesh_.h() * alpha /
           ((2.0 * mesh_.degree + 1.0) * std::sqrt(2.0 * n_modes));
  }

  // cellwise L2 projection of f0(x, v); the velocity integrals use `grid`,
  // the spatial ones a fixed rule with max(k+2, 6) points per cell
  std::vector<Field> project_initial(const std::function<double(double, double)>& f0,
                                     const HermiteParams& params,
                                     const VelocityGrid& grid) const {
    const int nh = params.n_modes, nl = mesh_.n_local();
    const int nq = int(init_basis_.rule.nodes.size());
    std::vector<Field> fields(nh, zero_field());
    std::vector<double> cn;
    for (int i = 0; i < mesh_.n_cells; ++i) {
      double xl = mesh_.left(i), h = mesh_.h();
      for (int q = 0; q < nq; ++q) {
        double x = xl + 0.5 * (init_basis_.rule.nodes[q] + 1.0) * h;
        auto fv = [&](double v) { return f0(x, v); };
        cn = project_velocity(fv, params, grid);
        double w = 0.5 * std::sqrt(h) * init_basis_.rule.weights[q];
        for (int n = 0; n < nh; ++n)
          for (int l = 0; l < nl; ++l)
            fields[n].c(i, l) += w * cn[size_t(n)] * init_basis_.val[size_t(q) * nl + l];
      }
    }
    return fields;
  }

  // same rule as project_initial, for scalar profiles (used to cross-check
  // initialization against known coefficient functions)
  Field project_profile(const std::function<double(double)>& f) const {
    const int nl = mesh_.n_local();
    const int nq = int(init_basis_.rule.nodes.size());
    Field out = zero_field();
    for (int i = 0; i < mesh_.n_cells; ++i) {
      double xl = mesh_.left(i), h = mesh_.h();
      for (int q = 0; q < nq; ++q) {
        double x = xl + 0.5 * (init_basis_.rule.nodes[q] + 1.0) * h;
        double w = 0.5 * std::sqrt(h) * init_basis_.rule.weights[q] * f(x);
        for (int l = 0; l < nl; ++l) out.c(i, l) += w * init_basis_.val[size_t(q) * nl + l];
      }
    }
    return out;
  }

 private:
  Mesh mesh_;
  CellBasis basis_;       // rule defining the scheme's product projections
  CellBasis init_basis_;  // richer rule for initialization
  std::optional<LdgPoisson> ldg_;
  std::optional<MixedPoisson> mixed_;
};

struct FourierSample {
  SpectralField e;
  double e_inf = 0.0;
};

struct FourierElectro {
  SpectralField e;
  FourierSample sample;
  double e_l2sq = 0.0;
  double jump_term = 0.0;       // no jumps in a spectral field
  double compat_residual = 0.0; // mean-mode defect of the data
};

class FourierSpace {
 public:
  using Field = SpectralField;
  using Electro = FourierElectro;
  using Sample = FourierSample;

  FourierSpace(int n_waves, double length, int inf_oversample = 4)
      : n_waves_(n_waves), length_(length), inf_oversample_(inf_oversample) {
    if (n_waves < 1 || !(length > 0.0))
      throw ConfigError("FourierSpace: need n_waves >= 1 and length > 0");
  }

  int n_waves() const { return n_waves_; }
  double domain_length() const { return length_; }

  Field zero_field() const { return SpectralField::zeros(n_waves_, length_); }
  double integral_of(const Field& f) const { return integral(f); }
  double l2sq(const Field& f) const { return field_l2sq(f); }
  double eval_coeff(const Field& f, double x) const { return eval(f, x); }

  Electro solve(const Field& charge, double rho0) const {
    Field r = charge;
    r.mode(0) -= rho0 * std::sqrt(length_);
    Electro es;
    es.e = spectral_poisson(r);
    es.compat_residual = r.mode(0).real();
    es.e_l2sq = field_l2sq(es.e);
    es.sample.e = es.e;
    es.sample.e_inf = spectral_e_inf(es.e, inf_oversample_);
    return es;
  }
  static Sample average(const Sample& a, const Sample& b) {
    Sample r;
    r.e = a.e;
    axpy(r.e, 1.0, b.e);
    field_scale(r.e, 0.5);
    r.e_inf = spectral_e_inf(r.e);
    return r;
  }

  Field transport(const HermiteState<Field>& st, int n) const {
    const int nh = st.params.n_modes;
    Field out = zero_field();
    const double ia = 1.0 / st.scaling.alpha;
    const double k0 = 2.0 * M_PI / length_;
    const double cl = (n >= 1) ? std::sqrt(double(n)) : 0.0;
    const double ch = (n + 1 < nh) ? std::sqrt(double(n) + 1.0) : 0.0;
    for (int j = -n_waves_; j <= n_waves_; ++j) {
      std::complex<double> s{0.0, 0.0};
      if (n >= 1) s += cl * st.coeffs[size_t(n) - 1].mode(j);
      if (n + 1 < nh) s += ch * st.coeffs[size_t(n) + 1].mode(j);
      out.mode(j) = -ia * std::complex<double>(0.0, k0 * j) * s;
    }
    return out;
  }

  Field source(const HermiteState<Field>& st, const Sample& e, int n) const {
    Field out = zero_field();
    if (n == 0) return out;
    const double alpha = st.scaling.alpha;
    const double I = alpha_rhs(alpha, e.e_inf, st.params);
    const double sn = I / alpha * n;
    const double snm2 = (n >= 2) ? I / alpha * std::sqrt((n - 1.0) * n) : 0.0;
    for (int j = -n_waves_; j <= n_waves_; ++j) {
      std::complex<double> v = sn * st.coeffs[size_t(n)].mode(j);
      if (n >= 2) v += snm2 * st.coeffs[size_t(n) - 2].mode(j);
      out.mode(j) = v;
    }
    Field p = galerkin_product(e.e, st.coeffs[size_t(n) - 1]);
    axpy(out, st.params.q_over_m * alpha * std::sqrt(double(n)), p);
    return out;
  }

  // effective resolution L / (2 N_x + 1) with the piecewise-constant factor
  double suggest_dt(int n_modes, double alpha, double cfl) const {
    return cfl * (length_ / (2.0 * n_waves_ + 1.0)) * alpha / std::sqrt(2.0 * n_modes);
  }

  // trigonometric interpolation through 2 N_x + 1 equispaced samples; exact
  // for data band-limited to the retained modes
  std::vector<Field> project_initial(const std::function<double(double, double)>& f0,
                                     const HermiteParams& params,
                                     const VelocityGrid& grid) const {
    const int nh = params.n_modes, ns = 2 * n_waves_ + 1;
    std::vector<Field> fields(nh, zero_field());
    const double sl = std::sqrt(length_);
    std::vector<double> cn;
    for (int s = 0; s < ns; ++s) {
      double x = length_ * s / ns;
      auto fv = [&](double v) { return f0(x, v); };
      cn = project_velocity(fv, params, grid);
      for (int j = -n_waves_; j <= n_waves_; ++j) {
        double th = -2.0 * M_PI * j * s / double(ns);
        std::complex<double> w(std::cos(th), std::sin(th));
        for (int n = 0; n < nh; ++n) fields[size_t(n)].mode(j) += cn[size_t(n)] * w * (sl / ns);
      }
    }
    return fields;
  }

  Field project_profile(const std::function<double(double)>& f) const {
    const int ns = 2 * n_waves_ + 1;
    Field out = zero_field();
    const double sl = std::sqrt(length_);
    for (int s = 0; s < ns; ++s) {
      double fx = f(length_ * s / ns);
      for (int j = -n_waves_; j <= n_waves_; ++j) {
        double th = -2.0 * M_PI * j * s / double(ns);
        out.mode(j) += fx * std::complex<double>(std::cos(th), std::sin(th)) * (sl / ns);
      }
    }
    return out;
  }

 private:
  int n_waves_;
  double length_;
  int inf_oversample_;
};

}  // namespace vlaherm
