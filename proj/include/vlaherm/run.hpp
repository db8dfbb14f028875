#pragma once

// Run orchestration: fixed-step time loop with steps clipped so snapshot
// times and the final time are hit exactly, diagnostics on a step cadence
// plus at every event time, and the file-writing entry point used by the CLI
// (manifest, diagnostics CSV, snapshots).

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "vlaherm/config.hpp"
#include "vlaherm/diagnostics.hpp"
#include "vlaherm/scenario.hpp"
#include "vlaherm/snapshot.hpp"
#include "vlaherm/spaces.hpp"
#include "vlaherm/stepper.hpp"
#include "vlaherm/textio.hpp"

namespace vlaherm {

struct RunResult {
  DiagnosticsLog log;
  std::vector<std::string> warnings;
  double dt_used = 0.0;
  long steps = 0;
};

inline DgSpace make_dg_space(const ResolvedConfig& rc) {
  Mesh mesh = Mesh::uniform(rc.scenario.length, rc.nx, rc.degree);
  PoissonKind kind = rc.poisson == "ldg" ? PoissonKind::ldg : PoissonKind::mixed;
  return DgSpace(mesh, kind, LdgOptions{rc.beta, rc.beta_over_h});
}

inline FourierSpace make_fourier_space(const ResolvedConfig& rc) {
  return FourierSpace(rc.nx, rc.scenario.length);
}

// on_event(sys, t) fires at t = 0 and at every configured snapshot time.
// The nominal step is rc.dt if set, else cfl times the stability bound at
// the initial scaling; a nominal step beyond the bound is refused.
template <class Space, class EventFn>
RunResult time_loop(const Space& space, System<Space>& sys, const ResolvedConfig& rc,
                    EventFn&& on_event) {
  RunResult out;
  double bound = max_stable_dt(space, sys);
  double dt = rc.dt > 0.0 ? rc.dt : rc.cfl * bound;
  if (dt > bound * (1.0 + 1e-12))
    throw NumericalError("run: step " + detail::g17(dt) + " exceeds the stability bound " +
                         detail::g17(bound) + " at the initial velocity scaling");
  out.dt_used = dt;

  const double t_end = rc.t_final;
  const double eps = 1e-9 * std::max(1.0, std::abs(t_end));
  auto is_snapshot_time = [&](double t) {
    for (double s : rc.snapshot_times)
      if (std::abs(s - t) <= eps) return true;
    return false;
  };

  std::vector<double> events;
  for (double t : rc.snapshot_times)
    if (t > eps && t < t_end - eps) events.push_back(t);
  events.push_back(t_end);

  out.log.add(record_diagnostics(space, sys));
  on_event(sys, 0.0);

  long cadence = 0;
  for (double target : events) {
    while (sys.time < target - eps) {
      double d = std::min(dt, target - sys.time);
      step(space, sys, d, rc.filter);
      ++out.steps;
      bool at_target = sys.time >= target - eps;
      if (at_target) sys.time = target;  // absorb clipped-step roundoff
      if (++cadence >= rc.diag_every || at_target) {
        out.log.add(record_diagnostics(space, sys));
        cadence = 0;
      }
    }
    if (is_snapshot_time(target)) on_event(sys, target);
  }
  return out;
}

template <class Space>
struct RunArtifacts {
  System<Space> sys;  // final state
  RunResult result;
};

template <class Space>
RunArtifacts<Space> run_in_memory(const Space& space, const ResolvedConfig& rc) {
  RunArtifacts<Space> ra;
  std::vector<std::string> warnings;
  ra.sys = initialize(space, rc.scenario, rc.nh, rc.gamma, &warnings);
  ra.result = time_loop(space, ra.sys, rc, [](const System<Space>&, double) {});
  ra.result.warnings = std::move(warnings);
  return ra;
}

namespace detail {

inline std::string short_time(double t) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", t);
  return buf;
}

template <class Space>
void run_files_impl(const Space& space, const ResolvedConfig& rc, std::ostream& msg) {
  std::vector<std::string> warnings;
  System<Space> sys = initialize(space, rc.scenario, rc.nh, rc.gamma, &warnings);
  for (const auto& w : warnings) msg << "warning: " << w << '\n';

  const int snap_nx = 128, snap_nv = 129;
  auto writer = [&](const System<Space>& s, double t) {
    for (size_t sp = 0; sp < s.species.size(); ++sp) {
      Snapshot sn = make_snapshot(space, s, sp, snap_nx, snap_nv, rc.scenario.v_min,
                                  rc.scenario.v_max, rc.scenario.x_left);
      sn.time = t;
      write_snapshot(sn, rc.out_dir + "/snapshot_" + s.info[sp].name + "_t" + short_time(t) + ".txt");
    }
  };
  RunResult res = time_loop(space, sys, rc, writer);

  std::string csv_path = rc.out_dir + "/diagnostics.csv";
  std::ofstream csv(csv_path);
  if (!csv) throw IoError(csv_path, "cannot open diagnostics output");
  write_csv(csv, res.log);
  if (!csv) throw IoError(csv_path, "diagnostics write failed");

  std::string mf_path = rc.out_dir + "/manifest.txt";
  std::ofstream mf(mf_path);
  if (!mf) throw IoError(mf_path, "cannot open manifest output");
  write_manifest(mf, rc,
                 {{"dt_effective", g17(res.dt_used)},
                  {"steps", std::to_string(res.steps)},
                  {"init_warnings", std::to_string(warnings.size())}});
  if (!mf) throw IoError(mf_path, "manifest write failed");

  msg << "completed " << rc.scenario.name << ": t = " << g17(sys.time) << ", steps = "
      << res.steps << ", dt = " << g17(res.dt_used) << ", outputs in " << rc.out_dir << '\n';
}

}  // namespace detail

inline void run_to_files(const ResolvedConfig& rc, std::ostream& msg) {
  std::error_code ec;
  std::filesystem::create_directories(rc.out_dir, ec);
  if (ec) throw IoError(rc.out_dir, "cannot create output directory: " + ec.message());
  if (rc.method == "dg") {
    DgSpace space = make_dg_space(rc);
    detail::run_files_impl(space, rc, msg);
  } else {
    FourierSpace space = make_fourier_space(rc);
    detail::run_files_impl(space, rc, msg);
  }
}

}  // namespace vlaherm
