// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "vicinal/analysis.hpp"
#include "vicinal/bcf.hpp"
#include "vicinal/config.hpp"
#include "vicinal/energetics.hpp"
#include "vicinal/height_solver.hpp"
#include "vicinal/operators.hpp"
#include "vicinal/problems.hpp"
#include "vicinal/slope_solver.hpp"

using namespace vicinal;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string& title, const std::function<Outcome()>& body) {
  Outcome o;
  try {
    o = body();
  } catch (const Error& e) {
    o = {false, "error[" + std::string(to_string(e.kind())) + "]: " + e.what()};
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  if (!o.pass) ++failures;
  std::printf("criterion %2d %s: %s (%s)\n", id, o.pass ? "PASS" : "FAIL", title.c_str(), o.detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double sup_distance(std::span<const double> u, double target) {
  double d = 0.0;
  for (double x : u) d = std::max(d, std::abs(x - target));
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Fixed-step run with a given step; used for the dt-refinement of the F
// dissipation defect.
double dissipation_defect(const SlopeField& start, double alpha, double dt, double span) {
  SimConfig cfg;
  cfg.alpha = alpha;
  cfg.t_end = span;
  cfg.dt_init = cfg.dt_max = dt;
  cfg.dt_min = dt * 1e-6;
  cfg.convergence_tol = 0.0;
  const auto traj = run_slope(start, alpha, cfg);
  require(traj.status == RunStatus::ReachedEnd, ErrorKind::SimulationFailed, "defect run failed: " + traj.failure);
  double worst = 0.0;
  for (std::size_t i = 1; i < traj.records.size(); ++i) {
    const auto& a = traj.records[i - 1];
    const auto& b = traj.records[i];
    worst = std::max(worst, std::abs((b.F - a.F) / (b.t - a.t) + b.E));
  }
  return worst;
}

}  // namespace

int main() {
  const double two_pi = 2.0 * std::numbers::pi;

  report(1, "mass of the figure 2 initial slope", [] {
    const double m = mass(sample_initial_slope(Fig2Profile{}, PeriodicGrid(512, 1.0)));
    return Outcome{std::abs(m - 3.7) <= 0.01 * 3.7, "mass " + fmt("%.6f", m) + " vs 3.7"};
  });

  // Criteria 2 to 5 share one run.
  const RunConfig fig3 = named_problem("fig3");
  Trajectory main_run;
  double main_seconds = 0.0;
  {
    const auto t0 = std::chrono::steady_clock::now();
    main_run = run_slope(initial_slope(fig3), fig3.sim.alpha, fig3.sim);
    main_seconds = seconds_since(t0);
  }

  report(2, "alpha=1 run converges to the uniform state", [&] {
    const double mass0 = main_run.records.front().mass;
    const double dist = sup_distance(main_run.final_values, 1.0 / mass0);
    const bool ok = main_run.status == RunStatus::Converged && dist < 1e-2 && main_seconds < 120.0;
    return Outcome{ok, "status " + std::string(to_string(main_run.status)) + ", t " + fmt("%.4g", main_run.final_t) +
                           ", |u - 1/L| " + fmt("%.3g", dist) + ", 1/L " + fmt("%.5f", 1.0 / mass0) + ", " +
                           fmt("%.1f", main_seconds) + " s"};
  });

  report(3, "mass conservation", [&] {
    const double m0 = main_run.records.front().mass;
    double drift = 0.0;
    for (const auto& r : main_run.records) drift = std::max(drift, std::abs(r.mass - m0) / m0);
    return Outcome{drift <= 1e-9, "max relative drift " + fmt("%.3g", drift)};
  });

  report(4, "E and F nonincreasing; dissipation defect first order", [&] {
    const auto& recs = main_run.records;
    const double e0 = recs.front().E, f0 = std::abs(recs.front().F);
    double e_rise = 0.0, f_rise = 0.0;
    for (std::size_t i = 1; i < recs.size(); ++i) {
      e_rise = std::max(e_rise, (recs[i].E - recs[i - 1].E) / e0);
      f_rise = std::max(f_rise, (recs[i].F - recs[i - 1].F) / f0);
    }
    // Start the refinement from a state past the initial transient.
    RunConfig warm = fig3;
    warm.sim.t_end = 0.005;
    const auto pre = run_slope(initial_slope(warm), 1.0, warm.sim);
    const SlopeField start(PeriodicGrid(fig3.n, fig3.period), pre.final_values);
    const double d1 = dissipation_defect(start, 1.0, 1e-4, 0.01);
    const double d2 = dissipation_defect(start, 1.0, 5e-5, 0.01);
    const bool ok = e_rise <= 1e-10 && f_rise <= 1e-10 && d1 / d2 >= 1.8;
    return Outcome{ok, "max rise E " + fmt("%.3g", e_rise) + ", F " + fmt("%.3g", f_rise) + "; defect " +
                           fmt("%.4g", d1) + " -> " + fmt("%.4g", d2) + ", ratio " + fmt("%.3f", d1 / d2)};
  });

  report(5, "positivity bound along the run", [&] {
    const double mass0 = main_run.records.front().mass;
    double margin = std::numeric_limits<double>::infinity();
    for (const auto& r : main_run.records) margin = std::min(margin, r.u_min - (lower_bound_J(r.E, mass0) - 1e-3));
    const double final_min = main_run.records.back().u_min;
    const double asymptotic = 1.0 / (2.0 * mass0) - 1e-3;
    return Outcome{margin >= 0.0 && final_min >= asymptotic,
                   "worst u_min - (J - 1e-3) " + fmt("%.4g", margin) + ", final u_min " + fmt("%.5f", final_min) +
                       " vs 1/(2L) " + fmt("%.5f", 1.0 / (2.0 * mass0))};
  });

  report(6, "alpha=0 near-rupture transient and recovery", [] {
    const RunConfig fig2 = named_problem("fig2");
    const auto t0 = std::chrono::steady_clock::now();
    const auto traj = run_slope(initial_slope(fig2), fig2.sim.alpha, fig2.sim);
    const double secs = seconds_since(t0);
    double u_low = std::numeric_limits<double>::infinity(), t_low = 0.0;
    for (const auto& r : traj.records) {
      if (r.u_min < u_low) {
        u_low = r.u_min;
        t_low = r.t;
      }
    }
    const double dist = sup_distance(traj.final_values, 1.0 / traj.records.front().mass);
    const bool ok = traj.status != RunStatus::Failed && u_low < 0.014 && t_low >= 0.0016 && t_low <= 0.0064 &&
                    dist < 1e-2 && secs < 300.0;
    return Outcome{ok, "min u " + fmt("%.6f", u_low) + " at t " + fmt("%.5f", t_low) + ", final |u - 1/L| " +
                           fmt("%.3g", dist) + ", " + fmt("%.1f", secs) + " s"};
  });

  report(7, "energy decay rates of a single Fourier mode", [&] {
    std::string detail;
    bool ok = true;
    for (const char* name : {"decay-alpha1", "decay-alpha0"}) {
      const RunConfig cfg = named_problem(name);
      const SlopeField u0 = initial_slope(cfg);
      const auto traj = run_slope(u0, cfg.sim.alpha, cfg.sim);
      require(traj.status != RunStatus::Failed, ErrorKind::SimulationFailed, traj.failure);
      const double u_star = cfg.period / mass(u0);
      const double predicted =
          predicted_energy_rate_discrete(two_pi / cfg.period, u_star, cfg.sim.alpha, u0.grid().spacing());
      const auto fit = fit_decay_rate(traj, cfg.fraction_tail);
      const double rel = std::abs(fit.rate - predicted) / predicted;
      ok = ok && rel <= 0.05;
      if (!detail.empty()) detail += "; ";
      detail += "alpha " + fmt("%g", cfg.sim.alpha) + ": fitted " + fmt("%.4f", fit.rate) + " vs " +
                fmt("%.4f", predicted) + ", off " + fmt("%.2g", rel);
    }
    return Outcome{ok, detail};
  });

  report(8, "step ODE right-hand side equals the slope equation", [] {
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
      const std::size_t n = 64;
      std::vector<double> u(n);
      // deterministic pseudo-random states
      for (std::size_t i = 0; i < n; ++i) {
        u[i] = 0.05 + 2.0 * std::abs(std::sin(12.9898 * (i + 1) + 78.233 * (trial + 1)));
      }
      const double alpha = trial % 2 == 0 ? 1.0 : 0.0;
      const PeriodicGrid g(n, 1.0);
      const auto pde = slope_rhs(SlopeField(g, u), alpha);
      const auto ode = slope_ode_rhs(u, g.spacing(), InteractionLaw(alpha));
      double diff = 0.0, scale = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        diff = std::max(diff, std::abs(pde[i] - ode[i]));
        scale = std::max(scale, std::abs(pde[i]));
      }
      worst = std::max(worst, diff / scale);
    }
    return Outcome{worst <= 1e-12, "worst relative difference " + fmt("%.3g", worst)};
  });

  report(9, "step trains converge to the continuum solution", [] {
    const double t_end = 0.01;
    SimConfig cfg;
    cfg.alpha = 1.0;
    cfg.t_end = t_end;
    cfg.dt_init = cfg.dt_max = 1e-5;
    cfg.dt_min = 1e-12;
    cfg.convergence_tol = 0.0;
    const std::size_t n_ref = 1024;
    const auto ref = run_slope(sample_initial_slope(Fig2Profile{}, PeriodicGrid(n_ref, 1.0)), 1.0, cfg);
    require(ref.status == RunStatus::ReachedEnd, ErrorKind::SimulationFailed, ref.failure);
    std::vector<double> errors;
    for (std::size_t n : {64u, 128u, 256u}) {
      const auto u0 = sample_initial_slope(Fig2Profile{}, PeriodicGrid(n, 1.0));
      const auto traj = integrate_bcf(u0.values(), 1.0 / static_cast<double>(n), InteractionLaw(1.0), t_end, cfg);
      require(traj.status == RunStatus::ReachedEnd, ErrorKind::SimulationFailed, traj.failure);
      double e = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        e = std::max(e, std::abs(traj.final_values[i] - ref.final_values[i * (n_ref / n)]));
      }
      errors.push_back(e);
    }
    const double p1 = std::log2(errors[0] / errors[1]), p2 = std::log2(errors[1] / errors[2]);
    const bool ok = errors[1] < errors[0] && errors[2] < errors[1] && std::min(p1, p2) >= 1.5;
    return Outcome{ok, "errors " + fmt("%.3g", errors[0]) + ", " + fmt("%.3g", errors[1]) + ", " +
                           fmt("%.3g", errors[2]) + "; orders " + fmt("%.2f", p1) + ", " + fmt("%.2f", p2)};
  });

  report(10, "first lemma defect converges at second order", [] {
    std::vector<double> d;
    for (std::size_t n : {64u, 128u, 256u}) {
      std::vector<double> v(n);
      for (std::size_t i = 0; i < n; ++i) v[i] = 1.0 + 0.3 * std::cos(4.0 * std::numbers::pi * i / n);
      d.push_back(lemma1_defect(v, 1.0 / static_cast<double>(n)));
    }
    const double p1 = std::log2(d[0] / d[1]), p2 = std::log2(d[1] / d[2]);
    return Outcome{std::min(p1, p2) >= 1.8, "defects " + fmt("%.4g", d[0]) + ", " + fmt("%.4g", d[1]) + ", " +
                                                fmt("%.4g", d[2]) + "; orders " + fmt("%.3f", p1) + ", " +
                                                fmt("%.3f", p2)};
  });

  report(11, "monotone height run relaxes to the line and matches the slope solver", [] {
    const RunConfig fig1 = named_problem("fig1");
    const HeightField h0 = initial_height(fig1);
    const HeightModel model = height_model(fig1);
    const double big_h = fig1.height_difference;

    const auto traj = run_height(h0, model, fig1.sim);
    require(traj.status == RunStatus::ReachedEnd, ErrorKind::SimulationFailed, traj.failure);
    double line_err = 0.0;
    for (std::size_t j = 0; j < traj.final_values.size(); ++j) {
      line_err = std::max(line_err, std::abs(traj.final_values[j] - big_h * traj.coords[j] / fig1.length));
    }

    // Same evolution in slope variables, compared at matched times.
    const std::size_t m = 256;
    HeightIntegrator heights(h0, model, fig1.sim);
    SimConfig slope_cfg = fig1.sim;
    slope_cfg.convergence_tol = 0.0;
    SlopeIntegrator slopes(rescale_to_unit_alpha(height_to_slope(h0, m), fig1.sim.alpha), 1.0, slope_cfg);
    double cross = 0.0;
    std::string at;
    for (double t : {1e-4, 1e-3, 5e-3, 2e-2}) {
      heights.advance_to(t);
      slopes.advance_to(t);
      const auto from_h = rescale_to_unit_alpha(height_to_slope(heights.field(), m), fig1.sim.alpha);
      const auto from_u = slopes.field();
      double d = 0.0;
      for (std::size_t i = 0; i < m; ++i) d = std::max(d, std::abs(from_h[i] - from_u[i]));
      cross = std::max(cross, d);
      at += (at.empty() ? "" : "/") + fmt("%.2g", d);
    }
    return Outcome{line_err < 1e-2 && cross < 1e-2,
                   "|h - 2x| " + fmt("%.3g", line_err) + " at t " + fmt("%g", traj.final_t) +
                       "; slope mismatch at t=1e-4/1e-3/5e-3/2e-2: " + at};
  });

  report(12, "regularized height runs: flattening and slope plateaus", [] {
    const RunConfig fig5 = named_problem("fig5");
    const auto flat = run_height(initial_height(fig5), height_model(fig5), fig5.sim);
    require(flat.status == RunStatus::ReachedEnd, ErrorKind::SimulationFailed, flat.failure);
    const double h_sup = std::max(std::abs(flat.records.back().h_max), std::abs(flat.records.back().h_min));

    const RunConfig fig6 = named_problem("fig6");
    const HeightField h0 = initial_height(fig6);
    const auto traj = run_height(h0, height_model(fig6), fig6.sim);
    require(traj.status == RunStatus::ReachedEnd, ErrorKind::SimulationFailed, traj.failure);
    const auto& h = traj.final_values;
    const std::size_t n = h.size();
    const double L = fig6.length, dx = L / static_cast<double>(n);
    const auto hi = std::max_element(h.begin(), h.end()), lo = std::min_element(h.begin(), h.end());
    const double big_h = *hi - *lo;
    const double x_hi = dx * static_cast<double>(hi - h.begin()), x_lo = dx * static_cast<double>(lo - h.begin());
    auto periodic_distance = [&](double a, double b) {
      const double d = std::abs(a - b);
      return std::min(d, L - d);
    };
    double sum = 0.0, worst = 0.0;
    std::size_t count = 0;
    for (std::size_t f = 0; f < n; ++f) {
      const double x = dx * (static_cast<double>(f) + 0.5);
      if (periodic_distance(x, x_hi) < 0.05 * L || periodic_distance(x, x_lo) < 0.05 * L) continue;
      const double s = std::abs(h[(f + 1) % n] - h[f]) / dx;
      sum += s;
      ++count;
      worst = std::max(worst, std::abs(s - big_h / (2.0 * L)) / (big_h / (2.0 * L)));
    }
    const double plateau = sum / static_cast<double>(count);
    const double target = big_h / (2.0 * L);
    const double rel = std::abs(plateau - target) / target;
    const bool ok = h_sup < 1e-2 && rel <= 0.15;
    return Outcome{ok, "alpha=0 |h| " + fmt("%.3g", h_sup) + "; alpha=1 H " + fmt("%.5f", big_h) + ", plateau |h_x| " +
                           fmt("%.5f", plateau) + " vs H/(2L) " + fmt("%.5f", target) + " (off " + fmt("%.2f", rel) +
                           ", worst face " + fmt("%.2f", worst) + "); 2H/L " + fmt("%.5f", 2.0 * big_h / L)};
  });

  report(13, "identical configs give bit-identical trajectories", [&] {
    const auto base = fs::temp_directory_path() / "vicinal_acceptance";
    fs::remove_all(base);
    execute(Command::RunSlope, fig3, base / "a");
    execute(Command::RunSlope, fig3, base / "b");
    const std::string a = slurp(base / "a" / "trajectory.csv"), b = slurp(base / "b" / "trajectory.csv");
    return Outcome{!a.empty() && a == b, std::to_string(a.size()) + " bytes, " + (a == b ? "identical" : "different")};
  });

  std::printf("%d of 13 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
