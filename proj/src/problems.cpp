#include "vicinal/problems.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "vicinal/analysis.hpp"
#include "vicinal/bcf.hpp"
#include "vicinal/energetics.hpp"
#include "vicinal/slope_solver.hpp"

namespace vicinal {

namespace {

namespace fs = std::filesystem;

std::string num(double v) { return format_double(v); }

void add_common(ReportLines& r, Command command, const RunConfig& cfg) {
  r.push_back({"command", std::string(to_string(command))});
  r.push_back({"problem", cfg.problem});
  r.push_back({"kind", std::string(to_string(cfg.kind))});
  r.push_back({"alpha", num(cfg.sim.alpha)});
  r.push_back({"n", std::to_string(cfg.n)});
  r.push_back({"t_end", num(cfg.sim.t_end)});
  r.push_back({"dt_max", num(cfg.sim.dt_max)});
  r.push_back({"newton_tol", num(cfg.sim.newton_tol)});
}

void add_slope_summary(ReportLines& r, const RunConfig& cfg, const Trajectory& traj) {
  r.push_back({"period", num(cfg.period)});
  r.push_back({"status", std::string(to_string(traj.status))});
  if (!traj.failure.empty()) r.push_back({"failure", traj.failure});
  r.push_back({"final_t", num(traj.final_t)});
  r.push_back({"records", std::to_string(traj.records.size())});
  if (traj.records.empty()) return;
  const auto& first = traj.records.front();
  const auto& last = traj.records.back();
  double drift = 0.0;
  for (const auto& rec : traj.records) drift = std::max(drift, std::abs(rec.mass - first.mass) / first.mass);
  r.push_back({"mass0", num(first.mass)});
  r.push_back({"max_mass_drift", num(drift)});
  r.push_back({"E0", num(first.E)});
  r.push_back({"E_final", num(last.E)});
  r.push_back({"F_final", num(last.F)});
  r.push_back({"u_min_final", num(last.u_min)});
  r.push_back({"max_t_times_E", num(max_time_energy_product(traj.records))});
  const double u_star = cfg.period / first.mass;
  double dist = 0.0;
  for (double u : traj.final_values) dist = std::max(dist, std::abs(u - u_star));
  r.push_back({"u_star", num(u_star)});
  r.push_back({"final_distance_to_uniform", num(dist)});
}

void write_slope_outputs(const Trajectory& traj, const fs::path& out_dir) {
  write_trajectory_csv(traj, out_dir / "trajectory.csv");
  std::vector<Snapshot> snaps = traj.snapshots;
  if (snaps.empty() || snaps.back().t != traj.final_t) snaps.push_back({traj.final_t, traj.final_values});
  write_snapshot_csv(snaps, traj.coords, out_dir / "snapshots.csv");
}

void require_kind(const RunConfig& cfg, bool ok, Command command) {
  if (!ok) {
    throw Error(ErrorKind::InvalidArgument, std::string(to_string(command)) + " cannot run problem '" + cfg.problem +
                                                "' of kind " + std::string(to_string(cfg.kind)));
  }
}

RunOutcome finish(ReportLines report, RunStatus status, std::string failure, const fs::path& out_dir) {
  write_report(report, out_dir / "report.txt");
  return RunOutcome{status, std::move(failure), std::move(report)};
}

}  // namespace

std::string_view to_string(Command command) {
  switch (command) {
    case Command::RunSlope: return "run-slope";
    case Command::RunHeight: return "run-height";
    case Command::RunBcf: return "run-bcf";
    case Command::Analyze: return "analyze";
    case Command::Sweep: return "sweep";
    case Command::Verify: return "verify";
  }
  return "unknown";
}

Command parse_command(std::string_view name) {
  for (Command c : {Command::RunSlope, Command::RunHeight, Command::RunBcf, Command::Analyze, Command::Sweep,
                    Command::Verify}) {
    if (to_string(c) == name) return c;
  }
  throw Error(ErrorKind::InvalidArgument, "unknown command '" + std::string(name) + "'");
}

SlopeField initial_slope(const RunConfig& cfg) {
  const PeriodicGrid grid(cfg.n, cfg.period);
  switch (cfg.initial) {
    case SlopeInitial::Fig2: return sample_initial_slope(Fig2Profile{}, grid);
    case SlopeInitial::Constant: return sample_initial_slope(ConstantProfile{cfg.base}, grid);
    case SlopeInitial::Perturbed:
      return sample_initial_slope(PerturbedProfile{cfg.base, cfg.amplitude, cfg.wavenumber}, grid);
  }
  throw Error(ErrorKind::InvalidArgument, "unknown slope initial data");
}

HeightField initial_height(const RunConfig& cfg) {
  if (cfg.kind == ProblemKind::MonotoneHeight) {
    return fig1_height(IntervalGrid(cfg.n, cfg.length), cfg.height_difference, cfg.fig1_coefficient);
  }
  require(cfg.kind == ProblemKind::RegularizedHeight, ErrorKind::InvalidArgument,
          "problem '" + cfg.problem + "' has no height initial data");
  return sine_height(PeriodicGrid(cfg.n, cfg.length), cfg.height_amplitude);
}

HeightModel height_model(const RunConfig& cfg) {
  HeightModel m;
  m.variant = cfg.kind == ProblemKind::MonotoneHeight ? HeightVariant::Monotone : HeightVariant::Regularized;
  m.alpha = cfg.sim.alpha;
  m.eps = cfg.sim.eps_mobility;
  m.delta = cfg.sim.delta_log;
  m.slope_floor = cfg.sim.slope_floor;
  return m;
}

Command natural_command(const RunConfig& cfg) {
  return cfg.kind == ProblemKind::Slope ? Command::RunSlope : Command::RunHeight;
}

RunOutcome execute(Command command, const RunConfig& cfg, const fs::path& out_dir) {
  validate(cfg);
  ensure_directory(out_dir);
  ReportLines report;
  add_common(report, command, cfg);

  switch (command) {
    case Command::RunSlope:
    case Command::Analyze: {
      require_kind(cfg, cfg.kind == ProblemKind::Slope, command);
      const Trajectory traj = run_slope(initial_slope(cfg), cfg.sim.alpha, cfg.sim);
      write_slope_outputs(traj, out_dir);
      add_slope_summary(report, cfg, traj);
      if (command == Command::Analyze && !traj.records.empty()) {
        const double k = 2.0 * std::numbers::pi * (cfg.initial == SlopeInitial::Perturbed ? cfg.wavenumber : 1) /
                         cfg.period;
        const double u_star = cfg.period / traj.records.front().mass;
        const double spacing = cfg.period / static_cast<double>(cfg.n);
        report.push_back({"wavenumber_k", num(k)});
        report.push_back({"predicted_rate_continuum", num(predicted_energy_rate(k, u_star, cfg.sim.alpha))});
        report.push_back(
            {"predicted_rate_discrete", num(predicted_energy_rate_discrete(k, u_star, cfg.sim.alpha, spacing))});
        double u_low = traj.records.front().u_min;
        for (const auto& r : traj.records) u_low = std::min(u_low, r.u_min);
        report.push_back({"beta_bound", num(decay_constant_beta(u_low))});
        try {
          const DecayFit fit = fit_decay_rate(traj, cfg.fraction_tail);
          report.push_back({"fitted_rate", num(fit.rate)});
          report.push_back({"fit_r_squared", num(fit.r_squared)});
          report.push_back({"fit_window", num(fit.t_start) + " " + num(fit.t_end)});
          report.push_back({"fit_samples", std::to_string(fit.samples)});
        } catch (const Error& e) {
          report.push_back({"fit_error", std::string(to_string(e.kind())) + ": " + e.what()});
        }
      }
      return finish(std::move(report), traj.status, traj.failure, out_dir);
    }
    case Command::RunBcf: {
      require_kind(cfg, cfg.kind == ProblemKind::Slope, command);
      const SlopeField u0 = initial_slope(cfg);
      const double a = cfg.period / static_cast<double>(cfg.n);
      const Trajectory traj = integrate_bcf(u0.values(), a, InteractionLaw(cfg.sim.alpha), cfg.sim.t_end, cfg.sim);
      write_slope_outputs(traj, out_dir);
      report.push_back({"steps", std::to_string(cfg.n)});
      report.push_back({"step_height", num(a)});
      add_slope_summary(report, cfg, traj);
      return finish(std::move(report), traj.status, traj.failure, out_dir);
    }
    case Command::RunHeight: {
      require_kind(cfg, cfg.kind != ProblemKind::Slope, command);
      const HeightModel model = height_model(cfg);
      const HeightTrajectory traj = run_height(initial_height(cfg), model, cfg.sim);
      write_height_csv(traj, out_dir / "height_trajectory.csv");
      std::vector<Snapshot> snaps = traj.snapshots;
      if (snaps.empty() || snaps.back().t != traj.final_t) snaps.push_back({traj.final_t, traj.final_values});
      write_snapshot_csv(snaps, traj.coords, out_dir / "snapshots.csv");
      report.push_back({"variant", std::string(to_string(model.variant))});
      report.push_back({"length", num(cfg.length)});
      if (model.variant == HeightVariant::Monotone) {
        report.push_back({"height_difference", num(cfg.height_difference)});
      } else {
        report.push_back({"eps", num(model.eps)});
        report.push_back({"delta", num(model.delta)});
      }
      report.push_back({"status", std::string(to_string(traj.status))});
      if (!traj.failure.empty()) report.push_back({"failure", traj.failure});
      report.push_back({"final_t", num(traj.final_t)});
      report.push_back({"records", std::to_string(traj.records.size())});
      if (!traj.records.empty()) {
        const auto& last = traj.records.back();
        report.push_back({"G0", num(traj.records.front().G)});
        report.push_back({"G_final", num(last.G)});
        report.push_back({"extrema_difference", num(last.h_max - last.h_min)});
        report.push_back({"slope_min_final", num(last.slope_min)});
        report.push_back({"slope_max_final", num(last.slope_max)});
      }
      return finish(std::move(report), traj.status, traj.failure, out_dir);
    }
    case Command::Sweep:
    case Command::Verify:
      break;
  }
  throw Error(ErrorKind::InvalidArgument, std::string(to_string(command)) + " is not a single-run command");
}

}  // namespace vicinal
