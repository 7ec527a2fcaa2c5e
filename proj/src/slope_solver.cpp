#include "vicinal/slope_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "vicinal/energetics.hpp"
#include "vicinal/operators.hpp"

namespace vicinal {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double inf_norm(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

struct Residual {
  std::vector<double> r;
  std::vector<double> dphi;
  double noise_floor = 0.0;
};

// R(v) = v - v_old + dt * D4 phi(v). phi is shifted by phi[0] before
// differencing: D4 annihilates constants, and the shift keeps the rounding
// error proportional to the variation of phi rather than its size.
Residual evaluate_residual(const PotentialLaw& law, std::span<const double> v, std::span<const double> v_old,
                           double dt, double spacing) {
  const std::size_t n = v.size();
  Residual out;
  std::vector<double> phi(n);
  out.dphi.resize(n);
  law(v, phi, out.dphi);
  const double shift = phi[0];
  double spread = 0.0;
  for (double& p : phi) {
    p -= shift;
    spread = std::max(spread, std::abs(p));
  }
  const auto d4 = fourth_difference_periodic(phi, spacing);
  out.r.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.r[i] = v[i] - v_old[i] + dt * d4[i];
  const double h2 = spacing * spacing;
  out.noise_floor = 64.0 * kEps * (dt * 16.0 * spread / (h2 * h2) + inf_norm(v));
  return out;
}

std::vector<double> newton(const PotentialLaw& law, std::span<const double> v_old, double dt, double spacing,
                           const SimConfig& cfg, int& iterations) {
  std::vector<double> v(v_old.begin(), v_old.end());
  std::vector<double> trial(v.size());
  iterations = 0;
  for (int iter = 0; iter <= cfg.newton_max_iter; ++iter) {
    Residual res = evaluate_residual(law, v, v_old, dt, spacing);
    const double norm = inf_norm(res.r);
    if (!std::isfinite(norm)) break;
    if (norm <= std::max(cfg.newton_tol, res.noise_floor)) return v;
    if (iter == cfg.newton_max_iter) break;

    const CyclicBandedMatrix jac = assemble_mobility_jacobian(res.dphi, dt, spacing);
    std::vector<double> delta = solve_cyclic_banded(jac, res.r);
    ++iterations;

    // Damp the update until every v stays positive.
    double lambda = 1.0;
    bool ok = false;
    for (int halvings = 0; halvings <= 20; ++halvings) {
      ok = true;
      for (std::size_t i = 0; i < v.size(); ++i) {
        trial[i] = v[i] - lambda * delta[i];
        if (!(trial[i] > 0.0) || !std::isfinite(trial[i])) {
          ok = false;
          break;
        }
      }
      if (ok) break;
      lambda *= 0.5;
    }
    if (!ok) {
      throw Error(ErrorKind::NewtonDiverged, "Newton update leaves v <= 0 after 20 halvings");
    }
    v.swap(trial);
  }
  throw Error(ErrorKind::NewtonDiverged,
              "Newton did not converge in " + std::to_string(cfg.newton_max_iter) + " iterations");
}

}  // namespace

PotentialLaw continuum_law(double alpha) {
  return [alpha](std::span<const double> v, std::span<double> phi, std::span<double> dphi) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      const double u = 1.0 / v[i];
      const double u2 = u * u;
      phi[i] = -(u2 * u + alpha * u);
      dphi[i] = u2 * (3.0 * u2 + alpha);
    }
  };
}

SlopeField SlopeSolverState::field(const PeriodicGrid& grid) const {
  std::vector<double> u(v.size());
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = 1.0 / v[i];
  return SlopeField(grid, std::move(u));
}

SlopeSolverState implicit_step(const SlopeSolverState& state, const PeriodicGrid& grid, double alpha,
                               const SimConfig& cfg) {
  require(state.v.size() == grid.size(), ErrorKind::InvalidArgument, "state does not match grid");
  require(state.dt > 0.0, ErrorKind::InvalidArgument, "implicit step needs dt > 0");
  SlopeSolverState next = state;
  int iters = 0;
  next.v = newton(continuum_law(alpha), state.v, state.dt, grid.spacing(), cfg, iters);
  next.t = state.t + state.dt;
  next.step_count = state.step_count + 1;
  next.newton.last_iterations = iters;
  next.newton.total_iterations += iters;
  return next;
}

double adapt_dt(bool accepted, int newton_iters, const SimConfig& cfg, double dt) {
  if (!accepted) {
    const double half = 0.5 * dt;
    if (half < cfg.dt_min) {
      throw Error(ErrorKind::DtUnderflow, "time step fell below dt_min");
    }
    return std::min(half, cfg.dt_max);
  }
  const double next = newton_iters <= 3 ? 1.5 * dt : dt;
  return std::clamp(next, cfg.dt_min, cfg.dt_max);
}

// SlopeIntegrator ------------------------------------------------------------

SlopeIntegrator::SlopeIntegrator(const SlopeField& u0, double alpha, SimConfig cfg)
    : SlopeIntegrator(u0, alpha, cfg, continuum_law(alpha)) {}

SlopeIntegrator::SlopeIntegrator(const SlopeField& u0, double alpha, SimConfig cfg, PotentialLaw law)
    : grid_(u0.grid()), alpha_(alpha), cfg_(cfg), law_(std::move(law)) {
  cfg_.validate();
  require(alpha >= 0.0, ErrorKind::InvalidArgument, "alpha must be >= 0");
  state_.v.resize(u0.size());
  for (std::size_t i = 0; i < u0.size(); ++i) state_.v[i] = 1.0 / u0[i];
  state_.dt = cfg_.dt_init;
  mass0_ = mass(u0);
  energy_ = energy(state_.v);
  energy0_ = energy_;
}

double SlopeIntegrator::energy(std::span<const double> v) const {
  std::vector<double> w(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double u = 1.0 / v[i];
    w[i] = u * u * u + alpha_ * u;
  }
  const auto d2 = second_difference_periodic(w, grid_.spacing());
  double acc = 0.0;
  for (double x : d2) acc += x * x;
  return acc * grid_.spacing();
}

DiagnosticsRecord SlopeIntegrator::diagnostics(double dt_used) const {
  const SlopeField u = field();
  DiagnosticsRecord rec;
  rec.t = state_.t;
  rec.F = lyapunov_F(u, alpha_);
  rec.E = energy_;
  rec.mass = mass(u);
  rec.u_min = u.min();
  rec.lower_bound = lower_bound_J(rec.E, mass0_);
  rec.dt = dt_used;
  return rec;
}

double SlopeIntegrator::distance_to_uniform() const {
  double total = 0.0;
  for (double x : state_.v) total += x;
  const double u_star = 1.0 / (total * grid_.spacing() / grid_.period());
  double worst = 0.0;
  for (double x : state_.v) worst = std::max(worst, std::abs(1.0 / x - u_star));
  return worst;
}

double SlopeIntegrator::step(double t_target) {
  for (;;) {
    const double remaining = t_target - state_.t;
    // absorb rounding slivers left by summing fixed steps
    const bool last = remaining <= state_.dt * (1.0 + 1e-9);
    const double dt = last ? remaining : state_.dt;
    int iters = 0;
    bool accepted = false;
    std::vector<double> v_new;
    double e_new = 0.0;
    try {
      v_new = newton(law_, state_.v, dt, grid_.spacing(), cfg_, iters);
      e_new = energy(v_new);
      accepted = e_new <= energy_ + cfg_.energy_guard * energy0_;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NewtonDiverged && e.kind() != ErrorKind::SingularMatrix) throw;
    }
    if (!accepted) {
      ++state_.newton.rejected_steps;
      // Halving a truncated final step shrinks the step actually tried.
      state_.dt = adapt_dt(false, iters, cfg_, std::min(state_.dt, std::max(dt, cfg_.dt_min)));
      continue;
    }
    state_.v = std::move(v_new);
    state_.t = last ? t_target : state_.t + dt;
    ++state_.step_count;
    state_.newton.last_iterations = iters;
    state_.newton.total_iterations += iters;
    energy_ = e_new;
    if (!last || dt >= state_.dt) state_.dt = adapt_dt(true, iters, cfg_, state_.dt);
    return dt;
  }
}

void SlopeIntegrator::advance_to(double t_target, const std::function<bool(double)>& on_step) {
  while (state_.t < t_target) {
    const double dt = step(t_target);
    if (on_step && !on_step(dt)) return;
  }
}

// Driver -----------------------------------------------------------------------

Trajectory run_slope_with_law(const SlopeField& u0, double alpha, const SimConfig& cfg, PotentialLaw law) {
  SlopeIntegrator integ(u0, alpha, cfg, std::move(law));
  Trajectory traj;
  for (std::size_t i = 0; i < u0.size(); ++i) traj.coords.push_back(u0.grid().coord(i));

  long records_written = 0;
  auto record = [&](double dt_used) {
    traj.append(integ.diagnostics(dt_used));
    if (cfg.snapshot_stride > 0 && records_written % cfg.snapshot_stride == 0) {
      const SlopeField u = integ.field();
      traj.snapshots.push_back({integ.state().t, {u.values().begin(), u.values().end()}});
    }
    ++records_written;
  };
  record(0.0);

  double last_dt = 0.0;
  bool last_recorded = true;
  try {
    integ.advance_to(cfg.t_end, [&](double dt_used) {
      last_dt = dt_used;
      last_recorded = false;
      if (integ.state().step_count % cfg.output_stride == 0) {
        record(dt_used);
        last_recorded = true;
      }
      if (cfg.convergence_tol > 0.0 && integ.distance_to_uniform() < cfg.convergence_tol) {
        traj.status = RunStatus::Converged;
        return false;
      }
      return true;
    });
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::DtUnderflow) throw;
    traj.status = RunStatus::Failed;
    traj.failure = std::string(to_string(ErrorKind::SimulationFailed)) + ": " + e.what();
  }
  if (!last_recorded) record(last_dt);

  const SlopeField u = integ.field();
  traj.final_t = integ.state().t;
  traj.final_values.assign(u.values().begin(), u.values().end());
  return traj;
}

Trajectory run_slope(const SlopeField& u0, double alpha, const SimConfig& cfg) {
  return run_slope_with_law(u0, alpha, cfg, continuum_law(alpha));
}

}  // namespace vicinal
