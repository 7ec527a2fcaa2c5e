#pragma once

#include <functional>
#include <span>
#include <vector>

#include "vicinal/core.hpp"

namespace vicinal {

/// Evaluates phi(v) and phi'(v) elementwise for the conservative evolution
///   v_t = -D4 phi(v),   v = 1/u.
/// The continuum slope equation has phi(v) = -(v^-3 + alpha v^-1); the step
/// ODEs have phi(v) = f'(v) with f the step interaction law. Both are the
/// same function, computed along different routes.
using PotentialLaw =
    std::function<void(std::span<const double> v, std::span<double> phi, std::span<double> dphi)>;

PotentialLaw continuum_law(double alpha);

struct NewtonStats {
  int last_iterations = 0;
  long total_iterations = 0;
  long rejected_steps = 0;
};

struct SlopeSolverState {
  std::vector<double> v;
  double t = 0.0;
  double dt = 0.0;
  long step_count = 0;
  NewtonStats newton;

  SlopeField field(const PeriodicGrid& grid) const;
};

/// One backward-Euler step of size state.dt solved by damped Newton.
/// Throws Error(NewtonDiverged) if the iteration fails.
SlopeSolverState implicit_step(const SlopeSolverState& state, const PeriodicGrid& grid, double alpha,
                               const SimConfig& cfg);

/// Step-size rule: halve on rejection, grow by 1.5 after an easy accepted
/// step (<= 3 Newton iterations), otherwise keep; clamp to [dt_min, dt_max].
/// Throws Error(DtUnderflow) when halving drops below dt_min.
double adapt_dt(bool accepted, int newton_iters, const SimConfig& cfg, double dt);

/// Adaptive integrator for the conservative slope evolution. Owns its state.
class SlopeIntegrator {
 public:
  SlopeIntegrator(const SlopeField& u0, double alpha, SimConfig cfg);
  SlopeIntegrator(const SlopeField& u0, double alpha, SimConfig cfg, PotentialLaw law);

  const SlopeSolverState& state() const noexcept { return state_; }
  const PeriodicGrid& grid() const noexcept { return grid_; }
  SlopeField field() const { return state_.field(grid_); }
  double reference_mass() const noexcept { return mass0_; }
  double initial_energy() const noexcept { return energy0_; }

  DiagnosticsRecord diagnostics(double dt_used) const;

  /// ||u - 1/mass||_inf
  double distance_to_uniform() const;

  /// Attempts one step of size min(state.dt, t_target - t), retrying with
  /// smaller steps until one is accepted. Returns the step size used.
  double step(double t_target);

  /// Advances to t_target. Every accepted step is passed to `on_step` and the
  /// loop stops early when it returns false.
  void advance_to(double t_target, const std::function<bool(double dt_used)>& on_step = {});

 private:
  double energy(std::span<const double> v) const;

  PeriodicGrid grid_;
  double alpha_;
  SimConfig cfg_;
  PotentialLaw law_;
  SlopeSolverState state_;
  double mass0_;
  double energy0_;
  double energy_;
};

/// Integrates from u0 to cfg.t_end, or until ||u - 1/mass||_inf drops below
/// cfg.convergence_tol. Step-size collapse ends the run with
/// RunStatus::Failed and the partial trajectory.
Trajectory run_slope(const SlopeField& u0, double alpha, const SimConfig& cfg);

/// Same driver with an explicit potential law (used by the step-train model).
Trajectory run_slope_with_law(const SlopeField& u0, double alpha, const SimConfig& cfg, PotentialLaw law);

}  // namespace vicinal
