#pragma once

#include <span>

#include "vicinal/core.hpp"

namespace vicinal {

/// Conserved quantity sum_i spacing / u_i, the midpoint rule for int 1/u dh.
/// Equals the train length L.
double mass(const SlopeField& u);

/// sum_i spacing * (u_i^2 / 2 + alpha ln u_i). With alpha = 1 this is the
/// first Lyapunov functional; its dissipation rate is exactly E.
double lyapunov_F(const SlopeField& u, double alpha = 1.0);

/// sum_i spacing * (D2 (u^3 + alpha u))_i^2. With alpha = 0 this reduces to
/// the energy int ((u^3)_hh)^2 of the pure cubic model.
double lyapunov_E(const SlopeField& u, double alpha);

/// Energy-dependent lower bound for min u:
///   1 / (3 L^3 E)                       if E >= 2 / L^2
///   1 / (2L) - sqrt(E) / (3 sqrt 2)     otherwise.
/// The two branches meet at E = 2/L^2 with value 1/(6L).
double lower_bound_J(double E, double L);

/// Exponential decay constant 2 u^2 + 6 u^4 for a given slope floor.
double decay_constant_beta(double u_min);

/// |sum h (D2(v^3))^2 - 9 sum h v^4 (D2 v)^2|; zero in the continuum for
/// every periodic v, so on a grid it measures the truncation error.
double lemma1_defect(std::span<const double> v, double spacing);

/// min_i [ (2/3) ||D2 v||_2 d(h_i, h*)^{3/2} - (v_i - v_min) ] with d the
/// periodic distance to the minimiser h*. Non-negative certifies the
/// modulus-of-continuity bound on this grid; the minimiser itself
/// contributes exactly 0, so the value is never positive.
double lemma2_margin(std::span<const double> v, double spacing);

struct EnergyReport {
  double F = 0.0;
  double E = 0.0;
  double mass = 0.0;
  double u_min = 0.0;
  double lower_bound = 0.0;
  double beta = 0.0;
};

/// F uses the same alpha as E so that dF/dt = -E holds for every alpha.
EnergyReport energy_report(const SlopeField& u, double alpha, double L_ref);

/// max over records of (t - t_0) E(t); bounded along any trajectory with
/// positive u, with a constant that depends on the data.
double max_time_energy_product(std::span<const DiagnosticsRecord> records);

}  // namespace vicinal
