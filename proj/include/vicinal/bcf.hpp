#pragma once

#include <span>
#include <vector>

#include "vicinal/core.hpp"
#include "vicinal/slope_solver.hpp"

namespace vicinal {

/// Local step interaction f(r) = 1/(2 r^2) - alpha ln r, with r the terrace
/// width in units of the step height.
struct InteractionLaw {
  explicit InteractionLaw(double alpha_ = 0.0);
  double alpha;
};

double f_value(double r, const InteractionLaw& law);
double f_prime(double r, const InteractionLaw& law);
double f_second(double r, const InteractionLaw& law);

/// du_i/dt = (u_i^2 / a^4) [f'(1/u_{i-2}) - 4 f'(1/u_{i-1}) + 6 f'(1/u_i)
///                          - 4 f'(1/u_{i+1}) + f'(1/u_{i+2})]
std::vector<double> slope_ode_rhs(std::span<const double> u, double a, const InteractionLaw& law);

/// a * sum_i f((x_{i+1} - x_i) / a) over one period.
double step_energy(const StepTrain& train, const InteractionLaw& law);

/// mu_i = dE/dx_i = f'((x_i - x_{i-1})/a) - f'((x_{i+1} - x_i)/a).
std::vector<double> chemical_potentials(const StepTrain& train, const InteractionLaw& law);

/// dx_i/dt = (mu_{i+1} - 2 mu_i + mu_{i-1}) / a^3. The a^-3 prefactor makes
/// the induced slope dynamics exactly slope_ode_rhs.
std::vector<double> step_velocities(const StepTrain& train, const InteractionLaw& law);

/// phi(v) = f'(v) for the conservative integrator; v = 1/u is the terrace
/// width in step-height units.
PotentialLaw step_law(const InteractionLaw& law);

/// Integrates the step ODEs in slope variables with the implicit solver.
/// The slopes live on a periodic grid of N points and period N * a.
Trajectory integrate_bcf(std::span<const double> slopes, double a, const InteractionLaw& law, double t_end,
                         const SimConfig& cfg);
Trajectory integrate_bcf(const StepTrain& train, const InteractionLaw& law, double t_end, const SimConfig& cfg);

}  // namespace vicinal
