#pragma once

#include <span>

#include "vicinal/core.hpp"

namespace vicinal {

struct DecayFit {
  double rate = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  double t_start = 0.0;
  double t_end = 0.0;
  std::size_t samples = 0;
};

/// r(u) = u^2 (3u^2 + 1)
double mobility_r(double u);

/// sigma = -u*^2 (3u*^2 + alpha) k^4
double dispersion_sigma(double k, double u_star, double alpha);

/// Decay rate of E for a single Fourier mode, 2 |sigma|.
double predicted_energy_rate(double k, double u_star, double alpha);

/// Same rate with k^4 replaced by the squared eigenvalue of the discrete
/// second difference, lambda_k^2.
double predicted_energy_rate_discrete(double k, double u_star, double alpha, double spacing);

/// Least-squares line through (t, ln E) over the last `fraction_tail` of the
/// records whose E exceeds 1e-30; rate = -slope.
/// Errors: InsufficientData below 10 usable samples; NonPositiveEnergy if a
/// record inside the window has E <= 0.
DecayFit fit_decay_rate(const Trajectory& traj, double fraction_tail = 0.25);
DecayFit fit_decay_rate(std::span<const double> t, std::span<const double> energy, double fraction_tail = 0.25);

}  // namespace vicinal
