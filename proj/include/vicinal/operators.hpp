#pragma once

#include <span>
#include <vector>

#include "vicinal/banded.hpp"
#include "vicinal/core.hpp"

namespace vicinal {

/// (v_{i-1} - 2 v_i + v_{i+1}) / spacing^2 with periodic indexing.
std::vector<double> second_difference_periodic(std::span<const double> values, double spacing);

/// Second difference applied twice.
std::vector<double> fourth_difference_periodic(std::span<const double> values, double spacing);

/// Closed-form 5-point stencil (1, -4, 6, -4, 1) / spacing^4. Same operator as
/// fourth_difference_periodic, evaluated directly.
std::vector<double> fourth_difference_stencil(std::span<const double> values, double spacing);

/// Eigenvalue of -D2 for the Fourier mode of wavenumber k (radians per unit
/// length): (2 - 2 cos(k spacing)) / spacing^2.
double discrete_laplacian_eigenvalue(double k, double spacing);

/// w_i = u_i^3 + alpha u_i
std::vector<double> chemical_potential_field(const SlopeField& u, double alpha);

/// -u_i^2 * D4(u^3 + alpha u)_i
std::vector<double> slope_rhs(const SlopeField& u, double alpha);

/// Residual of one backward-Euler step in v = 1/u:
///   R(v) = v - v_old - dt * D4 w(1/v).
std::vector<double> slope_residual(std::span<const double> v, std::span<const double> v_old, double alpha,
                                   double dt, double spacing);

/// I + dt * D4 * diag(mobility), the Jacobian of
///   R(v) = v - v_old + dt * D4 phi(v)   with   phi'(v) = mobility.
CyclicBandedMatrix assemble_mobility_jacobian(std::span<const double> mobility, double dt, double spacing);

/// dR/dv of slope_residual at u = 1/v. Cyclic pentadiagonal.
CyclicBandedMatrix assemble_jacobian(const SlopeField& u, double alpha, double dt);

}  // namespace vicinal
