#include "vicinal/operators.hpp"

#include <cmath>

namespace vicinal {

namespace {

constexpr double kStencil[5] = {1.0, -4.0, 6.0, -4.0, 1.0};

inline std::size_t wrap(std::ptrdiff_t i, std::ptrdiff_t n) {
  return static_cast<std::size_t>(((i % n) + n) % n);
}

}  // namespace

std::vector<double> second_difference_periodic(std::span<const double> values, double spacing) {
  require(values.size() >= 3, ErrorKind::InvalidArgument, "second difference needs at least 3 samples");
  const std::size_t n = values.size();
  const double inv = 1.0 / (spacing * spacing);
  std::vector<double> out(n);
  out[0] = (values[n - 1] - 2.0 * values[0] + values[1]) * inv;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    out[i] = (values[i - 1] - 2.0 * values[i] + values[i + 1]) * inv;
  }
  out[n - 1] = (values[n - 2] - 2.0 * values[n - 1] + values[0]) * inv;
  return out;
}

std::vector<double> fourth_difference_periodic(std::span<const double> values, double spacing) {
  require(values.size() >= 5, ErrorKind::InvalidArgument, "fourth difference needs at least 5 samples");
  const auto d2 = second_difference_periodic(values, spacing);
  return second_difference_periodic(d2, spacing);
}

std::vector<double> fourth_difference_stencil(std::span<const double> values, double spacing) {
  require(values.size() >= 5, ErrorKind::InvalidArgument, "fourth difference needs at least 5 samples");
  const auto n = static_cast<std::ptrdiff_t>(values.size());
  const double h2 = spacing * spacing;
  const double inv = 1.0 / (h2 * h2);
  std::vector<double> out(values.size());
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::ptrdiff_t d = -2; d <= 2; ++d) acc += kStencil[d + 2] * values[wrap(i + d, n)];
    out[static_cast<std::size_t>(i)] = acc * inv;
  }
  return out;
}

double discrete_laplacian_eigenvalue(double k, double spacing) {
  return (2.0 - 2.0 * std::cos(k * spacing)) / (spacing * spacing);
}

std::vector<double> chemical_potential_field(const SlopeField& u, double alpha) {
  std::vector<double> w(u.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double ui = u[i];
    w[i] = ui * ui * ui + alpha * ui;
  }
  return w;
}

std::vector<double> slope_rhs(const SlopeField& u, double alpha) {
  auto d4 = fourth_difference_periodic(chemical_potential_field(u, alpha), u.grid().spacing());
  for (std::size_t i = 0; i < d4.size(); ++i) d4[i] *= -u[i] * u[i];
  return d4;
}

std::vector<double> slope_residual(std::span<const double> v, std::span<const double> v_old, double alpha,
                                   double dt, double spacing) {
  require(v.size() == v_old.size(), ErrorKind::InvalidArgument, "residual size mismatch");
  std::vector<double> w(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double u = 1.0 / v[i];
    w[i] = u * u * u + alpha * u;
  }
  const auto d4 = fourth_difference_periodic(w, spacing);
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) r[i] = v[i] - v_old[i] - dt * d4[i];
  return r;
}

CyclicBandedMatrix assemble_mobility_jacobian(std::span<const double> mobility, double dt, double spacing) {
  const std::size_t n = mobility.size();
  const double h2 = spacing * spacing;
  const double scale = dt / (h2 * h2);
  CyclicBandedMatrix jac = CyclicBandedMatrix::identity(n, 2);
  const auto nn = static_cast<std::ptrdiff_t>(n);
  for (std::ptrdiff_t i = 0; i < nn; ++i) {
    for (std::ptrdiff_t d = -2; d <= 2; ++d) {
      jac.band(static_cast<std::size_t>(i), d) += scale * kStencil[d + 2] * mobility[wrap(i + d, nn)];
    }
  }
  return jac;
}

CyclicBandedMatrix assemble_jacobian(const SlopeField& u, double alpha, double dt) {
  // d/dv [-(u^3 + alpha u)] at u = 1/v is u^2 (3u^2 + alpha).
  std::vector<double> mobility(u.size());
  for (std::size_t i = 0; i < mobility.size(); ++i) {
    const double u2 = u[i] * u[i];
    mobility[i] = u2 * (3.0 * u2 + alpha);
  }
  return assemble_mobility_jacobian(mobility, dt, u.grid().spacing());
}

}  // namespace vicinal
