#include "support.hpp"

#include <limits>

#include "vicinal/operators.hpp"

using namespace vicinal;
using doctest::Approx;

TEST_CASE("second difference") {
  const std::vector<double> c(9, 3.5);
  CHECK(testing::max_abs(second_difference_periodic(c, 0.1)) == 0.0);

  std::vector<double> e(7, 0.0);
  e[3] = 1.0;
  const auto r = second_difference_periodic(e, 1.0);
  CHECK(r == std::vector<double>{0, 0, 1, -2, 1, 0, 0});

  e.assign(7, 0.0);
  e[0] = 1.0;
  CHECK(second_difference_periodic(e, 1.0) == std::vector<double>{-2, 1, 0, 0, 0, 0, 1});
}

TEST_CASE("second difference Fourier eigenvalue") {
  for (std::size_t n : {8u, 32u, 100u}) {
    const double dx = 1.0 / static_cast<double>(n);
    const auto v = testing::sine_mode(n, 1);
    const double lambda = (2.0 - 2.0 * std::cos(2.0 * std::numbers::pi / static_cast<double>(n))) / (dx * dx);
    CHECK(discrete_laplacian_eigenvalue(2.0 * std::numbers::pi, dx) == Approx(lambda).epsilon(1e-14));
    const auto r = second_difference_periodic(v, dx);
    const double tol = 16.0 * std::numeric_limits<double>::epsilon() / (dx * dx) + 1e-12 * lambda;
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(r[i] + lambda * v[i]) <= tol);
  }
}

TEST_CASE("fourth difference impulse is the composed stencil") {
  std::vector<double> e(9, 0.0);
  e[4] = 1.0;
  CHECK(fourth_difference_periodic(e, 1.0) == std::vector<double>{0, 0, 1, -4, 6, -4, 1, 0, 0});
  CHECK(fourth_difference_stencil(e, 1.0) == std::vector<double>{0, 0, 1, -4, 6, -4, 1, 0, 0});
  e.assign(9, 0.0);
  e[0] = 1.0;
  CHECK(fourth_difference_periodic(e, 1.0) == std::vector<double>{6, -4, 1, 0, 0, 0, 0, 1, -4});
  CHECK(testing::max_abs(fourth_difference_periodic(std::vector<double>(6, -2.0), 0.3)) == 0.0);
}

TEST_CASE("fourth difference amplifies Fourier modes by lambda squared") {
  for (std::size_t n : {16u, 64u, 256u}) {
    for (int k : {1, 3, 5}) {
      CAPTURE(n);
      CAPTURE(k);
      const double dx = 1.0 / static_cast<double>(n);
      const double lambda = discrete_laplacian_eigenvalue(2.0 * std::numbers::pi * k, dx);
      const auto v = testing::sine_mode(n, k);
      const auto r = fourth_difference_periodic(v, dx);
      // cancellation in the stencil costs about 16 eps / dx^4 per entry
      const double tol = 64.0 * std::numeric_limits<double>::epsilon() / std::pow(dx, 4) + 1e-12 * lambda * lambda;
      for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(r[i] - lambda * lambda * v[i]) <= tol);
    }
  }
}

TEST_CASE("composed and closed-form fourth differences agree") {
  for (int trial = 0; trial < 10; ++trial) {
    const auto v = testing::random_values(37);
    const auto a = fourth_difference_periodic(v, 0.05);
    const auto b = fourth_difference_stencil(v, 0.05);
    CHECK(testing::max_abs_diff(a, b) <= 1e-10 * testing::max_abs(a));
  }
}

TEST_CASE("chemical potential field") {
  const PeriodicGrid g(5, 1.0);
  CHECK(chemical_potential_field(SlopeField(g, std::vector<double>(5, 1.0)), 1.0)[2] == 2.0);
  CHECK(chemical_potential_field(SlopeField(g, std::vector<double>(5, 2.0)), 0.0)[2] == 8.0);
  CHECK(chemical_potential_field(SlopeField(g, std::vector<double>(5, 3.0)), 1.0)[2] == 30.0);
}

TEST_CASE("slope rhs vanishes on constants") {
  const SlopeField u(PeriodicGrid(16, 1.0), std::vector<double>(16, 0.27));
  CHECK(testing::max_abs(slope_rhs(u, 1.0)) == 0.0);
  CHECK(testing::max_abs(slope_rhs(u, 0.0)) == 0.0);
}

TEST_CASE("slope rhs linearizes to the fourth-order mode decay") {
  const std::size_t n = 64;
  const double delta = 1e-4;
  const PeriodicGrid g(n, 1.0);
  const double lambda = discrete_laplacian_eigenvalue(2.0 * std::numbers::pi, g.spacing());
  const auto s = testing::sine_mode(n, 1);
  std::vector<double> up(n), um(n);
  for (std::size_t i = 0; i < n; ++i) {
    up[i] = 1.0 + delta * s[i];
    um[i] = 1.0 - delta * s[i];
  }
  // the odd part of the response cancels the quadratic term
  const auto rp = slope_rhs(SlopeField(g, up), 1.0);
  const auto rm = slope_rhs(SlopeField(g, um), 1.0);
  const double amplitude = 4.0 * lambda * lambda * delta;
  for (std::size_t i = 0; i < n; ++i) {
    CHECK(std::abs(0.5 * (rp[i] - rm[i]) + amplitude * s[i]) <= 1e-5 * amplitude);
  }
}

TEST_CASE("jacobian at dt zero is the identity") {
  const SlopeField u(PeriodicGrid(10, 1.0), testing::random_positive(10));
  const auto j = assemble_jacobian(u, 1.0, 0.0);
  for (std::size_t r = 0; r < 10; ++r) {
    for (std::size_t c = 0; c < 10; ++c) CHECK(j(r, c) == (r == c ? 1.0 : 0.0));
  }
}

TEST_CASE("jacobian of a constant state is circulant") {
  const SlopeField u(PeriodicGrid(12, 1.0), std::vector<double>(12, 0.6));
  const auto j = assemble_jacobian(u, 1.0, 1e-4);
  for (std::size_t r = 1; r < 12; ++r) {
    for (std::ptrdiff_t d = -2; d <= 2; ++d) CHECK(j.band(r, d) == j.band(0, d));
  }
}

TEST_CASE("jacobian matches finite differences of the residual") {
  for (double alpha : {0.0, 1.0, 2.5}) {
    CAPTURE(alpha);
    const std::size_t n = 24;
    const PeriodicGrid g(n, 1.0);
    const double dt = 1e-5;
    const auto u = testing::random_positive(n, 0.4, 1.5);
    std::vector<double> v(n), v_old(n);
    for (std::size_t i = 0; i < n; ++i) {
      v[i] = 1.0 / u[i];
      v_old[i] = v[i] * 1.01;
    }
    const auto jac = assemble_jacobian(SlopeField(g, u), alpha, dt);
    const auto dir = testing::random_values(n);
    const auto jv = jac.multiply(dir);
    const double eps = 1e-6;
    std::vector<double> vp(n), vm(n);
    for (std::size_t i = 0; i < n; ++i) {
      vp[i] = v[i] + eps * dir[i];
      vm[i] = v[i] - eps * dir[i];
    }
    const auto rp = slope_residual(vp, v_old, alpha, dt, g.spacing());
    const auto rm = slope_residual(vm, v_old, alpha, dt, g.spacing());
    std::vector<double> fd(n);
    for (std::size_t i = 0; i < n; ++i) fd[i] = (rp[i] - rm[i]) / (2.0 * eps);
    CHECK(testing::max_abs_diff(fd, jv) <= 1e-6 * testing::max_abs(jv));
  }
}

TEST_CASE("residual is zero for a constant state") {
  const std::vector<double> v(10, 2.0);
  CHECK(testing::max_abs(slope_residual(v, v, 1.0, 0.1, 0.1)) == 0.0);
}
