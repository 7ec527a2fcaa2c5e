#include "support.hpp"

#include "vicinal/core.hpp"

using namespace vicinal;
using doctest::Approx;

TEST_CASE("periodic grid spacing") {
  CHECK(make_periodic_grid(8, 1.0).spacing() == 0.125);
  CHECK(make_periodic_grid(256, 1.0).spacing() == 1.0 / 256.0);
  const PeriodicGrid g(10, 3.7);
  CHECK(g.spacing() * 10 == Approx(3.7).epsilon(1e-15));
  CHECK(g.coord(3) == Approx(3 * 0.37));
}

TEST_CASE("periodic grid rejects bad sizes") {
  CHECK_THROWS_KIND(make_periodic_grid(4, 1.0), ErrorKind::InvalidArgument);
  CHECK_THROWS_KIND(make_periodic_grid(8, 0.0), ErrorKind::InvalidArgument);
  CHECK_THROWS_KIND(make_periodic_grid(8, -1.0), ErrorKind::InvalidArgument);
}

TEST_CASE("interval grid spans the domain") {
  const IntervalGrid g(8, 2.0);
  CHECK(g.nodes() == 10);
  CHECK(g.spacing() == Approx(2.0 / 9.0));
  CHECK(g.coord(9) == Approx(2.0));
  CHECK_THROWS_KIND(IntervalGrid(3, 1.0), ErrorKind::InvalidArgument);
}

TEST_CASE("slope field needs strictly positive samples") {
  const PeriodicGrid g(5, 1.0);
  CHECK_NOTHROW(SlopeField(g, {1, 2, 3, 4, 5}));
  CHECK_THROWS_KIND(SlopeField(g, {1, 2, 0, 4, 5}), ErrorKind::InvalidInitialData);
  CHECK_THROWS_KIND(SlopeField(g, {1, 2, -1, 4, 5}), ErrorKind::InvalidInitialData);
  CHECK_THROWS_KIND(SlopeField(g, {1, 2, std::nan(""), 4, 5}), ErrorKind::InvalidInitialData);
  CHECK_THROWS_KIND(SlopeField(g, {1, 2, 3}), ErrorKind::InvalidArgument);
}

TEST_CASE("slope field periodic access") {
  const SlopeField u(PeriodicGrid(5, 1.0), {1, 2, 3, 4, 5});
  CHECK(u.at(-1) == 5);
  CHECK(u.at(5) == 1);
  CHECK(u.at(-7) == 4);
  CHECK(u.min() == 1);
  CHECK(u.max() == 5);
}

TEST_CASE("figure 2 initial slope") {
  CHECK(fig2_slope(0.5) == Approx(0.07).epsilon(1e-14));
  // numpy: 0.7 - 0.63 * exp(-5)
  CHECK(fig2_slope(0.0) == Approx(0.6957550933905761).epsilon(1e-15));
  const auto u = sample_initial_slope(Fig2Profile{}, PeriodicGrid(8, 1.0));
  CHECK(u[4] == Approx(0.07));
  CHECK(u[0] == Approx(0.6957550933905761));
}

TEST_CASE("constant and perturbed profiles") {
  const PeriodicGrid g(16, 1.0);
  const auto c = sample_initial_slope(ConstantProfile{2.0}, g);
  for (double x : c.values()) CHECK(x == 2.0);
  const auto p = sample_initial_slope(PerturbedProfile{0.27, 0.01, 2}, g);
  CHECK(p[2] == Approx(0.27 + 0.01 * std::sin(2.0 * std::numbers::pi * 2 * 2.0 / 16.0)));
  CHECK_THROWS_KIND(sample_initial_slope(ConstantProfile{-1.0}, g), ErrorKind::InvalidInitialData);
  CHECK_THROWS_KIND(sample_initial_slope(PerturbedProfile{0.005, 0.01, 1}, g), ErrorKind::InvalidInitialData);
}

TEST_CASE("step train from slopes round trip") {
  for (int trial = 0; trial < 20; ++trial) {
    const auto u = testing::random_positive(12, 0.2, 3.0);
    const double a = 0.05;
    const auto train = StepTrain::from_slopes(0.3, u, a);
    const auto back = train.slopes();
    for (std::size_t i = 0; i < u.size(); ++i) CHECK(back[i] == Approx(u[i]).epsilon(1e-12));
    const auto again = StepTrain::from_slopes(train.positions()[0], back, a);
    for (std::size_t i = 0; i < u.size(); ++i) {
      CHECK(again.positions()[i] == Approx(train.positions()[i]).epsilon(1e-12));
    }
  }
}

TEST_CASE("step train periodic extension") {
  const StepTrain t({0.0, 0.1, 0.3, 0.6, 1.0}, 0.2, 1.5);
  CHECK(t.position(5) == Approx(1.5));
  CHECK(t.position(-1) == Approx(1.0 - 1.5));
  CHECK(t.slopes()[4] == Approx(0.2 / 0.5));
  CHECK_THROWS_KIND(StepTrain({0.0, 0.1, 0.1, 0.6, 1.0}, 0.2, 1.5), ErrorKind::InvalidArgument);
  CHECK_THROWS_KIND(StepTrain({0.0, 0.1, 0.3, 0.6, 1.6}, 0.2, 1.5), ErrorKind::InvalidArgument);
}

TEST_CASE("front profile is pinned and monotone") {
  const IntervalGrid g(64, 1.0);
  for (double coeff : {2.0, 200.0}) {
    const auto h = fig1_height(g, 2.0, coeff);
    CHECK(h.values().front() == 0.0);
    CHECK(h.values().back() == 2.0);
    for (std::size_t j = 0; j + 1 < h.size(); ++j) CHECK(h.values()[j + 1] > h.values()[j]);
    CHECK(h.faces() == 65);
  }
  CHECK(fig1_raw_height(0.5, 2.0) == Approx(1.0));
}

TEST_CASE("height field boundary invariants") {
  const IntervalGrid g(5, 1.0);
  CHECK_THROWS_KIND(HeightField(g, {0.1, 1, 2, 3, 4, 5, 6}, 6.0), ErrorKind::InvalidInitialData);
  CHECK_THROWS_KIND(HeightField(g, {0, 1, 2, 3, 4, 5, 7}, 6.0), ErrorKind::InvalidInitialData);
  const auto s = sine_height(PeriodicGrid(8, 1.0));
  CHECK(s.boundary() == HeightBoundary::Periodic);
  CHECK(s.faces() == 8);
  CHECK(s.values()[2] == Approx(1.0));
}

TEST_CASE("sim config validation") {
  SimConfig c;
  CHECK_NOTHROW(c.validate());
  c.dt_init = 1.0;
  CHECK_THROWS_KIND(c.validate(), ErrorKind::InvalidArgument);
  c = SimConfig{};
  c.alpha = -1.0;
  CHECK_THROWS_KIND(c.validate(), ErrorKind::InvalidArgument);
  c = SimConfig{};
  c.newton_tol = 0.0;
  CHECK_THROWS_KIND(c.validate(), ErrorKind::InvalidArgument);
}

TEST_CASE("trajectory times must increase") {
  Trajectory t;
  t.append({0.0, 0, 0, 1, 1, 0, 0});
  t.append({0.1, 0, 0, 1, 1, 0, 0});
  CHECK_THROWS_KIND(t.append({0.1, 0, 0, 1, 1, 0, 0}), ErrorKind::InvalidArgument);
}
