#include "vicinal/bcf.hpp"

#include <cmath>

namespace vicinal {

namespace {

inline std::size_t wrap(std::ptrdiff_t i, std::size_t n) {
  const auto m = static_cast<std::ptrdiff_t>(n);
  return static_cast<std::size_t>(((i % m) + m) % m);
}

}  // namespace

InteractionLaw::InteractionLaw(double alpha_) : alpha(alpha_) {
  require(std::isfinite(alpha_) && alpha_ >= 0.0, ErrorKind::InvalidArgument, "interaction alpha must be >= 0");
}

double f_value(double r, const InteractionLaw& law) {
  require(r > 0.0, ErrorKind::InvalidArgument, "interaction law needs r > 0");
  return 0.5 / (r * r) - law.alpha * std::log(r);
}

double f_prime(double r, const InteractionLaw& law) {
  require(r > 0.0, ErrorKind::InvalidArgument, "interaction law needs r > 0");
  return -1.0 / (r * r * r) - law.alpha / r;
}

double f_second(double r, const InteractionLaw& law) {
  require(r > 0.0, ErrorKind::InvalidArgument, "interaction law needs r > 0");
  const double r2 = r * r;
  return 3.0 / (r2 * r2) + law.alpha / r2;
}

std::vector<double> slope_ode_rhs(std::span<const double> u, double a, const InteractionLaw& law) {
  require(u.size() >= 5, ErrorKind::InvalidArgument, "step train needs at least 5 slopes");
  require(a > 0.0, ErrorKind::InvalidArgument, "step height must be positive");
  const std::size_t n = u.size();
  std::vector<double> fp(n);
  for (std::size_t i = 0; i < n; ++i) {
    require(u[i] > 0.0, ErrorKind::InvalidArgument, "step slopes must be positive");
    fp[i] = f_prime(1.0 / u[i], law);
  }
  const double a2 = a * a;
  const double inv_a4 = 1.0 / (a2 * a2);
  std::vector<double> rhs(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto k = static_cast<std::ptrdiff_t>(i);
    const double c = fp[i];
    const double stencil = (fp[wrap(k - 2, n)] - c) + (fp[wrap(k + 2, n)] - c) -
                           4.0 * ((fp[wrap(k - 1, n)] - c) + (fp[wrap(k + 1, n)] - c));
    rhs[i] = u[i] * u[i] * inv_a4 * stencil;
  }
  return rhs;
}

double step_energy(const StepTrain& train, const InteractionLaw& law) {
  const double a = train.step_height();
  double acc = 0.0;
  for (std::size_t i = 0; i < train.size(); ++i) {
    const auto k = static_cast<std::ptrdiff_t>(i);
    acc += f_value((train.position(k + 1) - train.position(k)) / a, law);
  }
  return a * acc;
}

std::vector<double> chemical_potentials(const StepTrain& train, const InteractionLaw& law) {
  const double a = train.step_height();
  std::vector<double> mu(train.size());
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const auto k = static_cast<std::ptrdiff_t>(i);
    const double behind = (train.position(k) - train.position(k - 1)) / a;
    const double ahead = (train.position(k + 1) - train.position(k)) / a;
    mu[i] = f_prime(behind, law) - f_prime(ahead, law);
  }
  return mu;
}

std::vector<double> step_velocities(const StepTrain& train, const InteractionLaw& law) {
  const auto mu = chemical_potentials(train, law);
  const std::size_t n = mu.size();
  const double a = train.step_height();
  const double inv_a3 = 1.0 / (a * a * a);
  std::vector<double> vel(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto k = static_cast<std::ptrdiff_t>(i);
    vel[i] = (mu[wrap(k + 1, n)] - 2.0 * mu[i] + mu[wrap(k - 1, n)]) * inv_a3;
  }
  return vel;
}

PotentialLaw step_law(const InteractionLaw& law) {
  return [law](std::span<const double> v, std::span<double> phi, std::span<double> dphi) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      phi[i] = f_prime(v[i], law);
      dphi[i] = f_second(v[i], law);
    }
  };
}

Trajectory integrate_bcf(std::span<const double> slopes, double a, const InteractionLaw& law, double t_end,
                         const SimConfig& cfg) {
  require(a > 0.0, ErrorKind::InvalidArgument, "step height must be positive");
  const PeriodicGrid grid(slopes.size(), a * static_cast<double>(slopes.size()));
  const SlopeField u0(grid, {slopes.begin(), slopes.end()});
  SimConfig run_cfg = cfg;
  run_cfg.t_end = t_end;
  return run_slope_with_law(u0, law.alpha, run_cfg, step_law(law));
}

Trajectory integrate_bcf(const StepTrain& train, const InteractionLaw& law, double t_end, const SimConfig& cfg) {
  const auto u = train.slopes();
  return integrate_bcf(u, train.step_height(), law, t_end, cfg);
}

}  // namespace vicinal
