#include "vicinal/analysis.hpp"

#include <cmath>
#include <vector>

#include "vicinal/operators.hpp"

namespace vicinal {

namespace {

constexpr double kEnergyFloor = 1e-30;
constexpr std::size_t kMinSamples = 10;

}  // namespace

double mobility_r(double u) {
  const double u2 = u * u;
  return u2 * (3.0 * u2 + 1.0);
}

double dispersion_sigma(double k, double u_star, double alpha) {
  require(u_star > 0.0, ErrorKind::InvalidArgument, "u_star must be positive");
  const double u2 = u_star * u_star;
  const double k2 = k * k;
  return -u2 * (3.0 * u2 + alpha) * k2 * k2;
}

double predicted_energy_rate(double k, double u_star, double alpha) {
  return 2.0 * std::abs(dispersion_sigma(k, u_star, alpha));
}

double predicted_energy_rate_discrete(double k, double u_star, double alpha, double spacing) {
  require(u_star > 0.0, ErrorKind::InvalidArgument, "u_star must be positive");
  const double lambda = discrete_laplacian_eigenvalue(k, spacing);
  const double u2 = u_star * u_star;
  return 2.0 * u2 * (3.0 * u2 + alpha) * lambda * lambda;
}

DecayFit fit_decay_rate(std::span<const double> t, std::span<const double> energy, double fraction_tail) {
  require(t.size() == energy.size(), ErrorKind::InvalidArgument, "time and energy sizes differ");
  require(fraction_tail > 0.0 && fraction_tail <= 1.0, ErrorKind::InvalidArgument,
          "fraction_tail must lie in (0, 1]");

  // Trailing records at or below the floor are roundoff, not signal.
  std::size_t end = energy.size();
  while (end > 0 && !(energy[end - 1] > kEnergyFloor)) --end;
  if (end < kMinSamples) throw Error(ErrorKind::InsufficientData, "decay fit needs at least 10 records");
  auto count = static_cast<std::size_t>(std::ceil(fraction_tail * static_cast<double>(end)));
  count = std::min(end, std::max(count, kMinSamples));
  const std::size_t first = end - count;

  std::vector<double> ts, ys;
  for (std::size_t i = first; i < end; ++i) {
    if (!(energy[i] > 0.0)) throw Error(ErrorKind::NonPositiveEnergy, "E <= 0 inside the fit window");
    if (energy[i] <= kEnergyFloor) continue;
    ts.push_back(t[i]);
    ys.push_back(std::log(energy[i]));
  }
  if (ts.size() < kMinSamples) throw Error(ErrorKind::InsufficientData, "decay fit needs at least 10 records");

  const auto nn = static_cast<double>(ts.size());
  double tm = 0.0, ym = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    tm += ts[i];
    ym += ys[i];
  }
  tm /= nn;
  ym /= nn;
  double stt = 0.0, sty = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const double dt = ts[i] - tm;
    const double dy = ys[i] - ym;
    stt += dt * dt;
    sty += dt * dy;
    syy += dy * dy;
  }
  require(stt > 0.0, ErrorKind::InsufficientData, "fit window has no time spread");

  DecayFit fit;
  const double slope = sty / stt;
  fit.rate = -slope;
  fit.intercept = ym - slope * tm;
  fit.r_squared = syy > 0.0 ? std::min(1.0, (sty * sty) / (stt * syy)) : 1.0;
  fit.t_start = ts.front();
  fit.t_end = ts.back();
  fit.samples = ts.size();
  return fit;
}

DecayFit fit_decay_rate(const Trajectory& traj, double fraction_tail) {
  std::vector<double> t, e;
  t.reserve(traj.records.size());
  e.reserve(traj.records.size());
  for (const auto& r : traj.records) {
    t.push_back(r.t);
    e.push_back(r.E);
  }
  return fit_decay_rate(t, e, fraction_tail);
}

}  // namespace vicinal
