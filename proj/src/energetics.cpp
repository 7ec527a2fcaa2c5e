#include "vicinal/energetics.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "vicinal/operators.hpp"

namespace vicinal {

double mass(const SlopeField& u) {
  double acc = 0.0;
  for (double ui : u.values()) acc += 1.0 / ui;
  return acc * u.grid().spacing();
}

double lyapunov_F(const SlopeField& u, double alpha) {
  double acc = 0.0;
  for (double ui : u.values()) acc += 0.5 * ui * ui + alpha * std::log(ui);
  return acc * u.grid().spacing();
}

double lyapunov_E(const SlopeField& u, double alpha) {
  const auto d2 = second_difference_periodic(chemical_potential_field(u, alpha), u.grid().spacing());
  double acc = 0.0;
  for (double x : d2) acc += x * x;
  return acc * u.grid().spacing();
}

double lower_bound_J(double E, double L) {
  require(E >= 0.0 && L > 0.0, ErrorKind::InvalidArgument, "lower bound needs E >= 0 and L > 0");
  if (E >= 2.0 / (L * L)) return 1.0 / (3.0 * L * L * L * E);
  return 1.0 / (2.0 * L) - std::sqrt(E) / (3.0 * std::sqrt(2.0));
}

double decay_constant_beta(double u_min) {
  const double u2 = u_min * u_min;
  return 2.0 * u2 + 6.0 * u2 * u2;
}

double lemma1_defect(std::span<const double> v, double spacing) {
  std::vector<double> cube(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) cube[i] = v[i] * v[i] * v[i];
  const auto d2_cube = second_difference_periodic(cube, spacing);
  const auto d2_v = second_difference_periodic(v, spacing);
  double lhs = 0.0;
  double rhs = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    lhs += d2_cube[i] * d2_cube[i];
    const double v2 = v[i] * v[i];
    rhs += 9.0 * v2 * v2 * d2_v[i] * d2_v[i];
  }
  return std::abs(lhs - rhs) * spacing;
}

double lemma2_margin(std::span<const double> v, double spacing) {
  const auto d2 = second_difference_periodic(v, spacing);
  double norm2 = 0.0;
  for (double x : d2) norm2 += x * x;
  const double norm = std::sqrt(norm2 * spacing);

  const auto it = std::min_element(v.begin(), v.end());
  const auto star = static_cast<std::size_t>(it - v.begin());
  const double v_min = *it;
  const double period = spacing * static_cast<double>(v.size());

  double margin = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    double d = std::abs(static_cast<double>(i) - static_cast<double>(star)) * spacing;
    d = std::min(d, period - d);
    margin = std::min(margin, (2.0 / 3.0) * norm * std::pow(d, 1.5) - (v[i] - v_min));
  }
  return margin;
}

EnergyReport energy_report(const SlopeField& u, double alpha, double L_ref) {
  EnergyReport r;
  r.F = lyapunov_F(u, alpha);
  r.E = lyapunov_E(u, alpha);
  r.mass = mass(u);
  r.u_min = u.min();
  r.lower_bound = lower_bound_J(r.E, L_ref);
  r.beta = decay_constant_beta(r.u_min);
  return r;
}

double max_time_energy_product(std::span<const DiagnosticsRecord> records) {
  double best = 0.0;
  if (records.empty()) return best;
  for (const auto& r : records) best = std::max(best, (r.t - records.front().t) * r.E);
  return best;
}

}  // namespace vicinal
