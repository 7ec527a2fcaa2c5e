#include "vicinal/core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace vicinal {

namespace {

void check_finite_positive(std::span<const double> values, const char* what) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i]) || values[i] <= 0.0) {
      throw Error(ErrorKind::InvalidInitialData,
                  std::string(what) + ": non-positive or non-finite sample at index " +
                      std::to_string(i));
    }
  }
}

}  // namespace

PeriodicGrid::PeriodicGrid(std::size_t n, double period)
    : n_(n), period_(period), spacing_(period / static_cast<double>(n)) {
  require(n >= 5, ErrorKind::InvalidArgument, "periodic grid needs n >= 5");
  require(std::isfinite(period) && period > 0.0, ErrorKind::InvalidArgument,
          "periodic grid needs period > 0");
}

IntervalGrid::IntervalGrid(std::size_t n, double length)
    : n_(n), length_(length), spacing_(length / static_cast<double>(n + 1)) {
  require(n >= 5, ErrorKind::InvalidArgument, "interval grid needs n >= 5");
  require(std::isfinite(length) && length > 0.0, ErrorKind::InvalidArgument,
          "interval grid needs length > 0");
}

PeriodicGrid make_periodic_grid(std::size_t n, double period) { return PeriodicGrid(n, period); }

SlopeField::SlopeField(PeriodicGrid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  require(values_.size() == grid_.size(), ErrorKind::InvalidArgument,
          "slope field size does not match grid");
  check_finite_positive(values_, "slope field");
}

double SlopeField::at(std::ptrdiff_t i) const noexcept {
  const auto n = static_cast<std::ptrdiff_t>(values_.size());
  return values_[static_cast<std::size_t>(((i % n) + n) % n)];
}

double SlopeField::min() const noexcept { return *std::min_element(values_.begin(), values_.end()); }
double SlopeField::max() const noexcept { return *std::max_element(values_.begin(), values_.end()); }

HeightField::HeightField(const IntervalGrid& grid, std::vector<double> values,
                         double height_difference)
    : boundary_(HeightBoundary::Dirichlet),
      length_(grid.length()),
      spacing_(grid.spacing()),
      height_difference_(height_difference),
      values_(std::move(values)) {
  require(values_.size() == grid.nodes(), ErrorKind::InvalidArgument,
          "height field size does not match interval grid");
  require(values_.front() == 0.0 && values_.back() == height_difference, ErrorKind::InvalidInitialData,
          "Dirichlet height field must satisfy h(0) = 0 and h(L) = H");
  for (double v : values_) {
    require(std::isfinite(v), ErrorKind::InvalidInitialData, "height field has non-finite sample");
  }
}

HeightField::HeightField(const PeriodicGrid& grid, std::vector<double> values)
    : boundary_(HeightBoundary::Periodic),
      length_(grid.period()),
      spacing_(grid.spacing()),
      height_difference_(0.0),
      values_(std::move(values)) {
  require(values_.size() == grid.size(), ErrorKind::InvalidArgument,
          "height field size does not match periodic grid");
  for (double v : values_) {
    require(std::isfinite(v), ErrorKind::InvalidInitialData, "height field has non-finite sample");
  }
}

std::size_t HeightField::faces() const noexcept {
  return boundary_ == HeightBoundary::Dirichlet ? values_.size() - 1 : values_.size();
}

StepTrain::StepTrain(std::vector<double> positions, double step_height, double train_length)
    : positions_(std::move(positions)), step_height_(step_height), train_length_(train_length) {
  require(positions_.size() >= 5, ErrorKind::InvalidArgument, "step train needs at least 5 steps");
  require(step_height > 0.0 && train_length > 0.0, ErrorKind::InvalidArgument,
          "step height and train length must be positive");
  for (std::size_t i = 0; i < positions_.size(); ++i) {
    const double next = i + 1 < positions_.size() ? positions_[i + 1] : positions_[0] + train_length_;
    require(next > positions_[i], ErrorKind::InvalidArgument,
            "step positions must be strictly increasing within one period");
  }
}

StepTrain StepTrain::from_slopes(double first, std::span<const double> slopes, double step_height) {
  check_finite_positive(slopes, "step slopes");
  std::vector<double> x(slopes.size());
  double pos = first;
  for (std::size_t i = 0; i < slopes.size(); ++i) {
    x[i] = pos;
    pos += step_height / slopes[i];
  }
  return StepTrain(std::move(x), step_height, pos - first);
}

double StepTrain::position(std::ptrdiff_t i) const noexcept {
  const auto n = static_cast<std::ptrdiff_t>(positions_.size());
  std::ptrdiff_t wraps = i >= 0 ? i / n : -((-i + n - 1) / n);
  const std::ptrdiff_t j = i - wraps * n;
  return positions_[static_cast<std::size_t>(j)] + static_cast<double>(wraps) * train_length_;
}

std::vector<double> StepTrain::slopes() const {
  std::vector<double> u(positions_.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    const auto k = static_cast<std::ptrdiff_t>(i);
    u[i] = step_height_ / (position(k + 1) - position(k));
  }
  return u;
}

void SimConfig::validate() const {
  auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  require(std::isfinite(alpha) && alpha >= 0.0, ErrorKind::InvalidArgument, "alpha must be >= 0");
  require(std::isfinite(t_end) && t_end >= 0.0, ErrorKind::InvalidArgument, "t_end must be >= 0");
  require(positive(dt_init) && positive(dt_min) && positive(dt_max), ErrorKind::InvalidArgument,
          "time steps must be positive");
  require(dt_min <= dt_init && dt_init <= dt_max, ErrorKind::InvalidArgument,
          "need dt_min <= dt_init <= dt_max");
  require(positive(newton_tol) && newton_max_iter > 0, ErrorKind::InvalidArgument,
          "Newton tolerance and iteration cap must be positive");
  require(positive(eps_mobility) && positive(delta_log), ErrorKind::InvalidArgument,
          "regularization parameters must be positive");
  require(output_stride > 0 && snapshot_stride >= 0, ErrorKind::InvalidArgument,
          "output_stride must be positive");
  require(std::isfinite(energy_guard) && energy_guard >= 0.0, ErrorKind::InvalidArgument,
          "energy_guard must be >= 0");
  require(std::isfinite(convergence_tol) && convergence_tol >= 0.0, ErrorKind::InvalidArgument,
          "convergence_tol must be >= 0");
  require(positive(slope_floor), ErrorKind::InvalidArgument, "slope_floor must be positive");
}

std::string_view to_string(RunStatus status) {
  switch (status) {
    case RunStatus::ReachedEnd: return "reached-end";
    case RunStatus::Converged: return "converged";
    case RunStatus::Failed: return "failed";
  }
  return "unknown";
}

void Trajectory::append(const DiagnosticsRecord& rec) {
  require(records.empty() || rec.t > records.back().t, ErrorKind::InvalidArgument,
          "trajectory record times must be strictly increasing");
  records.push_back(rec);
}

double fig2_slope(double h) {
  const double s = 2.0 * h - 1.0;
  return 0.7 - 0.63 * std::exp(-5.0 * s * s);
}

SlopeField sample_initial_slope(const SlopeProfile& profile, const PeriodicGrid& grid) {
  std::vector<double> u(grid.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double h = grid.coord(i);
    u[i] = std::visit(
        [&](const auto& p) -> double {
          using P = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<P, Fig2Profile>) {
            return fig2_slope(h / grid.period());
          } else if constexpr (std::is_same_v<P, ConstantProfile>) {
            return p.value;
          } else {
            return p.base + p.amplitude * std::sin(2.0 * std::numbers::pi * p.wavenumber * h / grid.period());
          }
        },
        profile);
  }
  return SlopeField(grid, std::move(u));
}

double fig1_raw_height(double x, double linear_coefficient) {
  return 0.5 * std::tanh(10.0 * (x - 0.5)) + linear_coefficient * (x - 0.5) + 1.0;
}

HeightField fig1_height(const IntervalGrid& grid, double height_difference, double linear_coefficient) {
  const double lo = fig1_raw_height(0.0, linear_coefficient);
  const double hi = fig1_raw_height(1.0, linear_coefficient);
  require(hi > lo, ErrorKind::InvalidInitialData, "front profile must rise across the domain");
  std::vector<double> h(grid.nodes());
  for (std::size_t j = 0; j < h.size(); ++j) {
    const double x = grid.coord(j) / grid.length();
    h[j] = height_difference * (fig1_raw_height(x, linear_coefficient) - lo) / (hi - lo);
  }
  h.front() = 0.0;
  h.back() = height_difference;
  for (std::size_t j = 0; j + 1 < h.size(); ++j) {
    require(h[j + 1] > h[j], ErrorKind::InvalidInitialData, "front profile is not monotone");
  }
  return HeightField(grid, std::move(h), height_difference);
}

HeightField sine_height(const PeriodicGrid& grid, double amplitude) {
  std::vector<double> h(grid.size());
  for (std::size_t j = 0; j < h.size(); ++j) {
    h[j] = amplitude * std::sin(2.0 * std::numbers::pi * grid.coord(j) / grid.period());
  }
  return HeightField(grid, std::move(h));
}

}  // namespace vicinal
