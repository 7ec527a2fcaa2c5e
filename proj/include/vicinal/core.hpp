#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "vicinal/error.hpp"

namespace vicinal {

/// Uniform periodic mesh on [0, period). Sample i sits at i * spacing.
class PeriodicGrid {
 public:
  PeriodicGrid(std::size_t n, double period);

  std::size_t size() const noexcept { return n_; }
  double period() const noexcept { return period_; }
  double spacing() const noexcept { return spacing_; }
  double coord(std::size_t i) const noexcept { return static_cast<double>(i) * spacing_; }

  friend bool operator==(const PeriodicGrid&, const PeriodicGrid&) = default;

 private:
  std::size_t n_;
  double period_;
  double spacing_;
};

/// Uniform mesh on [0, length] with `n` interior nodes and both end nodes,
/// so there are n + 2 nodes and n + 1 cells.
class IntervalGrid {
 public:
  IntervalGrid(std::size_t n, double length);

  std::size_t interior() const noexcept { return n_; }
  std::size_t nodes() const noexcept { return n_ + 2; }
  double length() const noexcept { return length_; }
  double spacing() const noexcept { return spacing_; }
  double coord(std::size_t j) const noexcept { return static_cast<double>(j) * spacing_; }

 private:
  std::size_t n_;
  double length_;
  double spacing_;
};

PeriodicGrid make_periodic_grid(std::size_t n, double period);

/// Strictly positive slope samples u(h) on a periodic grid in h.
class SlopeField {
 public:
  SlopeField(PeriodicGrid grid, std::vector<double> values);

  const PeriodicGrid& grid() const noexcept { return grid_; }
  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  /// Periodic access; any integer index is folded into [0, n).
  double at(std::ptrdiff_t i) const noexcept;
  double min() const noexcept;
  double max() const noexcept;

 private:
  PeriodicGrid grid_;
  std::vector<double> values_;
};

enum class HeightBoundary { Dirichlet, Periodic };

/// Surface height samples. Dirichlet fields carry both end nodes, with
/// values.front() == 0 and values.back() == height_difference. Periodic
/// fields carry one period without the duplicate end node.
class HeightField {
 public:
  HeightField(const IntervalGrid& grid, std::vector<double> values, double height_difference);
  HeightField(const PeriodicGrid& grid, std::vector<double> values);

  HeightBoundary boundary() const noexcept { return boundary_; }
  double length() const noexcept { return length_; }
  double spacing() const noexcept { return spacing_; }
  double height_difference() const noexcept { return height_difference_; }
  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double coord(std::size_t j) const noexcept { return static_cast<double>(j) * spacing_; }
  /// Number of cell faces, i.e. of face-centred slopes.
  std::size_t faces() const noexcept;

 private:
  HeightBoundary boundary_;
  double length_;
  double spacing_;
  double height_difference_;
  std::vector<double> values_;
};

/// Periodic train of N steps of height a; x_{i+N} = x_i + L.
class StepTrain {
 public:
  StepTrain(std::vector<double> positions, double step_height, double train_length);

  /// Builds positions x_0 = first, x_{i+1} = x_i + a / u_i.
  static StepTrain from_slopes(double first, std::span<const double> slopes, double step_height);

  std::span<const double> positions() const noexcept { return positions_; }
  std::size_t size() const noexcept { return positions_.size(); }
  double step_height() const noexcept { return step_height_; }
  double train_length() const noexcept { return train_length_; }
  /// Position with periodic extension, x_{i+kN} = x_i + kL.
  double position(std::ptrdiff_t i) const noexcept;
  /// u_i = a / (x_{i+1} - x_i).
  std::vector<double> slopes() const;

 private:
  std::vector<double> positions_;
  double step_height_;
  double train_length_;
};

struct SimConfig {
  double alpha = 1.0;
  double t_end = 1.0;
  double dt_init = 1e-7;
  double dt_min = 1e-14;
  double dt_max = 1e-4;
  double newton_tol = 1e-10;
  int newton_max_iter = 25;
  double eps_mobility = 1e-5;
  double delta_log = 1e-5;
  int output_stride = 1;
  /// Every snapshot_stride-th record also stores the field; 0 disables.
  int snapshot_stride = 0;
  /// Accepted steps satisfy E_new <= E_old + energy_guard * E_0.
  double energy_guard = 1e-11;
  /// Early exit once ||u - 1/mass||_inf drops below this; 0 disables.
  double convergence_tol = 1e-8;
  /// Monotone height runs reject steps that push a face slope below this.
  double slope_floor = 1e-8;

  void validate() const;
};

struct DiagnosticsRecord {
  double t = 0.0;
  double F = 0.0;
  double E = 0.0;
  double mass = 0.0;
  double u_min = 0.0;
  double lower_bound = 0.0;
  double dt = 0.0;
};

struct Snapshot {
  double t = 0.0;
  std::vector<double> values;
};

enum class RunStatus { ReachedEnd, Converged, Failed };

std::string_view to_string(RunStatus status);

struct Trajectory {
  std::vector<DiagnosticsRecord> records;
  /// Coordinates shared by all snapshots (h for slopes, x for heights).
  std::vector<double> coords;
  std::vector<Snapshot> snapshots;
  RunStatus status = RunStatus::ReachedEnd;
  std::string failure;
  /// Field at the last accepted state.
  double final_t = 0.0;
  std::vector<double> final_values;

  void append(const DiagnosticsRecord& rec);
};

// Initial data -------------------------------------------------------------

struct Fig2Profile {};
struct ConstantProfile {
  double value = 1.0;
};
/// base + amplitude * sin(2 pi k h / period)
struct PerturbedProfile {
  double base = 1.0;
  double amplitude = 0.01;
  int wavenumber = 1;
};

using SlopeProfile = std::variant<Fig2Profile, ConstantProfile, PerturbedProfile>;

/// u0(h) = 0.7 - 0.63 exp(-5 (2h - 1)^2)
double fig2_slope(double h);

SlopeField sample_initial_slope(const SlopeProfile& profile, const PeriodicGrid& grid);

/// 0.5 tanh(10 (x - 0.5)) + c (x - 0.5) + 1, the raw monotone front.
double fig1_raw_height(double x, double linear_coefficient);

/// Monotone front on [0, L] rescaled affinely so that h(0) = 0 and h(L) = H.
HeightField fig1_height(const IntervalGrid& grid, double height_difference,
                        double linear_coefficient = 2.0);

/// amplitude * sin(2 pi x / L) on a periodic x-grid.
HeightField sine_height(const PeriodicGrid& grid, double amplitude = 1.0);

}  // namespace vicinal
