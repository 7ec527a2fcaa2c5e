#pragma once

#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "vicinal/banded.hpp"
#include "vicinal/core.hpp"

namespace vicinal {

enum class HeightVariant { Monotone, Regularized };

std::string_view to_string(HeightVariant variant);

/// Everything the height operators need besides the field itself.
struct HeightModel {
  HeightVariant variant = HeightVariant::Monotone;
  double alpha = 1.0;
  double eps = 1e-5;        // mobility regularization (regularized variant)
  double delta = 1e-5;      // log-term regularization (regularized variant)
  double slope_floor = 1e-8;  // monotone variant only
};

/// h_t for h_t = -[(1/h_x)(alpha ln h_x + 3/2 h_x^2)_xx]_x on a Dirichlet
/// field. Slopes live on cell faces; the face ring is closed periodically,
/// which is the periodic-h_x condition. End nodes are pinned (zero tendency).
/// Throws Error(MonotonicityLost) if a face slope is <= slope_floor.
std::vector<double> monotone_height_rhs(const HeightField& h, double alpha, double slope_floor = 1e-8);

/// h_t for the regularized periodic equation with mobility 1/sqrt(h_x^2+eps^2)
/// and chemical term alpha h_x ln|h_x| / sqrt(h_x^2+delta^2) + 3/2 |h_x| h_x.
std::vector<double> regularized_height_rhs(const HeightField& h, double alpha, double eps, double delta);

std::vector<double> height_rhs(const HeightField& h, const HeightModel& model);

/// d(h_t)/dh as a cyclic banded matrix over the free nodes (interior nodes
/// for Dirichlet fields, every node for periodic ones).
CyclicBandedMatrix height_rhs_jacobian(const HeightField& h, const HeightModel& model);

/// G = sum over faces of dx (alpha |s| ln|s| + |s|^3 / 2).
double surface_energy(const HeightField& h, double alpha);

/// Face-centred slopes (h_{j+1} - h_j) / dx.
std::vector<double> face_slopes(const HeightField& h);

/// u(h) = h_x resampled onto a uniform periodic grid of n_out points in the
/// height coordinate (period H). n_out = 0 uses the number of faces.
/// Throws Error(MonotonicityLost) unless h is strictly increasing.
SlopeField height_to_slope(const HeightField& h, std::size_t n_out = 0);

/// The scaling u -> alpha^{-1/2} u, h -> alpha^{-1/2} h that maps the
/// slope equation with coefficient alpha onto alpha = 1.
SlopeField rescale_to_unit_alpha(const SlopeField& u, double alpha);

struct HeightRecord {
  double t = 0.0;
  double G = 0.0;
  double mean_h = 0.0;
  double h_min = 0.0;
  double h_max = 0.0;
  double slope_min = 0.0;
  double slope_max = 0.0;
  double dt = 0.0;
};

struct HeightTrajectory {
  HeightVariant variant = HeightVariant::Monotone;
  double alpha = 0.0;
  std::vector<HeightRecord> records;
  /// x coordinates of the snapshot values.
  std::vector<double> coords;
  std::vector<Snapshot> snapshots;
  RunStatus status = RunStatus::ReachedEnd;
  std::string failure;
  double final_t = 0.0;
  std::vector<double> final_values;
};

struct HeightSolverState {
  std::vector<double> h;
  double t = 0.0;
  double dt = 0.0;
  long step_count = 0;
  int last_iterations = 0;
  long rejected_steps = 0;
};

class HeightIntegrator {
 public:
  HeightIntegrator(const HeightField& h0, const HeightModel& model, const SimConfig& cfg);

  const HeightSolverState& state() const noexcept { return state_; }
  const HeightModel& model() const noexcept { return model_; }
  HeightField field() const;
  HeightRecord record(double dt_used) const;

  /// One accepted backward-Euler step of size <= t_target - t; failed Newton
  /// solves and monotonicity violations retry with a halved step.
  double step(double t_target);
  void advance_to(double t_target, const std::function<bool(double dt_used)>& on_step = {});

 private:
  HeightField make_field(std::vector<double> values) const;
  std::vector<double> solve(std::span<const double> h_old, double dt, int& iterations) const;

  HeightModel model_;
  SimConfig cfg_;
  HeightBoundary boundary_;
  double length_;
  double height_difference_;
  std::size_t nodes_;
  HeightSolverState state_;
};

HeightTrajectory run_height(const HeightField& h0, const HeightModel& model, const SimConfig& cfg);

}  // namespace vicinal
