#include "vicinal/height_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "vicinal/slope_solver.hpp"

namespace vicinal {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
// ln|s| is evaluated at max(|s|, kTiny) so that the derivative of the
// regularized log term stays finite at s = 0.
constexpr double kTiny = 1e-300;

// A ring of M nodes, node j + M carrying the value h_j + H. Dirichlet fields
// drop their last node (h_M = h_0 + H); periodic fields have H = 0.
struct Ring {
  std::span<const double> h;
  double jump;
  double dx;

  std::size_t size() const { return h.size(); }
  double at(std::ptrdiff_t j) const {
    const auto m = static_cast<std::ptrdiff_t>(h.size());
    std::ptrdiff_t wraps = j >= 0 ? j / m : -((-j + m - 1) / m);
    return h[static_cast<std::size_t>(j - wraps * m)] + static_cast<double>(wraps) * jump;
  }
};

inline std::size_t wrap(std::ptrdiff_t i, std::size_t n) {
  const auto m = static_cast<std::ptrdiff_t>(n);
  return static_cast<std::size_t>(((i % m) + m) % m);
}

struct FaceData {
  std::vector<double> s, g, dg, m, dm, c, q;
  // Rounding scale of q_f, used for the Newton noise floor.
  std::vector<double> q_noise;
};

void face_law(const HeightModel& model, double s, double& g, double& dg, double& m, double& dm) {
  const double alpha = model.alpha;
  if (model.variant == HeightVariant::Monotone) {
    if (!(s > model.slope_floor)) {
      throw Error(ErrorKind::MonotonicityLost, "face slope fell to " + std::to_string(s));
    }
    g = alpha * std::log(s) + 1.5 * s * s;
    dg = alpha / s + 3.0 * s;
    m = 1.0 / s;
    dm = -1.0 / (s * s);
    return;
  }
  const double a = std::abs(s);
  const double log_a = std::log(std::max(a, kTiny));
  const double d2 = model.delta * model.delta;
  const double r2 = s * s + d2;
  const double r = std::sqrt(r2);
  const double s_log = a == 0.0 ? 0.0 : s * log_a;
  g = alpha * s_log / r + 1.5 * a * s;
  dg = alpha * (d2 * log_a + r2) / (r2 * r) + 3.0 * a;
  const double e2 = s * s + model.eps * model.eps;
  m = 1.0 / std::sqrt(e2);
  dm = -s * m / e2;
}

FaceData evaluate_faces(const Ring& ring, const HeightModel& model) {
  const std::size_t n = ring.size();
  FaceData f;
  f.s.resize(n);
  f.g.resize(n);
  f.dg.resize(n);
  f.m.resize(n);
  f.dm.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto kk = static_cast<std::ptrdiff_t>(k);
    f.s[k] = (ring.at(kk + 1) - ring.at(kk)) / ring.dx;
    face_law(model, f.s[k], f.g[k], f.dg[k], f.m[k], f.dm[k]);
  }
  // g is known to about eps * (|g| + |g'| * 2 max|h| / dx): the slope itself
  // is a difference of O(max|h|) values.
  double h_max = std::abs(ring.jump);
  for (double x : ring.h) h_max = std::max(h_max, std::abs(x));
  std::vector<double> g_err(n);
  for (std::size_t k = 0; k < n; ++k) g_err[k] = std::abs(f.g[k]) + std::abs(f.dg[k]) * 2.0 * h_max / ring.dx;

  const double inv_dx2 = 1.0 / (ring.dx * ring.dx);
  f.c.resize(n);
  f.q.resize(n);
  f.q_noise.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double gl = f.g[wrap(static_cast<std::ptrdiff_t>(k) - 1, n)];
    const double gr = f.g[wrap(static_cast<std::ptrdiff_t>(k) + 1, n)];
    f.c[k] = (gl - 2.0 * f.g[k] + gr) * inv_dx2;
    f.q[k] = f.m[k] * f.c[k];
    f.q_noise[k] = f.m[k] *
                   (g_err[wrap(static_cast<std::ptrdiff_t>(k) - 1, n)] + 2.0 * g_err[k] +
                    g_err[wrap(static_cast<std::ptrdiff_t>(k) + 1, n)]) *
                   inv_dx2;
  }
  return f;
}

// Free nodes: all ring nodes for periodic fields, all but node 0 otherwise.
struct Layout {
  bool pinned;
  std::size_t ring;
  std::size_t unknowns() const { return pinned ? ring - 1 : ring; }
  std::size_t node(std::size_t unknown) const { return pinned ? unknown + 1 : unknown; }
};

std::vector<double> ring_rhs(const Ring& ring, const FaceData& f, const Layout& layout) {
  const std::size_t n = ring.size();
  std::vector<double> rhs(n, 0.0);
  for (std::size_t j = layout.pinned ? 1 : 0; j < n; ++j) {
    rhs[j] = -(f.q[j] - f.q[wrap(static_cast<std::ptrdiff_t>(j) - 1, n)]) / ring.dx;
  }
  return rhs;
}

CyclicBandedMatrix ring_jacobian(const Ring& ring, const FaceData& f, const Layout& layout) {
  const std::size_t n = ring.size();
  const double dx = ring.dx;
  const double inv_dx2 = 1.0 / (dx * dx);
  CyclicBandedMatrix jac(layout.unknowns(), 2);

  // dq_face / ds_k for k in {face-1, face, face+1}.
  auto dq = [&](std::size_t face, std::ptrdiff_t k_offset) {
    if (k_offset == 0) return f.dm[face] * f.c[face] - 2.0 * f.m[face] * f.dg[face] * inv_dx2;
    const std::size_t k = wrap(static_cast<std::ptrdiff_t>(face) + k_offset, n);
    return f.m[face] * f.dg[k] * inv_dx2;
  };

  for (std::size_t row = 0; row < layout.unknowns(); ++row) {
    const auto j = static_cast<std::ptrdiff_t>(layout.node(row));
    const std::size_t face_hi = wrap(j, n);
    const std::size_t face_lo = wrap(j - 1, n);
    for (std::ptrdiff_t k = j - 2; k <= j + 1; ++k) {
      // rhs_j = -(q_j - q_{j-1}) / dx
      double d = 0.0;
      if (k - j >= -1) d += dq(face_hi, k - j);
      if (k - (j - 1) <= 1) d -= dq(face_lo, k - (j - 1));
      d *= -1.0 / dx;
      // s_k = (h_{k+1} - h_k) / dx
      const std::size_t lo = wrap(k, n);
      const std::size_t hi = wrap(k + 1, n);
      if (!layout.pinned || lo != 0) jac.add(row, layout.pinned ? lo - 1 : lo, -d / dx);
      if (!layout.pinned || hi != 0) jac.add(row, layout.pinned ? hi - 1 : hi, d / dx);
    }
  }
  return jac;
}

Ring ring_of(const HeightField& h) {
  const auto v = h.values();
  if (h.boundary() == HeightBoundary::Dirichlet) {
    return Ring{v.first(v.size() - 1), h.height_difference(), h.spacing()};
  }
  return Ring{v, 0.0, h.spacing()};
}

Layout layout_of(const HeightField& h) {
  const bool pinned = h.boundary() == HeightBoundary::Dirichlet;
  const std::size_t ring = pinned ? h.size() - 1 : h.size();
  return Layout{pinned, ring};
}

void check_model(const HeightField& h, const HeightModel& model) {
  require(model.alpha >= 0.0 && std::isfinite(model.alpha), ErrorKind::InvalidArgument, "alpha must be >= 0");
  if (model.variant == HeightVariant::Monotone) {
    require(h.boundary() == HeightBoundary::Dirichlet, ErrorKind::InvalidArgument,
            "monotone height equation needs a Dirichlet field");
  } else {
    require(h.boundary() == HeightBoundary::Periodic, ErrorKind::InvalidArgument,
            "regularized height equation needs a periodic field");
    require(model.eps > 0.0 && model.delta > 0.0, ErrorKind::InvalidArgument, "eps and delta must be positive");
  }
}

std::vector<double> full_rhs(const HeightField& h, const HeightModel& model) {
  check_model(h, model);
  const Ring ring = ring_of(h);
  const FaceData f = evaluate_faces(ring, model);
  auto rhs = ring_rhs(ring, f, layout_of(h));
  if (h.boundary() == HeightBoundary::Dirichlet) rhs.push_back(0.0);
  return rhs;
}

double inf_norm(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

std::string_view to_string(HeightVariant variant) {
  return variant == HeightVariant::Monotone ? "monotone" : "regularized";
}

std::vector<double> monotone_height_rhs(const HeightField& h, double alpha, double slope_floor) {
  HeightModel model;
  model.variant = HeightVariant::Monotone;
  model.alpha = alpha;
  model.slope_floor = slope_floor;
  return full_rhs(h, model);
}

std::vector<double> regularized_height_rhs(const HeightField& h, double alpha, double eps, double delta) {
  HeightModel model;
  model.variant = HeightVariant::Regularized;
  model.alpha = alpha;
  model.eps = eps;
  model.delta = delta;
  return full_rhs(h, model);
}

std::vector<double> height_rhs(const HeightField& h, const HeightModel& model) { return full_rhs(h, model); }

CyclicBandedMatrix height_rhs_jacobian(const HeightField& h, const HeightModel& model) {
  check_model(h, model);
  const Ring ring = ring_of(h);
  return ring_jacobian(ring, evaluate_faces(ring, model), layout_of(h));
}

std::vector<double> face_slopes(const HeightField& h) {
  const Ring ring = ring_of(h);
  std::vector<double> s(ring.size());
  for (std::size_t k = 0; k < s.size(); ++k) {
    const auto kk = static_cast<std::ptrdiff_t>(k);
    s[k] = (ring.at(kk + 1) - ring.at(kk)) / ring.dx;
  }
  return s;
}

double surface_energy(const HeightField& h, double alpha) {
  double acc = 0.0;
  for (double s : face_slopes(h)) {
    const double a = std::abs(s);
    const double a_log = a == 0.0 ? 0.0 : a * std::log(a);
    acc += alpha * a_log + 0.5 * a * a * a;
  }
  return acc * h.spacing();
}

SlopeField height_to_slope(const HeightField& h, std::size_t n_out) {
  require(h.boundary() == HeightBoundary::Dirichlet, ErrorKind::InvalidArgument,
          "height_to_slope needs a Dirichlet field");
  const Ring ring = ring_of(h);
  const auto s = face_slopes(h);
  const std::size_t faces = s.size();
  const double H = h.height_difference();
  if (n_out == 0) n_out = faces;

  // Face heights, padded by one periodic image on each side.
  std::vector<double> y(faces + 2), val(faces + 2);
  for (std::size_t k = 0; k < faces; ++k) {
    if (!(s[k] > 0.0)) throw Error(ErrorKind::MonotonicityLost, "height profile is not strictly increasing");
    const auto kk = static_cast<std::ptrdiff_t>(k);
    y[k + 1] = 0.5 * (ring.at(kk) + ring.at(kk + 1));
    val[k + 1] = s[k];
  }
  y[0] = y[faces] - H;
  val[0] = s[faces - 1];
  y[faces + 1] = y[1] + H;
  val[faces + 1] = s[0];

  const PeriodicGrid grid(n_out, H);
  std::vector<double> u(n_out);
  for (std::size_t i = 0; i < n_out; ++i) {
    const double eta = grid.coord(i);
    const auto it = std::upper_bound(y.begin() + 1, y.end() - 1, eta);
    const auto hi = static_cast<std::size_t>(it - y.begin());
    const std::size_t lo = hi - 1;
    const double w = (eta - y[lo]) / (y[hi] - y[lo]);
    u[i] = (1.0 - w) * val[lo] + w * val[hi];
  }
  return SlopeField(grid, std::move(u));
}

SlopeField rescale_to_unit_alpha(const SlopeField& u, double alpha) {
  require(alpha > 0.0, ErrorKind::InvalidArgument, "rescaling needs alpha > 0");
  const double f = 1.0 / std::sqrt(alpha);
  std::vector<double> v(u.values().begin(), u.values().end());
  for (double& x : v) x *= f;
  return SlopeField(PeriodicGrid(u.size(), u.grid().period() * f), std::move(v));
}

// HeightIntegrator -------------------------------------------------------------

HeightIntegrator::HeightIntegrator(const HeightField& h0, const HeightModel& model, const SimConfig& cfg)
    : model_(model),
      cfg_(cfg),
      boundary_(h0.boundary()),
      length_(h0.length()),
      height_difference_(h0.height_difference()) {
  cfg_.validate();
  check_model(h0, model_);
  const Ring ring = ring_of(h0);
  require(layout_of(h0).unknowns() >= 5, ErrorKind::InvalidArgument, "height grid too small");
  nodes_ = ring.size();
  state_.h.assign(ring.h.begin(), ring.h.end());
  state_.dt = cfg_.dt_init;
  // Validates the initial data (monotonicity for the monotone variant).
  (void)evaluate_faces(ring, model_);
}

HeightField HeightIntegrator::make_field(std::vector<double> values) const {
  if (boundary_ == HeightBoundary::Dirichlet) {
    values.push_back(height_difference_);
    return HeightField(IntervalGrid(nodes_ - 1, length_), std::move(values), height_difference_);
  }
  return HeightField(PeriodicGrid(nodes_, length_), std::move(values));
}

HeightField HeightIntegrator::field() const { return make_field(state_.h); }

HeightRecord HeightIntegrator::record(double dt_used) const {
  const HeightField h = field();
  HeightRecord rec;
  rec.t = state_.t;
  rec.G = surface_energy(h, model_.alpha);
  double sum = 0.0;
  for (double x : state_.h) sum += x;
  rec.mean_h = sum / static_cast<double>(nodes_);
  const auto [lo, hi] = std::minmax_element(h.values().begin(), h.values().end());
  rec.h_min = *lo;
  rec.h_max = *hi;
  const auto s = face_slopes(h);
  const auto [slo, shi] = std::minmax_element(s.begin(), s.end());
  rec.slope_min = *slo;
  rec.slope_max = *shi;
  rec.dt = dt_used;
  return rec;
}

std::vector<double> HeightIntegrator::solve(std::span<const double> h_old, double dt, int& iterations) const {
  const Layout layout{boundary_ == HeightBoundary::Dirichlet, nodes_};
  const std::size_t nu = layout.unknowns();
  std::vector<double> h(h_old.begin(), h_old.end());
  std::vector<double> trial(h.size());
  const double h_scale = inf_norm(h_old);
  iterations = 0;
  for (int iter = 0; iter <= cfg_.newton_max_iter; ++iter) {
    const Ring ring{h, height_difference_, length_ / static_cast<double>(nodes_)};
    const FaceData f = evaluate_faces(ring, model_);
    const auto rhs = ring_rhs(ring, f, layout);
    std::vector<double> r(nu);
    double q_noise = 0.0;
    for (double x : f.q_noise) q_noise = std::max(q_noise, x);
    for (std::size_t i = 0; i < nu; ++i) {
      const std::size_t j = layout.node(i);
      r[i] = h[j] - h_old[j] - dt * rhs[j];
    }
    const double norm = inf_norm(r);
    if (!std::isfinite(norm)) break;
    const double floor = 16.0 * kEps * (h_scale + dt * 2.0 * q_noise / ring.dx);
    if (norm <= std::max(cfg_.newton_tol, floor)) return h;
    if (iter == cfg_.newton_max_iter) break;

    CyclicBandedMatrix jac = ring_jacobian(ring, f, layout);
    for (std::size_t row = 0; row < nu; ++row) {
      for (std::ptrdiff_t d = -2; d <= 2; ++d) jac.band(row, d) *= -dt;
      jac.band(row, 0) += 1.0;
    }
    const auto delta = solve_cyclic_banded(jac, r);
    ++iterations;

    // Monotone runs damp the update until every face slope clears the floor.
    double lambda = 1.0;
    for (int halvings = 0;; ++halvings) {
      trial = h;
      for (std::size_t i = 0; i < nu; ++i) trial[layout.node(i)] -= lambda * delta[i];
      if (model_.variant == HeightVariant::Regularized) break;
      const Ring tr{trial, height_difference_, ring.dx};
      bool ok = true;
      for (std::size_t k = 0; k < nodes_ && ok; ++k) {
        const auto kk = static_cast<std::ptrdiff_t>(k);
        ok = (tr.at(kk + 1) - tr.at(kk)) / tr.dx > model_.slope_floor;
      }
      if (ok) break;
      if (halvings == 20) throw Error(ErrorKind::MonotonicityLost, "Newton update breaks monotonicity");
      lambda *= 0.5;
    }
    h.swap(trial);
  }
  throw Error(ErrorKind::NewtonDiverged,
              "height Newton did not converge in " + std::to_string(cfg_.newton_max_iter) + " iterations");
}

double HeightIntegrator::step(double t_target) {
  for (;;) {
    const double remaining = t_target - state_.t;
    // absorb rounding slivers left by summing fixed steps
    const bool last = remaining <= state_.dt * (1.0 + 1e-9);
    const double dt = last ? remaining : state_.dt;
    int iters = 0;
    std::vector<double> h_new;
    bool accepted = false;
    try {
      h_new = solve(state_.h, dt, iters);
      accepted = true;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NewtonDiverged && e.kind() != ErrorKind::SingularMatrix &&
          e.kind() != ErrorKind::MonotonicityLost) {
        throw;
      }
    }
    if (!accepted) {
      ++state_.rejected_steps;
      state_.dt = adapt_dt(false, iters, cfg_, std::min(state_.dt, std::max(dt, cfg_.dt_min)));
      continue;
    }
    state_.h = std::move(h_new);
    state_.t = last ? t_target : state_.t + dt;
    ++state_.step_count;
    state_.last_iterations = iters;
    if (!last || dt >= state_.dt) state_.dt = adapt_dt(true, iters, cfg_, state_.dt);
    return dt;
  }
}

void HeightIntegrator::advance_to(double t_target, const std::function<bool(double)>& on_step) {
  while (state_.t < t_target) {
    const double dt = step(t_target);
    if (on_step && !on_step(dt)) return;
  }
}

HeightTrajectory run_height(const HeightField& h0, const HeightModel& model, const SimConfig& cfg) {
  HeightIntegrator integ(h0, model, cfg);
  HeightTrajectory traj;
  traj.variant = model.variant;
  traj.alpha = model.alpha;
  for (std::size_t j = 0; j < h0.size(); ++j) traj.coords.push_back(h0.coord(j));

  long records_written = 0;
  auto record = [&](double dt_used) {
    traj.records.push_back(integ.record(dt_used));
    if (cfg.snapshot_stride > 0 && records_written % cfg.snapshot_stride == 0) {
      const HeightField h = integ.field();
      traj.snapshots.push_back({integ.state().t, {h.values().begin(), h.values().end()}});
    }
    ++records_written;
  };
  record(0.0);

  double last_dt = 0.0;
  bool last_recorded = true;
  try {
    integ.advance_to(cfg.t_end, [&](double dt_used) {
      last_dt = dt_used;
      last_recorded = false;
      if (integ.state().step_count % cfg.output_stride == 0) {
        record(dt_used);
        last_recorded = true;
      }
      return true;
    });
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::DtUnderflow) throw;
    traj.status = RunStatus::Failed;
    traj.failure = std::string(to_string(ErrorKind::SimulationFailed)) + ": " + e.what();
  }
  if (!last_recorded) record(last_dt);

  const HeightField h = integ.field();
  traj.final_t = integ.state().t;
  traj.final_values.assign(h.values().begin(), h.values().end());
  return traj;
}

}  // namespace vicinal
