#include "vicinal/banded.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "vicinal/error.hpp"

namespace vicinal {

CyclicBandedMatrix::CyclicBandedMatrix(std::size_t n, std::size_t bandwidth)
    : n_(n), bw_(bandwidth), data_(n * (2 * bandwidth + 1), 0.0) {
  require(n >= 2 * bandwidth + 1, ErrorKind::InvalidArgument,
          "cyclic banded matrix needs n >= 2 * bandwidth + 1");
}

CyclicBandedMatrix CyclicBandedMatrix::identity(std::size_t n, std::size_t bandwidth) {
  CyclicBandedMatrix m(n, bandwidth);
  for (std::size_t i = 0; i < n; ++i) m.band(i, 0) = 1.0;
  return m;
}

double CyclicBandedMatrix::band(std::size_t row, std::ptrdiff_t offset) const {
  return data_[row * (2 * bw_ + 1) + static_cast<std::size_t>(offset + static_cast<std::ptrdiff_t>(bw_))];
}

double& CyclicBandedMatrix::band(std::size_t row, std::ptrdiff_t offset) {
  return data_[row * (2 * bw_ + 1) + static_cast<std::size_t>(offset + static_cast<std::ptrdiff_t>(bw_))];
}

std::ptrdiff_t CyclicBandedMatrix::cyclic_offset(std::size_t row, std::size_t col) const {
  const auto n = static_cast<std::ptrdiff_t>(n_);
  std::ptrdiff_t d = static_cast<std::ptrdiff_t>(col) - static_cast<std::ptrdiff_t>(row);
  d = ((d % n) + n) % n;
  if (d > n / 2) d -= n;
  return d;
}

double CyclicBandedMatrix::operator()(std::size_t row, std::size_t col) const {
  const std::ptrdiff_t d = cyclic_offset(row, col);
  if (std::abs(d) > static_cast<std::ptrdiff_t>(bw_)) return 0.0;
  return band(row, d);
}

void CyclicBandedMatrix::add(std::size_t row, std::size_t col, double value) {
  const std::ptrdiff_t d = cyclic_offset(row, col);
  require(std::abs(d) <= static_cast<std::ptrdiff_t>(bw_), ErrorKind::InvalidArgument,
          "entry (" + std::to_string(row) + ", " + std::to_string(col) + ") outside cyclic band");
  band(row, d) += value;
}

std::vector<double> CyclicBandedMatrix::multiply(std::span<const double> x) const {
  require(x.size() == n_, ErrorKind::InvalidArgument, "matrix-vector size mismatch");
  const std::size_t w = 2 * bw_ + 1;
  std::vector<double> y(n_, 0.0);
  for (std::size_t i = 0; i < n_; ++i) {
    const double* row = data_.data() + i * w;
    double acc = 0.0;
    if (i >= bw_ && i + bw_ < n_) {
      const double* xs = x.data() + (i - bw_);
      for (std::size_t k = 0; k < w; ++k) acc += row[k] * xs[k];
    } else {
      for (std::size_t k = 0; k < w; ++k) acc += row[k] * x[(i + n_ + k - bw_) % n_];
    }
    y[i] = acc;
  }
  return y;
}

bool CyclicBandedMatrix::has_wrap_entries() const {
  const auto n = static_cast<std::ptrdiff_t>(n_);
  const auto bw = static_cast<std::ptrdiff_t>(bw_);
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    for (std::ptrdiff_t d = -bw; d <= bw; ++d) {
      const std::ptrdiff_t j = i + d;
      if ((j < 0 || j >= n) && band(static_cast<std::size_t>(i), d) != 0.0) return true;
    }
  }
  return false;
}

// BandedLU ------------------------------------------------------------------

double& BandedLU::at(std::size_t row, std::size_t col) {
  return lu_[row * width_ + (col + bw_ - row)];
}

double BandedLU::at(std::size_t row, std::size_t col) const {
  return lu_[row * width_ + (col + bw_ - row)];
}

BandedLU::BandedLU(const CyclicBandedMatrix& a)
    : n_(a.size()), bw_(a.bandwidth()), width_(3 * a.bandwidth() + 1), lu_(n_ * width_, 0.0), pivots_(n_) {
  double scale = 0.0;
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = (i >= bw_ ? i - bw_ : 0); j <= std::min(n_ - 1, i + bw_); ++j) {
      const double v = a.band(i, static_cast<std::ptrdiff_t>(j) - static_cast<std::ptrdiff_t>(i));
      at(i, j) = v;
      scale = std::max(scale, std::abs(v));
    }
  }
  const double tiny = scale * 1e-14;
  if (scale == 0.0) throw Error(ErrorKind::SingularMatrix, "banded factorization: zero matrix");

  for (std::size_t j = 0; j < n_; ++j) {
    const std::size_t last_row = std::min(n_ - 1, j + bw_);
    const std::size_t last_col = std::min(n_ - 1, j + 2 * bw_);
    std::size_t p = j;
    for (std::size_t i = j + 1; i <= last_row; ++i) {
      if (std::abs(at(i, j)) > std::abs(at(p, j))) p = i;
    }
    if (!(std::abs(at(p, j)) > tiny)) {
      throw Error(ErrorKind::SingularMatrix, "banded factorization: pivot below threshold at column " +
                                                 std::to_string(j));
    }
    pivots_[j] = p;
    if (p != j) {
      for (std::size_t c = j; c <= last_col; ++c) std::swap(at(j, c), at(p, c));
    }
    const double inv = 1.0 / at(j, j);
    for (std::size_t i = j + 1; i <= last_row; ++i) {
      const double l = at(i, j) * inv;
      at(i, j) = l;
      if (l == 0.0) continue;
      for (std::size_t c = j + 1; c <= last_col; ++c) at(i, c) -= l * at(j, c);
    }
  }
}

void BandedLU::solve_in_place(std::span<double> b) const {
  for (std::size_t j = 0; j < n_; ++j) {
    if (pivots_[j] != j) std::swap(b[j], b[pivots_[j]]);
    const std::size_t last_row = std::min(n_ - 1, j + bw_);
    for (std::size_t i = j + 1; i <= last_row; ++i) b[i] -= at(i, j) * b[j];
  }
  for (std::size_t i = n_; i-- > 0;) {
    const std::size_t last_col = std::min(n_ - 1, i + 2 * bw_);
    double acc = b[i];
    for (std::size_t c = i + 1; c <= last_col; ++c) acc -= at(i, c) * b[c];
    b[i] = acc / at(i, i);
  }
}

// DenseLU -------------------------------------------------------------------

DenseLU::DenseLU(std::vector<double> a, std::size_t n) : n_(n), lu_(std::move(a)), pivots_(n) {
  require(lu_.size() == n * n, ErrorKind::InvalidArgument, "dense LU needs an n x n matrix");
  double scale = 0.0;
  for (double v : lu_) scale = std::max(scale, std::abs(v));
  for (std::size_t j = 0; j < n; ++j) {
    std::size_t p = j;
    for (std::size_t i = j + 1; i < n; ++i) {
      if (std::abs(lu_[i * n + j]) > std::abs(lu_[p * n + j])) p = i;
    }
    if (!(std::abs(lu_[p * n + j]) > scale * 1e-14)) {
      throw Error(ErrorKind::SingularMatrix, "dense factorization: pivot below threshold at column " +
                                                 std::to_string(j));
    }
    pivots_[j] = p;
    if (p != j) {
      for (std::size_t c = 0; c < n; ++c) std::swap(lu_[j * n + c], lu_[p * n + c]);
    }
    for (std::size_t i = j + 1; i < n; ++i) {
      const double l = lu_[i * n + j] / lu_[j * n + j];
      lu_[i * n + j] = l;
      for (std::size_t c = j + 1; c < n; ++c) lu_[i * n + c] -= l * lu_[j * n + c];
    }
  }
}

void DenseLU::solve_in_place(std::span<double> b) const {
  const std::size_t n = n_;
  for (std::size_t j = 0; j < n; ++j) {
    if (pivots_[j] != j) std::swap(b[j], b[pivots_[j]]);
  }
  for (std::size_t i = 0; i < n; ++i) {
    double acc = b[i];
    for (std::size_t c = 0; c < i; ++c) acc -= lu_[i * n + c] * b[c];
    b[i] = acc;
  }
  for (std::size_t i = n; i-- > 0;) {
    double acc = b[i];
    for (std::size_t c = i + 1; c < n; ++c) acc -= lu_[i * n + c] * b[c];
    b[i] = acc / lu_[i * n + i];
  }
}

// CyclicBandedSolver --------------------------------------------------------

namespace {

double inf_norm(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

CyclicBandedSolver::CyclicBandedSolver(const CyclicBandedMatrix& a) : matrix_(a) {
  const std::size_t n = a.size();
  const std::size_t bw = a.bandwidth();
  k_ = 2 * bw;
  if (bw == 0 || n < 4 * bw + 1) {
    std::vector<double> dense(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) dense[i * n + j] = a(i, j);
    }
    schur_ = DenseLU(std::move(dense), n);
    return;
  }
  m_ = n - k_;
  const std::size_t m = m_;
  const auto nn = static_cast<std::ptrdiff_t>(n);
  const auto bwi = static_cast<std::ptrdiff_t>(bw);

  CyclicBandedMatrix a11(m, bw);
  std::vector<double> a22(k_ * k_, 0.0);
  a12_.assign(k_, {});
  a21_.assign(k_, {});
  for (std::size_t i = 0; i < n; ++i) {
    for (std::ptrdiff_t d = -bwi; d <= bwi; ++d) {
      const double v = a.band(i, d);
      if (v == 0.0) continue;
      const auto j = static_cast<std::size_t>(((static_cast<std::ptrdiff_t>(i) + d) % nn + nn) % nn);
      if (i < m && j < m) {
        a11.band(i, static_cast<std::ptrdiff_t>(j) - static_cast<std::ptrdiff_t>(i)) += v;
      } else if (i < m) {
        a12_[j - m].push_back({i, v});
      } else if (j < m) {
        a21_[i - m].push_back({j, v});
      } else {
        a22[(i - m) * k_ + (j - m)] += v;
      }
    }
  }
  band_lu_ = BandedLU(a11);

  y_.assign(m * k_, 0.0);
  for (std::size_t c = 0; c < k_; ++c) {
    std::span<double> col(y_.data() + c * m, m);
    for (const auto& [row, v] : a12_[c]) col[row] = v;
    band_lu_.solve_in_place(col);
  }
  for (std::size_t r = 0; r < k_; ++r) {
    for (std::size_t c = 0; c < k_; ++c) {
      double acc = 0.0;
      for (const auto& [col, v] : a21_[r]) acc += v * y_[c * m + col];
      a22[r * k_ + c] -= acc;
    }
  }
  schur_ = DenseLU(std::move(a22), k_);
}

std::vector<double> CyclicBandedSolver::solve_once(std::span<const double> rhs) const {
  std::vector<double> x(rhs.begin(), rhs.end());
  if (m_ == 0) {
    schur_.solve_in_place(x);
    return x;
  }
  const std::size_t m = m_;
  std::span<double> x1(x.data(), m);
  std::span<double> x2(x.data() + m, k_);
  band_lu_.solve_in_place(x1);
  for (std::size_t r = 0; r < k_; ++r) {
    for (const auto& [col, v] : a21_[r]) x2[r] -= v * x1[col];
  }
  schur_.solve_in_place(x2);
  for (std::size_t c = 0; c < k_; ++c) {
    const double s = x2[c];
    if (s == 0.0) continue;
    const double* yc = y_.data() + c * m;
    for (std::size_t i = 0; i < m; ++i) x1[i] -= yc[i] * s;
  }
  return x;
}

std::vector<double> CyclicBandedSolver::solve(std::span<const double> rhs) const {
  require(rhs.size() == matrix_.size(), ErrorKind::InvalidArgument, "right-hand side size mismatch");
  std::vector<double> x = solve_once(rhs);
  const double bnorm = inf_norm(rhs);
  for (int sweep = 0; sweep < 3; ++sweep) {
    std::vector<double> r = matrix_.multiply(x);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = rhs[i] - r[i];
    if (inf_norm(r) <= 1e-12 * bnorm) break;
    const std::vector<double> dx = solve_once(r);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += dx[i];
  }
  for (double v : x) {
    if (!std::isfinite(v)) throw Error(ErrorKind::SingularMatrix, "cyclic solve produced non-finite values");
  }
  return x;
}

std::vector<double> solve_cyclic_banded(const CyclicBandedMatrix& a, std::span<const double> rhs) {
  return CyclicBandedSolver(a).solve(rhs);
}

}  // namespace vicinal
