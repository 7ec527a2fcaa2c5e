#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace vicinal {

/// Square matrix whose nonzeros lie within `bandwidth` of the diagonal when
/// indices are taken modulo n, i.e. a banded matrix with periodic wrap.
/// Entry (i, d) is A[i][(i + d) mod n] for d in [-bandwidth, bandwidth].
class CyclicBandedMatrix {
 public:
  CyclicBandedMatrix(std::size_t n, std::size_t bandwidth);

  static CyclicBandedMatrix identity(std::size_t n, std::size_t bandwidth);

  std::size_t size() const noexcept { return n_; }
  std::size_t bandwidth() const noexcept { return bw_; }

  double band(std::size_t row, std::ptrdiff_t offset) const;
  double& band(std::size_t row, std::ptrdiff_t offset);

  /// Element access by (row, col); zero outside the cyclic band.
  double operator()(std::size_t row, std::size_t col) const;
  /// Accumulates into (row, col); throws if the pair lies outside the band.
  void add(std::size_t row, std::size_t col, double value);

  std::vector<double> multiply(std::span<const double> x) const;

  /// True if any band slot that crosses the matrix corner is nonzero.
  bool has_wrap_entries() const;

 private:
  std::ptrdiff_t cyclic_offset(std::size_t row, std::size_t col) const;

  std::size_t n_;
  std::size_t bw_;
  std::vector<double> data_;
};

/// Banded LU with partial pivoting (kl = ku = bandwidth), row-oriented
/// storage of width 3 * bandwidth + 1 to hold pivoting fill.
class BandedLU {
 public:
  BandedLU() = default;
  /// Factors the non-wrapping part of `a`.
  explicit BandedLU(const CyclicBandedMatrix& a);

  void solve_in_place(std::span<double> b) const;

 private:
  double& at(std::size_t row, std::size_t col);
  double at(std::size_t row, std::size_t col) const;

  std::size_t n_ = 0;
  std::size_t bw_ = 0;
  std::size_t width_ = 0;
  std::vector<double> lu_;
  std::vector<std::size_t> pivots_;
};

/// Dense LU with partial pivoting, for small blocks.
class DenseLU {
 public:
  DenseLU() = default;
  /// `a` is row-major n x n.
  DenseLU(std::vector<double> a, std::size_t n);

  void solve_in_place(std::span<double> b) const;

 private:
  std::size_t n_ = 0;
  std::vector<double> lu_;
  std::vector<std::size_t> pivots_;
};

/// Direct solver for cyclic banded systems. The last k = 2 * bandwidth
/// unknowns are split off: the leading principal block is banded and gets a
/// pivoted banded LU, the wrap-around couplings go into a dense k x k Schur
/// complement. Matrices too small for the split are factored densely.
/// Solutions are polished by iterative refinement against the full matrix.
class CyclicBandedSolver {
 public:
  explicit CyclicBandedSolver(const CyclicBandedMatrix& a);

  std::vector<double> solve(std::span<const double> rhs) const;

 private:
  std::vector<double> solve_once(std::span<const double> rhs) const;

  CyclicBandedMatrix matrix_;
  std::size_t m_ = 0;  // size of the banded block; 0 means dense fallback
  std::size_t k_ = 0;
  BandedLU band_lu_;
  std::vector<std::vector<std::pair<std::size_t, double>>> a12_;  // per column of the border: (row, value)
  std::vector<std::vector<std::pair<std::size_t, double>>> a21_;  // per border row: (col, value)
  std::vector<double> y_;  // m x k, column-major: A11^-1 A12
  DenseLU schur_;
};

/// Solves a * x = rhs; throws Error(SingularMatrix) on a vanishing pivot.
std::vector<double> solve_cyclic_banded(const CyclicBandedMatrix& a, std::span<const double> rhs);

}  // namespace vicinal
