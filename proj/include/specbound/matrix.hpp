#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "specbound/errors.hpp"

namespace specbound {

using cplx = std::complex<double>;

/// Dense complex matrix, row-major storage. All entries are expected to stay
/// finite; operations that require it check at their boundary.
class Matrix {
public:
  Matrix(std::size_t rows, std::size_t cols);

  static Matrix identity(std::size_t n);
  static Matrix zero(std::size_t rows, std::size_t cols) { return Matrix(rows, cols); }
  /// Builds from a row-major list of entries (size must equal rows*cols).
  static Matrix from_rows(std::size_t rows, std::size_t cols, std::vector<cplx> entries);
  static Matrix from_real_rows(std::size_t rows, std::size_t cols, const std::vector<double>& entries);
  /// n x 1 column with a single 1 at position i (0-based).
  static Matrix unit_column(std::size_t n, std::size_t i);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  cplx& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  cplx* row_ptr(std::size_t i) { return data_.data() + i * cols_; }
  const cplx* row_ptr(std::size_t i) const { return data_.data() + i * cols_; }

  bool all_finite() const;

  Matrix adjoint() const;
  Matrix transpose() const;
  Matrix conjugate() const;

  /// Columns j0..j0+count-1 as a new matrix.
  Matrix columns(std::size_t j0, std::size_t count) const;
  /// Arbitrary column subset (0-based indices, in the given order).
  Matrix columns(const std::vector<std::size_t>& idx) const;
  /// Arbitrary row subset (0-based indices, in the given order).
  Matrix rows_subset(const std::vector<std::size_t>& idx) const;
  Matrix column(std::size_t j) const { return columns(j, 1); }

  void set_column(std::size_t j, const Matrix& col);

  Matrix& operator+=(const Matrix& other);
  Matrix& operator-=(const Matrix& other);
  Matrix& operator*=(cplx scalar);

  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(Matrix a, cplx s) { return a *= s; }
  friend Matrix operator*(cplx s, Matrix a) { return a *= s; }

private:
  std::size_t rows_, cols_;
  std::vector<cplx> data_;
};

/// C = A*B. Parallelized over rows of A; per-entry arithmetic is identical for
/// any worker count, so results are bit-reproducible.
Matrix matmul(const Matrix& a, const Matrix& b);

/// adjoint(A)*B without materializing the adjoint.
Matrix adjoint_times(const Matrix& a, const Matrix& b);

/// Scales row i of A by s[i] (diagonal-from-the-left product).
Matrix scale_rows(const std::vector<cplx>& s, const Matrix& a);

/// Stacks [A B] side by side.
Matrix hstack(const Matrix& a, const Matrix& b);

double frobenius_norm(const Matrix& a);
double max_abs(const Matrix& a);

/// Largest deviation of adjoint(Q)*Q from the identity (Frobenius norm).
double gram_residual(const Matrix& q);

namespace detail {
/// Naive triple-loop product kept as the serial reference for the parallel
/// kernel; exercised by tests and the benchmark target.
Matrix matmul_reference(const Matrix& a, const Matrix& b);
}  // namespace detail

}  // namespace specbound
