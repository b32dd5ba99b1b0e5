#include "specbound/matrix.hpp"

#include <cmath>

namespace specbound {

Matrix::Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {
  if (rows == 0 || cols == 0)
    throw DimensionError("matrix dimensions must be at least 1x1");
  data_.assign(rows * cols, cplx(0.0, 0.0));
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::from_rows(std::size_t rows, std::size_t cols, std::vector<cplx> entries) {
  if (entries.size() != rows * cols)
    throw DimensionError("entry count does not match rows*cols");
  Matrix m(rows, cols);
  m.data_ = std::move(entries);
  return m;
}

Matrix Matrix::from_real_rows(std::size_t rows, std::size_t cols, const std::vector<double>& entries) {
  if (entries.size() != rows * cols)
    throw DimensionError("entry count does not match rows*cols");
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < entries.size(); ++i) m.data_[i] = entries[i];
  return m;
}

Matrix Matrix::unit_column(std::size_t n, std::size_t i) {
  Matrix m(n, 1);
  m(i, 0) = 1.0;
  return m;
}

bool Matrix::all_finite() const {
  for (const cplx& z : data_)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  return true;
}

Matrix Matrix::adjoint() const {
  Matrix m(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) m(j, i) = std::conj((*this)(i, j));
  return m;
}

Matrix Matrix::transpose() const {
  Matrix m(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) m(j, i) = (*this)(i, j);
  return m;
}

Matrix Matrix::conjugate() const {
  Matrix m(rows_, cols_);
  for (std::size_t i = 0; i < rows_ * cols_; ++i) m.data_[i] = std::conj(data_[i]);
  return m;
}

Matrix Matrix::columns(std::size_t j0, std::size_t count) const {
  if (j0 + count > cols_) throw DimensionError("column range out of bounds");
  Matrix m(rows_, count);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < count; ++j) m(i, j) = (*this)(i, j0 + j);
  return m;
}

Matrix Matrix::columns(const std::vector<std::size_t>& idx) const {
  if (idx.empty()) throw DimensionError("empty column selection");
  for (std::size_t j : idx)
    if (j >= cols_) throw DimensionError("column index out of bounds");
  Matrix m(rows_, idx.size());
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < idx.size(); ++j) m(i, j) = (*this)(i, idx[j]);
  return m;
}

Matrix Matrix::rows_subset(const std::vector<std::size_t>& idx) const {
  if (idx.empty()) throw DimensionError("empty row selection");
  for (std::size_t i : idx)
    if (i >= rows_) throw DimensionError("row index out of bounds");
  Matrix m(idx.size(), cols_);
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = 0; j < cols_; ++j) m(i, j) = (*this)(idx[i], j);
  return m;
}

void Matrix::set_column(std::size_t j, const Matrix& col) {
  if (col.rows() != rows_ || col.cols() != 1 || j >= cols_)
    throw DimensionError("set_column shape mismatch");
  for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = col(i, 0);
}

Matrix& Matrix::operator+=(const Matrix& other) {
  if (other.rows_ != rows_ || other.cols_ != cols_) throw DimensionError("shape mismatch in +");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& other) {
  if (other.rows_ != rows_ || other.cols_ != cols_) throw DimensionError("shape mismatch in -");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

Matrix& Matrix::operator*=(cplx scalar) {
  for (cplx& z : data_) z *= scalar;
  return *this;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw DimensionError("shape mismatch in matmul");
  const std::size_t m = a.rows(), k = a.cols(), n = b.cols();
  Matrix c(m, n);
  // ikj order with the inner dimension unrolled: the update walks contiguous
  // rows of B and C, and each row of C belongs to one thread with a fixed
  // per-entry summation order, so the result does not depend on the schedule.
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (m * n * k > 32768)
#endif
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(m); ++i) {
    cplx* ci = c.row_ptr(i);
    std::size_t l = 0;
    for (; l + 4 <= k; l += 4) {
      const cplx a0 = a(i, l), a1 = a(i, l + 1), a2 = a(i, l + 2), a3 = a(i, l + 3);
      const cplx* b0 = b.row_ptr(l);
      const cplx* b1 = b.row_ptr(l + 1);
      const cplx* b2 = b.row_ptr(l + 2);
      const cplx* b3 = b.row_ptr(l + 3);
      for (std::size_t j = 0; j < n; ++j)
        ci[j] += a0 * b0[j] + a1 * b1[j] + a2 * b2[j] + a3 * b3[j];
    }
    for (; l < k; ++l) {
      const cplx ail = a(i, l);
      const cplx* bl = b.row_ptr(l);
      for (std::size_t j = 0; j < n; ++j) ci[j] += ail * bl[j];
    }
  }
  return c;
}

Matrix adjoint_times(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) throw DimensionError("shape mismatch in adjoint_times");
  const std::size_t m = a.cols(), k = a.rows(), n = b.cols();
  Matrix c(m, n);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (m * n * k > 32768)
#endif
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(m); ++i) {
    cplx* ci = c.row_ptr(i);
    std::size_t l = 0;
    for (; l + 4 <= k; l += 4) {
      const cplx a0 = std::conj(a(l, i)), a1 = std::conj(a(l + 1, i));
      const cplx a2 = std::conj(a(l + 2, i)), a3 = std::conj(a(l + 3, i));
      const cplx* b0 = b.row_ptr(l);
      const cplx* b1 = b.row_ptr(l + 1);
      const cplx* b2 = b.row_ptr(l + 2);
      const cplx* b3 = b.row_ptr(l + 3);
      for (std::size_t j = 0; j < n; ++j)
        ci[j] += a0 * b0[j] + a1 * b1[j] + a2 * b2[j] + a3 * b3[j];
    }
    for (; l < k; ++l) {
      const cplx ali = std::conj(a(l, i));
      const cplx* bl = b.row_ptr(l);
      for (std::size_t j = 0; j < n; ++j) ci[j] += ali * bl[j];
    }
  }
  return c;
}

Matrix scale_rows(const std::vector<cplx>& s, const Matrix& a) {
  if (s.size() != a.rows()) throw DimensionError("scale vector length mismatch");
  Matrix c(a.rows(), a.cols());
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (a.rows() * a.cols() > 65536)
#endif
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(a.rows()); ++i) {
    const cplx si = s[i];
    const cplx* ai = a.row_ptr(i);
    cplx* ci = c.row_ptr(i);
    for (std::size_t j = 0; j < a.cols(); ++j) ci[j] = si * ai[j];
  }
  return c;
}

Matrix hstack(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) throw DimensionError("row mismatch in hstack");
  Matrix c(a.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j);
    for (std::size_t j = 0; j < b.cols(); ++j) c(i, a.cols() + j) = b(i, j);
  }
  return c;
}

double frobenius_norm(const Matrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const cplx* ai = a.row_ptr(i);
    for (std::size_t j = 0; j < a.cols(); ++j) s += std::norm(ai[j]);
  }
  return std::sqrt(s);
}

double max_abs(const Matrix& a) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const cplx* ai = a.row_ptr(i);
    for (std::size_t j = 0; j < a.cols(); ++j) m = std::max(m, std::abs(ai[j]));
  }
  return m;
}

double gram_residual(const Matrix& q) {
  Matrix g = adjoint_times(q, q);
  for (std::size_t i = 0; i < g.rows(); ++i) g(i, i) -= 1.0;
  return frobenius_norm(g);
}

namespace detail {

Matrix matmul_reference(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw DimensionError("shape mismatch in matmul");
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      cplx s(0.0, 0.0);
      for (std::size_t l = 0; l < a.cols(); ++l) s += a(i, l) * b(l, j);
      c(i, j) = s;
    }
  return c;
}

}  // namespace detail

}  // namespace specbound
