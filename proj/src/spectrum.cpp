#include "specbound/spectrum.hpp"

#include <algorithm>
#include <cmath>

namespace specbound {

namespace {

void check_descending_with_gap(const std::vector<double>& vals, std::size_t p) {
  for (std::size_t i = 0; i + 1 < vals.size(); ++i)
    if (vals[i] < vals[i + 1])
      throw NumericDomainError("Hermitian spectrum must be non-increasing");
  if (p >= 1 && p < vals.size() && !(vals[p - 1] > vals[p]))
    throw NumericDomainError("gap violation: lambda_p must exceed lambda_{p+1}");
}

void check_disjoint(const std::vector<cplx>& vals, std::size_t p) {
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = p; j < vals.size(); ++j)
      if (std::abs(vals[i] - vals[j]) == 0.0)
        throw NumericDomainError("target and unwanted eigenvalue sets must be disjoint");
}

}  // namespace

void Spectrum::validate(double unitary_tol) const {
  if (p_ < 1 || p_ > n_) throw DimensionError("block size p out of range");
  if (vectors_.has_value()) {
    if (vectors_->rows() != n_ || vectors_->cols() != n_)
      throw DimensionError("eigenvector matrix must be n x n");
    const double res = gram_residual(*vectors_);
    if (res > unitary_tol * std::sqrt(static_cast<double>(n_)))
      throw NumericDomainError("eigenvector matrix is not unitary to tolerance");
  }
}

Spectrum Spectrum::diagonal(std::vector<double> eigenvalues_desc, std::size_t p) {
  check_descending_with_gap(eigenvalues_desc, p);
  Spectrum s;
  s.n_ = eigenvalues_desc.size();
  s.p_ = p;
  s.hermitian_ = true;
  s.eigenvalues_.assign(eigenvalues_desc.begin(), eigenvalues_desc.end());
  s.validate(1e-12);
  return s;
}

Spectrum Spectrum::hermitian(std::vector<double> eigenvalues_desc, Matrix unitary, std::size_t p) {
  check_descending_with_gap(eigenvalues_desc, p);
  Spectrum s;
  s.n_ = eigenvalues_desc.size();
  s.p_ = p;
  s.hermitian_ = true;
  s.eigenvalues_.assign(eigenvalues_desc.begin(), eigenvalues_desc.end());
  s.vectors_ = std::move(unitary);
  s.validate(1e-12);
  return s;
}

Spectrum Spectrum::normal(std::vector<cplx> eigenvalues, Matrix unitary, std::size_t p) {
  check_disjoint(eigenvalues, p);
  Spectrum s;
  s.n_ = eigenvalues.size();
  s.p_ = p;
  s.hermitian_ = false;
  s.eigenvalues_ = std::move(eigenvalues);
  s.vectors_ = std::move(unitary);
  s.validate(1e-12);
  return s;
}

Spectrum Spectrum::from_matrix(const Matrix& h, std::size_t p) {
  EigResult e = hermitian_eig(h);
  return hermitian(e.values.values(), std::move(e.vectors), p);
}

double Spectrum::lambda_min() const {
  double m = eigenvalues_.front().real();
  for (const cplx& z : eigenvalues_) m = std::min(m, z.real());
  return m;
}

double Spectrum::lambda_max() const {
  double m = eigenvalues_.front().real();
  for (const cplx& z : eigenvalues_) m = std::max(m, z.real());
  return m;
}

Matrix Spectrum::eigenvector_columns(const std::vector<std::size_t>& idx) const {
  if (idx.empty()) throw DimensionError("empty eigenvector selection");
  if (vectors_.has_value()) return vectors_->columns(idx);
  Matrix m(n_, idx.size());
  for (std::size_t j = 0; j < idx.size(); ++j) {
    if (idx[j] >= n_) throw DimensionError("eigenvector index out of range");
    m(idx[j], j) = 1.0;
  }
  return m;
}

Matrix Spectrum::adjoint_vectors_times(const Matrix& b) const {
  if (b.rows() != n_) throw DimensionError("shape mismatch");
  if (!vectors_.has_value()) return b;
  return adjoint_times(*vectors_, b);
}

Matrix Spectrum::adjoint_selected_vectors_times(const std::vector<std::size_t>& idx,
                                                const Matrix& b) const {
  if (b.rows() != n_) throw DimensionError("shape mismatch");
  if (!vectors_.has_value()) return b.rows_subset(idx);
  return adjoint_times(vectors_->columns(idx), b);
}

Matrix Spectrum::apply_adjoint(const Matrix& b) const {
  std::vector<cplx> conj_vals(n_);
  for (std::size_t i = 0; i < n_; ++i) conj_vals[i] = std::conj(eigenvalues_[i]);
  return apply_function(conj_vals, b);
}

Matrix Spectrum::vectors_times(const Matrix& b) const {
  if (b.rows() != n_) throw DimensionError("shape mismatch");
  if (!vectors_.has_value()) return b;
  return matmul(*vectors_, b);
}

Matrix Spectrum::apply(const Matrix& b) const {
  return apply_function(eigenvalues_, b);
}

Matrix Spectrum::apply_function(const std::vector<cplx>& fvals, const Matrix& b) const {
  if (fvals.size() != n_) throw DimensionError("filter value table must cover the spectrum");
  if (!vectors_.has_value()) return scale_rows(fvals, b);
  return matmul(*vectors_, scale_rows(fvals, adjoint_times(*vectors_, b)));
}

Matrix Spectrum::dense() const {
  if (!vectors_.has_value()) {
    Matrix a(n_, n_);
    for (std::size_t i = 0; i < n_; ++i) a(i, i) = eigenvalues_[i];
    return a;
  }
  return apply_function(eigenvalues_, Matrix::identity(n_));
}

}  // namespace specbound
