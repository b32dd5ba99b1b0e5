#pragma once

#include <optional>
#include <vector>

#include "specbound/decomp.hpp"
#include "specbound/matrix.hpp"

namespace specbound {

/// Ground-truth spectral factorization of a normal matrix: eigenvalues plus a
/// unitary eigenvector matrix. A spectrum built from a diagonal matrix keeps
/// no explicit eigenvector storage (identity shortcut), which the large
/// benchmark problems rely on.
///
/// The Hermitian case stores real eigenvalues in non-increasing order with a
/// strict gap lambda_p > lambda_{p+1}; the normal case keeps the target
/// eigenvalues in the first p positions, disjoint from the rest.
class Spectrum {
public:
  static Spectrum diagonal(std::vector<double> eigenvalues_desc, std::size_t p);
  static Spectrum hermitian(std::vector<double> eigenvalues_desc, Matrix unitary, std::size_t p);
  static Spectrum normal(std::vector<cplx> eigenvalues, Matrix unitary, std::size_t p);
  /// Eigendecomposition route for an explicit Hermitian matrix.
  static Spectrum from_matrix(const Matrix& h, std::size_t p);

  std::size_t n() const { return n_; }
  std::size_t p() const { return p_; }
  bool hermitian() const { return hermitian_; }
  bool identity_vectors() const { return !vectors_.has_value(); }

  const std::vector<cplx>& eigenvalues() const { return eigenvalues_; }
  /// Real part accessor for the Hermitian case (0-based index).
  double eigenvalue_real(std::size_t i) const { return eigenvalues_[i].real(); }
  double lambda_min() const;
  double lambda_max() const;

  /// Selected eigenvector columns (0-based indices), materialized.
  Matrix eigenvector_columns(const std::vector<std::size_t>& idx) const;
  /// adjoint(X) * B.
  Matrix adjoint_vectors_times(const Matrix& b) const;
  /// adjoint(X[:, idx]) * B without materializing the column selection.
  Matrix adjoint_selected_vectors_times(const std::vector<std::size_t>& idx, const Matrix& b) const;
  /// adjoint(A) * B (conjugated eigenvalues).
  Matrix apply_adjoint(const Matrix& b) const;
  /// X * B.
  Matrix vectors_times(const Matrix& b) const;
  /// A * B through the factorization.
  Matrix apply(const Matrix& b) const;
  /// f(A) * B given the filter values at each eigenvalue.
  Matrix apply_function(const std::vector<cplx>& fvals, const Matrix& b) const;
  /// Materializes A (desk scale only).
  Matrix dense() const;

private:
  Spectrum() = default;
  void validate(double unitary_tol) const;

  std::size_t n_ = 0, p_ = 0;
  bool hermitian_ = true;
  std::vector<cplx> eigenvalues_;
  std::optional<Matrix> vectors_;  // nullopt = identity eigenvectors
};

}  // namespace specbound
