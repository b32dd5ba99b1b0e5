#pragma once

#include "specbound/decomp.hpp"
#include "specbound/indexset.hpp"
#include "specbound/matrix.hpp"
#include "specbound/tuples.hpp"

namespace specbound {

/// A subspace of C^n carried by an explicit basis matrix. Construction checks
/// full column rank (threshold 1e-12 relative); the orthonormal flag records
/// whether adjoint(basis)*basis = I holds to 1e-12.
class Subspace {
public:
  /// General basis; rank-checked via the SVD.
  static Subspace from_columns(Matrix basis, double rank_tol = 1e-12);
  /// Basis already orthonormal; verified with a Gram residual, not an SVD.
  static Subspace from_orthonormal(Matrix basis, double tol = 1e-12);

  const Matrix& basis() const { return basis_; }
  bool orthonormal() const { return orthonormal_; }
  std::size_t dim() const { return basis_.cols(); }
  std::size_t ambient_dim() const { return basis_.rows(); }

  /// Same subspace with an orthonormal basis (no-op when already flagged).
  Subspace orthonormalized() const;

private:
  Subspace(Matrix b, bool ortho) : basis_(std::move(b)), orthonormal_(ortho) {}
  Matrix basis_;
  bool orthonormal_;
};

/// Principal angles in [0, pi/2), largest first; one angle per dimension of
/// the smaller subspace.
struct AngleTuple {
  DescTuple angles;
  std::size_t count() const { return angles.size(); }
  DescTuple tangents() const;
};

/// Angles from U to V via the cosine definition: arccos of the singular
/// values of adjoint(V)*U, with clamping into [0,1] (tolerance 1e-12 against
/// round-off above 1). Requires dim(U) <= dim(V); the order is not silently
/// swapped.
AngleTuple principal_angles_cosine(const Subspace& u, const Subspace& v);

/// Tangents of the angles from span(utilde) to V: the s largest singular
/// values of adjoint(Vperp)*Utilde*pinv(adjoint(V)*Utilde). V and Vperp must
/// be orthonormal, mutually orthogonal and together span the whole space;
/// s <= min(t, n-t). A rank-deficient adjoint(V)*Utilde means an angle of
/// pi/2 and is an error.
DescTuple principal_angles_tangent(const Matrix& utilde, const Subspace& v, const Subspace& vperp);

/// Basis Y with adjoint(x_i)*y_j = delta_ij: columns y_j = Ytilde * c_j where
/// c_j are the columns of inverse(adjoint(X)*Ytilde). Fails when the angle
/// between the spans reaches pi/2 (Gram matrix singular at 1e-12 relative).
Matrix biorthogonal_basis(const Subspace& x, const Subspace& ytilde);

/// The chosen columns, in order (1-based strictly increasing indices).
Matrix select_columns(const Matrix& y, const IndexSet& tau);

/// Orthonormal basis of the orthogonal complement of V.
Subspace orthonormal_complement(const Subspace& v);

/// Two-pass block Gram-Schmidt: orthonormalizes `block` against `against`
/// (may be null) and internally, dropping columns whose remaining norm falls
/// below drop_tol relative to the block's largest column norm. Returns the
/// kept columns (possibly zero columns -> 0x0 signalled by empty optional
/// upstream; here a Matrix with the kept count, or count 0 is an error for
/// Matrix, so callers check kept_count first via the out-parameter).
Matrix orthonormalize_against(const Matrix& block, const Matrix* against, double drop_tol,
                              std::size_t& kept);

}  // namespace specbound
