#pragma once

#include <vector>

#include "specbound/matrix.hpp"
#include "specbound/tuples.hpp"

namespace specbound {

/// Thin SVD: input = left * diag(singulars) * adjoint(right), with
/// min(rows, cols) singular values in non-increasing order and orthonormal
/// columns in both factors.
struct SvdResult {
  Matrix left;
  DescTuple singulars;
  Matrix right;
};

/// One-sided Jacobi SVD. Rotates column pairs until every cross product falls
/// below 1e-14 relative to the column norms, which preserves the relative
/// accuracy of small singular values. Sweep limit 60.
SvdResult svd(const Matrix& m);

/// Singular values only (same algorithm, factors discarded).
DescTuple singular_values(const Matrix& m);

/// Largest singular value.
double two_norm(const Matrix& m);

struct EigResult {
  DescTuple values;   // non-increasing
  Matrix vectors;     // unitary, column j pairs with values[j]
};

/// Cyclic Jacobi eigendecomposition of a Hermitian matrix. The input is
/// symmetrized internally; deviation from Hermitian beyond 1e-12 relative is
/// an error. Sweep limit 60, rotations stop below 1e-14 of the matrix norm.
EigResult hermitian_eig(const Matrix& h);

/// Eigenvalues only; skips accumulating the eigenvector matrix.
DescTuple hermitian_eigenvalues(const Matrix& h);

/// Orthonormal basis of range(M) via the SVD. Requires full column rank
/// (smallest/largest singular value ratio above rel_tol).
Matrix orthonormalize(const Matrix& m, double rel_tol = 1e-12);

/// Moore-Penrose pseudoinverse; singular values below rel_tol * sigma_max are
/// treated as zero.
Matrix pseudoinverse(const Matrix& m, double rel_tol = 1e-12);

/// Solves A X = B by LU with partial pivoting (A square, well conditioned).
Matrix lu_solve(const Matrix& a, const Matrix& b);

/// Inverse of a square matrix via lu_solve.
Matrix inverse(const Matrix& a);

}  // namespace specbound
