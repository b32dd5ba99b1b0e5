#pragma once

#include <vector>

#include "specbound/filters.hpp"
#include "specbound/spectrum.hpp"
#include "specbound/subspaces.hpp"

namespace specbound {

/// Rayleigh-Ritz extraction: eigenpairs of the compression of A onto a trial
/// subspace. `spread` is the gap between the largest and smallest Ritz value
/// of the full projected set.
struct RitzSet {
  DescTuple values;
  Matrix vectors;  // orthonormal columns, one per requested value
  double spread;
};

/// steps applications of A with re-orthonormalization after every step (the
/// range is unchanged by it). steps = 0 returns the input unchanged.
Subspace block_power(const Spectrum& spec, const Subspace& y0, unsigned steps);

/// Orthonormal basis of Y + A Y + ... + A^{k-1} Y, built block by block with
/// two-pass re-orthogonalization against all previous blocks. Blocks may lose
/// rank; the dimension then shrinks (tolerance 1e-10 relative to the block's
/// largest column norm).
Subspace block_krylov_basis(const Spectrum& spec, const Subspace& y, unsigned k);

/// Same builder, keeping the accumulated dimension after each degree so
/// nested prefixes K_1 subset K_2 subset ... can be reused.
struct KrylovBasis {
  Matrix q;                            // n x dim, orthonormal columns
  std::vector<std::size_t> dim_at;     // dim_at[j] = dim of K_{j+1}
  std::size_t dim() const { return q.cols(); }
};
KrylovBasis build_block_krylov(const Spectrum& spec, const Matrix& y_orthonormal, unsigned k);

/// Top `want` Ritz pairs of A in the span of `basis` (must be orthonormal).
RitzSet rayleigh_ritz(const Spectrum& spec, const Subspace& basis, std::size_t want);

/// Chebyshev three-term recurrence applied blockwise: Z_0 = Y,
/// Z_1 = A_mapped Y, Z_{j+1} = 2 A_mapped Z_j - Z_{j-1}, where A_mapped sends
/// [interval.first, interval.second] = [lambda_n, lambda_{p+1}] to [-1, 1].
/// Returns Z_{k-1}; agrees with the spectral application of the shifted
/// Chebyshev filter.
Subspace chebyshev_block_step(const Spectrum& spec, std::pair<double, double> interval, unsigned k,
                              const Subspace& y);

/// Hermitian pencil L v = alpha S v with S positive definite, a shift beta
/// with L - beta S invertible, and the sign choice for the transformed
/// operator.
struct Pencil {
  Matrix l;
  Matrix s;
  double beta;
  int sign;  // +1 or -1
};

/// Spectral transform lambda = sign/(alpha - beta): builds the Hermitian
/// operator A = M^{-1/2} (sign * L_beta) M^{-1/2} with M = L_beta S^{-1}
/// L_beta and returns its spectrum together with the shift data needed to
/// map eigenvalues back.
struct ShiftInvertOperator {
  Spectrum spectrum;
  double beta;
  int sign;
  /// Recovers a pencil eigenvalue from a transformed one.
  double original_eigenvalue(double lambda) const;
  /// Transforms a pencil eigenvalue.
  double transformed_eigenvalue(double alpha) const;
};

ShiftInvertOperator shift_invert_operator(const Pencil& pencil, std::size_t p);

/// Solves M w = r with M = L_beta S^{-1} L_beta as two shifted solves; the
/// alternative application route cross-checked against the factorized form.
Matrix pencil_apply_m_inverse(const Pencil& pencil, const Matrix& r);

/// Restriction consistency: with V an orthonormal basis of X + K, the
/// projected Krylov space equals the Krylov space of the projected operator.
/// True when the two subspaces agree to an angle of 1e-8.
bool krylov_transform_check(const Spectrum& spec, const Subspace& y, unsigned k, const Subspace& v);

}  // namespace specbound
