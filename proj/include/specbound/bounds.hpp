#pragma once

#include <string>
#include <vector>

#include "specbound/filters.hpp"
#include "specbound/solvers.hpp"

namespace specbound {

/// One evaluated convergence bound: the measured tuple, the bound tuple, and
/// the comparison verdict. For tuple bounds the verdict compares prefix sums
/// (weak majorization); for per-index scalar bounds `componentwise` is set and
/// the verdict's arrays hold the per-index values instead.
struct BoundReport {
  std::string name;
  DescTuple measured;
  DescTuple bound;
  MajorizationVerdict verdict;
  bool componentwise = false;
  bool applicable = true;                // filter separation / gap conditions
  std::vector<std::size_t> excluded;     // 1-based entries dropped (denominator guard)
  DescTuple factors;                     // convergence-factor tuple of the right side
  std::string note;
};

/// Bounds that come in two right-hand sides: one through the auxiliary
/// biorthogonal subspaces, one with those eliminated in favor of the plain
/// initial-subspace angles.
struct BoundPair {
  BoundReport auxiliary;
  BoundReport eliminated;
};

struct BoundOptions {
  double rel_tol = 1e-10;
  /// Chebyshev parameters from Ritz values of A in X + K instead of
  /// lambda_{p+1}, lambda_n (block-Krylov bounds only).
  bool cheby_params_from_ritz = false;
  /// Denominators below guard * (lambda_1 - lambda_n) flag the entry as
  /// +infinity and exclude it from the verdict.
  double denom_guard = 1e-14;
};

// --- measurement helpers ----------------------------------------------------

/// Tangents of the principal angles between the span of the selected
/// eigenvectors (0-based indices) and the span of an orthonormal basis.
/// Accurate for both tiny and nearly-right angles.
DescTuple tangents_to_orthonormal(const Spectrum& spec, const std::vector<std::size_t>& sel,
                                  const Matrix& b_orthonormal);

/// Tangent tuple through the product formula: with C = adjoint(X) * B, the
/// singular values of C[outside sel] * pinv(C[sel]). Exact counterpart of the
/// auxiliary-vector constructions. Requires cols(B) <= |sel|.
DescTuple tangents_via_rows(const Spectrum& spec, const std::vector<std::size_t>& sel,
                            const Matrix& b);

/// Biorthogonal auxiliary basis taken directly against the spectrum's
/// eigenvectors: Ytilde * inverse(adjoint(X_p) * Ytilde).
Matrix biorthogonal_from_spectrum(const Spectrum& spec, const Matrix& ytilde_orthonormal);

// --- single-angle bounds ----------------------------------------------------

/// Power iteration: tan angle(x_i, Y^(steps)) <= |lambda_{p+1}/lambda_i|^steps
/// * tan angle(X, Y^(0)), per index i = 1..p.
BoundReport power_tangent_bound(const Spectrum& spec, const Subspace& y0, unsigned steps,
                                const BoundOptions& opt = {});

/// Filtered iteration, final form: tan angle(x_i, Y') <= sigma_i tan angle(X, Y)
/// with sigma_i = max_{j>p}|f(lambda_j)| / |f(lambda_i)|.
BoundReport filtered_tangent_bound(const Spectrum& spec, const FilterSpec& f, const Subspace& y,
                                   const BoundOptions& opt = {});

/// Same, intermediate form against the auxiliary vectors:
/// tan angle(x_i, Y') <= sigma_i tan angle(x_i, y_i).
BoundReport filtered_tangent_aux_bound(const Spectrum& spec, const FilterSpec& f, const Subspace& y,
                                       const BoundOptions& opt = {});

/// Chebyshev special case with the reciprocal Chebyshev factors.
BoundReport chebyshev_tangent_bound(const Spectrum& spec, unsigned k, const Subspace& y,
                                    const BoundOptions& opt = {});

/// Ritz-value errors against the squared filter ratio and tan^2 angle(X, Y).
BoundReport filtered_ritz_bound(const Spectrum& spec, const FilterSpec& f, const Subspace& y,
                                const BoundOptions& opt = {});

/// Auxiliary-subspace variant with tan^2 angle(X_i, Y_i) on the right.
BoundReport filtered_ritz_aux_bound(const Spectrum& spec, const FilterSpec& f, const Subspace& y,
                                    const BoundOptions& opt = {});

/// Chebyshev special case of the Ritz-value error bound.
BoundReport chebyshev_ritz_bound(const Spectrum& spec, unsigned k, const Subspace& y,
                                 const BoundOptions& opt = {});

/// Single angle of the filtered auxiliary subspace:
/// tan angle(X_i, Y'_i) <= [max_{j>p}|f| / min_{j<=i}|f|] tan angle(X_i, Y_i).
BoundReport filtered_subspace_tangent_bound(const Spectrum& spec, const FilterSpec& f,
                                            std::size_t i, const Subspace& y,
                                            const BoundOptions& opt = {});

/// Ritz error against the filtered auxiliary angle:
/// (lambda_i - eta'_i)/(eta'_i - lambda_n) <= tan^2 angle(X_i, Y'_i).
BoundReport ritz_error_vs_angle_bound(const Spectrum& spec, const FilterSpec& f, std::size_t i,
                                      const Subspace& y, const BoundOptions& opt = {});

// --- multi-angle majorization bounds ----------------------------------------

/// Tuple bound for the filtered subspace over an index set tau, both with the
/// auxiliary angles tan Theta(X_tau, Y_tau) and with them eliminated for
/// tan Theta_t(X, Y).
BoundPair multiangle_tangent_bound(const Spectrum& spec, const FilterSpec& f, const IndexSet& tau,
                                   const Subspace& y, const BoundOptions& opt = {});

/// Abstract filter form: tan Theta(F U, V) weakly majorized by
/// S_s((V^H F V)^{-1}) S_s(Vperp^H F Vperp) tan Theta(U, V), for a normal F
/// whose adjoint leaves V and Vperp invariant.
BoundReport abstract_filter_bound(const Spectrum& f, const Subspace& u, const Subspace& v,
                                  const Subspace& vperp, const BoundOptions& opt = {});

/// Squared-angle tuple bound for the filtered auxiliary subspace.
BoundReport filtered_subspace_tangent_major_bound(const Spectrum& spec, const FilterSpec& f,
                                                  std::size_t i, const Subspace& y,
                                                  const BoundOptions& opt = {});

/// Ritz-error tuple against the filtered auxiliary angles.
BoundReport ritz_error_vs_angle_major_bound(const Spectrum& spec, const FilterSpec& f,
                                            std::size_t i, const Subspace& y,
                                            const BoundOptions& opt = {});

/// Combined Ritz-error tuple bound (both right-hand sides).
BoundPair filtered_ritz_major_bound(const Spectrum& spec, const FilterSpec& f, std::size_t i,
                                    const Subspace& y, const BoundOptions& opt = {});

/// Ritz values of A in F U against the top-t invariant subspace, denominators
/// anchored at the smallest Ritz value of A in F U + V.
BoundReport ritz_shift_major_bound(const Spectrum& aspec, const Spectrum& f, const Subspace& u,
                                   std::size_t t, const BoundOptions& opt = {});

/// Spread form for an arbitrary invariant V (1-based eigen indices):
/// |Lambda(V^H A V) - Lambda(W^H A W)| ratios against the Ritz-value spread.
BoundReport ritz_spread_major_bound(const Spectrum& aspec, const Spectrum& f, const Subspace& u,
                                    const IndexSet& vsel, const BoundOptions& opt = {});

// --- block Krylov bounds ------------------------------------------------------

/// Angle tuple for the block Krylov space, factor tuple [sigma_{i_t}, ...,
/// sigma_{i_1}]; auxiliary and eliminated right-hand sides.
BoundPair lanczos_tangent_major_bound(const Spectrum& spec, const Subspace& y, unsigned k,
                                      const IndexSet& tau, const BoundOptions& opt = {});

/// Ritz-error tuple for the block Krylov space, factors squared.
BoundPair lanczos_ritz_major_bound(const Spectrum& spec, const Subspace& y, unsigned k,
                                   std::size_t i, const BoundOptions& opt = {});

/// Comparison bound with the single scalar factor sigma_{i_t}.
BoundReport lanczos_tangent_kyfan_bound(const Spectrum& spec, const Subspace& y, unsigned k,
                                        const IndexSet& tau, const BoundOptions& opt = {});

/// Comparison bound with factor sigma_i^2 and denominator lambda_1 - lambda_n.
BoundReport lanczos_ritz_kyfan_bound(const Spectrum& spec, const Subspace& y, unsigned k,
                                     std::size_t i, const BoundOptions& opt = {});

/// Arranged-angle stationary bound: prefix sums of the Ritz-error tuple
/// against beta_j tan^2 theta_j over the initial angles.
BoundReport stationary_ritz_major_bound(const Spectrum& spec, unsigned k, const Subspace& y,
                                        const BoundOptions& opt = {});

/// Re-runs the stored comparison at a caller-chosen tolerance.
MajorizationVerdict verify_report(const BoundReport& report, double rel_tol);

}  // namespace specbound
