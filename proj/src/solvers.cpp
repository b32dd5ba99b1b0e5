#include "specbound/solvers.hpp"

#include <algorithm>
#include <cmath>

namespace specbound {

Subspace block_power(const Spectrum& spec, const Subspace& y0, unsigned steps) {
  if (steps == 0) return y0;
  Matrix q = y0.orthonormal() ? y0.basis() : orthonormalize(y0.basis());
  for (unsigned step = 0; step < steps; ++step) {
    Matrix z = spec.apply(q);
    try {
      q = orthonormalize(z);
    } catch (const RankDeficiencyError&) {
      throw RankDeficiencyError("block power iterate collapsed: zero target eigenvalue or bad start");
    }
  }
  return Subspace::from_orthonormal(std::move(q));
}

KrylovBasis build_block_krylov(const Spectrum& spec, const Matrix& y_orthonormal, unsigned k) {
  if (k < 1) throw DimensionError("block Krylov degree must be at least 1");
  const double drop_tol = 1e-10;
  KrylovBasis kb{y_orthonormal, {}};
  kb.dim_at.push_back(kb.q.cols());
  Matrix prev_block = y_orthonormal;
  for (unsigned deg = 1; deg < k; ++deg) {
    if (kb.q.cols() >= kb.q.rows()) {
      // Whole space reached; further degrees cannot add directions.
      kb.dim_at.push_back(kb.q.cols());
      continue;
    }
    Matrix z = spec.apply(prev_block);
    std::size_t kept = 0;
    Matrix nb = orthonormalize_against(z, &kb.q, drop_tol, kept);
    if (kept == 0) {
      kb.dim_at.push_back(kb.q.cols());
      continue;  // invariant subspace: the space stops growing
    }
    kb.q = hstack(kb.q, nb);
    kb.dim_at.push_back(kb.q.cols());
    prev_block = std::move(nb);
  }
  return kb;
}

Subspace block_krylov_basis(const Spectrum& spec, const Subspace& y, unsigned k) {
  Matrix q0 = y.orthonormal() ? y.basis() : orthonormalize(y.basis());
  KrylovBasis kb = build_block_krylov(spec, q0, k);
  return Subspace::from_orthonormal(std::move(kb.q));
}

RitzSet rayleigh_ritz(const Spectrum& spec, const Subspace& basis, std::size_t want) {
  if (!basis.orthonormal())
    throw NumericDomainError("Rayleigh-Ritz needs an orthonormal basis");
  if (!spec.hermitian())
    throw NumericDomainError("Ritz extraction is defined here for Hermitian spectra");
  if (want < 1 || want > basis.dim()) throw DimensionError("requested Ritz count out of range");
  const Matrix aq = spec.apply(basis.basis());
  Matrix h = adjoint_times(basis.basis(), aq);
  EigResult e = hermitian_eig(h);
  std::vector<std::size_t> sel(want);
  for (std::size_t i = 0; i < want; ++i) sel[i] = i;
  RitzSet rs{e.values.leading(want), matmul(basis.basis(), e.vectors.columns(sel)),
             e.values[0] - e.values[e.values.size() - 1]};
  return rs;
}

Subspace chebyshev_block_step(const Spectrum& spec, std::pair<double, double> interval, unsigned k,
                              const Subspace& y) {
  const double lo = interval.first, hi = interval.second;
  if (!(hi > lo)) throw NumericDomainError("degenerate Chebyshev interval");
  if (k < 1) throw DimensionError("chebyshev_block_step needs k >= 1");
  // A_mapped = (2 A - (hi+lo) I) / (hi - lo)
  const double scale = 2.0 / (hi - lo);
  const double shift = (hi + lo) / (hi - lo);
  auto apply_mapped = [&](const Matrix& b) {
    Matrix ab = spec.apply(b);
    ab *= cplx(scale, 0.0);
    Matrix sb = b;
    sb *= cplx(shift, 0.0);
    ab -= sb;
    return ab;
  };
  Matrix zm = y.basis();
  if (k == 1) return y;
  Matrix z = apply_mapped(zm);
  for (unsigned j = 2; j < k; ++j) {
    Matrix nxt = apply_mapped(z);
    nxt *= cplx(2.0, 0.0);
    nxt -= zm;
    zm = std::move(z);
    z = std::move(nxt);
  }
  return Subspace::from_columns(std::move(z));
}

double ShiftInvertOperator::original_eigenvalue(double lambda) const {
  if (lambda == 0.0) throw NumericDomainError("zero transformed eigenvalue has no finite preimage");
  return beta + static_cast<double>(sign) / lambda;
}

double ShiftInvertOperator::transformed_eigenvalue(double alpha) const {
  if (alpha == beta) throw NumericDomainError("eigenvalue equals the shift");
  return static_cast<double>(sign) / (alpha - beta);
}

ShiftInvertOperator shift_invert_operator(const Pencil& pencil, std::size_t p) {
  const std::size_t n = pencil.l.rows();
  if (pencil.l.cols() != n || pencil.s.rows() != n || pencil.s.cols() != n)
    throw DimensionError("pencil matrices must be square and matching");
  if (pencil.sign != 1 && pencil.sign != -1)
    throw NumericDomainError("sign must be +1 or -1");

  EigResult se = hermitian_eig(pencil.s);
  if (se.values[se.values.size() - 1] <= 0.0)
    throw NumericDomainError("S must be positive definite");

  Matrix l_beta = pencil.l;
  {
    Matrix bs = pencil.s;
    bs *= cplx(pencil.beta, 0.0);
    l_beta -= bs;
  }
  {
    DescTuple ls = singular_values(l_beta);
    if (ls[0] <= 0.0 || ls[ls.size() - 1] / ls[0] <= 1e-12)
      throw RankDeficiencyError("shift is (numerically) an eigenvalue: L - beta S singular");
  }

  // S^{-1} through its eigendecomposition, then M = L_beta S^{-1} L_beta.
  std::vector<cplx> s_inv(n);
  for (std::size_t i = 0; i < n; ++i) s_inv[i] = 1.0 / se.values[i];
  Matrix s_inv_lb = matmul(se.vectors, scale_rows(s_inv, adjoint_times(se.vectors, l_beta)));
  Matrix m = matmul(l_beta, s_inv_lb);
  // Symmetrize against round-off before factorizing.
  m = (m + m.adjoint()) * cplx(0.5, 0.0);

  EigResult me = hermitian_eig(m);
  if (me.values[me.values.size() - 1] <= 0.0)
    throw NumericDomainError("M = L_beta S^{-1} L_beta is not positive definite");
  std::vector<cplx> m_isqrt(n);
  for (std::size_t i = 0; i < n; ++i) m_isqrt[i] = 1.0 / std::sqrt(me.values[i]);
  const Matrix mm = matmul(me.vectors, scale_rows(m_isqrt, me.vectors.adjoint()));

  Matrix a = matmul(mm, matmul(l_beta, mm));
  if (pencil.sign < 0) a *= cplx(-1.0, 0.0);
  a = (a + a.adjoint()) * cplx(0.5, 0.0);

  return ShiftInvertOperator{Spectrum::from_matrix(a, p), pencil.beta, pencil.sign};
}

Matrix pencil_apply_m_inverse(const Pencil& pencil, const Matrix& r) {
  Matrix l_beta = pencil.l;
  Matrix bs = pencil.s;
  bs *= cplx(pencil.beta, 0.0);
  l_beta -= bs;
  // M w = r with M = L_beta S^{-1} L_beta: solve L_beta u = r, then
  // L_beta w = S u.
  Matrix u = lu_solve(l_beta, r);
  return lu_solve(l_beta, matmul(pencil.s, u));
}

bool krylov_transform_check(const Spectrum& spec, const Subspace& y, unsigned k,
                            const Subspace& v) {
  if (!v.orthonormal()) throw NumericDomainError("V must be orthonormal");
  const Matrix y_on = y.orthonormal() ? y.basis() : orthonormalize(y.basis());
  KrylovBasis kb = build_block_krylov(spec, y_on, k);

  // Projected original Krylov basis.
  Matrix proj_k = adjoint_times(v.basis(), kb.q);

  // Krylov basis of the projected operator applied to the projected start.
  const Matrix b = adjoint_times(v.basis(), spec.apply(v.basis()));
  const std::size_t m = v.dim();
  const Spectrum bspec = Spectrum::from_matrix((b + b.adjoint()) * cplx(0.5, 0.0),
                                               std::min(spec.p(), m));
  Matrix y_proj = orthonormalize(adjoint_times(v.basis(), y_on));
  KrylovBasis kb2 = build_block_krylov(bspec, y_proj, k);

  if (kb.dim() != kb2.dim()) return false;
  // Compare through the sine of the largest principal angle (well conditioned
  // near zero, unlike the arccos of a near-unit cosine).
  const Matrix s1 = orthonormalize(proj_k);
  const Matrix& s2 = kb2.q;
  Matrix resid = s1 - matmul(s2, adjoint_times(s2, s1));
  return two_norm(resid) <= 1e-8;
}

}  // namespace specbound
