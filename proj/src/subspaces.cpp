#include "specbound/subspaces.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace specbound {

IndexSet IndexSet::of(std::vector<std::size_t> idx) {
  if (idx.empty()) throw DimensionError("index set must not be empty");
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (idx[i] == 0) throw DimensionError("index sets are 1-based");
    if (i > 0 && idx[i] <= idx[i - 1])
      throw DimensionError("index set must be strictly increasing");
  }
  IndexSet s;
  s.indices = std::move(idx);
  return s;
}

IndexSet IndexSet::first(std::size_t p) {
  std::vector<std::size_t> idx(p);
  for (std::size_t i = 0; i < p; ++i) idx[i] = i + 1;
  return of(std::move(idx));
}

IndexSet IndexSet::parse(const std::string& text) {
  std::vector<std::size_t> idx;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    std::size_t pos = 0;
    unsigned long v = std::stoul(tok, &pos);
    if (pos != tok.size()) throw ConfigError("bad index in list: " + tok);
    idx.push_back(static_cast<std::size_t>(v));
  }
  if (idx.empty()) throw ConfigError("empty index list");
  return of(std::move(idx));
}

std::vector<std::size_t> IndexSet::zero_based() const {
  std::vector<std::size_t> z(indices.size());
  for (std::size_t i = 0; i < indices.size(); ++i) z[i] = indices[i] - 1;
  return z;
}

Subspace Subspace::from_columns(Matrix basis, double rank_tol) {
  if (basis.rows() < basis.cols())
    throw DimensionError("basis has more columns than the ambient dimension");
  DescTuple s = singular_values(basis);
  const double ratio = (s[0] > 0.0) ? s[s.size() - 1] / s[0] : 0.0;
  if (ratio <= rank_tol) {
    std::ostringstream os;
    os << "basis is rank deficient (singular value ratio " << ratio << ")";
    throw RankDeficiencyError(os.str());
  }
  return Subspace(std::move(basis), false);
}

Subspace Subspace::from_orthonormal(Matrix basis, double tol) {
  if (basis.rows() < basis.cols())
    throw DimensionError("basis has more columns than the ambient dimension");
  const double res = gram_residual(basis);
  if (res > tol * std::sqrt(static_cast<double>(basis.cols())))
    throw NumericDomainError("basis is not orthonormal to tolerance");
  return Subspace(std::move(basis), true);
}

Subspace Subspace::orthonormalized() const {
  if (orthonormal_) return *this;
  return Subspace(orthonormalize(basis_), true);
}

DescTuple AngleTuple::tangents() const {
  std::vector<double> t(angles.size());
  for (std::size_t i = 0; i < angles.size(); ++i) t[i] = std::tan(angles[i]);
  return DescTuple::arranged(std::move(t));
}

AngleTuple principal_angles_cosine(const Subspace& u, const Subspace& v) {
  if (u.ambient_dim() != v.ambient_dim())
    throw DimensionError("subspaces live in different ambient spaces");
  if (u.dim() > v.dim())
    throw DimensionError("angles are taken from the smaller subspace: dim(U) <= dim(V) required");
  const Matrix ub = u.orthonormal() ? u.basis() : orthonormalize(u.basis());
  const Matrix vb = v.orthonormal() ? v.basis() : orthonormalize(v.basis());
  DescTuple cosines = singular_values(adjoint_times(vb, ub));
  std::vector<double> ang(u.dim());
  for (std::size_t i = 0; i < u.dim(); ++i) {
    double c = cosines[i];
    if (c > 1.0 + 1e-12) throw NumericDomainError("cosine exceeds 1 beyond round-off");
    c = std::min(1.0, std::max(0.0, c));
    ang[i] = std::acos(c);
  }
  return AngleTuple{DescTuple::arranged(std::move(ang))};
}

DescTuple principal_angles_tangent(const Matrix& utilde, const Subspace& v,
                                   const Subspace& vperp) {
  const std::size_t n = utilde.rows();
  const std::size_t s = utilde.cols();
  const std::size_t t = v.dim();
  if (v.ambient_dim() != n || vperp.ambient_dim() != n)
    throw DimensionError("ambient dimension mismatch");
  if (t + vperp.dim() != n)
    throw DimensionError("V and Vperp must span complementary subspaces");
  if (!v.orthonormal() || !vperp.orthonormal())
    throw NumericDomainError("V and Vperp must carry orthonormal bases");
  if (s > std::min(t, n - t))
    throw DimensionError("tangent formula needs s <= min(t, n-t)");
  {
    const double cross = frobenius_norm(adjoint_times(v.basis(), vperp.basis()));
    if (cross > 1e-10 * std::sqrt(static_cast<double>(t)))
      throw NumericDomainError("V and Vperp are not mutually orthogonal");
  }
  const Matrix g = adjoint_times(v.basis(), utilde);
  {
    DescTuple gs = singular_values(g);
    const double ratio = (gs[0] > 0.0) ? gs[gs.size() - 1] / gs[0] : 0.0;
    if (s > std::min(g.rows(), g.cols()) || ratio <= 1e-12)
      throw RankDeficiencyError("angle of pi/2 detected: adjoint(V)*Utilde is rank deficient");
  }
  const Matrix w = matmul(adjoint_times(vperp.basis(), utilde), pseudoinverse(g));
  return singular_values(w).leading(s);
}

Matrix biorthogonal_basis(const Subspace& x, const Subspace& ytilde) {
  if (x.dim() != ytilde.dim()) throw DimensionError("bases must have equal column counts");
  if (!x.orthonormal() || !ytilde.orthonormal())
    throw NumericDomainError("biorthogonal construction expects orthonormal inputs");
  const Matrix g = adjoint_times(x.basis(), ytilde.basis());
  DescTuple gs = singular_values(g);
  const double ratio = (gs[0] > 0.0) ? gs[gs.size() - 1] / gs[0] : 0.0;
  if (ratio <= 1e-12)
    throw RankDeficiencyError("angle of pi/2: adjoint(X)*Ytilde is singular");
  return matmul(ytilde.basis(), inverse(g));
}

Matrix select_columns(const Matrix& y, const IndexSet& tau) {
  if (tau.max_index() > y.cols()) throw DimensionError("column index out of range");
  return y.columns(tau.zero_based());
}

Subspace orthonormal_complement(const Subspace& v) {
  const std::size_t n = v.ambient_dim();
  const std::size_t t = v.dim();
  if (t >= n) throw DimensionError("complement of the full space is empty");
  const Matrix vb = v.orthonormal() ? v.basis() : orthonormalize(v.basis());
  Matrix comp(n, n - t);
  std::size_t found = 0;
  for (std::size_t cand = 0; cand < n && found < n - t; ++cand) {
    Matrix e = Matrix::unit_column(n, cand);
    for (int pass = 0; pass < 2; ++pass) {
      Matrix coeff = adjoint_times(vb, e);
      e -= matmul(vb, coeff);
      for (std::size_t j = 0; j < found; ++j) {
        cplx proj(0.0, 0.0);
        for (std::size_t k = 0; k < n; ++k) proj += std::conj(comp(k, j)) * e(k, 0);
        for (std::size_t k = 0; k < n; ++k) e(k, 0) -= proj * comp(k, j);
      }
    }
    double nrm = 0.0;
    for (std::size_t k = 0; k < n; ++k) nrm += std::norm(e(k, 0));
    nrm = std::sqrt(nrm);
    if (nrm > 0.1) {
      for (std::size_t k = 0; k < n; ++k) comp(k, found) = e(k, 0) / nrm;
      ++found;
    }
  }
  if (found < n - t) throw ConvergenceError("failed to build the orthonormal complement");
  return Subspace::from_orthonormal(std::move(comp));
}

Matrix orthonormalize_against(const Matrix& block, const Matrix* against, double drop_tol,
                              std::size_t& kept) {
  // The deflation threshold is relative to the incoming block, before any
  // projection: directions that lie (numerically) inside the span of
  // `against` must fall below it and get dropped.
  double max_col = 0.0;
  for (std::size_t j = 0; j < block.cols(); ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < block.rows(); ++i) s += std::norm(block(i, j));
    max_col = std::max(max_col, std::sqrt(s));
  }
  Matrix z = block;
  if (against != nullptr) {
    for (int pass = 0; pass < 2; ++pass) z -= matmul(*against, adjoint_times(*against, z));
  }
  Matrix out(z.rows(), z.cols());
  kept = 0;
  for (std::size_t j = 0; j < z.cols(); ++j) {
    Matrix col = z.column(j);
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t l = 0; l < kept; ++l) {
        cplx proj(0.0, 0.0);
        for (std::size_t i = 0; i < z.rows(); ++i) proj += std::conj(out(i, l)) * col(i, 0);
        for (std::size_t i = 0; i < z.rows(); ++i) col(i, 0) -= proj * out(i, l);
      }
      if (against != nullptr && pass == 0) {
        Matrix coeff = adjoint_times(*against, col);
        col -= matmul(*against, coeff);
      }
    }
    double nrm = 0.0;
    for (std::size_t i = 0; i < z.rows(); ++i) nrm += std::norm(col(i, 0));
    nrm = std::sqrt(nrm);
    if (nrm > drop_tol * max_col && nrm > 0.0) {
      for (std::size_t i = 0; i < z.rows(); ++i) out(i, kept) = col(i, 0) / nrm;
      ++kept;
    }
  }
  if (kept == 0) return Matrix(z.rows(), 1);  // caller checks `kept`
  return out.columns(0, kept);
}

}  // namespace specbound
