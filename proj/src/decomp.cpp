#include "specbound/decomp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace specbound {

namespace {

constexpr int kSweepLimit = 60;
constexpr double kRotationTol = 1e-14;

// Root of t^2 + 2*zeta*t - 1 = 0 with |t| <= 1; yields the rotation angle
// closest to zero.
void jacobi_rotation(double zeta, double& cs, double& sn) {
  const double sign = (zeta >= 0.0) ? 1.0 : -1.0;
  const double t = sign / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
  cs = 1.0 / std::sqrt(1.0 + t * t);
  sn = cs * t;
}

double column_norm_sq(const Matrix& w, std::size_t j) {
  double s = 0.0;
  for (std::size_t i = 0; i < w.rows(); ++i) s += std::norm(w(i, j));
  return s;
}

// Core one-sided Jacobi on a tall matrix (rows >= cols). Returns the rotated
// working matrix in `w` and the accumulated right factor in `v`.
void one_sided_sweeps(Matrix& w, Matrix& v) {
  const std::size_t n = w.cols();
  for (int sweep = 0; sweep < kSweepLimit; ++sweep) {
    bool rotated = false;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        cplx c(0.0, 0.0);
        double a = 0.0, b = 0.0;
        for (std::size_t k = 0; k < w.rows(); ++k) {
          const cplx wi = w(k, i), wj = w(k, j);
          c += std::conj(wi) * wj;
          a += std::norm(wi);
          b += std::norm(wj);
        }
        const double cabs = std::abs(c);
        if (cabs <= kRotationTol * std::sqrt(a * b) || cabs == 0.0) continue;
        rotated = true;
        const cplx alpha = std::conj(c) / cabs;  // makes the cross product real
        double cs, sn;
        jacobi_rotation((b - a) / (2.0 * cabs), cs, sn);
        for (std::size_t k = 0; k < w.rows(); ++k) {
          const cplx wi = w(k, i), wj = alpha * w(k, j);
          w(k, i) = cs * wi - sn * wj;
          w(k, j) = sn * wi + cs * wj;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const cplx vi = v(k, i), vj = alpha * v(k, j);
          v(k, i) = cs * vi - sn * vj;
          v(k, j) = sn * vi + cs * vj;
        }
      }
    }
    if (!rotated) return;
  }
  throw ConvergenceError("one-sided Jacobi SVD exceeded its sweep limit");
}

// Appends an orthonormal column for each exactly-zero singular value so the
// left factor keeps orthonormal columns.
void complete_zero_columns(Matrix& u, const std::vector<std::size_t>& zero_cols) {
  const std::size_t m = u.rows();
  for (std::size_t zc : zero_cols) {
    bool placed = false;
    for (std::size_t cand = 0; cand < m && !placed; ++cand) {
      Matrix e = Matrix::unit_column(m, cand);
      for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t j = 0; j < u.cols(); ++j) {
          if (j == zc) continue;
          cplx proj(0.0, 0.0);
          double nj = 0.0;
          for (std::size_t k = 0; k < m; ++k) {
            proj += std::conj(u(k, j)) * e(k, 0);
            nj += std::norm(u(k, j));
          }
          if (nj == 0.0) continue;
          for (std::size_t k = 0; k < m; ++k) e(k, 0) -= proj / nj * u(k, j);
        }
      }
      double nrm = 0.0;
      for (std::size_t k = 0; k < m; ++k) nrm += std::norm(e(k, 0));
      nrm = std::sqrt(nrm);
      if (nrm > 0.5) {
        for (std::size_t k = 0; k < m; ++k) u(k, zc) = e(k, 0) / nrm;
        placed = true;
      }
    }
    if (!placed) throw ConvergenceError("failed to complete an orthonormal basis");
  }
}

SvdResult svd_tall(const Matrix& m) {
  const std::size_t n = m.cols();
  Matrix w = m;
  Matrix v = Matrix::identity(n);
  one_sided_sweeps(w, v);

  std::vector<double> norms(n);
  for (std::size_t j = 0; j < n; ++j) norms[j] = std::sqrt(column_norm_sq(w, j));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return norms[a] > norms[b]; });

  Matrix u(m.rows(), n);
  Matrix right(n, n);
  std::vector<double> sing(n);
  std::vector<std::size_t> zero_cols;
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t src = order[j];
    sing[j] = norms[src];
    if (sing[j] <= 1e-290) {
      zero_cols.push_back(j);
    } else {
      for (std::size_t k = 0; k < m.rows(); ++k) u(k, j) = w(k, src) / sing[j];
    }
    for (std::size_t k = 0; k < n; ++k) right(k, j) = v(k, src);
  }
  for (std::size_t j : zero_cols) sing[j] = 0.0;
  if (!zero_cols.empty()) complete_zero_columns(u, zero_cols);
  return SvdResult{std::move(u), DescTuple::from_sorted(std::move(sing)), std::move(right)};
}

}  // namespace

SvdResult svd(const Matrix& m) {
  if (!m.all_finite()) throw NumericDomainError("svd input has non-finite entries");
  if (m.rows() >= m.cols()) return svd_tall(m);
  SvdResult r = svd_tall(m.adjoint());
  return SvdResult{std::move(r.right), std::move(r.singulars), std::move(r.left)};
}

DescTuple singular_values(const Matrix& m) { return svd(m).singulars; }

double two_norm(const Matrix& m) { return singular_values(m)[0]; }

namespace {

struct JacobiEig {
  std::vector<double> values;
  Matrix vectors;
};

JacobiEig hermitian_jacobi(const Matrix& h, bool want_vectors) {
  const std::size_t n = h.rows();
  if (h.cols() != n) throw DimensionError("hermitian_eig needs a square matrix");
  const double scale = frobenius_norm(h);
  {
    Matrix skew = h - h.adjoint();
    if (frobenius_norm(skew) > 2.0 * 1e-12 * std::max(scale, 1e-300))
      throw NumericDomainError("input deviates from Hermitian beyond tolerance");
  }
  Matrix a = h;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const cplx sym = 0.5 * (a(i, j) + std::conj(a(j, i)));
      a(i, j) = sym;
      a(j, i) = std::conj(sym);
    }
    a(i, i) = a(i, i).real();
  }
  Matrix x = want_vectors ? Matrix::identity(n) : Matrix(1, 1);

  const double thresh = kRotationTol * std::max(scale, 0.0);
  bool converged = (n == 1) || scale == 0.0;
  for (int sweep = 0; sweep < kSweepLimit && !converged; ++sweep) {
    bool rotated = false;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const cplx hij = a(i, j);
        const double r = std::abs(hij);
        if (r <= thresh) continue;
        rotated = true;
        const cplx alpha = hij / r;
        const double aii = a(i, i).real(), ajj = a(j, j).real();
        double cs, sn;
        jacobi_rotation((aii - ajj) / (2.0 * r), cs, sn);
        // Row update with J^H on the left, then column update with J on the
        // right; J = [[cs, -sn], [conj(alpha)*sn, conj(alpha)*cs]].
        for (std::size_t k = 0; k < n; ++k) {
          const cplx ri = a(i, k), rj = a(j, k);
          a(i, k) = cs * ri + alpha * sn * rj;
          a(j, k) = -sn * ri + alpha * cs * rj;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const cplx ci = a(k, i), cj = std::conj(alpha) * a(k, j);
          a(k, i) = cs * ci + sn * cj;
          a(k, j) = -sn * ci + cs * cj;
        }
        a(i, j) = 0.0;
        a(j, i) = 0.0;
        a(i, i) = a(i, i).real();
        a(j, j) = a(j, j).real();
        if (want_vectors) {
          for (std::size_t k = 0; k < n; ++k) {
            const cplx xi = x(k, i), xj = std::conj(alpha) * x(k, j);
            x(k, i) = cs * xi + sn * xj;
            x(k, j) = -sn * xi + cs * xj;
          }
        }
      }
    }
    if (!rotated) converged = true;
  }
  if (!converged) throw ConvergenceError("cyclic Jacobi eigendecomposition exceeded its sweep limit");

  std::vector<double> vals(n);
  for (std::size_t i = 0; i < n; ++i) vals[i] = a(i, i).real();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t l, std::size_t r2) { return vals[l] > vals[r2]; });
  std::vector<double> sorted(n);
  for (std::size_t i = 0; i < n; ++i) sorted[i] = vals[order[i]];
  if (!want_vectors) return JacobiEig{std::move(sorted), Matrix(1, 1)};
  Matrix xs(n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k) xs(k, j) = x(k, order[j]);
  return JacobiEig{std::move(sorted), std::move(xs)};
}

}  // namespace

EigResult hermitian_eig(const Matrix& h) {
  JacobiEig e = hermitian_jacobi(h, true);
  return EigResult{DescTuple::from_sorted(std::move(e.values)), std::move(e.vectors)};
}

DescTuple hermitian_eigenvalues(const Matrix& h) {
  JacobiEig e = hermitian_jacobi(h, false);
  return DescTuple::from_sorted(std::move(e.values));
}

Matrix orthonormalize(const Matrix& m, double rel_tol) {
  SvdResult r = svd(m);
  const double smax = r.singulars[0];
  const double smin = r.singulars[r.singulars.size() - 1];
  const double ratio = (smax > 0.0) ? smin / smax : 0.0;
  if (m.rows() < m.cols() || ratio <= rel_tol) {
    std::ostringstream os;
    os << "orthonormalize: rank-deficient input (singular value ratio " << ratio << ")";
    throw RankDeficiencyError(os.str());
  }
  return r.left;
}

Matrix pseudoinverse(const Matrix& m, double rel_tol) {
  if (!(rel_tol > 0.0 && rel_tol < 1.0))
    throw NumericDomainError("pseudoinverse tolerance must lie in (0, 1)");
  SvdResult r = svd(m);
  const double cut = rel_tol * r.singulars[0];
  Matrix vs = r.right;  // columns scaled by the inverted singular values
  for (std::size_t j = 0; j < r.singulars.size(); ++j) {
    const double f = (r.singulars[j] > cut) ? 1.0 / r.singulars[j] : 0.0;
    for (std::size_t i = 0; i < vs.rows(); ++i) vs(i, j) *= f;
  }
  return matmul(vs, r.left.adjoint());
}

Matrix lu_solve(const Matrix& a, const Matrix& b) {
  const std::size_t n = a.rows();
  if (a.cols() != n) throw DimensionError("lu_solve needs a square matrix");
  if (b.rows() != n) throw DimensionError("lu_solve right-hand side mismatch");
  Matrix lu = a;
  Matrix x = b;
  const double tiny = 1e-14 * std::max(max_abs(a), 1e-300);
  std::vector<std::size_t> piv(n);
  std::iota(piv.begin(), piv.end(), 0);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pk = k;
    double best = std::abs(lu(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      const double v = std::abs(lu(i, k));
      if (v > best) {
        best = v;
        pk = i;
      }
    }
    if (best <= tiny) throw RankDeficiencyError("lu_solve: matrix is singular to working precision");
    if (pk != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(lu(k, j), lu(pk, j));
      for (std::size_t j = 0; j < x.cols(); ++j) std::swap(x(k, j), x(pk, j));
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const cplx f = lu(i, k) / lu(k, k);
      lu(i, k) = f;
      for (std::size_t j = k + 1; j < n; ++j) lu(i, j) -= f * lu(k, j);
      for (std::size_t j = 0; j < x.cols(); ++j) x(i, j) -= f * x(k, j);
    }
  }
  for (std::size_t kk = n; kk-- > 0;) {
    for (std::size_t j = 0; j < x.cols(); ++j) {
      cplx s = x(kk, j);
      for (std::size_t l = kk + 1; l < n; ++l) s -= lu(kk, l) * x(l, j);
      x(kk, j) = s / lu(kk, kk);
    }
  }
  return x;
}

Matrix inverse(const Matrix& a) { return lu_solve(a, Matrix::identity(a.rows())); }

}  // namespace specbound
