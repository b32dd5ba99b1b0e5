#include <doctest.h>

#include <cmath>

#include "specbound/bounds.hpp"
#include "specbound/solvers.hpp"
#include "test_helpers.hpp"

using namespace specbound;
using testutil::random_complex;
using testutil::random_real;
using testutil::random_spectrum;
using testutil::random_subspace;

TEST_SUITE("block_power") {

TEST_CASE("zero steps returns the input") {
  CounterRng rng(81, 0);
  Subspace y = random_subspace(10, 2, rng);
  Subspace out = block_power(random_spectrum(10, 2, rng, true), y, 0);
  CHECK(frobenius_norm(out.basis() - y.basis()) == 0.0);
}

TEST_CASE("one step on diag(2,1,0.5): measured angle and its classical cap") {
  Spectrum s = Spectrum::diagonal({2.0, 1.0, 0.5}, 1);
  Matrix y(3, 1);
  const double inv_sqrt3 = 1.0 / std::sqrt(3.0);
  for (int r = 0; r < 3; ++r) y(r, 0) = inv_sqrt3;
  Subspace out = block_power(s, Subspace::from_columns(y), 1);
  DescTuple tan_out = tangents_to_orthonormal(s, {0}, out.basis());
  // A y = (2,1,0.5)/sqrt(3): orthogonal part sqrt(1.25), aligned part 2.
  CHECK(tan_out[0] == doctest::Approx(std::sqrt(1.25) / 2.0).epsilon(1e-12));
  const double classical_cap = 0.5 * std::sqrt(2.0);  // |lambda_2/lambda_1| tan(X, Y0)
  CHECK(tan_out[0] <= classical_cap);
}

TEST_CASE("an invariant start stays put") {
  CounterRng rng(82, 0);
  Spectrum s = random_spectrum(12, 3, rng);
  Subspace x = Subspace::from_orthonormal(s.eigenvector_columns({0, 1, 2}));
  Subspace out = block_power(s, x, 3);
  DescTuple t = tangents_to_orthonormal(s, {0, 1, 2}, out.basis());
  CHECK(t[0] <= 1e-10);
}

}  // TEST_SUITE

TEST_SUITE("block_krylov") {

TEST_CASE("degree one is the orthonormalized start") {
  CounterRng rng(83, 0);
  Spectrum s = random_spectrum(14, 2, rng, true);
  Subspace y = random_subspace(14, 2, rng);
  Subspace k1 = block_krylov_basis(s, y, 1);
  CHECK(k1.dim() == 2);
  AngleTuple a = principal_angles_cosine(y.orthonormalized(), k1);
  CHECK(a.angles[0] <= 1e-10);
}

TEST_CASE("generic start fills the whole space once k*p >= n") {
  CounterRng rng(84, 0);
  Spectrum s = random_spectrum(9, 2, rng, true);
  Subspace y = random_subspace(9, 2, rng);
  Subspace kk = block_krylov_basis(s, y, 5);  // 5*2 >= 9
  CHECK(kk.dim() == 9);
}

TEST_CASE("an invariant start never grows") {
  CounterRng rng(85, 0);
  Spectrum s = random_spectrum(12, 3, rng);
  Subspace x = Subspace::from_orthonormal(s.eigenvector_columns({0, 1, 2}));
  Subspace kk = block_krylov_basis(s, x, 4);
  CHECK(kk.dim() == 3);
}

TEST_CASE("basis stays orthonormal with nested prefixes") {
  CounterRng rng(86, 0);
  Spectrum s = random_spectrum(40, 3, rng);
  Matrix y_on = orthonormalize(random_real(40, 3, rng));
  KrylovBasis kb = build_block_krylov(s, y_on, 6);
  CHECK(kb.dim_at.size() == 6);
  CHECK(kb.dim_at[0] == 3);
  CHECK(gram_residual(kb.q) <= 1e-12 * std::sqrt(double(kb.dim())));
  for (std::size_t j = 0; j + 1 < kb.dim_at.size(); ++j)
    CHECK(kb.dim_at[j] <= kb.dim_at[j + 1]);
}

}  // TEST_SUITE

TEST_SUITE("rayleigh_ritz") {

TEST_CASE("invariant subspace reproduces eigenvalues") {
  CounterRng rng(91, 0);
  Spectrum s = random_spectrum(20, 4, rng);
  Subspace x = Subspace::from_orthonormal(s.eigenvector_columns({0, 1, 2, 3}));
  RitzSet rs = rayleigh_ritz(s, x, 4);
  for (std::size_t j = 0; j < 4; ++j)
    CHECK(std::abs(rs.values[j] - s.eigenvalue_real(j)) <= 1e-10);
}

TEST_CASE("whole space reproduces the full spectrum") {
  CounterRng rng(92, 0);
  Spectrum s = random_spectrum(12, 3, rng);
  std::vector<std::size_t> all(12);
  for (std::size_t j = 0; j < 12; ++j) all[j] = j;
  RitzSet rs = rayleigh_ritz(s, Subspace::from_orthonormal(s.eigenvector_columns(all)), 12);
  for (std::size_t j = 0; j < 12; ++j)
    CHECK(std::abs(rs.values[j] - s.eigenvalue_real(j)) <= 1e-10);
  CHECK(rs.spread == doctest::Approx(s.eigenvalue_real(0) - s.eigenvalue_real(11)).epsilon(1e-10));
}

TEST_CASE("Ritz values interlace between nested spaces") {
  CounterRng rng(93, 0);
  for (int trial = 0; trial < 10; ++trial) {
    Spectrum s = random_spectrum(18, 3, rng);
    Subspace y = random_subspace(18, 3, rng);
    const unsigned k = 3;
    FilterSpec f = FilterSpec::shifted_chebyshev(s.eigenvalue_real(3), s.eigenvalue_real(17), k);
    Subspace yp = apply_filter(s, f, y.orthonormalized());
    RitzSet small = rayleigh_ritz(s, yp.orthonormalized(), 3);
    RitzSet big = rayleigh_ritz(s, block_krylov_basis(s, y, k), 3);
    for (std::size_t j = 0; j < 3; ++j) {
      CHECK(small.values[j] <= big.values[j] + 1e-10);
      CHECK(big.values[j] <= s.eigenvalue_real(j) + 1e-10);
    }
  }
}

TEST_CASE("Ritz values grow with the Krylov degree") {
  CounterRng rng(94, 0);
  Spectrum s = random_spectrum(24, 3, rng);
  Subspace y = random_subspace(24, 3, rng);
  std::vector<double> prev(3, -1e300);
  for (unsigned k = 1; k <= 5; ++k) {
    RitzSet rs = rayleigh_ritz(s, block_krylov_basis(s, y, k), 3);
    for (std::size_t j = 0; j < 3; ++j) {
      CHECK(rs.values[j] >= prev[j] - 1e-10);
      prev[j] = rs.values[j];
    }
  }
}

TEST_CASE("full-dimensional Krylov space recovers the spectrum") {
  CounterRng rng(95, 0);
  Spectrum s = random_spectrum(15, 3, rng);
  Subspace y = random_subspace(15, 3, rng);
  Subspace kk = block_krylov_basis(s, y, 5);
  REQUIRE(kk.dim() == 15);
  RitzSet rs = rayleigh_ritz(s, kk, 15);
  for (std::size_t j = 0; j < 15; ++j)
    CHECK(std::abs(rs.values[j] - s.eigenvalue_real(j)) <= 1e-9);
}

TEST_CASE("non-orthonormal basis is rejected") {
  CounterRng rng(96, 0);
  Spectrum s = random_spectrum(10, 2, rng, true);
  Subspace y = random_subspace(10, 2, rng);
  CHECK_THROWS_AS(rayleigh_ritz(s, y, 2), NumericDomainError);
}

}  // TEST_SUITE

TEST_SUITE("chebyshev_block_step") {

TEST_CASE("degree bounds: k=1 identity, k=2 affine image") {
  CounterRng rng(101, 0);
  Spectrum s = random_spectrum(10, 2, rng, true);
  Subspace y = random_subspace(10, 2, rng);
  const double hi = s.eigenvalue_real(2), lo = s.eigenvalue_real(9);
  Subspace z1 = chebyshev_block_step(s, {lo, hi}, 1, y);
  CHECK(frobenius_norm(z1.basis() - y.basis()) == 0.0);

  Subspace z2 = chebyshev_block_step(s, {lo, hi}, 2, y);
  Matrix expect = s.apply(y.basis()) * cplx(2.0 / (hi - lo), 0.0) -
                  y.basis() * cplx((hi + lo) / (hi - lo), 0.0);
  CHECK(frobenius_norm(z2.basis() - expect) <= 1e-12 * frobenius_norm(expect));
}

TEST_CASE("recurrence agrees with the spectral filter application") {
  CounterRng rng(102, 0);
  for (int trial = 0; trial < 5; ++trial) {
    Spectrum s = random_spectrum(30, 3, rng, trial % 2 == 0);
    Subspace y = random_subspace(30, 3, rng);
    const double hi = s.eigenvalue_real(3), lo = s.eigenvalue_real(29);
    const unsigned k = 6;
    Subspace viarec = chebyshev_block_step(s, {lo, hi}, k, y);
    Subspace viaspec = apply_filter(s, FilterSpec::shifted_chebyshev(hi, lo, k), y);
    CHECK(frobenius_norm(viarec.basis() - viaspec.basis()) <=
          1e-8 * frobenius_norm(viaspec.basis()));
  }
}

TEST_CASE("degenerate interval is rejected") {
  CounterRng rng(103, 0);
  Spectrum s = random_spectrum(8, 2, rng, true);
  Subspace y = random_subspace(8, 2, rng);
  CHECK_THROWS_AS(chebyshev_block_step(s, {1.0, 1.0}, 3, y), NumericDomainError);
}

}  // TEST_SUITE

TEST_SUITE("shift_invert") {

TEST_CASE("identity mass matrix with a diagonal stiffness") {
  Matrix l = Matrix::from_real_rows(4, 4, {5, 0, 0, 0, 0, 3, 0, 0, 0, 0, 2, 0, 0, 0, 0, 1});
  Pencil pencil{l, Matrix::identity(4), 2.5, +1};
  ShiftInvertOperator op = shift_invert_operator(pencil, 2);
  // alphas {5,3,2,1} -> lambdas 1/(alpha-2.5) = {0.4, 2, -2, -2/3}; descending: 2, 0.4, -2/3, -2
  CHECK(op.spectrum.eigenvalue_real(0) == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(op.spectrum.eigenvalue_real(1) == doctest::Approx(0.4).epsilon(1e-10));
  CHECK(op.spectrum.eigenvalue_real(3) == doctest::Approx(-2.0).epsilon(1e-10));
  // the two largest transformed eigenvalues recover the alphas nearest the shift
  CHECK(op.original_eigenvalue(op.spectrum.eigenvalue_real(0)) == doctest::Approx(3.0).epsilon(1e-10));
  CHECK(op.original_eigenvalue(op.spectrum.eigenvalue_real(1)) == doctest::Approx(5.0).epsilon(1e-10));
}

TEST_CASE("eigenvalue transform is an involution") {
  ShiftInvertOperator op{Spectrum::diagonal({1.0, 0.5}, 1), 0.7, -1};
  for (double alpha : {-3.0, 0.1, 2.9}) {
    CHECK(op.original_eigenvalue(op.transformed_eigenvalue(alpha)) ==
          doctest::Approx(alpha).epsilon(1e-12));
  }
}

TEST_CASE("random SPD pencil: eigenvalues nearest the shift become dominant") {
  CounterRng rng(111, 0);
  const std::size_t n = 50;
  Matrix a = random_complex(n, n, rng);
  Matrix s_mat = matmul(a.adjoint(), a) + Matrix::identity(n) * cplx(double(n), 0.0);
  s_mat = (s_mat + s_mat.adjoint()) * cplx(0.5, 0.0);
  Matrix l = testutil::random_hermitian(n, rng);

  // Dense reference: eigenvalues of (L, S) via the congruence with S^{-1/2}.
  EigResult se = hermitian_eig(s_mat);
  std::vector<cplx> isqrt(n);
  for (std::size_t j = 0; j < n; ++j) isqrt[j] = 1.0 / std::sqrt(se.values[j]);
  Matrix s_isqrt = matmul(se.vectors, scale_rows(isqrt, se.vectors.adjoint()));
  Matrix std_form = matmul(s_isqrt, matmul(l, s_isqrt));
  DescTuple alphas = hermitian_eigenvalues((std_form + std_form.adjoint()) * cplx(0.5, 0.0));

  const double beta = alphas[n / 2] + 0.37 * (alphas[n / 2 - 1] - alphas[n / 2]);
  Pencil pencil{l, s_mat, beta, +1};
  ShiftInvertOperator op = shift_invert_operator(pencil, 4);

  // |lambda| sorted recovers |alpha - beta| sorted ascending.
  std::vector<double> dist(n);
  for (std::size_t j = 0; j < n; ++j) dist[j] = std::abs(alphas[j] - beta);
  std::sort(dist.begin(), dist.end());
  std::vector<double> inv_lam(n);
  for (std::size_t j = 0; j < n; ++j) inv_lam[j] = 1.0 / std::abs(op.spectrum.eigenvalues()[j]);
  std::sort(inv_lam.begin(), inv_lam.end());
  for (std::size_t j = 0; j < n; ++j)
    CHECK(inv_lam[j] == doctest::Approx(dist[j]).epsilon(1e-8));
}

TEST_CASE("two-solve route matches the factorized inverse") {
  CounterRng rng(112, 0);
  const std::size_t n = 12;
  Matrix a = random_complex(n, n, rng);
  Matrix s_mat = matmul(a.adjoint(), a) + Matrix::identity(n) * cplx(double(n), 0.0);
  s_mat = (s_mat + s_mat.adjoint()) * cplx(0.5, 0.0);
  Matrix l = testutil::random_hermitian(n, rng);
  Pencil pencil{l, s_mat, 0.21, +1};

  Matrix r = random_complex(n, 2, rng);
  Matrix w = pencil_apply_m_inverse(pencil, r);
  // M w should reproduce r.
  Matrix l_beta = l - s_mat * cplx(0.21, 0.0);
  Matrix m = matmul(l_beta, lu_solve(s_mat, l_beta));
  CHECK(frobenius_norm(matmul(m, w) - r) <= 1e-8 * frobenius_norm(r));
}

TEST_CASE("indefinite mass matrix and eigenvalue shifts are rejected") {
  Matrix bad_s = Matrix::from_real_rows(2, 2, {1, 0, 0, -1});
  Pencil p1{Matrix::identity(2), bad_s, 0.5, +1};
  CHECK_THROWS_AS(shift_invert_operator(p1, 1), NumericDomainError);

  Matrix l = Matrix::from_real_rows(2, 2, {2, 0, 0, 1});
  Pencil p2{l, Matrix::identity(2), 2.0, +1};  // beta hits an eigenvalue
  CHECK_THROWS_AS(shift_invert_operator(p2, 1), RankDeficiencyError);
}

}  // TEST_SUITE

TEST_SUITE("krylov_restriction") {

TEST_CASE("projected Krylov space equals the Krylov space of the projection") {
  CounterRng rng(121, 0);
  Spectrum s = random_spectrum(40, 3, rng);
  Subspace y = random_subspace(40, 3, rng);
  const unsigned k = 4;

  SUBCASE("V spanning X + K") {
    Matrix x = s.eigenvector_columns({0, 1, 2});
    Matrix kq = block_krylov_basis(s, y, k).basis();
    std::size_t kept = 0;
    Matrix extra = orthonormalize_against(x, &kq, 1e-12, kept);
    Matrix v = (kept > 0) ? hstack(kq, extra) : kq;
    CHECK(krylov_transform_check(s, y, k, Subspace::from_orthonormal(v)));
  }
  SUBCASE("V the whole space") {
    std::vector<std::size_t> all(40);
    for (std::size_t j = 0; j < 40; ++j) all[j] = j;
    Subspace v = Subspace::from_orthonormal(s.eigenvector_columns(all));
    CHECK(krylov_transform_check(s, y, 1, v));  // k=1 is trivially true
    CHECK(krylov_transform_check(s, y, k, v));
  }
}

}  // TEST_SUITE
