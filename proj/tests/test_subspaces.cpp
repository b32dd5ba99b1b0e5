#include <doctest.h>

#include <cmath>
#include <numbers>

#include "specbound/bounds.hpp"
#include "specbound/subspaces.hpp"
#include "test_helpers.hpp"

using namespace specbound;
using testutil::random_complex;
using testutil::random_real;
using testutil::random_subspace;

TEST_SUITE("subspaces") {

TEST_CASE("indexset parsing and validation") {
  IndexSet s = IndexSet::parse("1,3,4");
  CHECK(s.t() == 3);
  CHECK(s.zero_based() == std::vector<std::size_t>{0, 2, 3});
  CHECK_THROWS_AS(IndexSet::of({2, 2}), DimensionError);
  CHECK_THROWS_AS(IndexSet::of({0, 1}), DimensionError);
  CHECK_THROWS_AS(IndexSet::parse(""), ConfigError);
}

TEST_CASE("coinciding subspaces have zero angles") {
  Matrix e12 = Matrix::identity(4).columns(0, 2);
  Subspace u = Subspace::from_orthonormal(e12);
  AngleTuple a = principal_angles_cosine(u, u);
  CHECK(a.count() == 2);
  CHECK(a.angles[0] <= 1e-8);
  CHECK(a.angles[1] <= 1e-8);
}

TEST_CASE("diagonal line against an axis gives pi/4") {
  Matrix e1 = Matrix::identity(2).columns(0, 1);
  Matrix diag = Matrix::from_real_rows(2, 1, {1, 1});
  AngleTuple a = principal_angles_cosine(Subspace::from_columns(diag),
                                         Subspace::from_orthonormal(e1));
  CHECK(a.angles[0] == doctest::Approx(std::numbers::pi / 4).epsilon(1e-12));
}

TEST_CASE("dimension order is enforced, not swapped") {
  Matrix big = Matrix::identity(4).columns(0, 3);
  Matrix small = Matrix::identity(4).columns(0, 1);
  CHECK_THROWS_AS(
      principal_angles_cosine(Subspace::from_orthonormal(big), Subspace::from_orthonormal(small)),
      DimensionError);
}

TEST_CASE("tangent formula on contained and diagonal inputs") {
  Matrix v = Matrix::identity(2).columns(0, 1);
  Matrix vp = Matrix::identity(2).columns(1, 1);
  Subspace vs = Subspace::from_orthonormal(v), vps = Subspace::from_orthonormal(vp);

  Matrix inside = Matrix::from_real_rows(2, 1, {2, 0});  // range = span(V)
  DescTuple t0 = principal_angles_tangent(inside, vs, vps);
  CHECK(t0[0] <= 1e-14);

  Matrix diag = Matrix::from_real_rows(2, 1, {1, 1});
  DescTuple t1 = principal_angles_tangent(diag, vs, vps);
  CHECK(t1[0] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("tangent route matches the cosine route on random instances") {
  CounterRng rng(51, 0);
  const std::size_t n = 50, s = 4, t = 4;
  for (int trial = 0; trial < 25; ++trial) {
    Matrix vfull = testutil::random_unitary(n, rng);
    Subspace v = Subspace::from_orthonormal(vfull.columns(0, t));
    Subspace vp = Subspace::from_orthonormal(vfull.columns(t, n - t));
    Matrix u = random_complex(n, s, rng);
    DescTuple tan_route = principal_angles_tangent(u, v, vp);
    AngleTuple cos_route = principal_angles_cosine(Subspace::from_columns(u), v);
    for (std::size_t j = 0; j < s; ++j)
      CHECK(std::abs(tan_route[j] - std::tan(cos_route.angles[j])) <=
            1e-8 * std::max(1.0, tan_route[j]));
  }
}

TEST_CASE("right angle is detected as rank deficiency") {
  Matrix v = Matrix::identity(3).columns(0, 1);
  Matrix vp = Matrix::identity(3).columns(1, 2);
  Matrix u = Matrix::from_real_rows(3, 1, {0, 1, 1});  // orthogonal to V
  CHECK_THROWS_AS(principal_angles_tangent(u, Subspace::from_orthonormal(v),
                                           Subspace::from_orthonormal(vp)),
                  RankDeficiencyError);
}

TEST_CASE("angle symmetry for equal dimensions") {
  CounterRng rng(52, 0);
  for (int trial = 0; trial < 20; ++trial) {
    Subspace u = random_subspace(30, 3, rng).orthonormalized();
    Subspace v = random_subspace(30, 3, rng).orthonormalized();
    AngleTuple auv = principal_angles_cosine(u, v);
    AngleTuple avu = principal_angles_cosine(v, u);
    for (std::size_t j = 0; j < 3; ++j)
      CHECK(std::abs(auv.angles[j] - avu.angles[j]) <= 1e-10);
  }
}

TEST_CASE("angles shrink when the target space grows") {
  CounterRng rng(53, 0);
  for (int trial = 0; trial < 20; ++trial) {
    Matrix w = testutil::random_unitary(20, rng);
    Subspace v_small = Subspace::from_orthonormal(w.columns(0, 4));
    Subspace v_big = Subspace::from_orthonormal(w.columns(0, 7));
    Subspace u = random_subspace(20, 3, rng).orthonormalized();
    AngleTuple a_small = principal_angles_cosine(u, v_small);
    AngleTuple a_big = principal_angles_cosine(u, v_big);
    for (std::size_t j = 0; j < 3; ++j)
      CHECK(a_big.angles[j] <= a_small.angles[j] + 1e-10);
  }
}

TEST_CASE("biorthogonal basis: fixed point and forced single vector") {
  Matrix x = Matrix::identity(3).columns(0, 2);
  Subspace xs = Subspace::from_orthonormal(x);
  Matrix y = biorthogonal_basis(xs, xs);
  CHECK(frobenius_norm(y - x) <= 1e-12);

  Matrix e1 = Matrix::identity(2).columns(0, 1);
  Matrix diag = Matrix::from_real_rows(2, 1, {1.0 / std::numbers::sqrt2, 1.0 / std::numbers::sqrt2});
  Matrix y1 = biorthogonal_basis(Subspace::from_orthonormal(e1), Subspace::from_orthonormal(diag));
  CHECK(y1(0, 0).real() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(y1(1, 0).real() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("biorthogonality residual stays below 1e-10") {
  CounterRng rng(54, 0);
  for (int trial = 0; trial < 25; ++trial) {
    Matrix w = testutil::random_unitary(30, rng);
    Subspace x = Subspace::from_orthonormal(w.columns(0, 4));
    Subspace ytil = random_subspace(30, 4, rng).orthonormalized();
    Matrix y = biorthogonal_basis(x, ytil);
    Matrix g = adjoint_times(x.basis(), y);
    CHECK(frobenius_norm(g - Matrix::identity(4)) <= 1e-10);
    // range is preserved: Y projects onto span(Ytilde) without loss
    Matrix y_on = orthonormalize(y);
    Matrix resid = y_on - matmul(ytil.basis(), adjoint_times(ytil.basis(), y_on));
    CHECK(two_norm(resid) <= 1e-10);
  }
}

TEST_CASE("biorthogonal construction fails at a right angle") {
  Matrix x = Matrix::identity(4).columns(0, 1);
  Matrix y = Matrix::identity(4).columns(1, 1);
  CHECK_THROWS_AS(biorthogonal_basis(Subspace::from_orthonormal(x), Subspace::from_orthonormal(y)),
                  RankDeficiencyError);
}

TEST_CASE("select_columns follows 1-based index sets") {
  Matrix y = Matrix::from_real_rows(2, 4, {1, 2, 3, 4, 5, 6, 7, 8});
  CHECK(frobenius_norm(select_columns(y, IndexSet::first(4)) - y) == 0.0);
  Matrix c2 = select_columns(y, IndexSet::of({2}));
  CHECK(c2(0, 0) == cplx(2.0));
  Matrix c13 = select_columns(y, IndexSet::of({1, 3}));
  CHECK(c13(1, 1) == cplx(7.0));
  CHECK_THROWS_AS(select_columns(y, IndexSet::of({5})), DimensionError);
}

TEST_CASE("orthonormal complement spans the rest of the space") {
  CounterRng rng(55, 0);
  Subspace v = random_subspace(12, 5, rng).orthonormalized();
  Subspace c = orthonormal_complement(v);
  CHECK(c.dim() == 7);
  CHECK(gram_residual(c.basis()) <= 1e-12);
  CHECK(frobenius_norm(adjoint_times(v.basis(), c.basis())) <= 1e-12);
}

TEST_CASE("leading subtuple of the full angles bounds the subset angles") {
  // tan Theta(X_tau, Y_tau) <= tan Theta_t(X, Y) componentwise.
  CounterRng rng(56, 0);
  for (int trial = 0; trial < 20; ++trial) {
    Spectrum spec = testutil::random_spectrum(24, 5, rng);
    Subspace ytil = random_subspace(24, 5, rng).orthonormalized();
    Matrix ybi = biorthogonal_from_spectrum(spec, ytil.basis());
    IndexSet tau = IndexSet::of({1, 3, 4});
    DescTuple sub = tangents_via_rows(spec, tau.zero_based(), select_columns(ybi, tau));
    DescTuple full = tangents_via_rows(spec, {0, 1, 2, 3, 4}, ytil.basis()).leading(3);
    for (std::size_t j = 0; j < 3; ++j) CHECK(sub[j] <= full[j] * (1.0 + 1e-10) + 1e-12);
  }
}

TEST_CASE("block orthonormalizer deflates dependent columns") {
  CounterRng rng(57, 0);
  Matrix b = random_real(10, 3, rng);
  Matrix dup = hstack(b, b);  // rank 3 out of 6 columns
  std::size_t kept = 0;
  Matrix q = orthonormalize_against(dup, nullptr, 1e-10, kept);
  CHECK(kept == 3);
  CHECK(gram_residual(q) <= 1e-12);
}

}  // TEST_SUITE
