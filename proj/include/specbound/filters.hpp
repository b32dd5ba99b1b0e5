#pragma once

#include <vector>

#include "specbound/indexset.hpp"
#include "specbound/spectrum.hpp"
#include "specbound/subspaces.hpp"
#include "specbound/tuples.hpp"

namespace specbound {

/// T_l(x) for real x: cos(l*acos x) on [-1,1], cosh(l*acosh x) for x > 1,
/// parity for x < -1.
double chebyshev_eval(unsigned l, double x);
/// Complex argument variant via the three-term recurrence.
cplx chebyshev_eval(unsigned l, cplx x);

/// Scalar filter f. Three representations: explicit real polynomial
/// coefficients, the shifted Chebyshev transform of an interval, or a
/// value-per-eigenvalue table bound to a spectrum of matching size.
class FilterSpec {
public:
  enum class Kind { polynomial, shifted_chebyshev, eigenvalue_table };

  /// Coefficients in ascending powers (c0 + c1 x + ...).
  static FilterSpec polynomial(std::vector<double> coefficients);
  /// f(alpha) = T_{k-1}(1 + 2 (alpha - lam_p1) / (lam_p1 - lam_n)); needs
  /// lam_p1 > lam_n and k >= 1.
  static FilterSpec shifted_chebyshev(double lam_p1, double lam_n, unsigned k);
  /// One value per eigenvalue index of the target spectrum.
  static FilterSpec table(std::vector<cplx> values);

  Kind kind() const { return kind_; }
  unsigned degree() const { return degree_; }  // k-1 for shifted_chebyshev
  double interval_upper() const { return lam_p1_; }
  double interval_lower() const { return lam_n_; }

  cplx value(cplx alpha) const;  // polynomial / shifted_chebyshev only
  double value(double alpha) const;

  /// Filter values at every eigenvalue of the spectrum (table kind checks
  /// that it covers the spectrum).
  std::vector<cplx> values_on(const Spectrum& spec) const;

private:
  FilterSpec() = default;
  Kind kind_ = Kind::polynomial;
  unsigned degree_ = 0;
  double lam_p1_ = 0.0, lam_n_ = 0.0;
  std::vector<double> coeff_;
  std::vector<cplx> table_;
};

/// Per-index Chebyshev convergence data for j = 1..p (0-based storage):
/// gap ratios gamma_j, the equivalent xi_j, and the reciprocal Chebyshev
/// factors sigma_j = 1 / T_{k-1}(1 + 2 gamma_j).
struct ChebyFactors {
  std::vector<double> sigma;
  std::vector<double> gamma;
  std::vector<double> xi;
  /// Factor for the arranged-angle stationary bound: sigma_{p+1-j} squared
  /// (1-based j).
  double beta(std::size_t j) const;
};

/// Requires real descending eigenvalues with lambda_p > lambda_{p+1}.
ChebyFactors convergence_factors(const Spectrum& spec, std::size_t p, unsigned k);

/// The tuples entering the multi-angle bounds: Phi_tau (reciprocal target
/// magnitudes over tau, arranged), the full arranged unwanted-magnitude tuple
/// Phi_hat, and its leading t-subtuple. assumption_holds records the filter
/// separation condition max_{j>p}|f| < min_{j<=p}|f|.
struct FilterTuples {
  DescTuple phi_tau;
  DescTuple phi_hat_t;
  DescTuple phi_hat_full;
  bool assumption_holds;
};

FilterTuples filter_tuples(const Spectrum& spec, const FilterSpec& f, const IndexSet& tau);

/// Checks max_{j>p}|f(lambda_j)| < min_{j<=p}|f(lambda_j)|.
bool filter_assumption_holds(const Spectrum& spec, const std::vector<cplx>& fvals);

/// Y' with basis f(A) * Y_basis, applied through the spectral factorization.
/// Not orthonormalized. Rank collapse of the image is an error (the filter
/// separation assumption excludes it).
Subspace apply_filter(const Spectrum& spec, const FilterSpec& f, const Subspace& y);

}  // namespace specbound
