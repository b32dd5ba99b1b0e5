#include "specbound/filters.hpp"

#include <algorithm>
#include <cmath>

namespace specbound {

double chebyshev_eval(unsigned l, double x) {
  if (!std::isfinite(x)) throw NumericDomainError("chebyshev_eval: non-finite argument");
  if (x > 1.0) return std::cosh(static_cast<double>(l) * std::acosh(x));
  if (x < -1.0) {
    const double v = std::cosh(static_cast<double>(l) * std::acosh(-x));
    return (l % 2 == 0) ? v : -v;
  }
  return std::cos(static_cast<double>(l) * std::acos(x));
}

cplx chebyshev_eval(unsigned l, cplx x) {
  if (x.imag() == 0.0) return chebyshev_eval(l, x.real());
  cplx tm(1.0, 0.0), t = x;
  if (l == 0) return tm;
  for (unsigned i = 1; i < l; ++i) {
    cplx next = 2.0 * x * t - tm;
    tm = t;
    t = next;
  }
  return t;
}

FilterSpec FilterSpec::polynomial(std::vector<double> coefficients) {
  if (coefficients.empty()) throw NumericDomainError("polynomial needs at least one coefficient");
  FilterSpec f;
  f.kind_ = Kind::polynomial;
  f.degree_ = static_cast<unsigned>(coefficients.size() - 1);
  f.coeff_ = std::move(coefficients);
  return f;
}

FilterSpec FilterSpec::shifted_chebyshev(double lam_p1, double lam_n, unsigned k) {
  if (!(lam_p1 > lam_n)) throw NumericDomainError("degenerate interval: lambda_{p+1} must exceed lambda_n");
  if (k < 1) throw NumericDomainError("shifted Chebyshev filter needs k >= 1");
  FilterSpec f;
  f.kind_ = Kind::shifted_chebyshev;
  f.degree_ = k - 1;
  f.lam_p1_ = lam_p1;
  f.lam_n_ = lam_n;
  return f;
}

FilterSpec FilterSpec::table(std::vector<cplx> values) {
  if (values.empty()) throw NumericDomainError("empty filter table");
  FilterSpec f;
  f.kind_ = Kind::eigenvalue_table;
  f.table_ = std::move(values);
  return f;
}

cplx FilterSpec::value(cplx alpha) const {
  switch (kind_) {
    case Kind::polynomial: {
      cplx acc(0.0, 0.0);
      for (std::size_t i = coeff_.size(); i-- > 0;) acc = acc * alpha + coeff_[i];
      return acc;
    }
    case Kind::shifted_chebyshev: {
      const cplx arg = 1.0 + 2.0 * (alpha - lam_p1_) / (lam_p1_ - lam_n_);
      return chebyshev_eval(degree_, arg);
    }
    case Kind::eigenvalue_table:
      throw NumericDomainError("table filters are bound to spectrum indices, not values");
  }
  throw NumericDomainError("unreachable filter kind");
}

double FilterSpec::value(double alpha) const { return value(cplx(alpha, 0.0)).real(); }

std::vector<cplx> FilterSpec::values_on(const Spectrum& spec) const {
  if (kind_ == Kind::eigenvalue_table) {
    if (table_.size() != spec.n())
      throw DimensionError("filter table must cover every eigenvalue of the spectrum");
    return table_;
  }
  std::vector<cplx> v(spec.n());
  for (std::size_t i = 0; i < spec.n(); ++i) v[i] = value(spec.eigenvalues()[i]);
  return v;
}

double ChebyFactors::beta(std::size_t j) const {
  const std::size_t p = sigma.size();
  if (j < 1 || j > p) throw DimensionError("beta index out of range");
  const double s = sigma[p - j];  // sigma_{p+1-j}, 1-based
  return s * s;
}

ChebyFactors convergence_factors(const Spectrum& spec, std::size_t p, unsigned k) {
  if (!spec.hermitian()) throw NumericDomainError("convergence factors need a Hermitian spectrum");
  if (p < 1 || p >= spec.n()) throw DimensionError("p out of range");
  const double lam_p1 = spec.eigenvalue_real(p);
  const double lam_n = spec.eigenvalue_real(spec.n() - 1);
  if (!(spec.eigenvalue_real(p - 1) > lam_p1))
    throw NumericDomainError("gap violation: lambda_p must exceed lambda_{p+1}");
  if (!(lam_p1 > lam_n) && spec.n() > p + 1)
    throw NumericDomainError("degenerate unwanted interval");
  ChebyFactors f;
  f.sigma.resize(p);
  f.gamma.resize(p);
  f.xi.resize(p);
  const double width = lam_p1 - lam_n;
  for (std::size_t j = 0; j < p; ++j) {
    const double lam_j = spec.eigenvalue_real(j);
    f.gamma[j] = (lam_j - lam_p1) / width;
    f.xi[j] = (lam_j - lam_p1) / (lam_j - lam_n);
    f.sigma[j] = 1.0 / chebyshev_eval(k - 1, 1.0 + 2.0 * f.gamma[j]);
  }
  return f;
}

bool filter_assumption_holds(const Spectrum& spec, const std::vector<cplx>& fvals) {
  double max_unwanted = 0.0, min_target = std::abs(fvals[0]);
  for (std::size_t j = 0; j < spec.n(); ++j) {
    const double m = std::abs(fvals[j]);
    if (j < spec.p())
      min_target = std::min(min_target, m);
    else
      max_unwanted = std::max(max_unwanted, m);
  }
  return max_unwanted < min_target;
}

FilterTuples filter_tuples(const Spectrum& spec, const FilterSpec& f, const IndexSet& tau) {
  const std::size_t p = spec.p();
  const std::size_t n = spec.n();
  if (tau.max_index() > p) throw DimensionError("tau must select target indices within 1..p");
  if (n <= p) throw DimensionError("spectrum has no unwanted part");
  const std::size_t t = tau.t();
  if (t > n - p) throw DimensionError("tau is larger than the unwanted spectral part");

  const std::vector<cplx> fv = f.values_on(spec);
  std::vector<double> phi_tau(t);
  for (std::size_t j = 0; j < t; ++j) {
    const double m = std::abs(fv[tau.indices[j] - 1]);
    if (m == 0.0)
      throw NumericDomainError("filter vanishes on a selected target eigenvalue");
    phi_tau[j] = 1.0 / m;
  }
  std::vector<double> phi_hat(n - p);
  for (std::size_t j = p; j < n; ++j) phi_hat[j - p] = std::abs(fv[j]);

  FilterTuples out{DescTuple::arranged(std::move(phi_tau)), DescTuple::arranged(phi_hat).leading(t),
                   DescTuple::arranged(std::move(phi_hat)), filter_assumption_holds(spec, fv)};
  return out;
}

Subspace apply_filter(const Spectrum& spec, const FilterSpec& f, const Subspace& y) {
  const std::vector<cplx> fv = f.values_on(spec);
  Matrix image = spec.apply_function(fv, y.basis());
  try {
    return Subspace::from_columns(std::move(image));
  } catch (const RankDeficiencyError&) {
    throw RankDeficiencyError("filtered block lost rank: filter assumption violated");
  }
}

}  // namespace specbound
