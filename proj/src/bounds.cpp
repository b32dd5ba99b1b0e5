#include "specbound/bounds.hpp"

#include <algorithm>
#include <cmath>

namespace specbound {

namespace {

std::vector<std::size_t> range0(std::size_t count) {
  std::vector<std::size_t> v(count);
  for (std::size_t i = 0; i < count; ++i) v[i] = i;
  return v;
}

std::vector<std::size_t> complement0(std::size_t n, const std::vector<std::size_t>& sel) {
  std::vector<char> in(n, 0);
  for (std::size_t i : sel) in[i] = 1;
  std::vector<std::size_t> out;
  out.reserve(n - sel.size());
  for (std::size_t i = 0; i < n; ++i)
    if (!in[i]) out.push_back(i);
  return out;
}

MajorizationVerdict component_verdict(const std::vector<double>& lhs,
                                      const std::vector<double>& rhs, double rel_tol) {
  MajorizationVerdict v;
  v.prefix_sums_lhs = lhs;
  v.prefix_sums_rhs = rhs;
  double scale = 0.0;
  for (double x : lhs) scale = std::max(scale, std::abs(x));
  for (double x : rhs) scale = std::max(scale, std::abs(x));
  v.tolerance_used = rel_tol * scale;
  for (std::size_t i = 0; i < lhs.size(); ++i)
    v.worst_violation = std::max(v.worst_violation, lhs[i] - rhs[i]);
  v.worst_violation = std::max(v.worst_violation, 0.0);
  v.holds = v.worst_violation <= v.tolerance_used;
  return v;
}

BoundReport componentwise_report(std::string name, std::vector<double> measured,
                                 std::vector<double> bound, std::vector<double> factors,
                                 std::vector<std::size_t> excluded, bool applicable,
                                 double rel_tol) {
  BoundReport r;
  r.name = std::move(name);
  r.componentwise = true;
  r.applicable = applicable;
  r.excluded = std::move(excluded);
  r.verdict = component_verdict(measured, bound, rel_tol);
  r.measured = DescTuple::arranged(std::move(measured));
  r.bound = DescTuple::arranged(std::move(bound));
  r.factors = DescTuple::arranged(std::move(factors));
  return r;
}

BoundReport majorization_report(std::string name, const DescTuple& measured,
                                const DescTuple& bound, const DescTuple& factors, bool applicable,
                                double rel_tol) {
  BoundReport r;
  r.name = std::move(name);
  r.componentwise = false;
  r.applicable = applicable;
  r.measured = measured;
  r.bound = bound;
  r.factors = factors;
  r.verdict = weakly_majorizes(bound, measured, rel_tol);
  return r;
}

double largest(const DescTuple& t) { return t[0]; }

// Magnitudes of the filter over the spectrum.
std::vector<double> filter_magnitudes(const Spectrum& spec, const FilterSpec& f) {
  const std::vector<cplx> fv = f.values_on(spec);
  std::vector<double> m(fv.size());
  for (std::size_t i = 0; i < fv.size(); ++i) m[i] = std::abs(fv[i]);
  return m;
}

double max_unwanted_magnitude(const Spectrum& spec, const std::vector<double>& mags) {
  double m = 0.0;
  for (std::size_t j = spec.p(); j < spec.n(); ++j) m = std::max(m, mags[j]);
  return m;
}

// Filtered subspace with an orthonormal basis.
Matrix filtered_orthonormal(const Spectrum& spec, const FilterSpec& f, const Matrix& basis) {
  return orthonormalize(spec.apply_function(f.values_on(spec), basis));
}

struct RitzErrors {
  std::vector<double> ratio;             // (lambda_i - eta_i) / (eta_i - lambda_n)
  std::vector<std::size_t> excluded;     // 1-based, denominator guard hits
};

RitzErrors ritz_error_ratios(const Spectrum& spec, const DescTuple& ritz, std::size_t count,
                             double denom_guard) {
  RitzErrors out;
  const double lam_n = spec.eigenvalue_real(spec.n() - 1);
  const double span = spec.eigenvalue_real(0) - lam_n;
  out.ratio.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double num = spec.eigenvalue_real(i) - ritz[i];
    const double den = ritz[i] - lam_n;
    if (den < denom_guard * span) {
      out.ratio[i] = 0.0;
      out.excluded.push_back(i + 1);
    } else {
      out.ratio[i] = std::max(num, 0.0) / den;
    }
  }
  return out;
}

// sigma_j = 1 / T_{k-1}(1 + 2 (lam_j - edge_hi)/(edge_hi - edge_lo)), j = 1..p.
std::vector<double> sigma_from_interval(const Spectrum& spec, std::size_t p, unsigned k,
                                        double edge_hi, double edge_lo) {
  if (!(edge_hi > edge_lo)) throw NumericDomainError("degenerate Chebyshev interval");
  std::vector<double> s(p);
  for (std::size_t j = 0; j < p; ++j) {
    const double gamma = (spec.eigenvalue_real(j) - edge_hi) / (edge_hi - edge_lo);
    if (!(gamma > 0.0)) throw NumericDomainError("gap violation in Chebyshev factors");
    s[j] = 1.0 / chebyshev_eval(k - 1, 1.0 + 2.0 * gamma);
  }
  return s;
}

// Chebyshev factors for the Krylov bounds, optionally re-anchored at Ritz
// values of A in X + K.
std::vector<double> krylov_sigmas(const Spectrum& spec, const Matrix& krylov_q, unsigned k,
                                  const BoundOptions& opt) {
  const std::size_t p = spec.p();
  if (!opt.cheby_params_from_ritz)
    return convergence_factors(spec, p, k).sigma;
  const Matrix x = spec.eigenvector_columns(range0(p));
  std::size_t kept = 0;
  Matrix extra = orthonormalize_against(krylov_q, &x, 1e-12, kept);
  Matrix v = (kept > 0) ? hstack(x, extra) : x;
  RitzSet rs = rayleigh_ritz(spec, Subspace::from_orthonormal(v), v.cols());
  if (v.cols() <= p) return convergence_factors(spec, p, k).sigma;
  const double mu_p1 = rs.values[p];
  const double mu_min = rs.values[rs.values.size() - 1];
  return sigma_from_interval(spec, p, k, mu_p1, mu_min);
}

}  // namespace

DescTuple tangents_to_orthonormal(const Spectrum& spec, const std::vector<std::size_t>& sel,
                                  const Matrix& b) {
  const std::size_t t = sel.size();
  // Cosines from adjoint(B) X_sel; sines from the residual X_sel - B (B^H X_sel).
  const Matrix c = spec.adjoint_selected_vectors_times(sel, b);  // t x dim(B)
  DescTuple cosines = singular_values(c);
  const Matrix ch = c.adjoint();                 // dim(B) x t = B^H X_sel
  Matrix resid = matmul(b, ch);                  // projection of X_sel onto span(B)
  resid *= cplx(-1.0, 0.0);
  if (spec.identity_vectors()) {
    for (std::size_t j = 0; j < t; ++j) resid(sel[j], j) += 1.0;
  } else {
    resid += spec.eigenvector_columns(sel);
  }
  DescTuple sines = singular_values(resid);
  std::vector<double> tans(t);
  for (std::size_t j = 0; j < t; ++j) {
    const double s = std::min(1.0, std::max(0.0, sines[j]));
    // cosines ascend as sines descend; entries pair up by order statistics
    const double c_match = std::min(1.0, std::max(0.0, cosines[t - 1 - j]));
    if (c_match <= 1e-300)
      throw RankDeficiencyError("angle of pi/2: measured subspace orthogonal to a target vector");
    tans[j] = (s < 0.7) ? s / std::sqrt((1.0 - s) * (1.0 + s)) : std::sqrt(std::max(0.0, 1.0 - c_match * c_match)) / c_match;
  }
  return DescTuple::arranged(std::move(tans));
}

DescTuple tangents_via_rows(const Spectrum& spec, const std::vector<std::size_t>& sel,
                            const Matrix& b) {
  const std::size_t s = b.cols();
  if (s > sel.size()) throw DimensionError("tangent product formula needs cols(B) <= |sel|");
  const Matrix c = spec.adjoint_vectors_times(b);
  const Matrix c_sel = c.rows_subset(sel);
  const Matrix c_out = c.rows_subset(complement0(spec.n(), sel));
  {
    DescTuple gs = singular_values(c_sel);
    const double ratio = (gs[0] > 0.0) ? gs[gs.size() - 1] / gs[0] : 0.0;
    if (s > std::min(c_sel.rows(), c_sel.cols()) || ratio <= 1e-12)
      throw RankDeficiencyError("angle of pi/2: selected rows are rank deficient");
  }
  return singular_values(matmul(c_out, pseudoinverse(c_sel))).leading(s);
}

Matrix biorthogonal_from_spectrum(const Spectrum& spec, const Matrix& ytilde) {
  const Matrix g = spec.adjoint_selected_vectors_times(range0(spec.p()), ytilde);
  DescTuple gs = singular_values(g);
  const double ratio = (gs[0] > 0.0) ? gs[gs.size() - 1] / gs[0] : 0.0;
  if (ratio <= 1e-12) throw RankDeficiencyError("angle of pi/2: adjoint(X)*Ytilde is singular");
  return matmul(ytilde, inverse(g));
}

BoundReport power_tangent_bound(const Spectrum& spec, const Subspace& y0, unsigned steps,
                                const BoundOptions& opt) {
  const std::size_t p = spec.p();
  double min_target = std::abs(spec.eigenvalues()[0]);
  double max_rest = 0.0;
  for (std::size_t j = 0; j < spec.n(); ++j) {
    const double m = std::abs(spec.eigenvalues()[j]);
    if (j < p)
      min_target = std::min(min_target, m);
    else
      max_rest = std::max(max_rest, m);
  }
  if (!(min_target > max_rest))
    throw NumericDomainError("gap violation: |lambda_p| must exceed |lambda_{p+1}|");

  const Matrix y_on = y0.orthonormal() ? y0.basis() : orthonormalize(y0.basis());
  const double tan_xy = largest(tangents_to_orthonormal(spec, range0(p), y_on));
  const Subspace yl_sub = block_power(spec, y0, steps);
  const Matrix yl = yl_sub.orthonormal() ? yl_sub.basis() : orthonormalize(yl_sub.basis());

  std::vector<double> measured(p), bound(p), factors(p);
  for (std::size_t i = 0; i < p; ++i) {
    measured[i] = largest(tangents_to_orthonormal(spec, {i}, yl));
    factors[i] = std::pow(max_rest / std::abs(spec.eigenvalues()[i]), static_cast<double>(steps));
    bound[i] = factors[i] * tan_xy;
  }
  return componentwise_report("power_tangent", std::move(measured), std::move(bound),
                              std::move(factors), {}, true, opt.rel_tol);
}

namespace {

// Shared body of the per-index filtered tangent bounds.
BoundReport filtered_tangent_impl(const Spectrum& spec, const FilterSpec& f, const Subspace& y,
                                  bool against_aux, const BoundOptions& opt, std::string name) {
  const std::size_t p = spec.p();
  const std::vector<double> mags = filter_magnitudes(spec, f);
  const double max_rest = max_unwanted_magnitude(spec, mags);
  const bool admissible = filter_assumption_holds(spec, f.values_on(spec));

  const Matrix y_on = y.orthonormal() ? y.basis() : orthonormalize(y.basis());
  const Matrix yp = filtered_orthonormal(spec, f, y_on);
  const double tan_xy = largest(tangents_to_orthonormal(spec, range0(p), y_on));
  const Matrix ybi = against_aux ? biorthogonal_from_spectrum(spec, y_on) : Matrix(1, 1);

  std::vector<double> measured, bound, factors;
  std::vector<std::size_t> excluded;
  for (std::size_t i = 0; i < p; ++i) {
    const double fm = mags[i];
    if (fm == 0.0) {
      excluded.push_back(i + 1);
      continue;
    }
    measured.push_back(largest(tangents_to_orthonormal(spec, {i}, yp)));
    factors.push_back(max_rest / fm);
    const double rhs_angle =
        against_aux ? largest(tangents_via_rows(spec, {i}, ybi.column(i))) : tan_xy;
    bound.push_back(factors.back() * rhs_angle);
  }
  if (measured.empty()) throw NumericDomainError("filter vanishes on every target eigenvalue");
  return componentwise_report(std::move(name), std::move(measured), std::move(bound),
                              std::move(factors), std::move(excluded), admissible, opt.rel_tol);
}

}  // namespace

BoundReport filtered_tangent_bound(const Spectrum& spec, const FilterSpec& f, const Subspace& y,
                                   const BoundOptions& opt) {
  return filtered_tangent_impl(spec, f, y, false, opt, "filtered_tangent");
}

BoundReport filtered_tangent_aux_bound(const Spectrum& spec, const FilterSpec& f,
                                       const Subspace& y, const BoundOptions& opt) {
  return filtered_tangent_impl(spec, f, y, true, opt, "filtered_tangent_aux");
}

BoundReport chebyshev_tangent_bound(const Spectrum& spec, unsigned k, const Subspace& y,
                                    const BoundOptions& opt) {
  const std::size_t p = spec.p();
  const ChebyFactors cf = convergence_factors(spec, p, k);
  const FilterSpec f = FilterSpec::shifted_chebyshev(spec.eigenvalue_real(p),
                                                     spec.eigenvalue_real(spec.n() - 1), k);
  const Matrix y_on = y.orthonormal() ? y.basis() : orthonormalize(y.basis());
  const Matrix yp = filtered_orthonormal(spec, f, y_on);
  const double tan_xy = largest(tangents_to_orthonormal(spec, range0(p), y_on));

  std::vector<double> measured(p), bound(p);
  for (std::size_t i = 0; i < p; ++i) {
    measured[i] = largest(tangents_to_orthonormal(spec, {i}, yp));
    bound[i] = cf.sigma[i] * tan_xy;
  }
  return componentwise_report("chebyshev_tangent", std::move(measured), std::move(bound),
                              cf.sigma, {}, true, opt.rel_tol);
}

namespace {

BoundReport filtered_ritz_impl(const Spectrum& spec, const FilterSpec& f, const Subspace& y,
                               bool against_aux, const BoundOptions& opt, std::string name) {
  if (!spec.hermitian()) throw NumericDomainError("Ritz bounds need a Hermitian spectrum");
  const std::size_t p = spec.p();
  const std::vector<double> mags = filter_magnitudes(spec, f);
  const double max_rest = max_unwanted_magnitude(spec, mags);
  const bool admissible = filter_assumption_holds(spec, f.values_on(spec));

  const Matrix y_on = y.orthonormal() ? y.basis() : orthonormalize(y.basis());
  const Matrix yp = filtered_orthonormal(spec, f, y_on);
  RitzSet rs = rayleigh_ritz(spec, Subspace::from_orthonormal(yp), p);
  RitzErrors err = ritz_error_ratios(spec, rs.values, p, opt.denom_guard);

  const double tan_xy = largest(tangents_to_orthonormal(spec, range0(p), y_on));
  const Matrix ybi = against_aux ? biorthogonal_from_spectrum(spec, y_on) : Matrix(1, 1);

  std::vector<double> measured, bound, factors;
  double min_target = mags[0];
  for (std::size_t i = 0; i < p; ++i) {
    min_target = std::min(min_target, mags[i]);
    if (std::find(err.excluded.begin(), err.excluded.end(), i + 1) != err.excluded.end())
      continue;
    if (min_target == 0.0) {
      err.excluded.push_back(i + 1);
      continue;
    }
    measured.push_back(err.ratio[i]);
    const double factor = (max_rest / min_target) * (max_rest / min_target);
    factors.push_back(factor);
    double rhs_angle = tan_xy;
    if (against_aux) {
      rhs_angle = largest(tangents_via_rows(spec, range0(i + 1), ybi.columns(0, i + 1)));
    }
    bound.push_back(factor * rhs_angle * rhs_angle);
  }
  if (measured.empty()) throw NumericDomainError("no evaluable Ritz indices");
  return componentwise_report(std::move(name), std::move(measured), std::move(bound),
                              std::move(factors), std::move(err.excluded), admissible,
                              opt.rel_tol);
}

}  // namespace

BoundReport filtered_ritz_bound(const Spectrum& spec, const FilterSpec& f, const Subspace& y,
                                const BoundOptions& opt) {
  return filtered_ritz_impl(spec, f, y, false, opt, "filtered_ritz");
}

BoundReport filtered_ritz_aux_bound(const Spectrum& spec, const FilterSpec& f, const Subspace& y,
                                    const BoundOptions& opt) {
  return filtered_ritz_impl(spec, f, y, true, opt, "filtered_ritz_aux");
}

BoundReport chebyshev_ritz_bound(const Spectrum& spec, unsigned k, const Subspace& y,
                                 const BoundOptions& opt) {
  if (!spec.hermitian()) throw NumericDomainError("Ritz bounds need a Hermitian spectrum");
  const std::size_t p = spec.p();
  const ChebyFactors cf = convergence_factors(spec, p, k);
  const FilterSpec f = FilterSpec::shifted_chebyshev(spec.eigenvalue_real(p),
                                                     spec.eigenvalue_real(spec.n() - 1), k);
  const Matrix y_on = y.orthonormal() ? y.basis() : orthonormalize(y.basis());
  const Matrix yp = filtered_orthonormal(spec, f, y_on);
  RitzSet rs = rayleigh_ritz(spec, Subspace::from_orthonormal(yp), p);
  RitzErrors err = ritz_error_ratios(spec, rs.values, p, opt.denom_guard);
  const double tan_xy = largest(tangents_to_orthonormal(spec, range0(p), y_on));

  std::vector<double> measured, bound, factors;
  for (std::size_t i = 0; i < p; ++i) {
    if (std::find(err.excluded.begin(), err.excluded.end(), i + 1) != err.excluded.end()) continue;
    measured.push_back(err.ratio[i]);
    factors.push_back(cf.sigma[i] * cf.sigma[i]);
    bound.push_back(factors.back() * tan_xy * tan_xy);
  }
  return componentwise_report("chebyshev_ritz", std::move(measured), std::move(bound),
                              std::move(factors), std::move(err.excluded), true, opt.rel_tol);
}

BoundReport filtered_subspace_tangent_bound(const Spectrum& spec, const FilterSpec& f,
                                            std::size_t i, const Subspace& y,
                                            const BoundOptions& opt) {
  const std::size_t p = spec.p();
  if (i < 1 || i > p) throw DimensionError("index i out of range");
  const std::vector<double> mags = filter_magnitudes(spec, f);
  const double max_rest = max_unwanted_magnitude(spec, mags);
  double min_head = mags[0];
  for (std::size_t j = 0; j < i; ++j) min_head = std::min(min_head, mags[j]);
  if (min_head == 0.0) throw NumericDomainError("filter vanishes on a leading eigenvalue");

  const Matrix y_on = y.orthonormal() ? y.basis() : orthonormalize(y.basis());
  const Matrix ybi = biorthogonal_from_spectrum(spec, y_on);
  const Matrix yi = ybi.columns(0, i);
  const Matrix ypi = filtered_orthonormal(spec, f, yi);

  const double measured = largest(tangents_to_orthonormal(spec, range0(i), ypi));
  const double factor = max_rest / min_head;
  const double rhs = factor * largest(tangents_via_rows(spec, range0(i), yi));
  return componentwise_report("filtered_subspace_tangent", {measured}, {rhs}, {factor}, {},
                              filter_assumption_holds(spec, f.values_on(spec)), opt.rel_tol);
}

BoundReport ritz_error_vs_angle_bound(const Spectrum& spec, const FilterSpec& f, std::size_t i,
                                      const Subspace& y, const BoundOptions& opt) {
  if (!spec.hermitian()) throw NumericDomainError("Ritz bounds need a Hermitian spectrum");
  const std::size_t p = spec.p();
  if (i < 1 || i > p) throw DimensionError("index i out of range");
  const Matrix y_on = y.orthonormal() ? y.basis() : orthonormalize(y.basis());
  const Matrix yp = filtered_orthonormal(spec, f, y_on);
  RitzSet rs = rayleigh_ritz(spec, Subspace::from_orthonormal(yp), p);
  RitzErrors err = ritz_error_ratios(spec, rs.values, p, opt.denom_guard);

  const Matrix ybi = biorthogonal_from_spectrum(spec, y_on);
  const Matrix ypi = filtered_orthonormal(spec, f, ybi.columns(0, i));
  const double tan_aux = largest(tangents_to_orthonormal(spec, range0(i), ypi));

  std::vector<std::size_t> excluded;
  double measured = 0.0;
  bool usable = std::find(err.excluded.begin(), err.excluded.end(), i) == err.excluded.end();
  if (usable)
    measured = err.ratio[i - 1];
  else
    excluded.push_back(1);
  return componentwise_report("ritz_error_vs_angle", {measured}, {tan_aux * tan_aux}, {1.0},
                              std::move(excluded),
                              filter_assumption_holds(spec, f.values_on(spec)), opt.rel_tol);
}

BoundPair multiangle_tangent_bound(const Spectrum& spec, const FilterSpec& f, const IndexSet& tau,
                                   const Subspace& y, const BoundOptions& opt) {
  const std::size_t p = spec.p();
  if (tau.max_index() > p) throw DimensionError("tau must stay within 1..p");
  const std::vector<std::size_t> tau0 = tau.zero_based();

  const FilterTuples ft = filter_tuples(spec, f, tau);
  const DescTuple factors = ft.phi_tau.componentwise_times(ft.phi_hat_t);

  const Matrix y_on = y.orthonormal() ? y.basis() : orthonormalize(y.basis());
  const Matrix yp = filtered_orthonormal(spec, f, y_on);
  const DescTuple measured = tangents_to_orthonormal(spec, tau0, yp);

  const Matrix ybi = biorthogonal_from_spectrum(spec, y_on);
  const Matrix y_tau = ybi.columns(tau0);
  const DescTuple tan_aux = tangents_via_rows(spec, tau0, y_tau);
  const DescTuple tan_xy_t = tangents_via_rows(spec, range0(p), y_on).leading(tau.t());

  BoundPair pair{
      majorization_report("multiangle_tangent_aux", measured, factors.componentwise_times(tan_aux),
                          factors, ft.assumption_holds, opt.rel_tol),
      majorization_report("multiangle_tangent", measured, factors.componentwise_times(tan_xy_t),
                          factors, ft.assumption_holds, opt.rel_tol)};
  return pair;
}

BoundReport abstract_filter_bound(const Spectrum& f, const Subspace& u, const Subspace& v,
                                  const Subspace& vperp, const BoundOptions& opt) {
  const std::size_t s = u.dim();
  const std::size_t t = v.dim();
  const std::size_t n = f.n();
  if (s > std::min(t, n - t)) throw DimensionError("needs dim(U) <= min(dim V, codim V)");
  if (!v.orthonormal() || !vperp.orthonormal())
    throw NumericDomainError("V and Vperp must be orthonormal");

  // V and Vperp must be invariant under adjoint(F).
  auto invariance_residual = [&](const Matrix& basis) {
    Matrix w = f.apply_adjoint(basis);
    Matrix proj = matmul(basis, adjoint_times(basis, w));
    return frobenius_norm(w - proj) / std::max(frobenius_norm(w), 1e-300);
  };
  if (invariance_residual(v.basis()) > 1e-8 || invariance_residual(vperp.basis()) > 1e-8)
    throw NumericDomainError("V and Vperp are not invariant under adjoint(F)");

  const Matrix g = adjoint_times(v.basis(), f.apply(v.basis()));
  DescTuple gs = singular_values(g);
  if (gs[gs.size() - 1] <= 1e-12 * gs[0])
    throw RankDeficiencyError("V^H F V is singular");
  std::vector<double> ginv(s);
  for (std::size_t j = 0; j < s; ++j) ginv[j] = 1.0 / gs[gs.size() - 1 - j];
  const DescTuple g_inv_s = DescTuple::from_sorted(std::move(ginv));

  const Matrix h = adjoint_times(vperp.basis(), f.apply(vperp.basis()));
  const DescTuple h_s = singular_values(h).leading(s);

  const DescTuple tan_uv = principal_angles_tangent(u.basis(), v, vperp);
  const Matrix fu = f.apply(u.basis());
  const DescTuple measured = principal_angles_tangent(fu, v, vperp);

  const DescTuple factors = g_inv_s.componentwise_times(h_s);
  return majorization_report("abstract_filter", measured, factors.componentwise_times(tan_uv),
                             factors, true, opt.rel_tol);
}

namespace {

// Phi_i^2 * PhiHat_i^2 for the leading index range.
DescTuple squared_leading_factors(const Spectrum& spec, const FilterSpec& f, std::size_t i) {
  const FilterTuples ft = filter_tuples(spec, f, IndexSet::first(i));
  return ft.phi_tau.componentwise_times(ft.phi_hat_t).componentwise_square();
}

}  // namespace

BoundReport filtered_subspace_tangent_major_bound(const Spectrum& spec, const FilterSpec& f,
                                                  std::size_t i, const Subspace& y,
                                                  const BoundOptions& opt) {
  const std::size_t p = spec.p();
  if (i < 1 || i > p) throw DimensionError("index i out of range");
  const Matrix y_on = y.orthonormal() ? y.basis() : orthonormalize(y.basis());
  const Matrix ybi = biorthogonal_from_spectrum(spec, y_on);
  const Matrix yi = ybi.columns(0, i);
  const Matrix ypi = filtered_orthonormal(spec, f, yi);

  const DescTuple measured = tangents_to_orthonormal(spec, range0(i), ypi).componentwise_square();
  const DescTuple factors = squared_leading_factors(spec, f, i);
  const DescTuple tan_aux = tangents_via_rows(spec, range0(i), yi).componentwise_square();
  return majorization_report("filtered_subspace_tangent_major", measured,
                             factors.componentwise_times(tan_aux), factors,
                             filter_assumption_holds(spec, f.values_on(spec)), opt.rel_tol);
}

BoundReport ritz_error_vs_angle_major_bound(const Spectrum& spec, const FilterSpec& f,
                                            std::size_t i, const Subspace& y,
                                            const BoundOptions& opt) {
  if (!spec.hermitian()) throw NumericDomainError("Ritz bounds need a Hermitian spectrum");
  const std::size_t p = spec.p();
  if (i < 1 || i > p) throw DimensionError("index i out of range");
  const Matrix y_on = y.orthonormal() ? y.basis() : orthonormalize(y.basis());
  const Matrix yp = filtered_orthonormal(spec, f, y_on);
  RitzSet rs = rayleigh_ritz(spec, Subspace::from_orthonormal(yp), p);
  RitzErrors err = ritz_error_ratios(spec, rs.values, i, opt.denom_guard);

  const Matrix ybi = biorthogonal_from_spectrum(spec, y_on);
  const Matrix ypi = filtered_orthonormal(spec, f, ybi.columns(0, i));
  const DescTuple bound = tangents_to_orthonormal(spec, range0(i), ypi).componentwise_square();

  BoundReport r = majorization_report("ritz_error_vs_angle_major",
                                      DescTuple::arranged(err.ratio), bound,
                                      DescTuple::arranged({1.0}),
                                      filter_assumption_holds(spec, f.values_on(spec)),
                                      opt.rel_tol);
  r.excluded = std::move(err.excluded);
  if (!r.excluded.empty()) r.note = "entries with vanishing denominators were zeroed";
  return r;
}

BoundPair filtered_ritz_major_bound(const Spectrum& spec, const FilterSpec& f, std::size_t i,
                                    const Subspace& y, const BoundOptions& opt) {
  if (!spec.hermitian()) throw NumericDomainError("Ritz bounds need a Hermitian spectrum");
  const std::size_t p = spec.p();
  if (i < 1 || i > p) throw DimensionError("index i out of range");
  const Matrix y_on = y.orthonormal() ? y.basis() : orthonormalize(y.basis());
  const Matrix yp = filtered_orthonormal(spec, f, y_on);
  RitzSet rs = rayleigh_ritz(spec, Subspace::from_orthonormal(yp), p);
  RitzErrors err = ritz_error_ratios(spec, rs.values, i, opt.denom_guard);
  const DescTuple measured = DescTuple::arranged(err.ratio);

  const DescTuple factors = squared_leading_factors(spec, f, i);
  const Matrix ybi = biorthogonal_from_spectrum(spec, y_on);
  const DescTuple tan_aux =
      tangents_via_rows(spec, range0(i), ybi.columns(0, i)).componentwise_square();
  const DescTuple tan_lead =
      tangents_via_rows(spec, range0(p), y_on).leading(i).componentwise_square();

  const bool ok = filter_assumption_holds(spec, f.values_on(spec));
  BoundPair pair{majorization_report("filtered_ritz_major_aux", measured,
                                     factors.componentwise_times(tan_aux), factors, ok,
                                     opt.rel_tol),
                 majorization_report("filtered_ritz_major", measured,
                                     factors.componentwise_times(tan_lead), factors, ok,
                                     opt.rel_tol)};
  pair.auxiliary.excluded = err.excluded;
  pair.eliminated.excluded = err.excluded;
  return pair;
}

BoundReport ritz_shift_major_bound(const Spectrum& aspec, const Spectrum& f, const Subspace& u,
                                   std::size_t t, const BoundOptions& opt) {
  if (!aspec.hermitian()) throw NumericDomainError("needs a Hermitian base spectrum");
  if (u.dim() != t) throw DimensionError("needs dim(U) = t");
  if (t >= aspec.n()) throw DimensionError("t out of range");
  const std::vector<std::size_t> head = range0(t);

  const Matrix fu = orthonormalize(f.apply(u.basis()));
  RitzSet in_fu = rayleigh_ritz(aspec, Subspace::from_orthonormal(fu), t);

  const Matrix v = aspec.eigenvector_columns(head);
  std::size_t kept = 0;
  Matrix extra = orthonormalize_against(v, &fu, 1e-12, kept);
  const Matrix joint = (kept > 0) ? hstack(fu, extra) : fu;
  RitzSet in_joint = rayleigh_ritz(aspec, Subspace::from_orthonormal(joint), joint.cols());
  const double psi_min = in_joint.values[in_joint.values.size() - 1];

  const double span = aspec.eigenvalue_real(0) - aspec.eigenvalue_real(aspec.n() - 1);
  std::vector<double> measured(t);
  std::vector<std::size_t> excluded;
  for (std::size_t j = 0; j < t; ++j) {
    const double num = std::max(aspec.eigenvalue_real(j) - in_fu.values[j], 0.0);
    const double den = in_fu.values[j] - psi_min;
    if (den < opt.denom_guard * span) {
      measured[j] = 0.0;
      excluded.push_back(j + 1);
    } else {
      measured[j] = num / den;
    }
  }

  const Matrix g = adjoint_times(v, f.apply(v));
  DescTuple gs = singular_values(g);
  if (gs[gs.size() - 1] <= 1e-12 * gs[0]) throw RankDeficiencyError("V^H F V is singular");
  std::vector<double> ginv(t);
  for (std::size_t j = 0; j < t; ++j) ginv[j] = 1.0 / gs[gs.size() - 1 - j];
  const Matrix vperp = aspec.eigenvector_columns(complement0(aspec.n(), head));
  const Matrix h = adjoint_times(vperp, f.apply(vperp));
  const DescTuple factors =
      DescTuple::from_sorted(std::move(ginv)).componentwise_times(singular_values(h).leading(t))
          .componentwise_square();
  const DescTuple tan_uv = tangents_via_rows(aspec, head, u.basis()).componentwise_square();

  BoundReport r = majorization_report("ritz_shift_major", DescTuple::arranged(measured),
                                      factors.componentwise_times(tan_uv), factors, true,
                                      opt.rel_tol);
  r.excluded = std::move(excluded);
  return r;
}

BoundReport ritz_spread_major_bound(const Spectrum& aspec, const Spectrum& f, const Subspace& u,
                                    const IndexSet& vsel, const BoundOptions& opt) {
  if (!aspec.hermitian()) throw NumericDomainError("needs a Hermitian base spectrum");
  const std::size_t t = vsel.t();
  if (u.dim() != t) throw DimensionError("needs dim(U) = |vsel|");
  if (vsel.max_index() > aspec.n()) throw DimensionError("vsel out of range");
  const std::vector<std::size_t> sel = vsel.zero_based();

  const Matrix fu = orthonormalize(f.apply(u.basis()));
  RitzSet in_fu = rayleigh_ritz(aspec, Subspace::from_orthonormal(fu), t);

  // Lambda(V^H A V) for an invariant V is just the selected eigenvalues.
  std::vector<double> lam_v(t);
  for (std::size_t j = 0; j < t; ++j) lam_v[j] = aspec.eigenvalue_real(sel[j]);
  const DescTuple lam_v_desc = DescTuple::arranged(lam_v);

  const Matrix v = aspec.eigenvector_columns(sel);
  std::size_t kept = 0;
  Matrix extra = orthonormalize_against(v, &fu, 1e-12, kept);
  const Matrix joint = (kept > 0) ? hstack(fu, extra) : fu;
  RitzSet in_joint = rayleigh_ritz(aspec, Subspace::from_orthonormal(joint), joint.cols());
  const double zeta = in_joint.spread;

  const double span = aspec.eigenvalue_real(0) - aspec.eigenvalue_real(aspec.n() - 1);
  std::vector<double> measured(t);
  std::vector<std::size_t> excluded;
  for (std::size_t j = 0; j < t; ++j) {
    const double delta = std::abs(lam_v_desc[j] - in_fu.values[j]);
    const double den = zeta - delta;
    if (den < opt.denom_guard * span) {
      measured[j] = 0.0;
      excluded.push_back(j + 1);
    } else {
      measured[j] = delta / den;
    }
  }

  const Matrix g = adjoint_times(v, f.apply(v));
  DescTuple gs = singular_values(g);
  if (gs[gs.size() - 1] <= 1e-12 * gs[0]) throw RankDeficiencyError("V^H F V is singular");
  std::vector<double> ginv(t);
  for (std::size_t j = 0; j < t; ++j) ginv[j] = 1.0 / gs[gs.size() - 1 - j];
  const Matrix vperp = aspec.eigenvector_columns(complement0(aspec.n(), sel));
  const Matrix h = adjoint_times(vperp, f.apply(vperp));
  const DescTuple factors =
      DescTuple::from_sorted(std::move(ginv)).componentwise_times(singular_values(h).leading(t))
          .componentwise_square();
  const DescTuple tan_uv = tangents_via_rows(aspec, sel, u.basis()).componentwise_square();

  BoundReport r = majorization_report("ritz_spread_major", DescTuple::arranged(measured),
                                      factors.componentwise_times(tan_uv), factors, true,
                                      opt.rel_tol);
  r.excluded = std::move(excluded);
  return r;
}

BoundPair lanczos_tangent_major_bound(const Spectrum& spec, const Subspace& y, unsigned k,
                                      const IndexSet& tau, const BoundOptions& opt) {
  const std::size_t p = spec.p();
  if (tau.max_index() > p) throw DimensionError("tau must stay within 1..p");
  const std::vector<std::size_t> tau0 = tau.zero_based();
  const std::size_t t = tau.t();

  const Matrix y_on = y.orthonormal() ? y.basis() : orthonormalize(y.basis());
  KrylovBasis kb = build_block_krylov(spec, y_on, k);
  const DescTuple measured = tangents_to_orthonormal(spec, tau0, kb.q);

  const std::vector<double> sig = krylov_sigmas(spec, kb.q, k, opt);
  std::vector<double> fac(t);
  for (std::size_t j = 0; j < t; ++j) fac[j] = sig[tau0[t - 1 - j]];  // sigma_{i_t} first
  const DescTuple factors = DescTuple::from_sorted(std::move(fac));

  const Matrix ybi = biorthogonal_from_spectrum(spec, y_on);
  const DescTuple tan_aux = tangents_via_rows(spec, tau0, ybi.columns(tau0));
  const DescTuple tan_lead = tangents_via_rows(spec, range0(p), y_on).leading(t);

  return BoundPair{
      majorization_report("lanczos_tangent_major_aux", measured,
                          factors.componentwise_times(tan_aux), factors, true, opt.rel_tol),
      majorization_report("lanczos_tangent_major", measured,
                          factors.componentwise_times(tan_lead), factors, true, opt.rel_tol)};
}

BoundPair lanczos_ritz_major_bound(const Spectrum& spec, const Subspace& y, unsigned k,
                                   std::size_t i, const BoundOptions& opt) {
  const std::size_t p = spec.p();
  if (i < 1 || i > p) throw DimensionError("index i out of range");
  const Matrix y_on = y.orthonormal() ? y.basis() : orthonormalize(y.basis());
  KrylovBasis kb = build_block_krylov(spec, y_on, k);
  RitzSet rs = rayleigh_ritz(spec, Subspace::from_orthonormal(kb.q), std::min<std::size_t>(i, kb.dim()));
  RitzErrors err = ritz_error_ratios(spec, rs.values, i, opt.denom_guard);
  const DescTuple measured = DescTuple::arranged(err.ratio);

  const std::vector<double> sig = krylov_sigmas(spec, kb.q, k, opt);
  std::vector<double> fac(i);
  for (std::size_t j = 0; j < i; ++j) {
    const double s = sig[i - 1 - j];  // sigma_i first
    fac[j] = s * s;
  }
  const DescTuple factors = DescTuple::from_sorted(std::move(fac));

  const Matrix ybi = biorthogonal_from_spectrum(spec, y_on);
  const DescTuple tan_aux =
      tangents_via_rows(spec, range0(i), ybi.columns(0, i)).componentwise_square();
  const DescTuple tan_lead =
      tangents_via_rows(spec, range0(p), y_on).leading(i).componentwise_square();

  BoundPair pair{majorization_report("lanczos_ritz_major_aux", measured,
                                     factors.componentwise_times(tan_aux), factors, true,
                                     opt.rel_tol),
                 majorization_report("lanczos_ritz_major", measured,
                                     factors.componentwise_times(tan_lead), factors, true,
                                     opt.rel_tol)};
  pair.auxiliary.excluded = err.excluded;
  pair.eliminated.excluded = err.excluded;
  return pair;
}

BoundReport lanczos_tangent_kyfan_bound(const Spectrum& spec, const Subspace& y, unsigned k,
                                        const IndexSet& tau, const BoundOptions& opt) {
  const std::size_t p = spec.p();
  if (tau.max_index() > p) throw DimensionError("tau must stay within 1..p");
  const std::vector<std::size_t> tau0 = tau.zero_based();

  const Matrix y_on = y.orthonormal() ? y.basis() : orthonormalize(y.basis());
  KrylovBasis kb = build_block_krylov(spec, y_on, k);
  const DescTuple measured = tangents_to_orthonormal(spec, tau0, kb.q);

  const std::vector<double> sig = krylov_sigmas(spec, kb.q, k, opt);
  const double sigma_max = sig[tau0.back()];  // sigma_{i_t}

  const Matrix ybi = biorthogonal_from_spectrum(spec, y_on);
  const DescTuple tan_aux = tangents_via_rows(spec, tau0, ybi.columns(tau0));
  return majorization_report("lanczos_tangent_kyfan", measured, tan_aux.scaled(sigma_max),
                             DescTuple::arranged({sigma_max}), true, opt.rel_tol);
}

BoundReport lanczos_ritz_kyfan_bound(const Spectrum& spec, const Subspace& y, unsigned k,
                                     std::size_t i, const BoundOptions& opt) {
  const std::size_t p = spec.p();
  if (i < 1 || i > p) throw DimensionError("index i out of range");
  const Matrix y_on = y.orthonormal() ? y.basis() : orthonormalize(y.basis());
  KrylovBasis kb = build_block_krylov(spec, y_on, k);
  RitzSet rs = rayleigh_ritz(spec, Subspace::from_orthonormal(kb.q), std::min<std::size_t>(i, kb.dim()));

  const double lam1 = spec.eigenvalue_real(0);
  const double lam_n = spec.eigenvalue_real(spec.n() - 1);
  std::vector<double> measured(i);
  for (std::size_t j = 0; j < i; ++j)
    measured[j] = std::max(spec.eigenvalue_real(j) - rs.values[j], 0.0) / (lam1 - lam_n);

  const std::vector<double> sig = krylov_sigmas(spec, kb.q, k, opt);
  const double s2 = sig[i - 1] * sig[i - 1];
  const Matrix ybi = biorthogonal_from_spectrum(spec, y_on);
  const DescTuple tan_aux =
      tangents_via_rows(spec, range0(i), ybi.columns(0, i)).componentwise_square();
  return majorization_report("lanczos_ritz_kyfan", DescTuple::arranged(measured),
                             tan_aux.scaled(s2), DescTuple::arranged({s2}), true, opt.rel_tol);
}

BoundReport stationary_ritz_major_bound(const Spectrum& spec, unsigned k, const Subspace& y,
                                        const BoundOptions& opt) {
  if (!spec.hermitian()) throw NumericDomainError("Ritz bounds need a Hermitian spectrum");
  const std::size_t p = spec.p();
  const ChebyFactors cf = convergence_factors(spec, p, k);
  const FilterSpec f = FilterSpec::shifted_chebyshev(spec.eigenvalue_real(p),
                                                     spec.eigenvalue_real(spec.n() - 1), k);
  const Matrix y_on = y.orthonormal() ? y.basis() : orthonormalize(y.basis());
  const Matrix yp = filtered_orthonormal(spec, f, y_on);
  RitzSet rs = rayleigh_ritz(spec, Subspace::from_orthonormal(yp), p);
  RitzErrors err = ritz_error_ratios(spec, rs.values, p, opt.denom_guard);
  const DescTuple measured = DescTuple::arranged(err.ratio);

  const DescTuple tan_xy = tangents_via_rows(spec, range0(p), y_on);
  std::vector<double> rhs(p), fac(p);
  for (std::size_t j = 1; j <= p; ++j) {
    fac[j - 1] = cf.beta(j);
    rhs[j - 1] = fac[j - 1] * tan_xy[j - 1] * tan_xy[j - 1];
  }
  BoundReport r = majorization_report("stationary_ritz_major", measured,
                                      DescTuple::arranged(rhs), DescTuple::arranged(fac), true,
                                      opt.rel_tol);
  r.excluded = std::move(err.excluded);
  return r;
}

MajorizationVerdict verify_report(const BoundReport& report, double rel_tol) {
  if (report.componentwise)
    return component_verdict(report.verdict.prefix_sums_lhs, report.verdict.prefix_sums_rhs,
                             rel_tol);
  return weakly_majorizes(report.bound, report.measured, rel_tol);
}

}  // namespace specbound
