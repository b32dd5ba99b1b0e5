#include "specbound/tuples.hpp"

#include <algorithm>
#include <cmath>

#include "specbound/decomp.hpp"

namespace specbound {

namespace {

void require_finite(const std::vector<double>& v) {
  if (v.empty()) throw NumericDomainError("empty tuple");
  for (double x : v)
    if (!std::isfinite(x)) throw NumericDomainError("tuple entry is not finite");
}

}  // namespace

DescTuple DescTuple::arranged(std::vector<double> values) {
  require_finite(values);
  std::stable_sort(values.begin(), values.end(), std::greater<double>());
  return DescTuple(std::move(values));
}

DescTuple DescTuple::from_sorted(std::vector<double> values) {
  require_finite(values);
  for (std::size_t i = 0; i + 1 < values.size(); ++i)
    if (values[i] < values[i + 1]) throw NumericDomainError("tuple is not non-increasing");
  return DescTuple(std::move(values));
}

DescTuple DescTuple::leading(std::size_t t) const {
  if (t < 1 || t > values_.size()) throw DimensionError("leading subtuple length out of range");
  return DescTuple(std::vector<double>(values_.begin(), values_.begin() + t));
}

DescTuple DescTuple::componentwise_times(const DescTuple& other) const {
  if (other.size() != size()) throw DimensionError("componentwise product length mismatch");
  std::vector<double> v(size());
  for (std::size_t i = 0; i < size(); ++i) v[i] = values_[i] * other.values_[i];
  // The product of two non-increasing nonnegative tuples is non-increasing;
  // re-arranging covers signed inputs as well.
  return DescTuple::arranged(std::move(v));
}

DescTuple DescTuple::componentwise_square() const {
  std::vector<double> v(size());
  for (std::size_t i = 0; i < size(); ++i) v[i] = values_[i] * values_[i];
  return DescTuple::arranged(std::move(v));
}

DescTuple DescTuple::scaled(double s) const {
  std::vector<double> v(size());
  for (std::size_t i = 0; i < size(); ++i) v[i] = s * values_[i];
  return DescTuple::arranged(std::move(v));
}

double DescTuple::sum() const {
  double s = 0.0;
  for (double x : values_) s += x;
  return s;
}

std::vector<double> DescTuple::prefix_sums() const {
  std::vector<double> p(size());
  double s = 0.0;
  for (std::size_t i = 0; i < size(); ++i) {
    s += values_[i];
    p[i] = s;
  }
  return p;
}

bool DescTuple::all_nonnegative() const {
  return values_.empty() || values_.back() >= 0.0;
}

DescTuple sort_desc(const std::vector<double>& values) { return DescTuple::arranged(values); }

DescTuple leading_subtuple(const DescTuple& a, std::size_t t) { return a.leading(t); }

namespace {

// Pads the shorter tuple with zeros; only legal when both are nonnegative.
void pad_to_common(const DescTuple& b, const DescTuple& a, std::vector<double>& bv,
                   std::vector<double>& av) {
  bv = b.values();
  av = a.values();
  if (bv.size() == av.size()) return;
  if (!b.all_nonnegative() || !a.all_nonnegative())
    throw DimensionError("length mismatch: zero padding needs nonnegative tuples");
  const std::size_t d = std::max(bv.size(), av.size());
  bv.resize(d, 0.0);
  av.resize(d, 0.0);
}

MajorizationVerdict prefix_verdict(const std::vector<double>& rhs, const std::vector<double>& lhs,
                                   double rel_tol) {
  MajorizationVerdict v;
  v.prefix_sums_lhs = lhs;
  v.prefix_sums_rhs = rhs;
  double scale = 0.0;
  for (double x : lhs) scale = std::max(scale, std::abs(x));
  for (double x : rhs) scale = std::max(scale, std::abs(x));
  v.tolerance_used = rel_tol * scale;
  for (std::size_t k = 0; k < lhs.size(); ++k)
    v.worst_violation = std::max(v.worst_violation, lhs[k] - rhs[k]);
  v.worst_violation = std::max(v.worst_violation, 0.0);
  v.holds = v.worst_violation <= v.tolerance_used;
  return v;
}

}  // namespace

MajorizationVerdict weakly_majorizes(const DescTuple& b, const DescTuple& a, double rel_tol) {
  std::vector<double> bv, av;
  pad_to_common(b, a, bv, av);
  std::vector<double> pb(bv.size()), pa(av.size());
  double sb = 0.0, sa = 0.0;
  for (std::size_t i = 0; i < bv.size(); ++i) {
    sb += bv[i];
    sa += av[i];
    pb[i] = sb;
    pa[i] = sa;
  }
  return prefix_verdict(pb, pa, rel_tol);
}

MajorizationVerdict strongly_majorizes(const DescTuple& b, const DescTuple& a, double rel_tol) {
  MajorizationVerdict v = weakly_majorizes(b, a, rel_tol);
  const double total_gap = std::abs(v.prefix_sums_lhs.back() - v.prefix_sums_rhs.back());
  if (total_gap > v.tolerance_used) {
    v.holds = false;
    v.worst_violation = std::max(v.worst_violation, total_gap);
  }
  return v;
}

MajorizationVerdict log_weakly_majorizes(const DescTuple& b, const DescTuple& a, double rel_tol) {
  if (!b.all_nonnegative() || !a.all_nonnegative())
    throw NumericDomainError("log majorization needs nonnegative tuples");
  std::vector<double> bv, av;
  pad_to_common(b, a, bv, av);
  MajorizationVerdict v;
  v.prefix_sums_lhs.resize(av.size());
  v.prefix_sums_rhs.resize(bv.size());
  double pb = 1.0, pa = 1.0;
  v.holds = true;
  v.tolerance_used = rel_tol;
  for (std::size_t k = 0; k < av.size(); ++k) {
    pb *= bv[k];
    pa *= av[k];
    v.prefix_sums_lhs[k] = pa;
    v.prefix_sums_rhs[k] = pb;
    if (pa == 0.0) continue;  // later prefixes of a stay zero: trivially true
    const double excess = pa - (1.0 + rel_tol) * pb;
    if (excess > 0.0) {
      v.holds = false;
      v.worst_violation = std::max(v.worst_violation, excess);
    }
  }
  return v;
}

ProductMajorizationResult product_majorization_check(const Matrix& b1, const Matrix& b2,
                                                     const Matrix& b3, std::size_t t, unsigned c,
                                                     double rel_tol, bool require_division) {
  if (b1.cols() != b2.rows() || b2.cols() != b3.rows())
    throw DimensionError("product_majorization_check: non-conformable factors");
  const std::size_t dmin = std::min(std::min(b1.rows(), b1.cols()), std::min(b3.rows(), b3.cols()));
  if (t < 1 || t > std::min(dmin, std::min(b2.rows(), b2.cols())))
    throw DimensionError("product_majorization_check: t exceeds a factor dimension");

  const DescTuple s_prod = singular_values(matmul(matmul(b1, b2), b3)).leading(t);
  const DescTuple s1 = singular_values(b1).leading(t);
  const DescTuple s2 = singular_values(b2).leading(t);
  const DescTuple s3 = singular_values(b3).leading(t);

  auto powed = [c](const DescTuple& s) {
    std::vector<double> v(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) v[i] = std::pow(s[i], static_cast<double>(c));
    return DescTuple::arranged(std::move(v));
  };
  const DescTuple lp = powed(s_prod);
  const DescTuple p2 = powed(s2);
  const DescTuple rp = powed(s1).componentwise_times(p2).componentwise_times(powed(s3));

  ProductMajorizationResult result;
  result.product_form = weakly_majorizes(rp, lp, rel_tol);

  if (require_division && s2[t - 1] <= 0.0)
    throw NumericDomainError("division form needs strictly positive S_t(B2)");
  if (s2[t - 1] > 0.0) {
    result.division_checked = true;
    std::vector<double> q(t);
    for (std::size_t i = 0; i < t; ++i) q[i] = lp[i] / p2[i];
    const DescTuple lq = DescTuple::arranged(std::move(q));
    const DescTuple rq = powed(s1).componentwise_times(powed(s3));
    result.division_form = weakly_majorizes(rq, lq, rel_tol);
  }
  return result;
}

}  // namespace specbound
