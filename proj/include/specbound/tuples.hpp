#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "specbound/errors.hpp"
#include "specbound/matrix.hpp"

namespace specbound {

/// Finite tuple of reals kept in non-increasing order. Constructing from an
/// unsorted list sorts descending (the "arrange" operation); ties keep their
/// original relative order.
class DescTuple {
public:
  /// Unset tuple (size 0). The factories below reject empty input; an unset
  /// tuple only appears as a not-yet-filled struct member.
  DescTuple() = default;

  /// Sorts the input descending. Empty input or non-finite entries are errors.
  static DescTuple arranged(std::vector<double> values);
  /// Accepts an already non-increasing list; verifies the order.
  static DescTuple from_sorted(std::vector<double> values);

  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  const std::vector<double>& values() const { return values_; }

  /// First t entries, 1 <= t <= size.
  DescTuple leading(std::size_t t) const;

  DescTuple componentwise_times(const DescTuple& other) const;
  DescTuple componentwise_square() const;
  DescTuple scaled(double s) const;  // s >= 0 keeps the ordering

  double sum() const;
  std::vector<double> prefix_sums() const;

  bool all_nonnegative() const;

private:
  explicit DescTuple(std::vector<double> v) : values_(std::move(v)) {}
  std::vector<double> values_;
};

/// Convenience: sorts a raw list descending.
DescTuple sort_desc(const std::vector<double>& values);

/// First t entries of a tuple.
DescTuple leading_subtuple(const DescTuple& a, std::size_t t);

/// Outcome of a prefix-sum (or prefix-product) comparison between two tuples.
/// holds <=> worst_violation <= tolerance_used. The tolerance passed to the
/// predicates is relative: it is scaled by the largest prefix magnitude seen.
struct MajorizationVerdict {
  bool holds = false;
  std::vector<double> prefix_sums_lhs;  // from the majorized (smaller) tuple
  std::vector<double> prefix_sums_rhs;  // from the majorizing (larger) tuple
  double worst_violation = 0.0;         // max over prefixes of lhs - rhs, clamped at 0
  double tolerance_used = 0.0;
};

/// Does b weakly majorize a? Checks sum_{i<=k} a_i <= sum_{i<=k} b_i for all k.
/// Tuples of different length are padded with zeros, which is only defined for
/// nonnegative tuples; a length mismatch with negative entries is an error.
MajorizationVerdict weakly_majorizes(const DescTuple& b, const DescTuple& a, double rel_tol = 1e-10);

/// Weak majorization plus equality of the total sums.
MajorizationVerdict strongly_majorizes(const DescTuple& b, const DescTuple& a, double rel_tol = 1e-10);

/// Multiplicative version: prefix products of a bounded by prefix products of
/// b. Requires nonnegative tuples. Once a prefix product of a reaches zero the
/// remaining prefixes hold trivially.
MajorizationVerdict log_weakly_majorizes(const DescTuple& b, const DescTuple& a, double rel_tol = 1e-10);

/// Joint verdict for the singular-value product relations of a triple product:
/// the c-th powers of the leading t singular values of B1*B2*B3 are weakly
/// majorized by the componentwise product of the factors' tuples, and (when
/// S_t(B2) stays positive) the quotient form with B2 divided out holds against
/// S_t^c(B1) S_t^c(B3).
struct ProductMajorizationResult {
  MajorizationVerdict product_form;
  MajorizationVerdict division_form;
  bool division_checked = false;
  bool holds() const { return product_form.holds && (!division_checked || division_form.holds); }
};

ProductMajorizationResult product_majorization_check(const Matrix& b1, const Matrix& b2,
                                                     const Matrix& b3, std::size_t t, unsigned c,
                                                     double rel_tol = 1e-10,
                                                     bool require_division = false);

}  // namespace specbound
