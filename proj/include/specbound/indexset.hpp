#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "specbound/errors.hpp"

namespace specbound {

/// Strictly increasing 1-based indices, as used to pick eigenvector/column
/// subsets. t() is the number of indices.
struct IndexSet {
  std::vector<std::size_t> indices;  // 1-based, strictly increasing

  static IndexSet of(std::vector<std::size_t> idx);
  /// {1, ..., p}
  static IndexSet first(std::size_t p);
  /// Parses a comma list like "1,3,4".
  static IndexSet parse(const std::string& text);

  std::size_t t() const { return indices.size(); }
  std::size_t max_index() const { return indices.empty() ? 0 : indices.back(); }
  /// 0-based copies for matrix subscripting.
  std::vector<std::size_t> zero_based() const;
};

}  // namespace specbound
