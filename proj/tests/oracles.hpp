#pragma once

// Slow reference implementations used only by tests.

#include <vector>

#include "treeaut/permgroup.hpp"
#include "treeaut/tree.hpp"

namespace oracle {

using treeaut::Color;
using treeaut::PermGroup;
using treeaut::Permutation;

/// Depth-first search over choices (rho_0, ..., rho_n) in F'^(n+1): rho_i is
/// the local permutation at the i-th vertex, and both ends of every segment
/// edge must send color a_i to b_i.
inline bool translate_exists(const PermGroup& fp, const std::vector<Color>& a, const std::vector<Color>& b) {
  if (a.size() != b.size()) return false;
  const std::size_t n = a.size();
  std::vector<const Permutation*> chosen(n + 1, nullptr);
  auto dfs = [&](auto&& self, std::size_t i) -> bool {
    if (i == n + 1) return true;
    for (const auto& p : fp.elements()) {
      if (i >= 1 && p(a[i - 1]) != b[i - 1]) continue;
      if (i < n && p(a[i]) != b[i]) continue;
      chosen[i] = &p;
      if (self(self, i + 1)) return true;
    }
    return false;
  };
  return dfs(dfs, 0);
}

/// Occurrences of translates of `pattern` among the windows of `path`.
inline long long count_windows(const PermGroup& fp, const std::vector<Color>& pattern, const std::vector<Color>& path) {
  long long count = 0;
  for (std::size_t i = 0; i + pattern.size() <= path.size(); ++i) {
    std::vector<Color> w(path.begin() + static_cast<std::ptrdiff_t>(i),
                         path.begin() + static_cast<std::ptrdiff_t>(i + pattern.size()));
    if (translate_exists(fp, pattern, w)) ++count;
  }
  return count;
}

}  // namespace oracle
