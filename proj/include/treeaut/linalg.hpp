#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "treeaut/error.hpp"

namespace treeaut {

using Rational = boost::multiprecision::cpp_rational;

/// "p/q", or "p" for integers.
inline std::string to_string(const Rational& q) {
  if (denominator(q) == 1) return numerator(q).str();
  return numerator(q).str() + "/" + denominator(q).str();
}

inline Rational parse_rational(const std::string& text) {
  try {
    const auto slash = text.find('/');
    if (slash == std::string::npos) return Rational(boost::multiprecision::cpp_int(text));
    const boost::multiprecision::cpp_int den(text.substr(slash + 1));
    if (den == 0) throw Error(ErrorKind::MalformedJson, "zero denominator in \"" + text + "\"");
    return Rational(boost::multiprecision::cpp_int(text.substr(0, slash)), den);
  } catch (const std::runtime_error& e) {
    if (dynamic_cast<const Error*>(&e)) throw;
    throw Error(ErrorKind::MalformedJson, "bad rational \"" + text + "\"");
  }
}

using RationalMatrix = std::vector<std::vector<Rational>>;

/// Row echelon form in place; returns the pivot columns.
inline std::vector<std::size_t> row_reduce(RationalMatrix& m) {
  std::vector<std::size_t> pivots;
  if (m.empty()) return pivots;
  const std::size_t cols = m.front().size();
  std::size_t row = 0;
  for (std::size_t c = 0; c < cols && row < m.size(); ++c) {
    std::size_t p = row;
    while (p < m.size() && m[p][c] == 0) ++p;
    if (p == m.size()) continue;
    std::swap(m[p], m[row]);
    for (std::size_t r = row + 1; r < m.size(); ++r) {
      if (m[r][c] == 0) continue;
      const Rational factor = m[r][c] / m[row][c];
      for (std::size_t k = c; k < cols; ++k) m[r][k] -= factor * m[row][k];
    }
    pivots.push_back(c);
    ++row;
  }
  return pivots;
}

inline std::size_t rank(RationalMatrix m) { return row_reduce(m).size(); }

template <class Int>
std::size_t integer_rank(const std::vector<std::vector<Int>>& m) {
  RationalMatrix q;
  for (const auto& row : m) {
    std::vector<Rational> r;
    for (const auto& x : row) r.emplace_back(x);
    q.push_back(std::move(r));
  }
  return rank(std::move(q));
}

}  // namespace treeaut
