#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <compare>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "treeaut/error.hpp"

namespace treeaut {

/// Edge colors are the points of Omega = {1, ..., d}.
using Color = int;

inline constexpr int kMaxDegree = 16;

/// A permutation of {1, ..., d}, stored by its image sequence.
///
/// Composition follows function notation: `(p * q)(x) == p(q(x))`.
/// Ordering is lexicographic on the image sequence, which is the canonical
/// element order used by every search in the library.
class Permutation {
 public:
  Permutation() = default;

  static Permutation identity(int d) {
    check_degree(d);
    Permutation p;
    p.n_ = static_cast<std::uint8_t>(d);
    for (int i = 0; i < d; ++i) p.img_[i] = static_cast<std::uint8_t>(i + 1);
    return p;
  }

  static Permutation from_images(std::span<const int> images) {
    const int d = static_cast<int>(images.size());
    check_degree(d);
    Permutation p;
    p.n_ = static_cast<std::uint8_t>(d);
    std::array<bool, kMaxDegree + 1> seen{};
    for (int i = 0; i < d; ++i) {
      const int x = images[i];
      if (x < 1 || x > d) throw Error(ErrorKind::OutOfRange, "image " + std::to_string(x));
      if (seen[x]) throw Error(ErrorKind::RepeatedEntry, "image " + std::to_string(x));
      seen[x] = true;
      p.img_[i] = static_cast<std::uint8_t>(x);
    }
    return p;
  }

  static Permutation from_images(std::initializer_list<int> images) {
    std::vector<int> v(images);
    return from_images(std::span<const int>(v));
  }

  int degree() const { return n_; }

  Color operator()(Color c) const { return img_[c - 1]; }

  Permutation operator*(const Permutation& rhs) const {
    if (n_ != rhs.n_) throw Error(ErrorKind::DegreeMismatch, "composing permutations of different degree");
    Permutation p;
    p.n_ = n_;
    for (int i = 0; i < n_; ++i) p.img_[i] = img_[rhs.img_[i] - 1];
    return p;
  }

  Permutation inverse() const {
    Permutation p;
    p.n_ = n_;
    for (int i = 0; i < n_; ++i) p.img_[img_[i] - 1] = static_cast<std::uint8_t>(i + 1);
    return p;
  }

  bool is_identity() const {
    for (int i = 0; i < n_; ++i)
      if (img_[i] != i + 1) return false;
    return true;
  }

  std::vector<int> images() const { return std::vector<int>(img_.begin(), img_.begin() + n_); }

  /// Nontrivial cycles, each listed from its least point, ordered by that point.
  std::vector<std::vector<Color>> cycles() const {
    std::vector<std::vector<Color>> out;
    std::array<bool, kMaxDegree + 1> seen{};
    for (Color start = 1; start <= n_; ++start) {
      if (seen[start] || (*this)(start) == start) continue;
      std::vector<Color> cyc;
      for (Color x = start; !seen[x]; x = (*this)(x)) {
        seen[x] = true;
        cyc.push_back(x);
      }
      out.push_back(std::move(cyc));
    }
    return out;
  }

  /// Disjoint-cycle notation; the identity renders as "()".
  std::string to_cycle_string() const {
    auto cyc = cycles();
    if (cyc.empty()) return "()";
    std::string s;
    for (const auto& c : cyc) {
      s += '(';
      for (std::size_t i = 0; i < c.size(); ++i) {
        if (i) s += ' ';
        s += std::to_string(c[i]);
      }
      s += ')';
    }
    return s;
  }

  std::size_t hash() const {
    std::size_t h = n_;
    for (int i = 0; i < n_; ++i) h = h * 31 + img_[i];
    return h;
  }

  friend bool operator==(const Permutation&, const Permutation&) = default;
  friend std::strong_ordering operator<=>(const Permutation&, const Permutation&) = default;

 private:
  static void check_degree(int d) {
    if (d < 0 || d > kMaxDegree)
      throw Error(ErrorKind::OutOfRange, "degree " + std::to_string(d) + " outside 0.." + std::to_string(kMaxDegree));
  }

  std::uint8_t n_ = 0;
  std::array<std::uint8_t, kMaxDegree> img_{};
};

struct PermutationHash {
  std::size_t operator()(const Permutation& p) const { return p.hash(); }
};

inline Permutation power(const Permutation& p, long long e) {
  Permutation base = e < 0 ? p.inverse() : p;
  unsigned long long n = e < 0 ? static_cast<unsigned long long>(-e) : static_cast<unsigned long long>(e);
  Permutation acc = Permutation::identity(p.degree());
  while (n) {
    if (n & 1) acc = acc * base;
    base = base * base;
    n >>= 1;
  }
  return acc;
}

/// Order of `p` as a group element.
inline int order(const Permutation& p) {
  int k = 1;
  for (Permutation q = p; !q.is_identity(); q = q * p) ++k;
  return k;
}

/// Parses disjoint-cycle notation such as "(1 3)(2 4)". Entries may be
/// separated by spaces or commas; "" and "()" denote the identity.
inline Permutation parse_cycles(std::string_view text, int d) {
  std::vector<int> img(d);
  for (int i = 0; i < d; ++i) img[i] = i + 1;
  std::vector<bool> used(d + 1, false);

  std::size_t pos = 0;
  auto skip_ws = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  auto fail = [&](const std::string& why) {
    return Error(ErrorKind::MalformedCycle, why + " in \"" + std::string(text) + "\"");
  };

  skip_ws();
  while (pos < text.size()) {
    if (text[pos] != '(') throw fail("expected '('");
    ++pos;
    std::vector<int> cyc;
    for (;;) {
      skip_ws();
      if (pos < text.size() && text[pos] == ',') {
        if (cyc.empty()) throw fail("leading ','");
        ++pos;
        skip_ws();
        if (pos >= text.size() || !std::isdigit(static_cast<unsigned char>(text[pos]))) throw fail("dangling ','");
      }
      if (pos >= text.size()) throw fail("unterminated cycle");
      if (text[pos] == ')') {
        ++pos;
        break;
      }
      if (!std::isdigit(static_cast<unsigned char>(text[pos]))) throw fail("unexpected character");
      long long value = 0;
      while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
        value = value * 10 + (text[pos] - '0');
        if (value > 1'000'000) throw Error(ErrorKind::OutOfRange, "entry too large");
        ++pos;
      }
      if (value < 1 || value > d)
        throw Error(ErrorKind::OutOfRange, "entry " + std::to_string(value) + " not in 1.." + std::to_string(d));
      if (used[value]) throw Error(ErrorKind::RepeatedEntry, "entry " + std::to_string(value));
      used[value] = true;
      cyc.push_back(static_cast<int>(value));
    }
    for (std::size_t i = 0; i < cyc.size(); ++i) img[cyc[i] - 1] = cyc[(i + 1) % cyc.size()];
    skip_ws();
  }
  return Permutation::from_images(std::span<const int>(img));
}

}  // namespace treeaut

template <>
struct std::hash<treeaut::Permutation> {
  std::size_t operator()(const treeaut::Permutation& p) const { return p.hash(); }
};
