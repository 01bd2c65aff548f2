#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "treeaut/autom.hpp"
#include "treeaut/error.hpp"
#include "treeaut/linalg.hpp"
#include "treeaut/localaction.hpp"
#include "treeaut/tree.hpp"

namespace treeaut {

using Tuple = std::vector<Vertex>;

/// Sorted tuple and the sign of the sorting permutation; nothing if an
/// entry repeats.
inline std::optional<std::pair<Tuple, int>> normalize(Tuple t) {
  int sign = 1;
  // Insertion sort, counting transpositions.
  for (std::size_t i = 1; i < t.size(); ++i)
    for (std::size_t j = i; j > 0 && t[j] < t[j - 1]; --j) {
      std::swap(t[j], t[j - 1]);
      sign = -sign;
    }
  for (std::size_t i = 1; i < t.size(); ++i)
    if (t[i] == t[i - 1]) return std::nullopt;
  return std::make_pair(std::move(t), sign);
}

/// Finitely supported alternating chain of a fixed degree n on (n+1)-tuples.
/// Degree -1 holds the augmentation value under the empty tuple.
struct AlternatingChain {
  int degree = 0;
  std::map<Tuple, Rational> terms;

  void add(Tuple t, const Rational& coeff) {
    if (static_cast<int>(t.size()) != degree + 1) throw Error(ErrorKind::LengthMismatch, "tuple size does not match degree");
    auto norm = normalize(std::move(t));
    if (!norm || coeff == 0) return;
    auto& slot = terms[norm->first];
    slot += norm->second > 0 ? coeff : Rational(-coeff);
    if (slot == 0) terms.erase(norm->first);
  }

  bool is_zero() const { return terms.empty(); }

  friend bool operator==(const AlternatingChain&, const AlternatingChain&) = default;
};

inline AlternatingChain boundary(const AlternatingChain& c) {
  if (c.degree < 0) throw Error(ErrorKind::OutOfRange, "boundary of a degree -1 chain");
  AlternatingChain out;
  out.degree = c.degree - 1;
  for (const auto& [t, coeff] : c.terms)
    for (std::size_t j = 0; j < t.size(); ++j) {
      Tuple face;
      for (std::size_t k = 0; k < t.size(); ++k)
        if (k != j) face.push_back(t[k]);
      out.add(std::move(face), j % 2 == 0 ? coeff : Rational(-coeff));
    }
  return out;
}

struct ComplexWindow {
  std::vector<Vertex> points;
  int max_degree = 3;
};

inline constexpr std::size_t kDefaultWindowCap = 6;
inline constexpr int kMaxChainDegree = 4;

inline void check_window(const ComplexWindow& w, std::size_t cap) {
  if (w.points.size() > cap) throw Error(ErrorKind::SizeLimitExceeded, "window has more than " + std::to_string(cap) + " points");
  if (w.max_degree > kMaxChainDegree || w.max_degree < 0)
    throw Error(ErrorKind::SizeLimitExceeded, "degree outside 0.." + std::to_string(kMaxChainDegree));
  std::set<Vertex> seen(w.points.begin(), w.points.end());
  if (seen.size() != w.points.size()) throw Error(ErrorKind::RepeatedEntry, "window points repeat");
}

/// Canonical (size)-subsets of the points, lexicographic in vertex order.
inline std::vector<Tuple> sorted_subsets(std::vector<Vertex> points, std::size_t size) {
  std::sort(points.begin(), points.end());
  std::vector<Tuple> out;
  if (size > points.size()) return out;
  std::vector<std::size_t> idx(size);
  for (std::size_t i = 0; i < size; ++i) idx[i] = i;
  for (;;) {
    Tuple t;
    for (std::size_t i : idx) t.push_back(points[i]);
    out.push_back(std::move(t));
    std::size_t i = size;
    while (i > 0 && idx[i - 1] == points.size() - size + i - 1) --i;
    if (i == 0) break;
    ++idx[i - 1];
    for (std::size_t j = i; j < size; ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

/// Matrix of the boundary from degree n to degree n-1 in the given bases.
inline RationalMatrix boundary_matrix(const std::vector<Tuple>& from, const std::vector<Tuple>& to) {
  std::map<Tuple, std::size_t> row_of;
  for (std::size_t i = 0; i < to.size(); ++i) row_of[to[i]] = i;
  RationalMatrix m(to.size(), std::vector<Rational>(from.size()));
  for (std::size_t j = 0; j < from.size(); ++j) {
    AlternatingChain c;
    c.degree = static_cast<int>(from[j].size()) - 1;
    c.add(from[j], 1);
    for (const auto& [face, coeff] : boundary(c).terms) m[row_of.at(face)][j] = coeff;
  }
  return m;
}

struct ExactnessReport {
  bool exact = true;
  std::vector<std::size_t> dims;   // dims[n] = dim C_n, n = 0..max_degree+1
  std::vector<std::size_t> ranks;  // ranks[n] = rank of the boundary out of C_n (n = 0 is the augmentation)
};

/// Exactness of the augmented full-simplex complex on the window points,
/// at the augmentation and at every degree 0..max_degree.
inline ExactnessReport exactness_report(const ComplexWindow& w, std::size_t cap = kDefaultWindowCap) {
  check_window(w, cap);
  ExactnessReport rep;
  std::vector<std::vector<Tuple>> bases;
  bases.push_back({Tuple{}});
  for (int n = 0; n <= w.max_degree + 1; ++n) bases.push_back(sorted_subsets(w.points, static_cast<std::size_t>(n + 1)));
  for (int n = 0; n <= w.max_degree + 1; ++n) {
    const auto& from = bases[static_cast<std::size_t>(n + 1)];
    rep.dims.push_back(from.size());
    rep.ranks.push_back(from.empty() ? 0 : rank(boundary_matrix(from, bases[static_cast<std::size_t>(n)])));
  }
  if (!w.points.empty() && rep.ranks[0] != 1) rep.exact = false;
  for (int n = 0; n <= w.max_degree; ++n) {
    const std::size_t kernel = rep.dims[n] - rep.ranks[n];
    if (kernel != rep.ranks[n + 1]) rep.exact = false;
  }
  return rep;
}

inline bool exactness_check(const ComplexWindow& w, std::size_t cap = kDefaultWindowCap) {
  return exactness_report(w, cap).exact;
}

inline std::vector<Tuple> aligned_basis(const ComplexWindow& w, int n, std::size_t cap = kDefaultWindowCap) {
  check_window(w, cap);
  if (n < 0) return {};
  std::vector<Tuple> out;
  for (auto& t : sorted_subsets(w.points, static_cast<std::size_t>(n + 1)))
    if (is_aligned(t)) out.push_back(std::move(t));
  return out;
}

/// The boundary of every aligned n-tuple is a combination of aligned tuples.
inline bool aligned_closure_check(const ComplexWindow& w, int n, std::size_t cap = kDefaultWindowCap) {
  if (n < 1) return true;
  for (const auto& t : aligned_basis(w, n, cap)) {
    AlternatingChain c;
    c.degree = n;
    c.add(t, 1);
    for (const auto& [face, coeff] : boundary(c).terms)
      if (!is_aligned(face)) return false;
  }
  return true;
}

/// The geodesic through an aligned tuple, from its least extreme point.
inline Segment spanning_segment(const Tuple& t) {
  if (t.empty()) throw Error(ErrorKind::OutOfRange, "empty tuple");
  std::size_t bi = 0, bj = 0;
  int best = -1;
  for (std::size_t i = 0; i < t.size(); ++i)
    for (std::size_t j = 0; j < t.size(); ++j)
      if (const int dist = distance(t[i], t[j]); dist > best || (dist == best && t[i] < t[bi])) {
        best = dist;
        bi = i;
        bj = j;
      }
  return geodesic(t[bi], t[bj]);
}

struct RestrictionFailure {
  Tuple tuple;
  std::string reason;
};

struct RestrictionReport {
  std::size_t tuples = 0;
  std::size_t transported = 0;
  std::size_t consistent = 0;
  std::vector<RestrictionFailure> failures;
};

/// Line indices of the images of `t` under g; nothing if some image is off the line.
inline std::optional<std::vector<long long>> indices_on_line(const LineSpec& line, const Automorphism& g, const Tuple& t) {
  std::vector<long long> out;
  for (const auto& x : t) {
    auto i = line_index(line, g.apply(x));
    if (!i) return std::nullopt;
    out.push_back(*i);
  }
  return out;
}

/// For every aligned tuple of n+1 vertices in the ball of `window_radius`:
/// transport its spanning segment into the line with even displacement,
/// once in each direction, and find an element of <t, r> carrying one
/// image tuple onto the other. Checked by applying that element.
inline RestrictionReport restriction_correspondence_check(const GroupContext& ctx, const LineSpec& line, const CycleChoice& rot,
                                                          int window_radius, int n) {
  if (n < 0) throw Error(ErrorKind::OutOfRange, "negative degree");
  if (!ctx.fp_two_transitive()) throw Error(ErrorKind::HypothesisUnverified, "F' is not 2-transitive");
  const Automorphism t = translation_t(ctx, line);
  const Automorphism r = rotation_r(ctx, line, rot);
  if (!edge_transitivity_check(line, {t, r}, window_radius + 2))
    throw Error(ErrorKind::HypothesisUnverified, "<t, r> is not transitive on the edges of the line");
  const Automorphism t_inv = inverse(t);

  // t^k r^e as an expression, with its action on line indices.
  auto stabilizer_element = [&](long long k, bool reflect) {
    Automorphism h = reflect ? r : Automorphism::identity(ctx.degree());
    for (long long i = 0; i < std::llabs(k); ++i) h = compose(k > 0 ? t : t_inv, h);
    return h;
  };

  RestrictionReport rep;
  for (const auto& tup : sorted_subsets(ball(Vertex::base(), window_radius, ctx.degree()), static_cast<std::size_t>(n + 1))) {
    if (!is_aligned(tup)) continue;
    ++rep.tuples;
    const Segment span = spanning_segment(tup);
    const TransportResult first = transport_into_line(ctx, span, line, true, false);
    const TransportResult second = transport_into_line(ctx, span.reversed(), line, true, false);
    const auto a = indices_on_line(line, first.element, tup);
    const auto b = indices_on_line(line, second.element, tup);
    if (!a || !b) {
      rep.failures.push_back({tup, "transport leaves the line"});
      continue;
    }
    ++rep.transported;
    std::optional<std::pair<long long, bool>> found;
    for (bool reflect : {false, true}) {
      const long long shift = reflect ? (*b)[0] + (*a)[0] : (*b)[0] - (*a)[0];
      if (shift % 2 != 0) continue;
      bool ok = true;
      for (std::size_t i = 0; i < a->size() && ok; ++i)
        ok = (reflect ? shift - (*a)[i] : (*a)[i] + shift) == (*b)[i];
      if (ok) {
        found = std::make_pair(shift / 2, reflect);
        break;
      }
    }
    if (!found) {
      rep.failures.push_back({tup, "no element of <t, r> matches the two placements"});
      continue;
    }
    const Automorphism h = stabilizer_element(found->first, found->second);
    bool agree = true;
    for (const auto& x : tup)
      if (h.apply(first.element.apply(x)) != second.element.apply(x)) agree = false;
    if (agree)
      ++rep.consistent;
    else
      rep.failures.push_back({tup, "stabilizer element disagrees on the tuple"});
  }
  return rep;
}

}  // namespace treeaut
