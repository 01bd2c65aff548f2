#pragma once

#include <algorithm>
#include <cstddef>
#include <deque>
#include <optional>
#include <set>
#include <unordered_set>
#include <utility>
#include <vector>

#include "treeaut/error.hpp"
#include "treeaut/perm.hpp"

namespace treeaut {

inline constexpr std::size_t kDefaultGroupCap = 3'628'800;  // 10!

/// A finite permutation group with every element materialized.
///
/// Elements are kept sorted in canonical (lexicographic image) order, so
/// the identity is always `elements().front()`.
class PermGroup {
 public:
  PermGroup() = default;

  /// Closure of `generators` under composition.
  static PermGroup generate(std::vector<Permutation> generators, int d, std::size_t cap = kDefaultGroupCap) {
    for (const auto& g : generators)
      if (g.degree() != d)
        throw Error(ErrorKind::DegreeMismatch,
                    "generator of degree " + std::to_string(g.degree()) + " in a group of degree " + std::to_string(d));
    PermGroup grp;
    grp.d_ = d;
    grp.generators_ = std::move(generators);

    std::unordered_set<Permutation> seen;
    std::deque<Permutation> queue;
    const Permutation id = Permutation::identity(d);
    seen.insert(id);
    queue.push_back(id);
    while (!queue.empty()) {
      Permutation x = queue.front();
      queue.pop_front();
      for (const auto& g : grp.generators_) {
        Permutation y = x * g;
        if (seen.insert(y).second) {
          if (seen.size() > cap)
            throw Error(ErrorKind::SizeLimitExceeded, "group order exceeds cap " + std::to_string(cap));
          queue.push_back(y);
        }
      }
    }
    grp.elements_.assign(seen.begin(), seen.end());
    std::sort(grp.elements_.begin(), grp.elements_.end());
    grp.build_tables();
    return grp;
  }

  static PermGroup trivial(int d) { return generate({}, d); }

  static PermGroup symmetric(int d) {
    if (d < 2) return trivial(d);
    std::vector<int> cyc(d);
    for (int i = 0; i < d; ++i) cyc[i] = (i + 1) % d + 1;
    std::vector<int> tr(d);
    for (int i = 0; i < d; ++i) tr[i] = i + 1;
    std::swap(tr[0], tr[1]);
    return generate({Permutation::from_images(std::span<const int>(cyc)), Permutation::from_images(std::span<const int>(tr))}, d);
  }

  int degree() const { return d_; }
  std::size_t order() const { return elements_.size(); }
  const std::vector<Permutation>& elements() const { return elements_; }
  const std::vector<Permutation>& generators() const { return generators_; }

  bool contains(const Permutation& p) const {
    return p.degree() == d_ && std::binary_search(elements_.begin(), elements_.end(), p);
  }

  bool is_subgroup_of(const PermGroup& other) const {
    if (d_ != other.d_) return false;
    return std::all_of(generators_.begin(), generators_.end(), [&](const auto& g) { return other.contains(g); });
  }

  /// Least element mapping `a` to `b`, if any (precomputed).
  const std::optional<Permutation>& least_mapping(Color a, Color b) const {
    return least_map_[static_cast<std::size_t>((a - 1) * d_ + (b - 1))];
  }

  friend bool operator==(const PermGroup& x, const PermGroup& y) {
    return x.d_ == y.d_ && x.elements_ == y.elements_;
  }

 private:
  void build_tables() {
    least_map_.assign(static_cast<std::size_t>(d_ * d_), std::nullopt);
    for (const auto& g : elements_)
      for (Color a = 1; a <= d_; ++a) {
        auto& slot = least_map_[static_cast<std::size_t>((a - 1) * d_ + (g(a) - 1))];
        if (!slot) slot = g;
      }
  }

  int d_ = 0;
  std::vector<Permutation> generators_;
  std::vector<Permutation> elements_;
  std::vector<std::optional<Permutation>> least_map_;
};

/// Subgroup generated by `generators`; alias kept for symmetry with the CLI.
inline PermGroup enumerate(std::vector<Permutation> generators, int d, std::size_t cap = kDefaultGroupCap) {
  return PermGroup::generate(std::move(generators), d, cap);
}

/// Orbits of G on {1..d}, each sorted, blocks ordered by least element.
inline std::vector<std::vector<Color>> orbits(const PermGroup& g) {
  const int d = g.degree();
  std::vector<int> block(d + 1, -1);
  std::vector<std::vector<Color>> out;
  for (Color x = 1; x <= d; ++x) {
    if (block[x] >= 0) continue;
    const int id = static_cast<int>(out.size());
    std::vector<Color> orb{x};
    block[x] = id;
    for (std::size_t i = 0; i < orb.size(); ++i)
      for (const auto& gen : g.generators()) {
        Color y = gen(orb[i]);
        if (block[y] < 0) {
          block[y] = id;
          orb.push_back(y);
        }
      }
    std::sort(orb.begin(), orb.end());
    out.push_back(std::move(orb));
  }
  return out;
}

inline bool is_transitive(const PermGroup& g) { return orbits(g).size() == 1; }

/// Transitivity on ordered pairs of distinct points, by direct orbit computation.
inline bool is_2transitive_direct(const PermGroup& g) {
  const int d = g.degree();
  if (d < 2) return false;
  std::set<std::pair<Color, Color>> reached;
  for (const auto& p : g.elements()) reached.emplace(p(1), p(2));
  return reached.size() == static_cast<std::size_t>(d * (d - 1));
}

inline PermGroup stabilizer(const PermGroup& g, Color x) {
  if (x < 1 || x > g.degree()) throw Error(ErrorKind::OutOfRange, "point " + std::to_string(x));
  std::vector<Permutation> fix;
  for (const auto& p : g.elements())
    if (p(x) == x) fix.push_back(p);
  // The full stabilizer is a valid (redundant) generating set.
  return PermGroup::generate(std::move(fix), g.degree());
}

/// Orbits of `h` restricted to the points in `domain`.
inline std::vector<std::vector<Color>> orbits_on(const PermGroup& h, const std::vector<Color>& domain) {
  std::vector<std::vector<Color>> out;
  for (const auto& orb : orbits(h)) {
    std::vector<Color> part;
    for (Color c : orb)
      if (std::find(domain.begin(), domain.end(), c) != domain.end()) part.push_back(c);
    if (!part.empty()) out.push_back(std::move(part));
  }
  return out;
}

/// 2-transitivity through point stabilizers: G is transitive and the
/// stabilizer of every point is transitive on the remaining points.
inline bool is_2transitive_stab(const PermGroup& g) {
  const int d = g.degree();
  if (d < 2 || !is_transitive(g)) return false;
  for (Color x = 1; x <= d; ++x) {
    std::vector<Color> rest;
    for (Color y = 1; y <= d; ++y)
      if (y != x) rest.push_back(y);
    if (orbits_on(stabilizer(g, x), rest).size() != 1) return false;
  }
  return true;
}

/// Setwise invariance of every F-orbit under every element of Fp.
inline bool preserves_orbits(const PermGroup& f, const PermGroup& fp) {
  if (f.degree() != fp.degree()) throw Error(ErrorKind::DegreeMismatch, "preserves_orbits");
  const auto orb = orbits(f);
  std::vector<int> block(f.degree() + 1);
  for (std::size_t i = 0; i < orb.size(); ++i)
    for (Color c : orb[i]) block[c] = static_cast<int>(i);
  for (const auto& g : fp.generators())
    for (Color c = 1; c <= f.degree(); ++c)
      if (block[g(c)] != block[c]) return false;
  return true;
}

/// Weaker reading: Fp permutes the F-orbits as blocks.
inline bool permutes_orbits(const PermGroup& f, const PermGroup& fp) {
  if (f.degree() != fp.degree()) throw Error(ErrorKind::DegreeMismatch, "permutes_orbits");
  const auto orb = orbits(f);
  std::vector<int> block(f.degree() + 1);
  for (std::size_t i = 0; i < orb.size(); ++i)
    for (Color c : orb[i]) block[c] = static_cast<int>(i);
  for (const auto& g : fp.generators())
    for (const auto& o : orb)
      for (Color c : o)
        if (block[g(c)] != block[g(o.front())]) return false;
  return true;
}

using Constraint = std::pair<Color, Color>;

/// Least element of G (canonical order) with g(a) = b for every constraint.
inline std::optional<Permutation> find_mapping(const PermGroup& g, const std::vector<Constraint>& constraints) {
  for (std::size_t i = 0; i < constraints.size(); ++i)
    for (std::size_t j = i + 1; j < constraints.size(); ++j) {
      if (constraints[i].first == constraints[j].first && constraints[i].second != constraints[j].second)
        throw Error(ErrorKind::ConflictingConstraints, "source " + std::to_string(constraints[i].first));
      if (constraints[i].second == constraints[j].second && constraints[i].first != constraints[j].first)
        return std::nullopt;
    }
  for (const auto& p : g.elements()) {
    bool ok = true;
    for (auto [a, b] : constraints)
      if (a < 1 || a > g.degree() || p(a) != b) {
        ok = false;
        break;
      }
    if (ok) return p;
  }
  return std::nullopt;
}

/// Longest cycle of `p`; ties go to the cycle with the least starting point.
inline std::vector<Color> longest_cycle(const Permutation& p) {
  std::vector<Color> best;
  for (auto& c : p.cycles())
    if (c.size() > best.size()) best = std::move(c);
  return best;
}

struct CycleChoice {
  Permutation element;
  std::vector<Color> cycle;  // (n_1, ..., n_k), k >= 2
};

/// First non-identity element of F in canonical order, with its longest cycle.
inline CycleChoice pick_long_cycle(const PermGroup& f) {
  for (const auto& p : f.elements())
    if (!p.is_identity()) return {p, longest_cycle(p)};
  throw Error(ErrorKind::TrivialGroup, "pick_long_cycle needs a nontrivial group");
}

/// All subgroups of Sym(d), obtained as joins of cyclic subgroups.
inline std::vector<PermGroup> all_subgroups(int d) {
  const PermGroup sym = PermGroup::symmetric(d);
  std::set<std::vector<Permutation>> seen;
  std::vector<PermGroup> out;
  auto add = [&](PermGroup g) {
    if (seen.insert(g.elements()).second) {
      out.push_back(std::move(g));
      return true;
    }
    return false;
  };
  for (const auto& p : sym.elements()) add(PermGroup::generate({p}, d));
  const std::size_t cyclic_count = out.size();
  for (std::size_t i = 0; i < out.size(); ++i)
    for (std::size_t j = 0; j < cyclic_count; ++j) {
      if (out[j].is_subgroup_of(out[i])) continue;
      std::vector<Permutation> gens = out[i].generators();
      gens.insert(gens.end(), out[j].generators().begin(), out[j].generators().end());
      add(PermGroup::generate(std::move(gens), d));
    }
  std::sort(out.begin(), out.end(), [](const PermGroup& a, const PermGroup& b) {
    if (a.order() != b.order()) return a.order() < b.order();
    return a.elements() < b.elements();
  });
  return out;
}

}  // namespace treeaut
