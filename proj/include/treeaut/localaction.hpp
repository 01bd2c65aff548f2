#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "treeaut/autom.hpp"
#include "treeaut/error.hpp"
#include "treeaut/perm.hpp"
#include "treeaut/permgroup.hpp"
#include "treeaut/tree.hpp"

namespace treeaut {

enum class OrbitConvention {
  Setwise,   // every F-orbit is invariant under F'
  Permuted,  // F' permutes the F-orbits among themselves
};

/// A pair F < F' of permutation groups of degree d >= 3 defining G(F, F').
///
/// Precomputes, for F', the orbit of every point and the solvability of
/// every two-point constraint (a, b) -> (a', b').
class GroupContext {
 public:
  static GroupContext make(PermGroup f, PermGroup fp, OrbitConvention conv = OrbitConvention::Setwise) {
    if (f.degree() != fp.degree()) throw Error(ErrorKind::DegreeMismatch, "F and F' differ in degree");
    if (f.degree() < 3) throw Error(ErrorKind::InvalidContext, "degree must be at least 3");
    if (!f.is_subgroup_of(fp)) throw Error(ErrorKind::InvalidContext, "F is not contained in F'");
    if (f.order() == fp.order()) throw Error(ErrorKind::InvalidContext, "F equals F'");
    const bool orbits_ok = conv == OrbitConvention::Setwise ? preserves_orbits(f, fp) : permutes_orbits(f, fp);
    if (!orbits_ok) throw Error(ErrorKind::InvalidContext, "F' does not preserve the orbits of F");
    return GroupContext(std::move(f), std::move(fp));
  }

  int degree() const { return d_; }
  const PermGroup& F() const { return *f_; }
  const PermGroup& Fp() const { return *fp_; }
  const std::shared_ptr<const PermGroup>& F_ptr() const { return f_; }
  const std::shared_ptr<const PermGroup>& Fp_ptr() const { return fp_; }

  bool fp_two_transitive() const { return two_transitive_; }

  bool same_fp_orbit(Color a, Color b) const { return fp_orbit_[a] == fp_orbit_[b]; }

  /// Some element of F' maps a -> a2 and b -> b2 (a != b).
  bool pair_matchable(Color a, Color b, Color a2, Color b2) const {
    return pair_ok_[index(a, b, a2, b2)] != 0;
  }

  nlohmann::json to_json() const {
    auto gens = [](const PermGroup& g) {
      nlohmann::json arr = nlohmann::json::array();
      for (const auto& p : g.generators()) arr.push_back(p.to_cycle_string());
      return arr;
    };
    return {{"d", d_}, {"F", gens(*f_)}, {"Fprime", gens(*fp_)}};
  }

 private:
  GroupContext(PermGroup f, PermGroup fp)
      : d_(f.degree()),
        f_(std::make_shared<const PermGroup>(std::move(f))),
        fp_(std::make_shared<const PermGroup>(std::move(fp))) {
    two_transitive_ = is_2transitive_direct(*fp_);
    fp_orbit_.assign(d_ + 1, -1);
    const auto orb = orbits(*fp_);
    for (std::size_t i = 0; i < orb.size(); ++i)
      for (Color c : orb[i]) fp_orbit_[c] = static_cast<int>(i);
    pair_ok_.assign(static_cast<std::size_t>(d_ * d_ * d_ * d_), 0);
    for (const auto& p : fp_->elements())
      for (Color a = 1; a <= d_; ++a)
        for (Color b = 1; b <= d_; ++b)
          if (a != b) pair_ok_[index(a, b, p(a), p(b))] = 1;
  }

  std::size_t index(Color a, Color b, Color a2, Color b2) const {
    return static_cast<std::size_t>((((a - 1) * d_ + (b - 1)) * d_ + (a2 - 1)) * d_ + (b2 - 1));
  }

  int d_;
  std::shared_ptr<const PermGroup> f_, fp_;
  bool two_transitive_ = false;
  std::vector<int> fp_orbit_;
  std::vector<char> pair_ok_;
};

// ---------------------------------------------------------------------------
// Segment translates

/// Oriented pointwise F'-matchability of two color sequences: slot i of the
/// segment must carry the colors around its i-th vertex onto those of the
/// other segment. Each slot is independent.
inline bool colors_matchable(const GroupContext& ctx, const std::vector<Color>& a, const std::vector<Color>& b) {
  if (a.size() != b.size()) throw Error(ErrorKind::LengthMismatch, "segments of different length");
  const std::size_t n = a.size();
  if (n == 0) return true;
  if (!ctx.same_fp_orbit(a[0], b[0]) || !ctx.same_fp_orbit(a[n - 1], b[n - 1])) return false;
  for (std::size_t i = 0; i + 1 < n; ++i)
    if (!ctx.pair_matchable(a[i], a[i + 1], b[i], b[i + 1])) return false;
  return true;
}

/// Whether some element of G(F, F') carries s onto s2 (as oriented segments,
/// or in either direction when `oriented` is false).
inline bool is_translate(const GroupContext& ctx, const Segment& s, const Segment& s2, bool oriented = true) {
  if (s.length() != s2.length()) throw Error(ErrorKind::LengthMismatch, "segments of different length");
  if (colors_matchable(ctx, s.colors(), s2.colors())) return true;
  if (oriented) return false;
  std::vector<Color> rev(s2.colors().rbegin(), s2.colors().rend());
  return colors_matchable(ctx, s.colors(), rev);
}

/// Least F' element for every slot, or nothing when some slot is unsolvable.
inline std::optional<std::vector<Permutation>> solve_slots(const GroupContext& ctx, const std::vector<Color>& a,
                                                           const std::vector<Color>& b) {
  if (a.size() != b.size()) throw Error(ErrorKind::LengthMismatch, "segments of different length");
  const std::size_t n = a.size();
  std::vector<Permutation> out;
  for (std::size_t i = 0; i <= n; ++i) {
    std::vector<Constraint> cons;
    if (i >= 1) cons.emplace_back(a[i - 1], b[i - 1]);
    if (i < n) cons.emplace_back(a[i], b[i]);
    auto p = find_mapping(ctx.Fp(), cons);
    if (!p) return std::nullopt;
    out.push_back(*p);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Extension from a segment

namespace detail {

class SegmentRuleNode final : public RuleNode {
 public:
  SegmentRuleNode(const GroupContext& ctx, Segment source, Segment target, std::vector<Permutation> sigma)
      : RuleNode(ctx.degree(), ctx.F_ptr()),
        ctx_json_(ctx.to_json()),
        source_(std::move(source)),
        target_(std::move(target)),
        source_vertices_(source_.vertices()),
        target_vertices_(target_.vertices()),
        sigma_(std::move(sigma)) {}

  bool structurally_finite(const PermGroup&) const override { return true; }

  nlohmann::json to_json() const override {
    nlohmann::json sig = nlohmann::json::array();
    for (const auto& p : sigma_) sig.push_back(p.to_cycle_string());
    auto seg = [](const Segment& s) { return nlohmann::json{{"start", s.start().to_string()}, {"colors", s.colors()}}; };
    return {{"op", "extend"}, {"source", seg(source_)}, {"target", seg(target_)}, {"sigma", sig}, {"spec", ctx_json_}};
  }

 protected:
  Step locate(const Vertex& v) const override {
    const Segment path = geodesic(source_.start(), v);
    const auto& pc = path.colors();
    const auto& sc = source_.colors();
    std::size_t j = 0;
    while (j < pc.size() && j < sc.size() && pc[j] == sc[j]) ++j;
    if (j == pc.size()) return {Portrait{target_vertices_[j], sigma_[j]}, 0};
    return {std::nullopt, pc.back()};
  }

 private:
  nlohmann::json ctx_json_;
  Segment source_, target_;
  std::vector<Vertex> source_vertices_, target_vertices_;
  std::vector<Permutation> sigma_;
};

}  // namespace detail

/// The automorphism that maps `source` onto `target` vertex by vertex with
/// local permutation sigma[i] at the i-th source vertex, filled off the
/// segment by least elements of F.
inline Automorphism extend_from_segment(const GroupContext& ctx, const Segment& source, const Segment& target,
                                        std::vector<Permutation> sigma) {
  if (source.length() != target.length()) throw Error(ErrorKind::LengthMismatch, "extend_from_segment");
  const std::size_t n = source.length();
  if (sigma.empty() && n == 0) sigma.push_back(Permutation::identity(ctx.degree()));
  if (sigma.size() != n + 1) throw Error(ErrorKind::IncompatibleSigma, "need one local permutation per source vertex");
  const auto& a = source.colors();
  const auto& b = target.colors();
  for (std::size_t i = 0; i <= n; ++i) {
    if (!ctx.Fp().contains(sigma[i])) throw Error(ErrorKind::IncompatibleSigma, "choice " + std::to_string(i) + " not in F'");
    if (i >= 1 && sigma[i](a[i - 1]) != b[i - 1])
      throw Error(ErrorKind::IncompatibleSigma, "choice " + std::to_string(i) + " breaks the incoming edge");
    if (i < n && sigma[i](a[i]) != b[i])
      throw Error(ErrorKind::IncompatibleSigma, "choice " + std::to_string(i) + " breaks the outgoing edge");
    // Every color leaving the segment must stay in its F-orbit for the fill.
    for (Color c = 1; c <= ctx.degree(); ++c)
      if (!ctx.F().least_mapping(c, sigma[i](c)))
        throw Error(ErrorKind::OrbitViolation, "choice " + std::to_string(i) + " leaves an F-orbit");
  }
  return Automorphism(std::make_shared<detail::SegmentRuleNode>(ctx, source, target, std::move(sigma)));
}

struct TransportResult {
  Automorphism element;
  Segment target;
  int checked_radius = 0;
  MembershipCertificate certificate;
};

inline int transport_radius(const Segment& s) {
  return static_cast<int>(s.start().length() + s.length()) + 2;
}

inline TransportResult make_transport(const GroupContext& ctx, const Segment& s, const Segment& s2,
                                      std::vector<Permutation> sigma, bool certify = true) {
  Automorphism g = extend_from_segment(ctx, s, s2, std::move(sigma));
  if (!certify) return {g, s2, 0, MembershipCertificate{0, {}, true, g.structurally_finite(ctx.F())}};
  const int radius = transport_radius(s);
  auto cert = certify_membership(g, ctx.F(), ctx.Fp(), radius);
  return {g, s2, radius, std::move(cert)};
}

/// An element of G(F, F') carrying s onto s2 in order, when one exists.
inline std::optional<TransportResult> segment_transport(const GroupContext& ctx, const Segment& s, const Segment& s2) {
  if (s.length() != s2.length()) throw Error(ErrorKind::LengthMismatch, "segment_transport");
  auto sigma = solve_slots(ctx, s.colors(), s2.colors());
  if (!sigma) return std::nullopt;
  return make_transport(ctx, s, s2, std::move(*sigma));
}

// ---------------------------------------------------------------------------
// The colored line and its stabilizer elements

struct LineBuild {
  LineSpec line;
  CycleChoice rot;
};

/// Line through `anchor` colored from the longest cycle (n_1 ... n_k) of the
/// canonical element of F: for k = 2 both sides alternate n_1, n_2; for k >= 3
/// the backward side alternates n_1, n_2 and the forward side n_2, n_3.
inline LineBuild build_line(const GroupContext& ctx, const Vertex& anchor) {
  CycleChoice rot = pick_long_cycle(ctx.F());
  const auto& c = rot.cycle;
  LineSpec line;
  line.anchor = anchor;
  line.backward.period = {c[0], c[1]};
  if (c.size() == 2)
    line.forward.period = {c[1], c[0]};
  else
    line.forward.period = {c[1], c[2]};
  line.validate(ctx.degree());
  return {line, std::move(rot)};
}

enum class LineAutoKind { Translation2, Reflection };

namespace detail {

/// An automorphism preserving a line: shift by two or reflection about v_0.
/// Local permutations on the line are solved per index from the two line
/// edges at that vertex; everything else is filled from F.
class LineRuleNode final : public RuleNode {
 public:
  LineRuleNode(const GroupContext& ctx, LineSpec line, LineAutoKind kind, std::optional<CycleChoice> rot)
      : RuleNode(ctx.degree(), ctx.F_ptr()),
        ctx_(ctx),
        line_(std::move(line)),
        kind_(kind),
        rot_(std::move(rot)) {
    const long long reach = 2 * static_cast<long long>(std::max(line_.forward.pre.size(), line_.backward.pre.size()) +
                                                       std::max(line_.forward.period.size(), line_.backward.period.size())) +
                            8;
    finite_ = true;
    for (long long i = -reach; i <= reach; ++i) {
      const Permutation s = sigma(i);  // throws ConstraintUnsolvable early
      if (std::llabs(i) > reach / 2 && !ctx_.F().contains(s)) finite_ = false;
    }
  }

  long long map_index(long long i) const { return kind_ == LineAutoKind::Translation2 ? i + 2 : -i; }

  Permutation sigma(long long i) const {
    {
      std::lock_guard<std::mutex> lock(mu_);
      if (auto it = sigma_memo_.find(i); it != sigma_memo_.end()) return it->second;
    }
    Permutation s = solve(i);
    std::lock_guard<std::mutex> lock(mu_);
    sigma_memo_.emplace(i, s);
    return s;
  }

  bool structurally_finite(const PermGroup& f) const override {
    return finite_ && f.elements() == ctx_.F().elements();
  }

  nlohmann::json to_json() const override {
    return {{"op", "line"},
            {"kind", kind_ == LineAutoKind::Translation2 ? "t" : "r"},
            {"line", line_json()},
            {"spec", ctx_.to_json()}};
  }

  nlohmann::json sigma_table(long long radius) const {
    nlohmann::json t = nlohmann::json::array();
    for (long long i = -radius; i <= radius; ++i) t.push_back({i, sigma(i).to_cycle_string()});
    return t;
  }

  const LineSpec& line() const { return line_; }
  LineAutoKind kind() const { return kind_; }

 protected:
  Step locate(const Vertex& v) const override {
    const LineProjection p = line_project(line_, v);
    if (p.away.empty()) return {Portrait{line_vertex(line_, map_index(p.index)), sigma(p.index)}, 0};
    return {std::nullopt, p.away.back()};
  }

 private:
  nlohmann::json line_json() const {
    auto seq = [](const PeriodicSeq& s) { return nlohmann::json{{"pre", s.pre}, {"period", s.period}}; };
    return {{"anchor", line_.anchor.to_string()}, {"forward", seq(line_.forward)}, {"backward", seq(line_.backward)}};
  }

  static bool satisfies(const Permutation& p, const std::vector<Constraint>& cons) {
    return std::all_of(cons.begin(), cons.end(), [&](const Constraint& c) { return p(c.first) == c.second; });
  }

  Permutation solve(long long i) const {
    auto e = [&](long long j) { return line_edge_color(line_, j); };
    std::vector<Constraint> cons;
    if (kind_ == LineAutoKind::Translation2) {
      cons = {{e(i), e(i + 2)}, {e(i + 1), e(i + 3)}};
      const Permutation id = Permutation::identity(ctx_.degree());
      if (satisfies(id, cons)) return id;
    } else {
      cons = {{e(i), e(1 - i)}, {e(i + 1), e(-i)}};
      if (i == 0) {
        // The swap at v_0 lives in F'; an involution keeps r of order two.
        for (const auto& p : ctx_.Fp().elements())
          if (satisfies(p, cons) && (p * p).is_identity()) return p;
      } else if (rot_) {
        std::vector<long long> exps{i, -i};
        for (int j = 0; j < order(rot_->element); ++j) exps.push_back(j);
        for (long long x : exps) {
          const Permutation p = power(rot_->element, x);
          if (satisfies(p, cons)) return p;
        }
      }
    }
    if (i != 0 || kind_ == LineAutoKind::Translation2)
      if (auto p = find_mapping(ctx_.F(), cons)) return *p;
    if (auto p = find_mapping(ctx_.Fp(), cons)) return *p;
    throw Error(ErrorKind::ConstraintUnsolvable, "no element of F' fits line index " + std::to_string(i));
  }

  GroupContext ctx_;
  LineSpec line_;
  LineAutoKind kind_;
  std::optional<CycleChoice> rot_;
  bool finite_ = true;
  mutable std::mutex mu_;
  mutable std::map<long long, Permutation> sigma_memo_;
};

}  // namespace detail

/// The translation t of displacement 2 along the line: t(v_i) = v_{i+2},
/// identity local action on the line wherever the colors allow it.
inline Automorphism translation_t(const GroupContext& ctx, const LineSpec& line) {
  if (!ctx.fp_two_transitive()) throw Error(ErrorKind::NotTwoTransitive, "translation_t");
  line.validate(ctx.degree());
  return Automorphism(std::make_shared<detail::LineRuleNode>(ctx, line, LineAutoKind::Translation2, std::nullopt));
}

/// The rotation r about v_0: r(v_i) = v_{-i}, swapping the two line colors
/// at v_0 inside F' and using F (powers of that element first) elsewhere on the line.
inline Automorphism rotation_r(const GroupContext& ctx, const LineSpec& line, const CycleChoice& rot) {
  if (!ctx.fp_two_transitive()) throw Error(ErrorKind::NotTwoTransitive, "rotation_r");
  line.validate(ctx.degree());
  return Automorphism(std::make_shared<detail::LineRuleNode>(ctx, line, LineAutoKind::Reflection, rot));
}

/// Local permutations of a line automorphism on indices [-radius, radius].
inline nlohmann::json line_sigma_table(const Automorphism& g, long long radius) {
  auto node = std::dynamic_pointer_cast<const detail::LineRuleNode>(g.node());
  if (!node) return nlohmann::json::array();
  return node->sigma_table(radius);
}

/// Whether the group generated by `generators` acts transitively on the
/// geometric edges of the line with indices in [-window, window]. Edge j is
/// {v_{j-1}, v_j}.
inline bool edge_transitivity_check(const LineSpec& line, const std::vector<Automorphism>& generators, int window) {
  const int n = 2 * window + 1;
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& g : generators)
    for (long long j = -window; j <= window; ++j) {
      const auto a = line_index(line, g.apply(line_vertex(line, j - 1)));
      const auto b = line_index(line, g.apply(line_vertex(line, j)));
      if (!a || !b) throw Error(ErrorKind::NotStabilizing, "generator moves edge " + std::to_string(j) + " off the line");
      const long long img = std::max(*a, *b);
      if (img < -window || img > window) continue;
      parent[find(static_cast<int>(j + window))] = find(static_cast<int>(img + window));
    }
  const int root = find(0);
  for (int x = 1; x < n; ++x)
    if (find(x) != root) return false;
  return true;
}

/// Moves the segment onto `line` (forward orientation). With `even_parity`
/// the displacement of the start vertex is even. Positions are scanned from
/// index 0 outward; a segment already on the line is left in place.
/// Without `certify` the ball check is skipped and checked_radius is 0.
inline TransportResult transport_into_line(const GroupContext& ctx, const Segment& s, const LineSpec& line, bool even_parity,
                                           bool certify = true) {
  if (!ctx.fp_two_transitive()) throw Error(ErrorKind::NotTwoTransitive, "transport_into_line");
  const auto verts = s.vertices();
  if (auto i0 = line_index(line, s.start())) {
    bool on_line = true;
    for (std::size_t k = 1; k < verts.size() && on_line; ++k) {
      auto ik = line_index(line, verts[k]);
      on_line = ik && *ik == *i0 + static_cast<long long>(k);
    }
    if (on_line) {
      auto sigma = solve_slots(ctx, s.colors(), s.colors());
      return make_transport(ctx, s, s, std::move(*sigma), certify);
    }
  }
  const long long len = static_cast<long long>(s.length());
  for (long long step = 0;; ++step) {
    const std::vector<long long> positions = step == 0 ? std::vector<long long>{0} : std::vector<long long>{step, -step};
    for (long long j : positions) {
      const Vertex start = line_vertex(line, j);
      if (even_parity && distance(s.start(), start) % 2 != 0) continue;
      std::vector<Color> colors;
      for (long long k = 1; k <= len; ++k) colors.push_back(line_edge_color(line, j + k));
      Segment target(start, colors);
      auto sigma = solve_slots(ctx, s.colors(), colors);
      if (!sigma) continue;
      return make_transport(ctx, s, target, std::move(*sigma), certify);
    }
    if (step > 64 + len) throw Error(ErrorKind::SearchExhausted, "no target position on the line");
  }
}

// ---------------------------------------------------------------------------
// Witnesses

struct BoundaryEscapeWitness {
  Automorphism g;
  Segment ray;  // ray prefix with equal color pattern at v1 and v2
  Vertex v1, v2, w;
  int divergence_radius = 0;
};

/// The ray ray alternates colors 1, 2 from the base, so v1 = gamma_1 and
/// v2 = gamma_3 see the same colors on ray. w hangs off v2 by color 3 and
/// g is the word translation with g v1 = w, which lies in U(id).
/// `divergence_radius` is the first ray index from which the distance of
/// g gamma_i to ray grows by one at every step.
inline BoundaryEscapeWitness boundary_escape_witness(int d, int prefix_length) {
  if (d < 3) throw Error(ErrorKind::OutOfRange, "degree must be at least 3");
  const int n = std::max(prefix_length, 4);
  std::vector<Color> colors;
  for (int i = 0; i < n; ++i) colors.push_back(i % 2 == 0 ? 1 : 2);
  Segment ray(Vertex::base(), colors);
  const auto path = ray.vertices();
  const Vertex v1 = path[1], v2 = path[3], w = v2.neighbor(3);
  const Automorphism g = Automorphism::word(w.translate(v1.reversed()), d);

  auto dist_to_ray = [](const Vertex& x) {
    std::size_t j = 0;
    while (j < x.length() && x.letter(j) == (j % 2 == 0 ? 1 : 2)) ++j;
    return static_cast<int>(x.length() - j);
  };
  const int horizon = 2 * n;
  std::vector<int> dist;
  Vertex x = Vertex::base();
  for (int i = 0; i <= horizon; ++i) {
    dist.push_back(dist_to_ray(g.apply(x)));
    x = x.neighbor(i % 2 == 0 ? 1 : 2);
  }
  int r = horizon;
  while (r > 0 && dist[r - 1] > 0 && dist[r] == dist[r - 1] + 1) --r;
  if (r >= horizon) throw Error(ErrorKind::SearchExhausted, "g ray does not leave ray within the horizon");
  return {g, ray, v1, v2, w, r};
}

struct ObstructionWitness {
  Color a = 0, b1 = 0, b2 = 0;
  Segment seg1, seg2;
  bool degenerate = false;  // F' intransitive: length-1 segments in distinct F'-orbits
  bool translate = false;
};

/// Absent iff F' is 2-transitive. Otherwise two segments that no element of
/// G(F, F') maps onto each other.
inline std::optional<ObstructionWitness> pair_orbit_obstruction(const GroupContext& ctx) {
  if (ctx.fp_two_transitive()) return std::nullopt;
  const auto orb = orbits(ctx.Fp());
  ObstructionWitness w;
  if (orb.size() > 1) {
    w.degenerate = true;
    w.a = w.b1 = orb[0].front();
    w.b2 = orb[1].front();
    w.seg1 = Segment(Vertex::base(), {w.b1});
    w.seg2 = Segment(Vertex::base(), {w.b2});
  } else {
    for (Color a = 1; a <= ctx.degree() && w.a == 0; ++a) {
      std::vector<Color> rest;
      for (Color y = 1; y <= ctx.degree(); ++y)
        if (y != a) rest.push_back(y);
      const auto parts = orbits_on(stabilizer(ctx.Fp(), a), rest);
      if (parts.size() > 1) {
        w.a = a;
        w.b1 = parts[0].front();
        w.b2 = parts[1].front();
      }
    }
    // gamma_i runs from the far end of e_i through v = base along e (color a).
    w.seg1 = Segment(Vertex::base().neighbor(w.b1), {w.b1, w.a});
    w.seg2 = Segment(Vertex::base().neighbor(w.b2), {w.b2, w.a});
  }
  w.translate = is_translate(ctx, w.seg1, w.seg2, true);
  return w;
}

/// Geodesic color sequences of length n (consecutive colors distinct), lex order.
inline std::vector<std::vector<Color>> all_color_sequences(int d, int n, std::size_t cap = 2'000'000) {
  long long count = n == 0 ? 1 : d;
  for (int i = 1; i < n; ++i) count *= (d - 1);
  if (count > static_cast<long long>(cap)) throw Error(ErrorKind::SizeLimitExceeded, "too many color sequences");
  std::vector<std::vector<Color>> out;
  std::vector<Color> cur;
  auto rec = [&](auto&& self) -> void {
    if (static_cast<int>(cur.size()) == n) {
      out.push_back(cur);
      return;
    }
    for (Color c = 1; c <= d; ++c) {
      if (!cur.empty() && cur.back() == c) continue;
      cur.push_back(c);
      self(self);
      cur.pop_back();
    }
  };
  rec(rec);
  return out;
}

/// Representatives of the classes of length-n color sequences under oriented
/// F'-matchability, each the least member of its class.
inline std::vector<std::vector<Color>> segment_orbit_census(const GroupContext& ctx, int n, std::size_t cap = 2'000'000) {
  if (n < 1) throw Error(ErrorKind::OutOfRange, "census length must be positive");
  std::vector<std::vector<Color>> reps;
  for (const auto& seq : all_color_sequences(ctx.degree(), n, cap)) {
    bool found = false;
    for (const auto& r : reps)
      if (colors_matchable(ctx, r, seq)) {
        found = true;
        break;
      }
    if (!found) reps.push_back(seq);
  }
  return reps;
}

}  // namespace treeaut
