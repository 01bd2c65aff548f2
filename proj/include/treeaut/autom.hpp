#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "json.hpp"
#include "treeaut/error.hpp"
#include "treeaut/perm.hpp"
#include "treeaut/permgroup.hpp"
#include "treeaut/tree.hpp"

namespace treeaut {

/// Image of a vertex together with the local permutation there.
struct Portrait {
  Vertex image;
  Permutation sigma;
};

namespace detail {

/// One node of an automorphism expression. Evaluation is memoized per node;
/// memo writes are idempotent so concurrent readers see identical values.
class Node {
 public:
  explicit Node(int d) : d_(d) {}
  virtual ~Node() = default;
  Node(const Node&) = delete;
  Node& operator=(const Node&) = delete;

  int degree() const { return d_; }

  Portrait eval(const Vertex& v) const {
    {
      std::lock_guard<std::mutex> lock(mu_);
      if (auto it = memo_.find(v); it != memo_.end()) return it->second;
    }
    Portrait p = compute(v);
    std::lock_guard<std::mutex> lock(mu_);
    memo_.emplace(v, p);
    return p;
  }

  /// True when the expression class bounds the set of vertices with local
  /// permutation outside `f` by a finite set.
  virtual bool structurally_finite(const PermGroup& f) const = 0;
  virtual nlohmann::json to_json() const = 0;

 protected:
  virtual Portrait compute(const Vertex& v) const = 0;

 private:
  int d_;
  mutable std::mutex mu_;
  mutable std::unordered_map<Vertex, Portrait, VertexHash> memo_;
};

/// Nodes given by the base image and a local rule; images follow from
/// walking out from the base, and every walked edge is checked for
/// compatibility of the two local permutations at its ends.
class PortraitNode : public Node {
 public:
  using Node::Node;

 protected:
  virtual Vertex base_image() const = 0;
  virtual Permutation sigma_at(const Vertex& v) const = 0;

  Portrait compute(const Vertex& v) const override {
    if (v.is_base()) return {base_image(), sigma_at(v)};
    const Color k = v.last();
    const Portrait up = eval(v.parent());
    const Color out = up.sigma(k);
    Permutation s = sigma_at(v);
    if (s(k) != out)
      throw Error(ErrorKind::InconsistentPortrait,
                  "edge (" + v.parent().to_string() + ", " + v.to_string() + "): local permutations send color " +
                      std::to_string(k) + " to " + std::to_string(out) + " and " + std::to_string(s(k)));
    return {up.image.neighbor(out), s};
  }
};

class IdentityNode final : public PortraitNode {
 public:
  using PortraitNode::PortraitNode;
  bool structurally_finite(const PermGroup&) const override { return true; }
  nlohmann::json to_json() const override { return {{"op", "identity"}, {"d", degree()}}; }

 protected:
  Vertex base_image() const override { return Vertex::base(); }
  Permutation sigma_at(const Vertex&) const override { return Permutation::identity(degree()); }
};

class WordNode final : public PortraitNode {
 public:
  WordNode(Vertex w, int d) : PortraitNode(d), w_(std::move(w)) {}
  bool structurally_finite(const PermGroup&) const override { return true; }
  nlohmann::json to_json() const override { return {{"op", "word"}, {"w", w_.to_string()}, {"d", degree()}}; }
  const Vertex& word() const { return w_; }

 protected:
  Vertex base_image() const override { return w_; }
  Permutation sigma_at(const Vertex&) const override { return Permutation::identity(degree()); }

 private:
  Vertex w_;
};

class DiagonalNode final : public PortraitNode {
 public:
  explicit DiagonalNode(Permutation pi) : PortraitNode(pi.degree()), pi_(pi) {}
  bool structurally_finite(const PermGroup& f) const override { return f.contains(pi_); }
  nlohmann::json to_json() const override { return {{"op", "diag"}, {"perm", pi_.to_cycle_string()}, {"d", degree()}}; }

 protected:
  Vertex base_image() const override { return Vertex::base(); }
  Permutation sigma_at(const Vertex&) const override { return pi_; }

 private:
  Permutation pi_;
};

/// Acts by `pi` on the subtree hanging below `u` (u included), trivially elsewhere.
class SubtreeDiagonalNode final : public PortraitNode {
 public:
  SubtreeDiagonalNode(Vertex u, Permutation pi) : PortraitNode(pi.degree()), u_(std::move(u)), pi_(pi) {
    if (!u_.is_base() && pi_(u_.last()) != u_.last())
      throw Error(ErrorKind::IncompatibleSigma, "subtree permutation must fix the color toward the parent of " + u_.to_string());
  }
  bool structurally_finite(const PermGroup& f) const override { return f.contains(pi_); }
  nlohmann::json to_json() const override {
    return {{"op", "subdiag"}, {"at", u_.to_string()}, {"perm", pi_.to_cycle_string()}, {"d", degree()}};
  }

 protected:
  Vertex base_image() const override { return Vertex::base(); }
  Permutation sigma_at(const Vertex& v) const override {
    if (v.length() >= u_.length() && common_prefix(u_, v) == u_.length()) return pi_;
    return Permutation::identity(degree());
  }

 private:
  Vertex u_;
  Permutation pi_;
};

class PatchedNode final : public PortraitNode {
 public:
  PatchedNode(std::shared_ptr<const Node> base, std::map<Vertex, Permutation> overrides)
      : PortraitNode(base->degree()), base_(std::move(base)), overrides_(std::move(overrides)) {
    for (const auto& [v, p] : overrides_)
      if (p.degree() != degree()) throw Error(ErrorKind::DegreeMismatch, "override at " + v.to_string());
  }
  bool structurally_finite(const PermGroup& f) const override { return base_->structurally_finite(f); }
  nlohmann::json to_json() const override {
    nlohmann::json ov = nlohmann::json::array();
    for (const auto& [v, p] : overrides_) ov.push_back({v.to_string(), p.to_cycle_string()});
    return {{"op", "patched"}, {"base", base_->to_json()}, {"overrides", ov}};
  }

 protected:
  Vertex base_image() const override { return base_->eval(Vertex::base()).image; }
  Permutation sigma_at(const Vertex& v) const override {
    if (auto it = overrides_.find(v); it != overrides_.end()) return it->second;
    return base_->eval(v).sigma;
  }

 private:
  std::shared_ptr<const Node> base_;
  std::map<Vertex, Permutation> overrides_;
};

class ComposeNode final : public Node {
 public:
  ComposeNode(std::shared_ptr<const Node> g, std::shared_ptr<const Node> h)
      : Node(g->degree()), g_(std::move(g)), h_(std::move(h)) {
    if (g_->degree() != h_->degree()) throw Error(ErrorKind::DegreeMismatch, "compose");
  }
  bool structurally_finite(const PermGroup& f) const override {
    return g_->structurally_finite(f) && h_->structurally_finite(f);
  }
  nlohmann::json to_json() const override { return {{"op", "compose"}, {"args", {g_->to_json(), h_->to_json()}}}; }

 protected:
  // sigma(gh, v) = sigma(g, h v) o sigma(h, v)
  Portrait compute(const Vertex& v) const override {
    const Portrait ph = h_->eval(v);
    const Portrait pg = g_->eval(ph.image);
    return {pg.image, pg.sigma * ph.sigma};
  }

 private:
  std::shared_ptr<const Node> g_, h_;
};

class InverseNode final : public Node {
 public:
  explicit InverseNode(std::shared_ptr<const Node> g) : Node(g->degree()), g_(std::move(g)) {}
  bool structurally_finite(const PermGroup& f) const override { return g_->structurally_finite(f); }
  nlohmann::json to_json() const override { return {{"op", "inverse"}, {"arg", g_->to_json()}}; }
  const std::shared_ptr<const Node>& arg() const { return g_; }

 protected:
  // Walk the geodesic from g(base) to v, pulling each color back through
  // the local permutation of g at the current preimage.
  Portrait compute(const Vertex& v) const override {
    Vertex u = Vertex::base();
    Portrait pu = g_->eval(u);
    const Segment path = geodesic(pu.image, v);
    for (Color c : path.colors()) {
      u = u.neighbor(pu.sigma.inverse()(c));
      pu = g_->eval(u);
    }
    if (pu.image != v) throw Error(ErrorKind::InconsistentPortrait, "inverse walk missed " + v.to_string());
    return {u, pu.sigma.inverse()};
  }

 private:
  std::shared_ptr<const Node> g_;
};

/// Nodes prescribed on a core region and extended outward: each vertex off
/// the core receives the least element of the fill group that sends the
/// color toward the core to its forced image color.
class RuleNode : public Node {
 public:
  RuleNode(int d, std::shared_ptr<const PermGroup> fill) : Node(d), fill_(std::move(fill)) {}

  struct Step {
    std::optional<Portrait> core;  // set when the vertex is in the core
    Color toward_core = 0;         // otherwise: color of the edge one step closer to the core
  };

 protected:
  virtual Step locate(const Vertex& v) const = 0;

  Portrait compute(const Vertex& v) const override {
    Step step = locate(v);
    if (step.core) return *step.core;
    const Color k = step.toward_core;
    const Portrait inner = eval(v.neighbor(k));
    const Color out = inner.sigma(k);
    const auto& fill = fill_->least_mapping(k, out);
    if (!fill)
      throw Error(ErrorKind::OrbitViolation,
                  "no fill element maps color " + std::to_string(k) + " to " + std::to_string(out) + " at " + v.to_string());
    return {inner.image.neighbor(out), *fill};
  }

  const PermGroup& fill_group() const { return *fill_; }

 private:
  std::shared_ptr<const PermGroup> fill_;
};

}  // namespace detail

/// A tree automorphism held as an immutable expression. Values share
/// structure; evaluation is lazy and memoized.
class Automorphism {
 public:
  explicit Automorphism(std::shared_ptr<const detail::Node> node) : node_(std::move(node)) {}

  static Automorphism identity(int d) { return Automorphism(std::make_shared<detail::IdentityNode>(d)); }
  static Automorphism word(const Vertex& w, int d) {
    for (Color c : w.word())
      if (c > d) throw Error(ErrorKind::OutOfRange, "word letter " + std::to_string(c));
    return Automorphism(std::make_shared<detail::WordNode>(w, d));
  }
  static Automorphism diagonal(const Permutation& pi) { return Automorphism(std::make_shared<detail::DiagonalNode>(pi)); }
  static Automorphism subtree_diagonal(const Vertex& u, const Permutation& pi) {
    return Automorphism(std::make_shared<detail::SubtreeDiagonalNode>(u, pi));
  }
  static Automorphism patched(const Automorphism& base, std::map<Vertex, Permutation> overrides) {
    return Automorphism(std::make_shared<detail::PatchedNode>(base.node_, std::move(overrides)));
  }

  int degree() const { return node_->degree(); }
  Portrait eval(const Vertex& v) const { return node_->eval(v); }
  Vertex apply(const Vertex& v) const { return node_->eval(v).image; }
  Permutation local(const Vertex& v) const { return node_->eval(v).sigma; }
  bool structurally_finite(const PermGroup& f) const { return node_->structurally_finite(f); }
  nlohmann::json to_json() const { return node_->to_json(); }
  const std::shared_ptr<const detail::Node>& node() const { return node_; }

 private:
  std::shared_ptr<const detail::Node> node_;
};

/// g o h: apply h first.
inline Automorphism compose(const Automorphism& g, const Automorphism& h) {
  return Automorphism(std::make_shared<detail::ComposeNode>(g.node(), h.node()));
}

inline Automorphism inverse(const Automorphism& g) {
  if (auto inv = std::dynamic_pointer_cast<const detail::InverseNode>(g.node())) return Automorphism(inv->arg());
  if (std::dynamic_pointer_cast<const detail::IdentityNode>(g.node())) return g;
  if (auto w = std::dynamic_pointer_cast<const detail::WordNode>(g.node()))
    return Automorphism::word(w->word().reversed(), g.degree());
  return Automorphism(std::make_shared<detail::InverseNode>(g.node()));
}

inline Automorphism power(const Automorphism& g, int n) {
  if (n == 0) return Automorphism::identity(g.degree());
  const Automorphism base = n > 0 ? g : inverse(g);
  Automorphism acc = base;
  for (int i = 1; i < std::abs(n); ++i) acc = compose(base, acc);
  return acc;
}

inline Vertex apply(const Automorphism& g, const Vertex& v) { return g.apply(v); }
inline Permutation local(const Automorphism& g, const Vertex& v) { return g.local(v); }

/// Local permutation recovered from vertex images alone:
/// sigma(g, v)(k) is the color of the edge from g v to g (v.k).
inline Permutation local_from_images(const Automorphism& g, const Vertex& v) {
  const Vertex gv = g.apply(v);
  std::vector<int> img(g.degree());
  for (Color k = 1; k <= g.degree(); ++k) {
    const Vertex gw = g.apply(v.neighbor(k));
    if (distance(gv, gw) != 1) throw Error(ErrorKind::InconsistentPortrait, "images of adjacent vertices are not adjacent");
    img[k - 1] = geodesic(gv, gw).colors().front();
  }
  return Permutation::from_images(std::span<const int>(img));
}

struct Elliptic {
  Vertex fixed;
};
struct Inversion {
  EdgeRef edge;
};
struct Loxodromic {
  int length = 0;
  Vertex axis_point;
};
using MoveClass = std::variant<Elliptic, Inversion, Loxodromic>;

inline int default_classify_radius(const Automorphism& g) {
  return 4 + 2 * distance(Vertex::base(), g.apply(Vertex::base()));
}

/// Midpoint iteration from the base: move to the midpoint of [v, g v] (the
/// better endpoint when that midpoint is an edge) while the displacement
/// drops. The final displacement is the translation length.
inline MoveClass classify(const Automorphism& g, int radius) {
  Vertex v = Vertex::base();
  int disp = distance(v, g.apply(v));
  for (;;) {
    if (disp == 0) return Elliptic{v};
    const PointOrMid m = midpoint(v, g.apply(v));
    Vertex cand;
    if (const Vertex* mv = std::get_if<Vertex>(&m)) {
      cand = *mv;
    } else {
      const EdgeRef& e = std::get<EdgeRef>(m);
      const Vertex a = e.near, b = e.far();
      cand = distance(b, g.apply(b)) < distance(a, g.apply(a)) ? b : a;
    }
    if (distance(Vertex::base(), cand) > radius)
      throw Error(ErrorKind::RadiusExhausted, "midpoint iteration left ball of radius " + std::to_string(radius));
    const int cd = distance(cand, g.apply(cand));
    if (cd >= disp) break;
    v = cand;
    disp = cd;
  }
  const Vertex gv = g.apply(v);
  if (distance(v, g.apply(gv)) == 2 * disp) return Loxodromic{disp, v};
  if (disp == 1) return Inversion{EdgeRef::between(v, gv)};
  throw Error(ErrorKind::InconsistentPortrait, "displacement pattern matches no isometry type");
}

inline MoveClass classify(const Automorphism& g) { return classify(g, default_classify_radius(g)); }

/// Parity of the displacement of the base (independent of the vertex).
inline int displacement_parity(const Automorphism& g) { return distance(Vertex::base(), g.apply(Vertex::base())) % 2; }

inline std::vector<Vertex> singular_support(const Automorphism& g, const PermGroup& f, int radius) {
  std::vector<Vertex> out;
  for (const auto& v : ball(Vertex::base(), radius, g.degree()))
    if (!f.contains(g.local(v))) out.push_back(v);
  return out;
}

struct MembershipCertificate {
  int radius = 0;
  std::vector<Vertex> singular_in_radius;  // local permutation outside F
  bool in_Uprime_in_radius = true;         // local permutation in F' throughout the ball
  bool exact = false;                      // finite singular set guaranteed globally
};

inline MembershipCertificate certify_membership(const Automorphism& g, const PermGroup& f, const PermGroup& fp, int radius) {
  MembershipCertificate cert;
  cert.radius = radius;
  for (const auto& v : ball(Vertex::base(), radius, g.degree())) {
    const Permutation s = g.local(v);
    if (!f.contains(s)) cert.singular_in_radius.push_back(v);
    if (!fp.contains(s)) cert.in_Uprime_in_radius = false;
  }
  cert.exact = g.structurally_finite(f);
  return cert;
}

inline std::vector<Vertex> moved_set(const Automorphism& g, const std::vector<Vertex>& window) {
  std::vector<Vertex> out;
  for (const auto& v : window)
    if (g.apply(v) != v) out.push_back(v);
  return out;
}

/// moved(a^-1 b a, W) == a^-1 (moved(b, a W)), compared as sets.
inline bool conjugate_support_shift_check(const Automorphism& a, const Automorphism& b, const std::vector<Vertex>& window) {
  const Automorphism conj = compose(inverse(a), compose(b, a));
  auto lhs = moved_set(conj, window);
  std::vector<Vertex> shifted;
  for (const auto& v : window) shifted.push_back(a.apply(v));
  const Automorphism a_inv = inverse(a);
  std::vector<Vertex> rhs;
  for (const auto& v : moved_set(b, shifted)) rhs.push_back(a_inv.apply(v));
  std::sort(lhs.begin(), lhs.end());
  std::sort(rhs.begin(), rhs.end());
  return lhs == rhs;
}

inline bool equal_on_ball(const Automorphism& g, const Automorphism& h, int radius) {
  for (const auto& v : ball(Vertex::base(), radius, g.degree()))
    if (g.apply(v) != h.apply(v)) return false;
  return true;
}

}  // namespace treeaut
