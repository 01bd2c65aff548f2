#pragma once

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "treeaut/autom.hpp"
#include "treeaut/chains.hpp"
#include "treeaut/error.hpp"
#include "treeaut/localaction.hpp"
#include "treeaut/medianqm.hpp"
#include "treeaut/permgroup.hpp"
#include "treeaut/tree.hpp"

namespace treeaut {

using nlohmann::json;

namespace detail {

inline const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw Error(ErrorKind::MalformedJson, std::string("missing field \"") + key + "\"");
  return j.at(key);
}

template <class T>
T get_as(const json& j, const char* key) {
  try {
    return field(j, key).get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::MalformedJson, std::string("field \"") + key + "\": " + e.what());
  }
}

}  // namespace detail

inline json to_json(const Segment& s) { return {{"start", s.start().to_string()}, {"colors", s.colors()}}; }

inline Segment segment_from_json(const json& j) {
  return Segment(Vertex::parse(detail::get_as<std::string>(j, "start")), detail::get_as<std::vector<Color>>(j, "colors"));
}

inline json to_json(const PeriodicSeq& s) { return {{"pre", s.pre}, {"period", s.period}}; }

inline PeriodicSeq periodic_from_json(const json& j) {
  PeriodicSeq s;
  if (j.contains("pre")) s.pre = detail::get_as<std::vector<Color>>(j, "pre");
  s.period = detail::get_as<std::vector<Color>>(j, "period");
  return s;
}

inline json to_json(const LineSpec& l) {
  return {{"anchor", l.anchor.to_string()}, {"forward", to_json(l.forward)}, {"backward", to_json(l.backward)}};
}

inline LineSpec line_from_json(const json& j) {
  LineSpec l;
  l.anchor = Vertex::parse(detail::get_as<std::string>(j, "anchor"));
  l.forward = periodic_from_json(detail::field(j, "forward"));
  l.backward = periodic_from_json(detail::field(j, "backward"));
  return l;
}

/// {"d": 4, "F": ["(1 2 3 4)"], "Fprime": ["(1 2 3 4)", "(1 3)"]}
struct GroupSpec {
  int d = 0;
  std::vector<std::string> F, Fprime;
};

inline GroupSpec group_spec_from_json(const json& j) {
  GroupSpec s;
  s.d = detail::get_as<int>(j, "d");
  s.F = detail::get_as<std::vector<std::string>>(j, "F");
  s.Fprime = detail::get_as<std::vector<std::string>>(j, "Fprime");
  return s;
}

inline json to_json(const GroupSpec& s) { return {{"d", s.d}, {"F", s.F}, {"Fprime", s.Fprime}}; }

inline std::vector<Permutation> parse_generators(const std::vector<std::string>& gens, int d) {
  std::vector<Permutation> out;
  for (const auto& g : gens) out.push_back(parse_cycles(g, d));
  return out;
}

/// Context from a spec, throwing on any failed hypothesis.
inline GroupContext context_from_spec(const GroupSpec& s, OrbitConvention conv = OrbitConvention::Setwise) {
  if (s.d < 3 || s.d > kMaxDegree) throw Error(ErrorKind::InvalidContext, "degree " + std::to_string(s.d));
  return GroupContext::make(PermGroup::generate(parse_generators(s.F, s.d), s.d),
                            PermGroup::generate(parse_generators(s.Fprime, s.d), s.d), conv);
}

inline GroupContext context_from_json(const json& j) { return context_from_spec(group_spec_from_json(j)); }

/// Rebuilds an element from the expression JSON produced by Automorphism::to_json.
inline Automorphism element_from_json(const json& j) {
  const auto op = detail::get_as<std::string>(j, "op");
  if (op == "identity") return Automorphism::identity(detail::get_as<int>(j, "d"));
  if (op == "word") return Automorphism::word(Vertex::parse(detail::get_as<std::string>(j, "w")), detail::get_as<int>(j, "d"));
  if (op == "diag") {
    const int d = detail::get_as<int>(j, "d");
    return Automorphism::diagonal(parse_cycles(detail::get_as<std::string>(j, "perm"), d));
  }
  if (op == "subdiag") {
    const int d = detail::get_as<int>(j, "d");
    return Automorphism::subtree_diagonal(Vertex::parse(detail::get_as<std::string>(j, "at")),
                                          parse_cycles(detail::get_as<std::string>(j, "perm"), d));
  }
  if (op == "compose") {
    const auto& args = detail::field(j, "args");
    if (!args.is_array() || args.empty()) throw Error(ErrorKind::MalformedJson, "compose needs a nonempty \"args\" array");
    Automorphism acc = element_from_json(args.back());
    for (std::size_t i = args.size() - 1; i-- > 0;) acc = compose(element_from_json(args[i]), acc);
    return acc;
  }
  if (op == "inverse") return inverse(element_from_json(detail::field(j, "arg")));
  if (op == "patched") {
    const Automorphism base = element_from_json(detail::field(j, "base"));
    std::map<Vertex, Permutation> overrides;
    for (const auto& entry : detail::field(j, "overrides")) {
      if (!entry.is_array() || entry.size() != 2) throw Error(ErrorKind::MalformedJson, "override must be [vertex, perm]");
      overrides.emplace(Vertex::parse(entry[0].get<std::string>()), parse_cycles(entry[1].get<std::string>(), base.degree()));
    }
    return Automorphism::patched(base, std::move(overrides));
  }
  if (op == "line") {
    const GroupContext ctx = context_from_json(detail::field(j, "spec"));
    const LineSpec line = line_from_json(detail::field(j, "line"));
    const auto kind = detail::get_as<std::string>(j, "kind");
    if (kind == "t") return translation_t(ctx, line);
    if (kind == "r") return rotation_r(ctx, line, pick_long_cycle(ctx.F()));
    throw Error(ErrorKind::MalformedJson, "line kind must be \"t\" or \"r\"");
  }
  if (op == "extend") {
    const GroupContext ctx = context_from_json(detail::field(j, "spec"));
    std::vector<Permutation> sigma;
    for (const auto& p : detail::get_as<std::vector<std::string>>(j, "sigma")) sigma.push_back(parse_cycles(p, ctx.degree()));
    return extend_from_segment(ctx, segment_from_json(detail::field(j, "source")), segment_from_json(detail::field(j, "target")),
                               std::move(sigma));
  }
  throw Error(ErrorKind::MalformedJson, "unknown element op \"" + op + "\"");
}

inline json to_json(const MoveClass& c) {
  if (const auto* e = std::get_if<Elliptic>(&c)) return {{"class", "elliptic"}, {"fixed", e->fixed.to_string()}};
  if (const auto* i = std::get_if<Inversion>(&c))
    return {{"class", "inversion"}, {"edge", {i->edge.near.to_string(), i->edge.far().to_string()}}};
  return {{"class", "loxodromic"}, {"length", std::get<Loxodromic>(c).length}};
}

inline json to_json(const MembershipCertificate& c) {
  json sing = json::array();
  for (const auto& v : c.singular_in_radius) sing.push_back(v.to_string());
  return {{"radius", c.radius}, {"singular_in_radius", sing}, {"in_Uprime_in_radius", c.in_Uprime_in_radius}, {"exact", c.exact}};
}

inline json to_json(const MedianQM& f) { return {{"segment", to_json(f.s)}, {"base", f.base.to_string()}}; }

inline MedianQM qm_from_json(std::shared_ptr<const GroupContext> ctx, const json& j) {
  Vertex base = j.contains("base") ? Vertex::parse(detail::get_as<std::string>(j, "base")) : Vertex::base();
  return MedianQM(std::move(ctx), segment_from_json(detail::field(j, "segment")), std::move(base));
}

inline json to_json(const QMEvaluation& e) {
  return {{"value", e.value}, {"forward_count", e.forward_count}, {"backward_count", e.backward_count}};
}

inline json to_json(const SplitWitness& w) {
  return {{"a", w.a.to_string()}, {"b", w.b.to_string()}, {"h_ab", w.h_ab}, {"h_a", w.h_a}, {"h_b", w.h_b}};
}

inline json to_json(const IndependenceCertificate& c) {
  json qms = json::array(), words = json::array(), wit = json::array();
  for (const auto& f : c.qms) qms.push_back(to_json(f));
  for (const auto& w : c.element_words) words.push_back(w.to_string());
  for (const auto& w : c.row_witnesses) wit.push_back(w ? to_json(*w) : json(nullptr));
  return {{"qms", qms}, {"elements", words}, {"matrix", c.matrix}, {"rank", c.rank}, {"row_witnesses", wit}};
}

inline json tuple_to_json(const Tuple& t) {
  json out = json::array();
  for (const auto& v : t) out.push_back(v.to_string());
  return out;
}

inline json to_json(const AlternatingChain& c) {
  json terms = json::array();
  for (const auto& [t, q] : c.terms) terms.push_back({tuple_to_json(t), to_string(q)});
  return {{"degree", c.degree}, {"terms", terms}};
}

inline AlternatingChain chain_from_json(const json& j) {
  AlternatingChain c;
  c.degree = detail::get_as<int>(j, "degree");
  for (const auto& term : detail::field(j, "terms")) {
    if (!term.is_array() || term.size() != 2) throw Error(ErrorKind::MalformedJson, "chain term must be [tuple, coefficient]");
    Tuple t;
    for (const auto& v : term[0]) t.push_back(Vertex::parse(v.get<std::string>()));
    const Rational q = term[1].is_string() ? parse_rational(term[1].get<std::string>()) : Rational(term[1].get<long long>());
    c.add(std::move(t), q);
  }
  return c;
}

}  // namespace treeaut
