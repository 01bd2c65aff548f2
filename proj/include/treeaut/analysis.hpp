#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "treeaut/autom.hpp"
#include "treeaut/chains.hpp"
#include "treeaut/error.hpp"
#include "treeaut/io.hpp"
#include "treeaut/localaction.hpp"
#include "treeaut/medianqm.hpp"
#include "treeaut/permgroup.hpp"
#include "treeaut/tree.hpp"

namespace treeaut {

struct Diagnostic {
  std::string check;
  std::string message;
};

struct ValidationReport {
  int d = 0;
  std::size_t order_F = 0, order_Fp = 0;
  std::vector<std::vector<Color>> orbits_F, orbits_Fp;
  bool F_transitive = false, Fp_transitive = false, Fp_two_transitive = false;
  bool degree_ok = false, parsed = false, subgroup = false, proper_inclusion = false, preserves_orbits = false;
  std::vector<Diagnostic> diagnostics;

  bool valid() const { return diagnostics.empty(); }
};

inline json to_json(const ValidationReport& r) {
  json diags = json::array();
  for (const auto& dg : r.diagnostics) diags.push_back({{"check", dg.check}, {"message", dg.message}});
  return {{"valid", r.valid()},
          {"d", r.d},
          {"order_F", r.order_F},
          {"order_Fprime", r.order_Fp},
          {"orbits_F", r.orbits_F},
          {"orbits_Fprime", r.orbits_Fp},
          {"F_transitive", r.F_transitive},
          {"Fprime_transitive", r.Fp_transitive},
          {"Fprime_2transitive", r.Fp_two_transitive},
          {"degree_ok", r.degree_ok},
          {"parsed", r.parsed},
          {"subgroup", r.subgroup},
          {"proper_inclusion", r.proper_inclusion},
          {"preserves_orbits", r.preserves_orbits},
          {"diagnostics", diags}};
}

struct Validated {
  ValidationReport report;
  std::optional<GroupContext> ctx;
};

/// Checks every hypothesis on (d, F, F') and reports each failure
/// separately; builds the context only when all pass.
inline Validated validate_inputs(int d, const std::vector<std::string>& f_gens, const std::vector<std::string>& fp_gens,
                                 OrbitConvention conv = OrbitConvention::Setwise) {
  Validated out;
  auto& r = out.report;
  r.d = d;
  r.degree_ok = d >= 3 && d <= kMaxDegree;
  if (!r.degree_ok) {
    r.diagnostics.push_back({"degree", "degree must lie in 3.." + std::to_string(kMaxDegree) + ", got " + std::to_string(d)});
    return out;
  }
  std::optional<PermGroup> f, fp;
  auto build = [&](const std::vector<std::string>& gens, const char* name) -> std::optional<PermGroup> {
    try {
      return PermGroup::generate(parse_generators(gens, d), d);
    } catch (const Error& e) {
      r.diagnostics.push_back({"parse", std::string(name) + ": " + e.what()});
      return std::nullopt;
    }
  };
  f = build(f_gens, "F");
  fp = build(fp_gens, "Fprime");
  r.parsed = f && fp;
  if (!r.parsed) return out;

  r.order_F = f->order();
  r.order_Fp = fp->order();
  r.orbits_F = orbits(*f);
  r.orbits_Fp = orbits(*fp);
  r.F_transitive = r.orbits_F.size() == 1;
  r.Fp_transitive = r.orbits_Fp.size() == 1;
  r.Fp_two_transitive = is_2transitive_direct(*fp);
  r.subgroup = f->is_subgroup_of(*fp);
  r.proper_inclusion = r.subgroup && f->order() < fp->order();
  r.preserves_orbits = conv == OrbitConvention::Setwise ? treeaut::preserves_orbits(*f, *fp) : permutes_orbits(*f, *fp);
  if (!r.subgroup) r.diagnostics.push_back({"subgroup", "F is not contained in F'"});
  if (r.subgroup && !r.proper_inclusion) r.diagnostics.push_back({"proper_inclusion", "F equals F'"});
  if (!r.preserves_orbits) r.diagnostics.push_back({"preserves_orbits", "F' does not preserve the orbits of F"});
  if (r.valid()) out.ctx = GroupContext::make(std::move(*f), std::move(*fp), conv);
  return out;
}

inline Validated validate_inputs(const GroupSpec& s, OrbitConvention conv = OrbitConvention::Setwise) {
  return validate_inputs(s.d, s.F, s.Fprime, conv);
}

struct RunConfig {
  int census_n = 4;
  int samples = 200;
  int membership_radius = 8;
  int line_window = 8;
  int transport_samples = 20;
  int transport_max_length = 5;
  int qm_segment_length = 6;
  int qm_element_length = 8;
  int independence_rank = 3;
  int limit_terms = 8;
  int escape_prefix = 6;
  int restriction_radius = 2;
  int restriction_degree = 1;
  std::uint64_t seed = 1;
};

inline json to_json(const RunConfig& c) {
  return {{"census_n", c.census_n},
          {"samples", c.samples},
          {"membership_radius", c.membership_radius},
          {"line_window", c.line_window},
          {"transport_samples", c.transport_samples},
          {"transport_max_length", c.transport_max_length},
          {"qm_segment_length", c.qm_segment_length},
          {"qm_element_length", c.qm_element_length},
          {"independence_rank", c.independence_rank},
          {"limit_terms", c.limit_terms},
          {"escape_prefix", c.escape_prefix},
          {"restriction_radius", c.restriction_radius},
          {"restriction_degree", c.restriction_degree},
          {"seed", c.seed}};
}

/// Unknown keys are rejected; missing keys keep their defaults.
inline RunConfig config_from_json(const json& j) {
  RunConfig c;
  if (!j.is_object()) throw Error(ErrorKind::MalformedJson, "config must be an object");
  const json defaults = to_json(c);
  for (const auto& [key, value] : j.items()) {
    if (!defaults.contains(key)) throw Error(ErrorKind::MalformedJson, "unknown config key \"" + key + "\"");
    if (!value.is_number_integer() || (value.is_number_integer() && value.get<long long>() < 0))
      throw Error(ErrorKind::MalformedJson, "config key \"" + key + "\" must be a nonnegative integer");
  }
  auto take = [&](const char* key, int& slot) {
    if (j.contains(key)) slot = j.at(key).get<int>();
  };
  take("census_n", c.census_n);
  take("samples", c.samples);
  take("membership_radius", c.membership_radius);
  take("line_window", c.line_window);
  take("transport_samples", c.transport_samples);
  take("transport_max_length", c.transport_max_length);
  take("qm_segment_length", c.qm_segment_length);
  take("qm_element_length", c.qm_element_length);
  take("independence_rank", c.independence_rank);
  take("limit_terms", c.limit_terms);
  take("escape_prefix", c.escape_prefix);
  take("restriction_radius", c.restriction_radius);
  take("restriction_degree", c.restriction_degree);
  if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
  return c;
}

enum class Branch { BoundedlyAcyclic, InfiniteH2 };

inline const char* to_string(Branch b) { return b == Branch::BoundedlyAcyclic ? "BoundedlyAcyclic" : "InfiniteH2"; }

struct EvidenceItem {
  std::string name;
  bool pass = false;
  json details;
};

struct BranchReport {
  Branch branch = Branch::BoundedlyAcyclic;
  json context;
  RunConfig config;
  std::vector<EvidenceItem> evidence;

  bool complete() const {
    for (const auto& e : evidence)
      if (!e.pass) return false;
    return !evidence.empty();
  }
};

inline json to_json(const BranchReport& r, bool full = true) {
  json items = json::array();
  for (const auto& e : r.evidence) {
    json item{{"name", e.name}, {"pass", e.pass}};
    if (full) item["details"] = e.details;
    items.push_back(std::move(item));
  }
  return {{"report_version", 1},
          {"kind", "evidence"},
          {"branch", to_string(r.branch)},
          {"context", r.context},
          {"parameters", to_json(r.config)},
          {"evidence", items},
          {"complete", r.complete()}};
}

namespace detail {

/// Random geodesic segment starting inside the ball of radius 3.
inline Segment random_segment(std::mt19937_64& rng, int d, int max_len) {
  std::uniform_int_distribution<int> color(1, d), len(1, std::max(1, max_len)), depth(0, 3);
  Vertex start;
  for (int i = depth(rng); i > 0; --i) start = start.neighbor(color(rng));
  std::vector<Color> cols;
  for (int i = len(rng); i > 0;) {
    const Color c = color(rng);
    if (!cols.empty() && cols.back() == c) continue;
    cols.push_back(c);
    --i;
  }
  return Segment(start, cols);
}

template <class F>
EvidenceItem run_item(const std::string& name, F&& body) {
  EvidenceItem item{name, false, json::object()};
  try {
    body(item);
  } catch (const Error& e) {
    item.pass = false;
    item.details["error"] = e.what();
  }
  return item;
}

inline EvidenceItem escape_item(int d, const RunConfig& cfg) {
  return run_item("boundary_escape_witness", [&](EvidenceItem& it) {
    if (cfg.escape_prefix < 1) {
      it.details["reason"] = "escape_prefix is 0";
      return;
    }
    const auto w = boundary_escape_witness(d, cfg.escape_prefix);
    it.details = {{"g", w.g.to_json()},
                  {"ray", to_json(w.ray)},
                  {"v1", w.v1.to_string()},
                  {"v2", w.v2.to_string()},
                  {"w", w.w.to_string()},
                  {"divergence_radius", w.divergence_radius}};
    it.pass = w.g.apply(w.v1) == w.w;
  });
}

inline std::vector<EvidenceItem> branch_one(const std::shared_ptr<const GroupContext>& ctx, const RunConfig& cfg) {
  const GroupContext& c = *ctx;
  const int d = c.degree();
  std::mt19937_64 rng(cfg.seed);
  std::vector<EvidenceItem> out;

  out.push_back(run_item("segment_census", [&](EvidenceItem& it) {
    json sizes = json::array();
    bool all_one = cfg.census_n >= 1;
    for (int n = 1; n <= cfg.census_n; ++n) {
      const auto reps = segment_orbit_census(c, n);
      sizes.push_back(reps.size());
      all_one = all_one && reps.size() == 1;
    }
    it.details = {{"sizes", sizes}};
    it.pass = all_one;
  }));

  const LineBuild lb = build_line(c, Vertex::base());
  std::optional<Automorphism> t, r;

  out.push_back(run_item("translation_t", [&](EvidenceItem& it) {
    t = translation_t(c, lb.line);
    const MoveClass cls = classify(*t);
    const auto cert = certify_membership(*t, c.F(), c.Fp(), cfg.membership_radius);
    const Vertex v0 = line_vertex(lb.line, 0), vm1 = line_vertex(lb.line, -1);
    bool support_ok = true;
    for (const auto& v : cert.singular_in_radius) support_ok = support_ok && (v == v0 || v == vm1);
    const auto* lox = std::get_if<Loxodromic>(&cls);
    it.details = {{"line", to_json(lb.line)},
                  {"cycle_element", lb.rot.element.to_cycle_string()},
                  {"class", to_json(cls)},
                  {"certificate", to_json(cert)},
                  {"sigma_on_line", line_sigma_table(*t, 3)}};
    it.pass = lox && lox->length == 2 && support_ok && cert.exact && cert.in_Uprime_in_radius && cfg.membership_radius > 0;
  }));

  out.push_back(run_item("rotation_r", [&](EvidenceItem& it) {
    r = rotation_r(c, lb.line, lb.rot);
    const auto cert = certify_membership(*r, c.F(), c.Fp(), cfg.membership_radius);
    bool reflects = cfg.line_window > 0;
    for (long long i = -cfg.line_window; i <= cfg.line_window; ++i)
      reflects = reflects && r->apply(line_vertex(lb.line, i)) == line_vertex(lb.line, -i);
    it.details = {{"reflects_window", cfg.line_window},
                  {"certificate", to_json(cert)},
                  {"sigma_on_line", line_sigma_table(*r, 3)}};
    it.pass = reflects && cert.exact && cert.in_Uprime_in_radius;
  }));

  out.push_back(run_item("edge_transitivity", [&](EvidenceItem& it) {
    if (!t || !r) throw Error(ErrorKind::HypothesisUnverified, "t or r missing");
    it.details = {{"window", cfg.line_window}};
    it.pass = cfg.line_window > 0 && edge_transitivity_check(lb.line, {*t, *r}, cfg.line_window);
  }));

  out.push_back(run_item("even_transport", [&](EvidenceItem& it) {
    json samples = json::array();
    bool ok = cfg.transport_samples > 0 && cfg.transport_max_length > 0;
    for (int k = 0; k < cfg.transport_samples && ok; ++k) {
      const Segment s = random_segment(rng, d, cfg.transport_max_length);
      const auto tr = transport_into_line(c, s, lb.line, true);
      bool good = tr.certificate.in_Uprime_in_radius && distance(s.start(), tr.target.start()) % 2 == 0;
      const auto verts = s.vertices();
      for (std::size_t i = 0; i < verts.size(); ++i) {
        const auto idx = line_index(lb.line, tr.element.apply(verts[i]));
        good = good && idx && *idx == *line_index(lb.line, tr.target.start()) + static_cast<long long>(i);
      }
      samples.push_back({{"segment", to_json(s)}, {"target", to_json(tr.target)}, {"ok", good}});
      ok = ok && good;
    }
    it.details = {{"samples", samples}};
    it.pass = ok;
  }));

  out.push_back(run_item("median_qm_vanishing", [&](EvidenceItem& it) {
    if (!t || !r) throw Error(ErrorKind::HypothesisUnverified, "t or r missing");
    std::vector<Automorphism> gens{*t, *r, inverse(*t)};
    for (Color k = 1; k <= d; ++k) gens.push_back(Automorphism::word(Vertex::base().neighbor(k), d));
    std::uniform_int_distribution<std::size_t> pick(0, gens.size() - 1);
    std::uniform_int_distribution<int> depth(1, 4);
    long long nonzero = 0;
    for (int k = 0; k < cfg.samples; ++k) {
      const MedianQM f(ctx, random_segment(rng, d, std::max(1, cfg.census_n)));
      Automorphism g = gens[pick(rng)];
      for (int i = depth(rng); i > 1; --i) g = compose(gens[pick(rng)], g);
      if (eval(f, g).value != 0) ++nonzero;
    }
    it.details = {{"evaluations", cfg.samples}, {"nonzero", nonzero}};
    it.pass = cfg.samples > 0 && nonzero == 0;
  }));

  out.push_back(run_item("restriction_correspondence", [&](EvidenceItem& it) {
    const auto rep = restriction_correspondence_check(c, lb.line, lb.rot, cfg.restriction_radius, cfg.restriction_degree);
    json fails = json::array();
    for (const auto& f : rep.failures) fails.push_back({{"tuple", tuple_to_json(f.tuple)}, {"reason", f.reason}});
    it.details = {{"radius", cfg.restriction_radius},
                  {"degree", cfg.restriction_degree},
                  {"tuples", rep.tuples},
                  {"transported", rep.transported},
                  {"consistent", rep.consistent},
                  {"failures", fails}};
    it.pass = rep.tuples > 0 && rep.failures.empty();
  }));

  out.push_back(escape_item(d, cfg));
  return out;
}

inline std::vector<EvidenceItem> branch_two(const std::shared_ptr<const GroupContext>& ctx, const RunConfig& cfg) {
  const GroupContext& c = *ctx;
  std::mt19937_64 rng(cfg.seed);
  std::vector<EvidenceItem> out;

  out.push_back(run_item("pair_orbit_obstruction", [&](EvidenceItem& it) {
    const auto w = pair_orbit_obstruction(c);
    if (!w) return;
    json orbs = json::array();
    if (!w->degenerate) {
      std::vector<Color> rest;
      for (Color y = 1; y <= c.degree(); ++y)
        if (y != w->a) rest.push_back(y);
      orbs = orbits_on(stabilizer(c.Fp(), w->a), rest);
    } else {
      orbs = orbits(c.Fp());
    }
    it.details = {{"a", w->a},
                  {"b1", w->b1},
                  {"b2", w->b2},
                  {"degenerate", w->degenerate},
                  {"orbits", orbs},
                  {"segment1", to_json(w->seg1)},
                  {"segment2", to_json(w->seg2)},
                  {"translate", w->translate}};
    it.pass = !w->translate;
  }));

  out.push_back(escape_item(c.degree(), cfg));

  std::optional<QMWitness> witness;
  out.push_back(run_item("nonvanishing_qm", [&](EvidenceItem& it) {
    witness = find_nonvanishing_qm(ctx, cfg.qm_segment_length, cfg.qm_element_length, std::max(1, cfg.limit_terms));
    it.details = {{"max_segment_length", cfg.qm_segment_length}, {"max_element_length", cfg.qm_element_length}};
    if (!witness) {
      it.details["reason"] = "no quasimorphism with nonzero homogenization within the bounds";
      return;
    }
    json limit = json::array();
    for (const auto& q : homogenize_limit(witness->f, witness->g, std::max(1, cfg.limit_terms))) limit.push_back(to_string(q));
    it.details["qm"] = to_json(witness->f);
    it.details["element"] = witness->g.to_json();
    it.details["class"] = to_json(classify(witness->g));
    it.details["homogenization"] = witness->value;
    it.details["limit_sequence"] = limit;
    it.details["limit_exact"] = witness->limit_exact;
    it.pass = witness->value != 0;
  }));

  out.push_back(run_item("defect_sample", [&](EvidenceItem& it) {
    if (!witness) throw Error(ErrorKind::SearchExhausted, "no quasimorphism to sample");
    std::uniform_int_distribution<int> color(1, c.degree()), len(1, std::max(1, cfg.qm_element_length));
    auto random_word = [&] {
      Vertex w;
      for (int i = len(rng); i > 0; --i) w = w.neighbor(color(rng));
      return Automorphism::word(w, c.degree());
    };
    std::vector<std::pair<Automorphism, Automorphism>> pairs;
    for (int k = 0; k < cfg.samples; ++k) pairs.emplace_back(random_word(), random_word());
    it.details = {{"pairs", cfg.samples}, {"defect_lower_bound", defect_sample(witness->f, pairs)}};
    it.pass = cfg.samples > 0;
  }));

  out.push_back(run_item("independence_certificate", [&](EvidenceItem& it) {
    if (cfg.independence_rank < 1) {
      it.details["reason"] = "independence_rank is 0";
      return;
    }
    const auto cert = build_independence_family(ctx, cfg.independence_rank, cfg.qm_segment_length, cfg.qm_element_length,
                                                cfg.qm_element_length);
    bool witnessed = !cert.row_witnesses.empty();
    for (const auto& w : cert.row_witnesses) witnessed = witnessed && w.has_value();
    it.details = to_json(cert);
    it.details["requested_rank"] = cfg.independence_rank;
    it.details["rows_witnessed"] = witnessed;
    it.pass = static_cast<int>(cert.rank) >= cfg.independence_rank && witnessed;
  }));
  return out;
}

}  // namespace detail

inline Branch decide_branch(const GroupContext& ctx) {
  return ctx.fp_two_transitive() ? Branch::BoundedlyAcyclic : Branch::InfiniteH2;
}

/// Decides the branch from 2-transitivity of F' and gathers the evidence
/// for it. Nothing here proves a cohomological statement; every item is a
/// finite check with its bounds recorded.
inline BranchReport branch_evidence(const GroupContext& ctx, const RunConfig& cfg) {
  auto shared = std::make_shared<const GroupContext>(ctx);
  BranchReport rep;
  rep.branch = decide_branch(ctx);
  rep.context = ctx.to_json();
  rep.context["order_F"] = ctx.F().order();
  rep.context["order_Fprime"] = ctx.Fp().order();
  rep.config = cfg;
  rep.evidence = rep.branch == Branch::BoundedlyAcyclic ? detail::branch_one(shared, cfg) : detail::branch_two(shared, cfg);
  return rep;
}

}  // namespace treeaut
