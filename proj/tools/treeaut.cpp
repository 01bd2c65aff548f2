// treeaut: command-line front end for the treeaut library.
//
// Every command prints JSON on stdout (DOT for `tree dot`). Exit codes:
// 0 success / complete evidence, 1 invalid input, 2 incomplete evidence.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "treeaut/analysis.hpp"
#include "treeaut/chains.hpp"
#include "treeaut/io.hpp"
#include "treeaut/medianqm.hpp"

namespace {

using namespace treeaut;

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitIncomplete = 2;

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::MalformedJson, "cannot read " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::MalformedJson, path + ": " + e.what());
  }
}

/// Inline JSON text, or a path to a JSON file.
json json_arg(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\n");
  if (first != std::string::npos && (text[first] == '{' || text[first] == '[')) {
    try {
      return json::parse(text);
    } catch (const json::parse_error& e) {
      throw Error(ErrorKind::MalformedJson, e.what());
    }
  }
  return read_json_file(text);
}

void print(const json& j) { std::cout << j.dump(2) << "\n"; }

std::vector<Vertex> parse_points(const std::string& text) {
  std::vector<Vertex> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(Vertex::parse(tok));
  return out;
}

struct ElementArgs {
  std::string word;
  std::string element;
  int d = 0;

  void attach(CLI::App* app) {
    app->add_option("--word", word, "word translation, e.g. 1.2.1");
    app->add_option("--element", element, "element expression (JSON text or file)");
    app->add_option("--d", d, "degree for --word (default: 3 or the largest letter)");
  }

  Automorphism build() const {
    if (!element.empty()) return element_from_json(json_arg(element));
    if (word.empty()) throw Error(ErrorKind::MalformedJson, "need --word or --element");
    const Vertex w = Vertex::parse(word);
    int deg = d;
    if (deg == 0) {
      deg = 3;
      for (Color c : w.word()) deg = std::max(deg, c);
    }
    return Automorphism::word(w, deg);
  }
};

std::shared_ptr<const GroupContext> load_context(const std::string& spec_path) {
  return std::make_shared<const GroupContext>(context_from_json(read_json_file(spec_path)));
}

RunConfig load_config(const std::string& path) {
  if (path.empty()) return RunConfig{};
  return config_from_json(read_json_file(path));
}

void print_branch_text(const BranchReport& rep) {
  std::cout << "branch: " << to_string(rep.branch) << "\n";
  for (const auto& e : rep.evidence) std::cout << (e.pass ? "PASS " : "FAIL ") << e.name << "\n";
  std::cout << "complete: " << (rep.complete() ? "yes" : "no") << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Automorphisms of colored regular trees with almost prescribed local action"};
  app.require_subcommand(1);
  int exit_code = kExitOk;

  // group validate
  auto* group = app.add_subcommand("group", "permutation group input");
  group->require_subcommand(1);
  auto* validate = group->add_subcommand("validate", "check the hypotheses on (F, F')");
  std::string spec_path;
  bool relaxed = false;
  validate->add_option("spec", spec_path, "group spec JSON file")->required();
  validate->add_flag("--permuted-orbits", relaxed, "accept F' that only permutes the F-orbits");
  validate->callback([&] {
    const GroupSpec spec = group_spec_from_json(read_json_file(spec_path));
    const auto v = validate_inputs(spec, relaxed ? OrbitConvention::Permuted : OrbitConvention::Setwise);
    print(to_json(v.report));
    if (!v.report.valid()) exit_code = kExitInvalid;
  });

  // branch
  auto* branch = app.add_subcommand("branch", "decide the branch and gather evidence");
  std::string config_path;
  if (const char* env = std::getenv("TREEAUT_CONFIG")) config_path = env;
  std::optional<std::uint64_t> seed;
  std::string evidence_mode = "full", format = "json";
  branch->add_option("spec", spec_path, "group spec JSON file")->required();
  branch->add_option("--config", config_path, "run configuration JSON (default: $TREEAUT_CONFIG)");
  branch->add_option("--seed", seed, "random seed (overrides the config)");
  branch->add_option("--evidence", evidence_mode, "full or summary")->check(CLI::IsMember({"full", "summary"}));
  branch->add_option("--format", format, "json or text")->check(CLI::IsMember({"json", "text"}));
  branch->callback([&] {
    RunConfig cfg = load_config(config_path);
    if (seed) cfg.seed = *seed;
    const auto v = validate_inputs(group_spec_from_json(read_json_file(spec_path)));
    if (!v.ctx) {
      print(to_json(v.report));
      exit_code = kExitInvalid;
      return;
    }
    const BranchReport rep = branch_evidence(*v.ctx, cfg);
    if (format == "text")
      print_branch_text(rep);
    else
      print(to_json(rep, evidence_mode == "full"));
    if (!rep.complete()) exit_code = kExitIncomplete;
  });

  // element
  auto* element = app.add_subcommand("element", "build and inspect automorphisms");
  element->require_subcommand(1);
  ElementArgs el;
  std::string vertex_text = "e";
  int radius = 4;

  auto* el_build = element->add_subcommand("build", "parse an element and print its expression");
  el.attach(el_build);
  el_build->callback([&] {
    const Automorphism g = el.build();
    const Portrait p = g.eval(Vertex::base());
    print({{"element", g.to_json()}, {"base_image", p.image.to_string()}, {"base_sigma", p.sigma.to_cycle_string()}});
  });

  auto* el_classify = element->add_subcommand("classify", "elliptic, inversion or loxodromic");
  el.attach(el_classify);
  el_classify->callback([&] { print(to_json(classify(el.build()))); });

  auto* el_apply = element->add_subcommand("apply", "image and local permutation at a vertex");
  el.attach(el_apply);
  el_apply->add_option("--vertex", vertex_text, "vertex word (default e)");
  el_apply->callback([&] {
    const Portrait p = el.build().eval(Vertex::parse(vertex_text));
    print({{"vertex", vertex_text}, {"image", p.image.to_string()}, {"sigma", p.sigma.to_cycle_string()}});
  });

  auto* el_certify = element->add_subcommand("certify", "membership in G(F, F') on a ball");
  el.attach(el_certify);
  el_certify->add_option("--spec", spec_path, "group spec JSON file")->required();
  el_certify->add_option("--radius", radius, "ball radius");
  el_certify->callback([&] {
    const auto ctx = load_context(spec_path);
    print(to_json(certify_membership(el.build(), ctx->F(), ctx->Fp(), radius)));
  });

  // qm
  auto* qm = app.add_subcommand("qm", "median quasimorphisms");
  qm->require_subcommand(1);
  std::string qm_text;
  int limit = 0, count = 3, max_seg = 6, max_len = 8;
  bool disjoint = false;

  auto* qm_eval = qm->add_subcommand("eval", "signed count of translates along [v, g v]");
  qm_eval->add_option("--spec", spec_path, "group spec JSON file")->required();
  qm_eval->add_option("--qm", qm_text, "quasimorphism JSON, e.g. {\"segment\":{\"start\":\"e\",\"colors\":[1,2]}}")->required();
  qm_eval->add_flag("--disjoint", disjoint, "count non-overlapping occurrences only");
  el.attach(qm_eval);
  qm_eval->callback([&] {
    const auto ctx = load_context(spec_path);
    const MedianQM f = qm_from_json(ctx, json_arg(qm_text));
    print(to_json(eval(f, el.build(), disjoint ? Counting::Disjoint : Counting::Overlapping)));
  });

  auto* qm_hom = qm->add_subcommand("homogenize", "homogenization, optionally with the limit sequence");
  qm_hom->add_option("--spec", spec_path, "group spec JSON file")->required();
  qm_hom->add_option("--qm", qm_text, "quasimorphism JSON")->required();
  qm_hom->add_option("--limit", limit, "also print eval(g^n)/n for n = 1..N");
  el.attach(qm_hom);
  qm_hom->callback([&] {
    const auto ctx = load_context(spec_path);
    const MedianQM f = qm_from_json(ctx, json_arg(qm_text));
    const Automorphism g = el.build();
    const MoveClass cls = classify(g);
    json out{{"homogenization", homogenize(f, g, cls)}, {"class", to_json(cls)}};
    if (limit > 0) {
      json seq = json::array();
      for (const auto& q : homogenize_limit(f, g, limit)) seq.push_back(to_string(q));
      out["limit"] = seq;
    }
    print(out);
  });

  auto* qm_ind = qm->add_subcommand("independence", "rank certificate for a family of quasimorphisms");
  qm_ind->add_option("--spec", spec_path, "group spec JSON file")->required();
  qm_ind->add_option("--count", count, "number of quasimorphisms");
  qm_ind->add_option("--max-seg", max_seg, "segment length bound");
  qm_ind->add_option("--max-len", max_len, "word length bound");
  qm_ind->callback([&] {
    const auto ctx = load_context(spec_path);
    const auto cert = build_independence_family(ctx, count, max_seg, max_len, max_len);
    json out = to_json(cert);
    out["bounds"] = {{"count", count}, {"max_seg", max_seg}, {"max_len", max_len}};
    print(out);
    if (static_cast<int>(cert.rank) < count) exit_code = kExitIncomplete;
  });

  // chains
  auto* chains = app.add_subcommand("chains", "finite alternating chain complexes");
  chains->require_subcommand(1);
  std::string points_text;
  int max_degree = 3, degree = 2;

  auto* ch_exact = chains->add_subcommand("exactness", "exactness of the augmented complex on a point set");
  ch_exact->add_option("--points", points_text, "comma-separated vertices")->required();
  ch_exact->add_option("--max-degree", max_degree, "top degree checked");
  ch_exact->callback([&] {
    const auto rep = exactness_report({parse_points(points_text), max_degree});
    print({{"exact", rep.exact}, {"dims", rep.dims}, {"ranks", rep.ranks}});
    if (!rep.exact) exit_code = kExitIncomplete;
  });

  auto* ch_aligned = chains->add_subcommand("aligned", "aligned basis and boundary closure");
  ch_aligned->add_option("--points", points_text, "comma-separated vertices")->required();
  ch_aligned->add_option("--degree", degree, "chain degree");
  ch_aligned->callback([&] {
    const ComplexWindow w{parse_points(points_text), std::max(degree, 0)};
    json basis = json::array();
    for (const auto& t : aligned_basis(w, degree)) basis.push_back(tuple_to_json(t));
    print({{"degree", degree}, {"aligned_basis", basis}, {"closed", aligned_closure_check(w, degree)}});
  });

  auto* ch_restrict = chains->add_subcommand("restriction", "transport aligned tuples into the line");
  ch_restrict->add_option("--spec", spec_path, "group spec JSON file")->required();
  ch_restrict->add_option("--radius", radius, "window radius");
  ch_restrict->add_option("--degree", degree, "tuple degree n (tuples of n+1 vertices)");
  ch_restrict->callback([&] {
    const auto ctx = load_context(spec_path);
    const LineBuild lb = build_line(*ctx, Vertex::base());
    const auto rep = restriction_correspondence_check(*ctx, lb.line, lb.rot, radius, degree);
    json fails = json::array();
    for (const auto& f : rep.failures) fails.push_back({{"tuple", tuple_to_json(f.tuple)}, {"reason", f.reason}});
    print({{"line", to_json(lb.line)},
           {"tuples", rep.tuples},
           {"transported", rep.transported},
           {"consistent", rep.consistent},
           {"failures", fails}});
    if (!rep.failures.empty()) exit_code = kExitIncomplete;
  });

  // tree
  auto* tree = app.add_subcommand("tree", "the colored tree");
  tree->require_subcommand(1);
  int d = 3;
  std::string center = "e";
  int tree_radius = 2;

  auto* tr_dot = tree->add_subcommand("dot", "Graphviz export of a ball");
  tr_dot->add_option("--d", d, "degree");
  tr_dot->add_option("--radius", tree_radius, "ball radius");
  tr_dot->add_option("--center", center, "center vertex");
  tr_dot->callback([&] {
    const auto verts = ball(Vertex::parse(center), tree_radius, d);
    std::cout << "graph T {\n";
    for (const auto& v : verts) std::cout << "  \"" << v.to_string() << "\";\n";
    for (std::size_t i = 1; i < verts.size(); ++i) {
      const Vertex& v = verts[i];
      const Vertex u = geodesic(Vertex::parse(center), v).vertices().rbegin()[1];
      const Color c = EdgeRef::between(u, v).color;
      std::cout << "  \"" << u.to_string() << "\" -- \"" << v.to_string() << "\" [label=" << c << "];\n";
    }
    std::cout << "}\n";
  });

  auto* tr_ball = tree->add_subcommand("ball", "vertices of a ball");
  tr_ball->add_option("--d", d, "degree");
  tr_ball->add_option("--radius", tree_radius, "ball radius");
  tr_ball->add_option("--center", center, "center vertex");
  tr_ball->callback([&] {
    json verts = json::array();
    for (const auto& v : ball(Vertex::parse(center), tree_radius, d)) verts.push_back(v.to_string());
    print({{"center", center}, {"radius", tree_radius}, {"d", d}, {"size", verts.size()}, {"vertices", verts}});
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitInvalid;
  } catch (const Error& e) {
    std::cerr << "treeaut: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "treeaut: " << e.what() << "\n";
    return kExitInvalid;
  }
  return exit_code;
}
