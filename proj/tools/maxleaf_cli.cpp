#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "maxleaf/digraph.hpp"
#include "maxleaf/gadgets.hpp"
#include "maxleaf/harness.hpp"
#include "maxleaf/io.hpp"
#include "maxleaf/kernel.hpp"
#include "maxleaf/rules.hpp"
#include "maxleaf/solver.hpp"

namespace {

using nlohmann::json;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

maxleaf::Variant to_variant(const std::string& s) {
  return s == "tree" ? maxleaf::Variant::Tree : maxleaf::Variant::Branching;
}

const char* verdict_name(maxleaf::KernelOutcome::Verdict v) {
  switch (v) {
    case maxleaf::KernelOutcome::Verdict::Yes: return "YES";
    case maxleaf::KernelOutcome::Verdict::No: return "NO";
    default: return "REDUCED";
  }
}

// resolves an option that may come from the command line or from the file
template <typename T>
T require_value(const std::optional<T>& cli, const std::optional<T>& file, const char* what,
                const char* hint) {
  if (cli) return *cli;
  if (file) return *file;
  throw std::runtime_error(std::string("no ") + what + ": " + hint);
}

json event_to_json(const maxleaf::RuleEvent& e) {
  json j;
  j["rule"] = maxleaf::rule_name(e.rule);
  switch (e.rule) {
    case maxleaf::RuleId::Reachability:
      j["removed"] = e.removed;
      break;
    case maxleaf::RuleId::UselessArc:
      j["arc"] = {e.arc.tail, e.arc.head};
      break;
    case maxleaf::RuleId::Bridge:
      j["arc"] = {e.arc.tail, e.arc.head};
      j["merged"] = e.merged;
      break;
    case maxleaf::RuleId::AvoidableArc:
      j["arc"] = {e.arc.tail, e.arc.head};
      j["separator"] = e.separator;
      break;
    case maxleaf::RuleId::TwoDirectionalPath:
      j["path"] = e.path;
      j["path_in"] = e.path_in;
      j["path_out"] = e.path_out;
      j["gadget_u"] = e.gadget_u;
      j["gadget_v"] = e.gadget_v;
      break;
  }
  return j;
}

struct KernelizeArgs {
  std::string file;
  std::string variant;
  std::optional<int> root;
  std::optional<int> k;
  bool as_json = false;
};

int cmd_kernelize(const KernelizeArgs& a) {
  maxleaf::ParsedDigraph parsed = maxleaf::parse_digraph(read_file(a.file));
  maxleaf::RootedInstance inst{
      parsed.graph,
      require_value(a.root, parsed.root, "root", "pass --root or add an r line"),
      require_value(a.k, parsed.k, "target", "pass -k or add a k line"),
      to_variant(a.variant)};
  maxleaf::KernelOutcome out = maxleaf::kernelize_rooted(inst);

  std::optional<maxleaf::Normalized> norm;
  std::map<maxleaf::Vertex, maxleaf::Vertex> id_map;  // original id -> kernel id
  if (out.reduced) {
    norm = maxleaf::normalize_ids(out.reduced->graph);
    for (const auto& [orig, current] : out.trace.id_map)
      id_map[orig] = norm->to_normal.at(current);
  }

  if (a.as_json) {
    json j;
    j["verdict"] = verdict_name(out.verdict);
    j["size_bound"] = out.size_bound_used;
    j["rule_applications"] = out.trace.events.size();
    j["events"] = json::array();
    for (const auto& e : out.trace.events) j["events"].push_back(event_to_json(e));
    j["kernel"] = nullptr;
    if (out.reduced) {
      json id_json = json::object();
      for (const auto& [orig, kid] : id_map) id_json[std::to_string(orig)] = kid;
      j["kernel"] = {{"vertices", norm->graph.vertex_count()},
                     {"arcs", norm->graph.arc_count()},
                     {"root", norm->to_normal.at(out.reduced->root)},
                     {"k", out.reduced->k},
                     {"id_map", id_json},
                     {"text", maxleaf::serialize_digraph(
                                  norm->graph, norm->to_normal.at(out.reduced->root),
                                  out.reduced->k)}};
    }
    std::cout << j.dump(2) << "\n";
    return 0;
  }

  std::cout << "verdict " << verdict_name(out.verdict) << "\n";
  std::cout << "size-bound " << out.size_bound_used << "\n";
  std::cout << "rule-applications " << out.trace.events.size() << "\n";
  if (out.reduced) {
    std::cout << "kernel-vertices " << norm->graph.vertex_count() << "\n";
    std::cout << "kernel-arcs " << norm->graph.arc_count() << "\n";
    for (const auto& [orig, kid] : id_map) std::cout << "map " << orig << " " << kid << "\n";
    std::cout << maxleaf::serialize_digraph(norm->graph, norm->to_normal.at(out.reduced->root),
                                            out.reduced->k);
  }
  return 0;
}

struct SolveArgs {
  std::string file;
  std::string variant = "branching";
  std::optional<int> root;
  std::optional<int> k;
  int bound = static_cast<int>(maxleaf::kDefaultSolverBound);
  bool as_json = false;
};

int cmd_solve(const SolveArgs& a) {
  maxleaf::ParsedDigraph parsed = maxleaf::parse_digraph(read_file(a.file));
  maxleaf::Variant variant = to_variant(a.variant);
  std::optional<int> k = a.k ? a.k : parsed.k;
  std::optional<int> root = a.root ? a.root : parsed.root;

  std::vector<maxleaf::Vertex> roots;
  if (root) {
    if (!parsed.graph.has_vertex(*root)) throw std::runtime_error("root is not a vertex");
    roots.push_back(*root);
  } else {
    roots = parsed.graph.vertices();
  }

  std::size_t bound = static_cast<std::size_t>(a.bound);
  std::optional<int> best;
  std::vector<std::pair<maxleaf::Vertex, std::optional<int>>> rows;
  for (maxleaf::Vertex r : roots) {
    std::optional<int> leaves;
    if (variant == maxleaf::Variant::Tree) {
      leaves = maxleaf::max_leaf_out_tree(parsed.graph, r, bound).leaves;
    } else if (auto res = maxleaf::max_leaf_out_branching(parsed.graph, r, bound)) {
      leaves = res->leaves;
    }
    rows.emplace_back(r, leaves);
    if (leaves && (!best || *leaves > *best)) best = leaves;
  }

  if (a.as_json) {
    json j;
    j["variant"] = a.variant;
    j["k"] = nullptr;
    if (k) j["k"] = *k;
    j["roots"] = json::array();
    for (const auto& [r, leaves] : rows)
      j["roots"].push_back({{"root", r}, {"leaves", leaves ? json(*leaves) : json(nullptr)}});
    j["best"] = best ? json(*best) : json(nullptr);
    j["decision"] = nullptr;
    if (k) j["decision"] = best && *best >= *k;
    std::cout << j.dump(2) << "\n";
    return 0;
  }

  for (const auto& [r, leaves] : rows) {
    std::cout << "root " << r << " leaves ";
    if (leaves)
      std::cout << *leaves << "\n";
    else
      std::cout << "none\n";
  }
  std::cout << "best ";
  if (best)
    std::cout << *best << "\n";
  else
    std::cout << "none\n";
  if (k) std::cout << "decision " << (best && *best >= *k ? "yes" : "no") << "\n";
  return 0;
}

struct TuringArgs {
  std::string file;
  std::string variant = "branching";
  int k = 0;
  int bound = static_cast<int>(maxleaf::kDefaultSolverBound);
  bool as_json = false;
};

int cmd_turing(const TuringArgs& a) {
  maxleaf::ParsedDigraph parsed = maxleaf::parse_digraph(read_file(a.file));
  maxleaf::Variant variant = to_variant(a.variant);
  auto outcomes = maxleaf::turing_kernelize(parsed.graph, a.k, variant);

  bool answer = false;
  for (const auto& [root, out] : outcomes) {
    if (out.verdict == maxleaf::KernelOutcome::Verdict::Yes)
      answer = true;
    else if (out.verdict == maxleaf::KernelOutcome::Verdict::Reduced &&
             maxleaf::decide(*out.reduced, static_cast<std::size_t>(a.bound)))
      answer = true;
  }

  if (a.as_json) {
    json j;
    j["k"] = a.k;
    j["variant"] = a.variant;
    j["roots"] = json::array();
    for (const auto& [root, out] : outcomes) {
      json row = {{"root", root}, {"verdict", verdict_name(out.verdict)}};
      row["kernel_vertices"] =
          out.reduced ? json(out.reduced->graph.vertex_count()) : json(nullptr);
      j["roots"].push_back(row);
    }
    j["answer"] = answer;
    std::cout << j.dump(2) << "\n";
    return 0;
  }

  for (const auto& [root, out] : outcomes) {
    std::cout << "root " << root << " verdict " << verdict_name(out.verdict);
    if (out.reduced) std::cout << " kernel-vertices " << out.reduced->graph.vertex_count();
    std::cout << "\n";
  }
  std::cout << "answer " << (answer ? "yes" : "no") << "\n";
  return 0;
}

struct GadgetSetCoverArgs {
  std::string file;
  bool as_json = false;
};

int cmd_gadget_set_cover(const GadgetSetCoverArgs& a) {
  maxleaf::SetCoverInstance sc = maxleaf::parse_set_cover(read_file(a.file));
  maxleaf::WillowReduction red = maxleaf::set_cover_to_willow(sc);
  std::string text = maxleaf::serialize_digraph(red.willow.graph, red.willow.top(),
                                                red.target_leaves);
  if (a.as_json) {
    json j;
    j["universe"] = sc.universe_size;
    j["sets"] = sc.family.size();
    j["bound"] = sc.bound;
    j["target_leaves"] = red.target_leaves;
    j["root"] = red.willow.top();
    j["text"] = text;
    std::cout << j.dump(2) << "\n";
    return 0;
  }
  std::cout << "c set-cover universe " << sc.universe_size << " sets " << sc.family.size()
            << " bound " << sc.bound << "\n";
  std::cout << "c target-leaves " << red.target_leaves << "\n";
  std::cout << text;
  return 0;
}

struct GadgetChainArgs {
  std::vector<std::string> files;
  bool as_json = false;
};

int cmd_gadget_chain(const GadgetChainArgs& a) {
  std::vector<maxleaf::WillowGraph> willows;
  int b_max = 0;
  std::vector<int> bounds;
  for (const std::string& f : a.files) {
    maxleaf::SetCoverInstance sc = maxleaf::parse_set_cover(read_file(f));
    willows.push_back(maxleaf::set_cover_to_willow(sc).willow);
    bounds.push_back(sc.bound);
    b_max = std::max(b_max, sc.bound);
  }
  for (std::size_t i = 0; i < willows.size(); ++i)
    willows[i] = maxleaf::pad_willow(willows[i], bounds[i], b_max);
  auto [chain, k] = maxleaf::build_willow_chain(willows, b_max);
  std::string text = maxleaf::serialize_digraph(chain, {}, k);
  if (a.as_json) {
    json j;
    j["willows"] = willows.size();
    j["b_max"] = b_max;
    j["k"] = k;
    j["text"] = text;
    std::cout << j.dump(2) << "\n";
    return 0;
  }
  std::cout << "c willow-chain parts " << willows.size() << " b-max " << b_max << "\n";
  std::cout << text;
  return 0;
}

struct VerifyArgs {
  long long trials = 1000;
  int max_n = 8;
  std::uint64_t seed = 1;
  std::string mutate = "none";
  bool as_json = false;
};

int cmd_verify(const VerifyArgs& a) {
  maxleaf::RuleMutation mutation = a.mutate == "rule4-v-in-s"
                                       ? maxleaf::RuleMutation::Rule4AllowVInS
                                       : maxleaf::RuleMutation::None;
  maxleaf::SafenessReport rep = maxleaf::verify_rule_safeness(a.trials, a.max_n, a.seed, mutation);
  if (a.as_json) {
    json j;
    j["trials"] = rep.trials;
    j["max_n"] = rep.max_n;
    j["seed"] = rep.seed;
    j["mutation"] = maxleaf::mutation_name(rep.mutation);
    json apps = json::object();
    for (const auto& [id, count] : rep.applications) apps[maxleaf::rule_name(id)] = count;
    j["applications"] = apps;
    j["violations"] = rep.violations;
    j["samples"] = rep.samples;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << maxleaf::format_report(rep);
  }
  return rep.violations == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"max-leaf out-branching kernelization toolkit"};
  app.require_subcommand(1);
  std::function<int()> run;

  KernelizeArgs kz;
  auto* kernelize = app.add_subcommand(
      "kernelize", "reduce a rooted instance to a fixpoint and apply the cubic size threshold");
  kernelize->add_option("file", kz.file, "digraph file")->required();
  kernelize->add_option("--variant", kz.variant, "problem variant")
      ->required()
      ->check(CLI::IsMember({"branching", "tree"}));
  kernelize->add_option("--root", kz.root, "root vertex (overrides the file's r line)");
  kernelize->add_option("-k,--target", kz.k, "leaf target (overrides the file's k line)");
  kernelize->add_flag("--json", kz.as_json, "machine-readable output");
  kernelize->callback([&] { run = [&] { return cmd_kernelize(kz); }; });

  SolveArgs sv;
  auto* solve = app.add_subcommand("solve", "exact max-leaf search by brute force");
  solve->add_option("file", sv.file, "digraph file")->required();
  solve->add_option("--variant", sv.variant, "problem variant")
      ->check(CLI::IsMember({"branching", "tree"}));
  solve->add_option("--root", sv.root, "root vertex (default: every vertex)");
  solve->add_option("-k,--target", sv.k, "leaf target to decide against");
  solve->add_option("--bound", sv.bound, "largest vertex count the search accepts")
      ->check(CLI::Range(1, 24));
  solve->add_flag("--json", sv.as_json, "machine-readable output");
  solve->callback([&] { run = [&] { return cmd_solve(sv); }; });

  TuringArgs tu;
  auto* turing = app.add_subcommand("turing", "per-root kernelization of an unrooted instance");
  turing->add_option("file", tu.file, "digraph file")->required();
  turing->add_option("-k,--target", tu.k, "leaf target")->required()->check(CLI::Range(1, 1000));
  turing->add_option("--variant", tu.variant, "problem variant")
      ->check(CLI::IsMember({"branching", "tree"}));
  turing->add_option("--bound", tu.bound, "solver bound for finishing reduced kernels")
      ->check(CLI::Range(1, 24));
  turing->add_flag("--json", tu.as_json, "machine-readable output");
  turing->callback([&] { run = [&] { return cmd_turing(tu); }; });

  auto* gadget = app.add_subcommand("gadget", "lower-bound constructions");
  gadget->require_subcommand(1);

  GadgetSetCoverArgs gsc;
  auto* set_cover = gadget->add_subcommand(
      "set-cover", "embed a set cover instance into a rooted willow digraph");
  set_cover->add_option("file", gsc.file, "set cover file (header 'n m b', one line per set)")
      ->required();
  set_cover->add_flag("--json", gsc.as_json, "machine-readable output");
  set_cover->callback([&] { run = [&] { return cmd_gadget_set_cover(gsc); }; });

  GadgetChainArgs gch;
  auto* chain = gadget->add_subcommand(
      "chain", "pad willows to a common bound and close them into a cycle");
  chain->add_option("files", gch.files, "set cover files, one willow each")->required();
  chain->add_flag("--json", gch.as_json, "machine-readable output");
  chain->callback([&] { run = [&] { return cmd_gadget_chain(gch); }; });

  VerifyArgs vf;
  auto* verify = app.add_subcommand("verify", "randomized rule-safeness battery");
  verify->add_option("--trials", vf.trials, "number of generated instances")
      ->check(CLI::Range(0LL, 1000000LL));
  verify->add_option("--max-n", vf.max_n, "vertex cap for generated instances")
      ->check(CLI::Range(4, 12));
  verify->add_option("--seed", vf.seed, "master seed");
  verify->add_option("--mutate", vf.mutate, "inject a deliberately broken rule variant")
      ->check(CLI::IsMember({"none", "rule4-v-in-s"}));
  verify->add_flag("--json", vf.as_json, "machine-readable output");
  verify->callback([&] { run = [&] { return cmd_verify(vf); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "maxleaf: " << e.what() << "\n";
    return 2;
  }

  try {
    return run();
  } catch (const std::exception& e) {
    std::cerr << "maxleaf: " << e.what() << "\n";
    return 1;
  }
}
