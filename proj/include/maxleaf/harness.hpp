#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "digraph.hpp"
#include "gadgets.hpp"
#include "rules.hpp"
#include "solver.hpp"

namespace maxleaf {

// Randomized verification battery: generates seeded instances across a few
// structure families, applies each rule once, and checks against the exact
// solver that the achievable leaf counts did not move. A deliberately broken
// Rule 4 variant is built in as a negative control so the battery itself
// stays honest.

enum class GenStructure { Random, RandomReachable, BidirPath, Willow };

/// What n means depends on the structure: vertex count for Random, random
/// part size for RandomReachable (a fresh root is added on top), desired path
/// length (clamped to 7..8) for BidirPath, and a loose size hint for Willow.
struct GenSpec {
  int n = 6;
  double arc_probability = 0.3;
  std::uint64_t seed = 1;
  GenStructure structure = GenStructure::Random;
};

struct GeneratedInstance {
  Digraph graph;
  Vertex root = 0;
};

namespace detail {

/// Deterministic helpers over the standard-specified mt19937_64 stream, so
/// identical seeds give identical instances on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  std::uint64_t next() { return eng_(); }
  int below(int n) { return static_cast<int>(next() % static_cast<std::uint64_t>(n)); }
  bool chance(double p) { return static_cast<double>(next() >> 11) * 0x1.0p-53 < p; }

 private:
  std::mt19937_64 eng_;
};

inline GeneratedInstance gen_random(int n, double p, Rng& rng) {
  Digraph g;
  if (n < 1) n = 1;
  for (Vertex v = 1; v <= n; ++v) g.add_vertex(v);
  for (Vertex u = 1; u <= n; ++u)
    for (Vertex v = 1; v <= n; ++v)
      if (u != v && rng.chance(p)) g.add_arc(u, v);
  return {std::move(g), 1};
}

inline GeneratedInstance gen_random_reachable(int n, double p, Rng& rng) {
  GeneratedInstance gi = gen_random(n, p, rng);
  Vertex root = gi.graph.fresh_vertex();
  gi.graph.add_vertex(root);
  while (true) {
    std::set<Vertex> seen = reachable_from(gi.graph, root);
    if (seen.size() == gi.graph.vertex_count()) break;
    std::vector<Vertex> missing;
    for (Vertex v : gi.graph.vertices())
      if (!seen.count(v)) missing.push_back(v);
    gi.graph.add_arc(root, missing[static_cast<std::size_t>(rng.below(static_cast<int>(missing.size())))]);
  }
  gi.root = root;
  return gi;
}

inline GeneratedInstance gen_bidir_path(int n, Rng& rng) {
  int l = n < 7 ? 7 : (n > 8 ? 8 : n);
  Digraph g;
  for (Vertex v = 1; v <= l + 2; ++v) g.add_vertex(v);
  Vertex root = l + 1, sink = l + 2;
  for (Vertex i = 1; i < l; ++i) {
    g.add_arc(i, i + 1);
    g.add_arc(i + 1, i);
  }
  g.add_arc(root, 1);
  g.add_arc(l, sink);
  switch (rng.below(4)) {  // second external entry
    case 0: g.add_arc(root, l); break;
    case 1: g.add_arc(root, l - 1); break;
    default: break;
  }
  switch (rng.below(4)) {  // second external exit
    case 0: g.add_arc(1, sink); break;
    case 1: g.add_arc(2, sink); break;
    default: break;
  }
  // occasional spoilers that break one of the matching conditions
  if (rng.chance(0.15)) g.add_arc(root, 4);
  if (rng.chance(0.15)) g.add_arc(5, sink);
  if (rng.chance(0.10)) g.add_arc(2, 4);
  return {std::move(g), root};
}

inline GeneratedInstance gen_willow(int n, Rng& rng) {
  SetCoverInstance sc;
  sc.universe_size = n >= 8 ? 2 : 1;
  sc.family.resize(3);
  sc.bound = 1;
  for (auto& s : sc.family)
    for (int e = 1; e <= sc.universe_size; ++e)
      if (rng.chance(0.5)) s.insert(e);
  for (int e = 1; e <= sc.universe_size; ++e) {
    bool covered = false;
    for (const auto& s : sc.family) covered = covered || s.count(e);
    if (!covered) sc.family[static_cast<std::size_t>(rng.below(3))].insert(e);
  }
  WillowReduction wr = set_cover_to_willow(sc);
  Vertex top = wr.willow.top();
  return {std::move(wr.willow.graph), top};
}

}  // namespace detail

/// Deterministic instance generator: equal specs yield equal instances.
inline GeneratedInstance generate(const GenSpec& spec) {
  detail::Rng rng(spec.seed);
  switch (spec.structure) {
    case GenStructure::Random: return detail::gen_random(spec.n, spec.arc_probability, rng);
    case GenStructure::RandomReachable:
      return detail::gen_random_reachable(spec.n, spec.arc_probability, rng);
    case GenStructure::BidirPath: return detail::gen_bidir_path(spec.n, rng);
    case GenStructure::Willow: return detail::gen_willow(spec.n, rng);
  }
  throw std::invalid_argument("unknown structure");
}

enum class RuleMutation { None, Rule4AllowVInS };

inline const char* mutation_name(RuleMutation m) {
  return m == RuleMutation::None ? "none" : "rule4-v-in-s";
}

struct SafenessReport {
  long long trials = 0;
  int max_n = 0;
  std::uint64_t seed = 0;
  RuleMutation mutation = RuleMutation::None;
  std::map<RuleId, long long> applications;
  long long violations = 0;
  std::vector<std::string> samples;  // first few violation descriptions
};

namespace detail {

/// Negative control: Rule 4 with the "v not in S" side condition dropped.
/// Every set containing v trivially "separates" v, so this deletes arcs it
/// must not; the battery is expected to flag it.
inline std::optional<RuleApplication> apply_rule4_allow_v_in_s(const RootedInstance& inst) {
  validate_instance(inst);
  for (const Arc& a : inst.graph.arcs()) {
    Vertex v = a.tail, w = a.head;
    if (v == inst.root) continue;
    std::vector<Vertex> cand;
    for (Vertex x : inst.graph.in_neighbors(w))
      if (x != inst.root) cand.push_back(x);  // v deliberately not excluded
    auto matches = [&](const std::set<Vertex>& s) {
      if (s.count(v)) return true;  // the broken case the control exists for
      return is_separator(inst.graph, inst.root, s, v);
    };
    std::optional<std::set<Vertex>> found;
    for (std::size_t i = 0; i < cand.size() && !found; ++i)
      if (matches({cand[i]})) found = std::set<Vertex>{cand[i]};
    for (std::size_t i = 0; i < cand.size() && !found; ++i)
      for (std::size_t j = i + 1; j < cand.size() && !found; ++j)
        if (matches({cand[i], cand[j]})) found = std::set<Vertex>{cand[i], cand[j]};
    if (found) {
      RootedInstance next = inst;
      next.graph.remove_arc(v, w);
      RuleEvent ev;
      ev.rule = RuleId::AvoidableArc;
      ev.arc = a;
      ev.separator.assign(found->begin(), found->end());
      return RuleApplication{std::move(next), std::move(ev)};
    }
  }
  return std::nullopt;
}

inline std::string leaf_str(const std::optional<MaxLeafResult>& r) {
  return r ? std::to_string(r->leaves) : std::string("none");
}

}  // namespace detail

/// Runs `trials` seeded instances (random part capped at max_n vertices,
/// structured fixtures slightly larger), applies every rule once wherever it
/// fires, and cross-checks achievable leaf counts with the exact solver for
/// both problem variants. Solver disagreements are reported, never thrown.
inline SafenessReport verify_rule_safeness(long long trials, int max_n, std::uint64_t seed,
                                           RuleMutation mutation = RuleMutation::None) {
  if (max_n < 4 || static_cast<std::size_t>(max_n) > kDefaultSolverBound)
    throw std::invalid_argument("verify_rule_safeness: max_n must be in 4..12");
  SafenessReport rep;
  rep.trials = trials;
  rep.max_n = max_n;
  rep.seed = seed;
  rep.mutation = mutation;
  detail::Rng master(seed);

  auto note = [&](RuleId rule, const GenSpec& spec, const std::string& what) {
    ++rep.violations;
    if (rep.samples.size() < 10) {
      std::ostringstream os;
      os << "rule " << rule_name(rule) << " structure " << static_cast<int>(spec.structure)
         << " seed " << spec.seed << ": " << what;
      rep.samples.push_back(os.str());
    }
  };

  for (long long t = 0; t < trials; ++t) {
    GenSpec spec;
    int pick = master.below(10);
    spec.structure = pick < 4   ? GenStructure::Random
                     : pick < 7 ? GenStructure::RandomReachable
                     : pick < 9 ? GenStructure::BidirPath
                                : GenStructure::Willow;
    int span = spec.structure == GenStructure::RandomReachable ? max_n - 2 : max_n - 1;
    spec.n = 2 + master.below(span);
    spec.arc_probability = std::vector<double>{0.15, 0.3, 0.5}[static_cast<std::size_t>(master.below(3))];
    spec.seed = master.next();
    GeneratedInstance gi = generate(spec);

    // Rule 1, both variants, against the exact solver.
    RootedInstance base{gi.graph, gi.root, 1, Variant::Branching};
    Rule1Outcome r1 = apply_rule1(base);
    Digraph core = gi.graph;
    if (r1.kind != Rule1Outcome::Kind::NotApplicable) {
      rep.applications[RuleId::Reachability]++;
      if (max_leaf_out_branching(gi.graph, gi.root))
        note(RuleId::Reachability, spec, "No verdict on an instance with an out-branching");
      RootedInstance tree_inst{gi.graph, gi.root, 1, Variant::Tree};
      Rule1Outcome r1t = apply_rule1(tree_inst);
      core = r1t.removal->next.graph;
      int before = max_leaf_out_tree(gi.graph, gi.root).leaves;
      int after = max_leaf_out_tree(core, gi.root).leaves;
      if (before != after)
        note(RuleId::Reachability, spec,
             "tree max-leaf moved " + std::to_string(before) + " -> " + std::to_string(after));
    }

    // Rules 2..5 run on the reachable core, matching the driver contract.
    RootedInstance reached{core, gi.root, 1, Variant::Branching};
    std::optional<MaxLeafResult> before_b = max_leaf_out_branching(core, gi.root);
    int before_t = max_leaf_out_tree(core, gi.root).leaves;

    struct NamedRule {
      RuleId id;
      std::optional<RuleApplication> (*fn)(const RootedInstance&);
    };
    const NamedRule rules[] = {
        {RuleId::UselessArc, &apply_rule2},
        {RuleId::Bridge, &apply_rule3},
        {RuleId::AvoidableArc, mutation == RuleMutation::Rule4AllowVInS
                                   ? &detail::apply_rule4_allow_v_in_s
                                   : &apply_rule4},
        {RuleId::TwoDirectionalPath, &apply_rule5},
    };
    for (const NamedRule& rule : rules) {
      std::optional<RuleApplication> app = rule.fn(reached);
      if (!app) continue;
      rep.applications[rule.id]++;
      std::optional<MaxLeafResult> after_b =
          max_leaf_out_branching(app->next.graph, app->next.root);
      if (before_b.has_value() != after_b.has_value() ||
          (before_b && before_b->leaves != after_b->leaves))
        note(rule.id, spec,
             "branching max-leaf moved " + detail::leaf_str(before_b) + " -> " +
                 detail::leaf_str(after_b));
      int after_t = max_leaf_out_tree(app->next.graph, app->next.root).leaves;
      if (before_t != after_t)
        note(rule.id, spec,
             "tree max-leaf moved " + std::to_string(before_t) + " -> " + std::to_string(after_t));
    }
  }
  return rep;
}

inline std::string format_report(const SafenessReport& rep) {
  std::ostringstream os;
  os << "trials " << rep.trials << "\n";
  os << "max-n " << rep.max_n << "\n";
  os << "seed " << rep.seed << "\n";
  os << "mutation " << mutation_name(rep.mutation) << "\n";
  for (RuleId id : {RuleId::Reachability, RuleId::UselessArc, RuleId::Bridge,
                    RuleId::AvoidableArc, RuleId::TwoDirectionalPath}) {
    auto it = rep.applications.find(id);
    os << "applications " << rule_name(id) << " " << (it == rep.applications.end() ? 0 : it->second)
       << "\n";
  }
  os << "violations " << rep.violations << "\n";
  for (const std::string& s : rep.samples) os << "violation " << s << "\n";
  return os.str();
}

}  // namespace maxleaf
