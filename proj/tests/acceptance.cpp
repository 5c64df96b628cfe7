// Acceptance battery: one PASS/FAIL line per criterion, exit 0 iff all pass.
// Every check pits the library against the independent full-rejection oracle
// in oracles.hpp or against exhaustively enumerated ground truth.

#include <cstdint>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "maxleaf/digraph.hpp"
#include "maxleaf/gadgets.hpp"
#include "maxleaf/harness.hpp"
#include "maxleaf/io.hpp"
#include "maxleaf/kernel.hpp"
#include "maxleaf/rules.hpp"
#include "maxleaf/solver.hpp"
#include "oracles.hpp"

namespace {

using maxleaf::Digraph;
using maxleaf::GenSpec;
using maxleaf::GenStructure;
using maxleaf::RootedInstance;
using maxleaf::Variant;
using maxleaf::Vertex;

struct Line {
  bool pass = false;
  std::string detail;
};

GenSpec corpus_spec(maxleaf::detail::Rng& rng, int max_n) {
  GenSpec spec;
  int pick = rng.below(10);
  spec.structure = pick < 4   ? GenStructure::Random
                   : pick < 7 ? GenStructure::RandomReachable
                   : pick < 9 ? GenStructure::BidirPath
                              : GenStructure::Willow;
  int span = spec.structure == GenStructure::RandomReachable ? max_n - 2 : max_n - 1;
  spec.n = 2 + rng.below(span);
  spec.arc_probability = std::vector<double>{0.15, 0.3, 0.5}[static_cast<std::size_t>(rng.below(3))];
  spec.seed = rng.next();
  return spec;
}

bool oracle_decides(const Digraph& g, Vertex root, int k, Variant variant) {
  if (variant == Variant::Tree) return oracle::max_leaf_out_tree(g, root) >= k;
  auto best = oracle::max_leaf_out_branching(g, root);
  return best && *best >= k;
}

// 1. Zero safeness violations over >= 10^4 seeded instances, every rule
//    firing at least 50 times (the corpus includes the rule 5 fixtures).
Line criterion_rule_safeness() {
  auto rep = maxleaf::verify_rule_safeness(10000, 8, 20260818);
  long long min_apps = -1;
  for (maxleaf::RuleId id :
       {maxleaf::RuleId::Reachability, maxleaf::RuleId::UselessArc, maxleaf::RuleId::Bridge,
        maxleaf::RuleId::AvoidableArc, maxleaf::RuleId::TwoDirectionalPath}) {
    auto it = rep.applications.find(id);
    long long n = it == rep.applications.end() ? 0 : it->second;
    if (min_apps < 0 || n < min_apps) min_apps = n;
  }
  std::ostringstream os;
  os << "trials " << rep.trials << " violations " << rep.violations << " min-rule-applications "
     << min_apps;
  return {rep.violations == 0 && min_apps >= 50, os.str()};
}

// 2. Fixpoint runs terminate with (|V|,|A|) strictly lex-decreasing per step,
//    no rule fires on the output, and trace replay reproduces it exactly.
Line criterion_fixpoint() {
  maxleaf::detail::Rng rng(7151623);
  long long runs = 0, steps = 0;
  for (int t = 0; t < 400; ++t) {
    auto gi = maxleaf::generate(corpus_spec(rng, 8));
    Variant variant = t % 2 ? Variant::Tree : Variant::Branching;
    RootedInstance inst{gi.graph, gi.root, 1 + t % 3, variant};

    RootedInstance cur = inst;
    bool no_verdict = false;
    for (int guard = 0;; ++guard) {
      if (guard > 400) return {false, "step guard tripped"};
      maxleaf::ReduceStep step = maxleaf::reduce_step(cur);
      if (step.status == maxleaf::ReduceStep::Status::Fixpoint) break;
      if (step.status == maxleaf::ReduceStep::Status::NoVerdict) {
        no_verdict = true;
        break;
      }
      const Digraph& next = step.application->next.graph;
      auto before = std::pair(cur.graph.vertex_count(), cur.graph.arc_count());
      auto after = std::pair(next.vertex_count(), next.arc_count());
      if (after >= before) return {false, "a step failed to shrink (|V|,|A|)"};
      cur = step.application->next;
      ++steps;
    }

    maxleaf::ReduceResult red = maxleaf::reduce_to_fixpoint(inst);
    if (red.instance.has_value() == no_verdict) return {false, "driver disagrees with step loop"};
    if (red.instance) {
      if (!(red.instance->graph == cur.graph)) return {false, "driver output differs from steps"};
      if (maxleaf::reduce_step(*red.instance).status != maxleaf::ReduceStep::Status::Fixpoint)
        return {false, "a rule still fires on the reduced instance"};
    }
    std::optional<Digraph> replayed = maxleaf::replay_trace(inst, red.trace);
    if (red.instance) {
      if (!replayed || !(*replayed == red.instance->graph))
        return {false, "trace replay does not reproduce the output"};
    } else if (replayed) {
      return {false, "trace replay ignored a No verdict"};
    }
    ++runs;
  }
  std::ostringstream os;
  os << "runs " << runs << " applications " << steps;
  return {true, os.str()};
}

// 3. Rooted kernelization decides exactly like the direct oracle on every
//    small instance, and the cubic threshold is the advertised arithmetic.
Line criterion_rooted_kernel() {
  if (maxleaf::kernel_size_bound(1) != 1540 || maxleaf::kernel_size_bound(2) != 12320 ||
      maxleaf::kernel_size_bound(3) != 41580 || maxleaf::kernel_size_bound(10) != 1540000)
    return {false, "size bound arithmetic is wrong"};

  maxleaf::detail::Rng rng(9442013);
  long long checked = 0, reduced = 0;
  for (int t = 0; t < 250; ++t) {
    auto gi = maxleaf::generate(corpus_spec(rng, 8));
    for (int k = 1; k <= 3; ++k)
      for (Variant variant : {Variant::Branching, Variant::Tree}) {
        RootedInstance inst{gi.graph, gi.root, k, variant};
        maxleaf::KernelOutcome out = maxleaf::kernelize_rooted(inst);
        bool direct = oracle_decides(gi.graph, gi.root, k, variant);
        bool via_kernel = false;
        switch (out.verdict) {
          case maxleaf::KernelOutcome::Verdict::Yes:
            via_kernel = true;
            break;
          case maxleaf::KernelOutcome::Verdict::No:
            via_kernel = false;
            break;
          case maxleaf::KernelOutcome::Verdict::Reduced:
            via_kernel =
                oracle_decides(out.reduced->graph, out.reduced->root, out.reduced->k, variant);
            ++reduced;
            break;
        }
        if (via_kernel != direct) {
          std::ostringstream os;
          os << "kernel decision mismatch at seed " << gi.root << " k " << k;
          return {false, os.str()};
        }
        ++checked;
      }
  }
  std::ostringstream os;
  os << "decisions " << checked << " reduced-kernels " << reduced;
  return {true, os.str()};
}

// 4. The unrooted decision through per-root kernels equals the OR of the
//    direct oracle over all roots.
Line criterion_turing() {
  maxleaf::detail::Rng rng(5650301);
  long long checked = 0;
  for (int t = 0; t < 150; ++t) {
    auto gi = maxleaf::generate(corpus_spec(rng, 7));
    for (int k = 1; k <= 3; ++k)
      for (Variant variant : {Variant::Branching, Variant::Tree}) {
        bool via_kernels = maxleaf::decide_unrooted_via_kernels(gi.graph, k, variant);
        bool direct = false;
        for (Vertex r : gi.graph.vertices())
          if (oracle_decides(gi.graph, r, k, variant)) {
            direct = true;
            break;
          }
        if (via_kernels != direct) return {false, "per-root kernels disagree with the oracle"};
        ++checked;
      }
  }
  std::ostringstream os;
  os << "decisions " << checked;
  return {true, os.str()};
}

// walks every multiset of m subsets of {1..n} that covers the universe
template <typename F>
void for_each_covering_family(int n, int m, F f) {
  int full = (1 << n) - 1;
  std::vector<int> masks(static_cast<std::size_t>(m), 0);
  auto rec = [&](auto&& self, int i, int low, int covered) -> void {
    if (i == m) {
      if (covered == full) {
        std::vector<std::set<int>> family;
        for (int mask : masks) {
          std::set<int> s;
          for (int e = 0; e < n; ++e)
            if (mask & (1 << e)) s.insert(e + 1);
          family.push_back(std::move(s));
        }
        f(family);
      }
      return;
    }
    for (int mask = low; mask <= full; ++mask) {
      masks[static_cast<std::size_t>(i)] = mask;
      self(self, i + 1, mask, covered | mask);
    }
  };
  rec(rec, 0, 0, 0);
}

// 5. For every coverable family (n <= 4, m in {3,4}) the willow's exact
//    max-leaf count equals n + m + 2 - b* with b* the brute-forced optimum.
Line criterion_gadget_optimum() {
  long long families = 0, targets = 0;
  std::string fail;
  for (int n = 1; n <= 4 && fail.empty(); ++n)
    for (int m = 3; m <= 4 && fail.empty(); ++m)
      for_each_covering_family(n, m, [&](const std::vector<std::set<int>>& family) {
        if (!fail.empty()) return;
        ++families;
        auto b_star = oracle::min_cover_size(n, family);
        if (!b_star) {
          fail = "a covering family has no cover";
          return;
        }
        maxleaf::WillowReduction red =
            maxleaf::set_cover_to_willow({n, family, 1});
        auto best = maxleaf::max_leaf_out_branching(red.willow.graph, red.willow.top(), 12);
        if (!best || best->leaves != n + m + 2 - *b_star) {
          fail = "gadget optimum off at n " + std::to_string(n) + " m " + std::to_string(m);
          return;
        }
        for (int b = 1; b <= m - 2; ++b) {
          maxleaf::WillowReduction again = maxleaf::set_cover_to_willow({n, family, b});
          if (!(again.willow.graph == red.willow.graph) ||
              again.target_leaves != n + m + 2 - b) {
            fail = "gadget shape depends on b";
            return;
          }
          if ((best->leaves >= again.target_leaves) != (*b_star <= b)) {
            fail = "target threshold disagrees with the cover bound";
            return;
          }
          ++targets;
        }
      });
  if (!fail.empty()) return {false, fail};
  std::ostringstream os;
  os << "families " << families << " thresholds " << targets;
  return {true, os.str()};
}

// 6. On every constructed nice willow the top vertex is the unique argmax
//    root of the exact max-leaf count.
Line criterion_top_argmax() {
  long long willows = 0, roots = 0;
  std::string fail;
  auto check = [&](int n, const std::vector<std::set<int>>& family) {
    if (!fail.empty()) return;
    maxleaf::WillowReduction red = maxleaf::set_cover_to_willow({n, family, 1});
    if (!maxleaf::is_nice_willow(red.willow)) {
      fail = "constructed willow is not nice";
      return;
    }
    ++willows;
    auto at_top = maxleaf::max_leaf_out_branching(red.willow.graph, red.willow.top(), 12);
    if (!at_top) {
      fail = "top root admits no out-branching";
      return;
    }
    for (Vertex r : red.willow.graph.vertices()) {
      if (r == red.willow.top()) continue;
      ++roots;
      auto other = maxleaf::max_leaf_out_branching(red.willow.graph, r, 12);
      if (other && other->leaves >= at_top->leaves) {
        fail = "a non-top root ties or beats the top";
        return;
      }
    }
  };
  for (int n = 1; n <= 3 && fail.empty(); ++n)
    for_each_covering_family(n, 3, [&](const std::vector<std::set<int>>& f) { check(n, f); });
  for (int n = 1; n <= 2 && fail.empty(); ++n)
    for_each_covering_family(n, 4, [&](const std::vector<std::set<int>>& f) { check(n, f); });
  if (!fail.empty()) return {false, fail};
  std::ostringstream os;
  os << "willows " << willows << " rival-roots " << roots;
  return {true, os.str()};
}

// 7. The unrooted out-tree answer of a disjoint union is the OR of the
//    component answers, exhaustively over all pairs of 3-vertex digraphs.
Line criterion_composition() {
  std::vector<Digraph> all3;
  oracle::for_each_digraph(3, [&](const Digraph& d) { all3.push_back(d); });
  auto tree_answer = [](const Digraph& d, int k) {
    for (Vertex r : d.vertices())
      if (oracle::max_leaf_out_tree(d, r) >= k) return true;
    return false;
  };
  long long checked = 0;
  for (const Digraph& a : all3)
    for (const Digraph& b : all3)
      for (int k = 1; k <= 3; ++k) {
        auto [u, uk] = maxleaf::compose_disjoint_union({{a, k}, {b, k}});
        bool whole = tree_answer(u, uk);
        bool parts = tree_answer(a, k) || tree_answer(b, k);
        if (whole != parts) return {false, "union answer differs from the OR of parts"};
        ++checked;
      }
  std::ostringstream os;
  os << "pairs " << checked / 3 << " decisions " << checked;
  return {true, os.str()};
}

maxleaf::WillowGraph tiny_willow() {
  maxleaf::WillowGraph w;
  w.stem = {2, 1, 3, 4, 5, 6};
  for (std::size_t i = 0; i + 1 < w.stem.size(); ++i)
    w.stem_arcs.insert({w.stem[i], w.stem[i + 1]});
  w.back_arcs = {{6, 3}, {3, 1}, {3, 2}, {6, 4}, {6, 5}};
  for (Vertex v : w.stem) w.graph.add_vertex(v);
  for (const maxleaf::Arc& a : w.stem_arcs) w.graph.add_arc(a.tail, a.head);
  for (const maxleaf::Arc& a : w.back_arcs) w.graph.add_arc(a.tail, a.head);
  return w;
}

// 8. A chain of padded willows decides k = b_max + 1 exactly when some
//    willow reaches b_max leaves from its top.
Line criterion_willow_chain() {
  const int b_max = 5;
  maxleaf::WillowGraph yes = maxleaf::pad_willow(tiny_willow(), 4, b_max);  // top max 5
  maxleaf::WillowGraph no = maxleaf::pad_willow(tiny_willow(), 5, b_max);   // top max 4

  auto top_max = [](const maxleaf::WillowGraph& w) {
    return maxleaf::max_leaf_out_branching(w.graph, w.top(), 12)->leaves;
  };
  if (top_max(yes) != b_max || top_max(no) != b_max - 1)
    return {false, "padded willow calibration is off"};

  auto chain_decides = [&](const std::vector<const maxleaf::WillowGraph*>& parts,
                           bool* expected) {
    std::vector<maxleaf::WillowGraph> ws;
    *expected = false;
    for (const maxleaf::WillowGraph* w : parts) {
      ws.push_back(*w);
      if (top_max(*w) >= b_max) *expected = true;
    }
    auto [graph, k] = maxleaf::build_willow_chain(ws, b_max);
    if (k != b_max + 1) throw std::logic_error("chain k is not b_max + 1");
    for (Vertex r : graph.vertices()) {
      auto best = maxleaf::max_leaf_out_branching(graph, r, 24);
      if (best && best->leaves >= k) return true;
    }
    return false;
  };

  long long chains = 0;
  const std::vector<std::vector<const maxleaf::WillowGraph*>> combos = {
      {&no, &no},        {&yes, &no},      {&no, &yes},        {&yes, &yes},
      {&no, &no, &no},   {&yes, &no, &no}, {&no, &yes, &no},   {&yes, &yes, &yes}};
  for (const auto& parts : combos) {
    bool expected = false;
    bool got = chain_decides(parts, &expected);
    if (got != expected) return {false, "chain decision differs from the willow OR"};
    ++chains;
  }

  // independent-oracle spot check on the two-part chains
  for (bool use_yes : {false, true}) {
    std::vector<maxleaf::WillowGraph> ws{use_yes ? yes : no, no};
    auto [graph, k] = maxleaf::build_willow_chain(ws, b_max);
    bool direct = false;
    for (Vertex r : graph.vertices()) {
      auto best = oracle::max_leaf_out_branching(graph, r);
      if (best && *best >= k) direct = true;
    }
    if (direct != use_yes) return {false, "rejection oracle disagrees on a two-part chain"};
  }
  std::ostringstream os;
  os << "chains " << chains << " k " << b_max + 1;
  return {true, os.str()};
}

// 9. The deliberately broken rule variant is detected by the battery.
Line criterion_negative_control() {
  auto rep = maxleaf::verify_rule_safeness(600, 8, 31081940, maxleaf::RuleMutation::Rule4AllowVInS);
  std::ostringstream os;
  os << "trials " << rep.trials << " violations " << rep.violations;
  return {rep.violations >= 1, os.str()};
}

}  // namespace

int main() {
  struct Criterion {
    const char* slug;
    Line (*run)();
  };
  const Criterion criteria[] = {
      {"rule-safeness", &criterion_rule_safeness},
      {"fixpoint-and-replay", &criterion_fixpoint},
      {"rooted-kernelization", &criterion_rooted_kernel},
      {"turing-kernelization", &criterion_turing},
      {"set-cover-gadget-optimum", &criterion_gadget_optimum},
      {"willow-top-argmax", &criterion_top_argmax},
      {"disjoint-union-composition", &criterion_composition},
      {"willow-chain-decision", &criterion_willow_chain},
      {"negative-control", &criterion_negative_control},
  };
  int failed = 0;
  int index = 0;
  for (const Criterion& c : criteria) {
    ++index;
    Line line;
    try {
      line = c.run();
    } catch (const std::exception& e) {
      line = {false, std::string("exception: ") + e.what()};
    }
    if (!line.pass) ++failed;
    std::cout << "criterion " << index << " " << c.slug << " " << (line.pass ? "PASS" : "FAIL")
              << " (" << line.detail << ")\n";
  }
  std::cout << (failed == 0 ? "ACCEPTANCE PASS" : "ACCEPTANCE FAIL") << " " << (9 - failed)
            << "/9\n";
  return failed == 0 ? 0 : 1;
}
