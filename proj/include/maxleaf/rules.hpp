#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "digraph.hpp"

namespace maxleaf {

// Five safe reduction rules for rooted maximum-leaf instances. Each apply_*
// function performs at most one application per call, scanning candidates in
// ascending id order so runs are reproducible. All rules keep k unchanged and
// preserve the exact set of achievable leaf counts (safeness), which the test
// harness checks against the exact solver.

enum class RuleId { Reachability, UselessArc, Bridge, AvoidableArc, TwoDirectionalPath };

inline const char* rule_name(RuleId id) {
  switch (id) {
    case RuleId::Reachability: return "reachability";
    case RuleId::UselessArc: return "useless-arc";
    case RuleId::Bridge: return "bridge";
    case RuleId::AvoidableArc: return "avoidable-arc";
    case RuleId::TwoDirectionalPath: return "two-directional-path";
  }
  return "?";
}

/// One recorded rule application. Fields are populated per rule:
///  Reachability        removed (deleted vertices; for the Branching variant
///                      this is the unreachable witness set of a No verdict)
///  UselessArc          arc (deleted)
///  Bridge              arc (contracted), merged (minted vertex)
///  AvoidableArc        arc (deleted), separator (the set S)
///  TwoDirectionalPath  path (p_1..p_l), path_in, path_out, gadget_u/v (minted)
struct RuleEvent {
  RuleId rule = RuleId::Reachability;
  std::vector<Vertex> removed;
  Arc arc{};
  std::vector<Vertex> separator;
  Vertex merged = 0;
  std::vector<Vertex> path;
  Vertex path_in = 0;
  Vertex path_out = 0;
  Vertex gadget_u = 0;
  Vertex gadget_v = 0;
};

/// Log of a reduction run. id_map sends each surviving original vertex to its
/// current id (identity unless contractions merged it away); vertices deleted
/// along the way have no entry. Replaying the events against the original
/// instance reproduces the reduced digraph exactly.
struct ReductionTrace {
  std::vector<RuleEvent> events;
  std::map<Vertex, Vertex> id_map;
};

struct RuleApplication {
  RootedInstance next;
  RuleEvent event;
};

// ---------------------------------------------------------------------------
// Rule 1: every vertex must be reachable from the root. Branching instances
// without that property are plain No (an out-branching spans everything);
// Tree instances just drop the unreachable part.

struct Rule1Outcome {
  enum class Kind { NotApplicable, NoVerdict, Removed };
  Kind kind = Kind::NotApplicable;
  std::optional<RuleApplication> removal;  // set when kind == Removed
  std::vector<Vertex> unreachable;         // set when kind == NoVerdict
};

inline Rule1Outcome apply_rule1(const RootedInstance& inst) {
  validate_instance(inst);
  std::set<Vertex> reached = reachable_from(inst.graph, inst.root);
  if (reached.size() == inst.graph.vertex_count()) return {};

  std::vector<Vertex> gone;
  for (Vertex v : inst.graph.vertices())
    if (!reached.count(v)) gone.push_back(v);

  if (inst.variant == Variant::Branching) {
    Rule1Outcome out;
    out.kind = Rule1Outcome::Kind::NoVerdict;
    out.unreachable = gone;
    return out;
  }

  RootedInstance next = inst;
  for (Vertex v : gone) next.graph.remove_vertex(v);
  RuleEvent ev;
  ev.rule = RuleId::Reachability;
  ev.removed = gone;
  Rule1Outcome out;
  out.kind = Rule1Outcome::Kind::Removed;
  out.removal = RuleApplication{std::move(next), std::move(ev)};
  return out;
}

// ---------------------------------------------------------------------------
// Rule 2: an arc v->u is useless when u already lies on every root->v path
// (u dominates v). Any out-tree using v->u could be rerouted, so the arc goes.
// Since the root dominates every reachable vertex, arcs into the root always
// match. Assumes Rule 1 has been saturated.

inline std::optional<RuleApplication> apply_rule2(const RootedInstance& inst) {
  validate_instance(inst);
  auto dom = dominators(inst.graph, inst.root);
  for (const Arc& a : inst.graph.arcs()) {
    const auto& d = dom[a.tail];
    if (a.head != a.tail && d.count(a.head)) {
      RootedInstance next = inst;
      next.graph.remove_arc(a.tail, a.head);
      RuleEvent ev;
      ev.rule = RuleId::UselessArc;
      ev.arc = a;
      return RuleApplication{std::move(next), std::move(ev)};
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Rule 3: an arc u->v whose removal cuts off at least two vertices sits on
// every out-branching, and v contributes no leaf, so the arc can be
// contracted. Arcs incident to the root are left alone: the root id survives
// the whole reduction.

inline std::optional<RuleApplication> apply_rule3(const RootedInstance& inst) {
  validate_instance(inst);
  for (const Arc& a : inst.graph.arcs()) {
    if (a.tail == inst.root || a.head == inst.root) continue;
    Digraph probe = inst.graph;
    probe.remove_arc(a.tail, a.head);
    std::size_t still = detail::reach(probe, inst.root, {}).size();
    if (inst.graph.vertex_count() - still >= 2) {
      Contraction c = contract_arc(inst.graph, a.tail, a.head);
      RootedInstance next = inst;
      next.graph = std::move(c.graph);
      RuleEvent ev;
      ev.rule = RuleId::Bridge;
      ev.arc = a;
      ev.merged = c.merged;
      return RuleApplication{std::move(next), std::move(ev)};
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Rule 4: arc v->w is avoidable when some S of at most two other in-neighbors
// of w separates v from the root: any out-tree reaching w through v already
// passed a member of S, which could adopt w directly. S never contains the
// root, v, or w.

inline std::optional<RuleApplication> apply_rule4(const RootedInstance& inst) {
  validate_instance(inst);
  for (const Arc& a : inst.graph.arcs()) {
    Vertex v = a.tail, w = a.head;
    if (v == inst.root) continue;  // the root is never separated from itself
    std::vector<Vertex> cand;
    for (Vertex x : inst.graph.in_neighbors(w))
      if (x != v && x != inst.root) cand.push_back(x);
    auto matches = [&](const std::set<Vertex>& s) {
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

// ---------------------------------------------------------------------------
// Rule 5: a long two-directional path segment carries no extra leaves, so its
// interior collapses to a fixed four-vertex gadget. Conditions on a candidate
// path P = p_1..p_l (l in {7,8}):
//   (i)   only p_1 and p_in (one of p_{l-1}, p_l) have in-arcs from outside P
//   (ii)  only p_l and p_out (one of p_1, p_2) have out-arcs to outside P
//   (iii) P is the unique out-branching of D[V(P)] rooted at p_1
//   (iv)  some path Q is the unique out-branching of D[V(P)] rooted at p_in
//   (v)   the successor of p_out on P differs from the successor of p_l on Q
// The interior R = V(P) minus {p_1, p_in, p_out, p_l} is replaced by fresh
// vertices u, v wired as p_out->u, u->v, v->p_in, p_l->v, v->u, u->p_1.

namespace detail {

inline std::optional<std::vector<Vertex>> tree_as_path(const OutTree& t) {
  // a path is an out-tree in which no vertex has two children
  std::map<Vertex, Vertex> child;
  for (const auto& [c, p] : t.parent)
    if (!child.emplace(p, c).second) return std::nullopt;
  std::vector<Vertex> seq{t.root};
  while (true) {
    auto it = child.find(seq.back());
    if (it == child.end()) break;
    seq.push_back(it->second);
  }
  if (seq.size() != t.parent.size() + 1) return std::nullopt;
  return seq;
}

struct Rule5Match {
  std::vector<Vertex> path;
  Vertex p_in = 0;
  Vertex p_out = 0;
};

inline std::optional<Rule5Match> rule5_conditions(const RootedInstance& inst,
                                                  const std::vector<Vertex>& p) {
  const Digraph& g = inst.graph;
  const std::size_t l = p.size();
  std::set<Vertex> pset(p.begin(), p.end());

  std::set<Vertex> ext_in, ext_out;  // vertices of P touching the outside
  for (Vertex x : p) {
    for (Vertex w : g.in_neighbors(x))
      if (!pset.count(w)) ext_in.insert(x);
    for (Vertex w : g.out_neighbors(x))
      if (!pset.count(w)) ext_out.insert(x);
  }

  // (i)/(ii): identify p_in and p_out; a vertex of the candidate pair that
  // actually touches the outside is forced, otherwise both choices are tried.
  auto choices = [](std::set<Vertex> ext, Vertex always, Vertex c1, Vertex c2) {
    ext.erase(always);
    std::vector<Vertex> cs;
    if (ext.empty()) {
      cs = {c1, c2};
    } else if (ext.size() == 1) {
      Vertex x = *ext.begin();
      if (x == c1 || x == c2) cs = {x};
    }
    return cs;  // empty: some other vertex touches the outside -> no match
  };
  std::vector<Vertex> in_choices = choices(ext_in, p.front(), p[l - 1], p[l - 2]);
  std::vector<Vertex> out_choices = choices(ext_out, p.back(), p.front(), p[1]);
  if (in_choices.empty() || out_choices.empty()) return std::nullopt;

  Digraph inside = induced_subgraph(g, pset);

  // (iii): P itself is the unique out-branching rooted at p_1
  auto ub = unique_out_branching(inside, p.front());
  if (!ub) return std::nullopt;
  auto ub_path = tree_as_path(*ub);
  if (!ub_path || *ub_path != p) return std::nullopt;

  for (Vertex pin : in_choices) {
    auto qb = unique_out_branching(inside, pin);
    if (!qb) continue;
    auto q = tree_as_path(*qb);
    if (!q) continue;  // (iv) needs a path
    for (Vertex pout : out_choices) {
      // (v): successors must both exist and differ
      auto pos_out = std::find(p.begin(), p.end(), pout);
      auto pos_l = std::find(q->begin(), q->end(), p.back());
      if (pos_out + 1 == p.end() || pos_l + 1 == q->end()) continue;
      if (*(pos_out + 1) == *(pos_l + 1)) continue;
      // never delete the instance root with the interior
      std::set<Vertex> keep{p.front(), pin, pout, p.back()};
      if (pset.count(inst.root) && !keep.count(inst.root)) continue;
      return Rule5Match{p, pin, pout};
    }
  }
  return std::nullopt;
}

template <typename Fn>
bool rule5_scan_paths(const Digraph& g, std::size_t l, Fn&& check) {
  // simple paths of exactly l vertices whose internal vertices have
  // in- and out-degree at most 2 (interior vertices of a match cannot touch
  // the outside, so higher-degree vertices can only sit at the ends)
  std::vector<Vertex> path;
  std::set<Vertex> used;
  auto rec = [&](auto&& self) -> bool {
    if (path.size() == l) return check(path);
    for (Vertex w : g.out_neighbors(path.back())) {
      if (used.count(w)) continue;
      bool internal = path.size() + 1 < l;
      if (internal && (g.in_degree(w) > 2 || g.out_degree(w) > 2)) continue;
      path.push_back(w);
      used.insert(w);
      if (self(self)) return true;
      used.erase(w);
      path.pop_back();
    }
    return false;
  };
  for (Vertex s : g.vertices()) {
    path = {s};
    used = {s};
    if (rec(rec)) return true;
  }
  return false;
}

}  // namespace detail

inline std::optional<RuleApplication> apply_rule5(const RootedInstance& inst) {
  validate_instance(inst);
  std::optional<detail::Rule5Match> match;
  for (std::size_t l : {std::size_t{7}, std::size_t{8}}) {
    detail::rule5_scan_paths(inst.graph, l, [&](const std::vector<Vertex>& p) {
      match = detail::rule5_conditions(inst, p);
      return match.has_value();
    });
    if (match) break;
  }
  if (!match) return std::nullopt;

  const std::vector<Vertex>& p = match->path;
  std::set<Vertex> keep{p.front(), match->p_in, match->p_out, p.back()};
  RootedInstance next = inst;
  for (Vertex x : p)
    if (!keep.count(x)) next.graph.remove_vertex(x);
  Vertex u = next.graph.fresh_vertex();
  next.graph.add_vertex(u);
  Vertex v = next.graph.fresh_vertex();
  next.graph.add_vertex(v);
  next.graph.add_arc(match->p_out, u);
  next.graph.add_arc(u, v);
  next.graph.add_arc(v, match->p_in);
  next.graph.add_arc(p.back(), v);
  next.graph.add_arc(v, u);
  next.graph.add_arc(u, p.front());

  RuleEvent ev;
  ev.rule = RuleId::TwoDirectionalPath;
  ev.path = p;
  ev.path_in = match->p_in;
  ev.path_out = match->p_out;
  ev.gadget_u = u;
  ev.gadget_v = v;
  return RuleApplication{std::move(next), std::move(ev)};
}

// ---------------------------------------------------------------------------
// Driver: rules are tried in order 1..5 and every application restarts the
// scan from Rule 1, so rules 2-5 only ever run on fully reachable instances.
// Each application strictly shrinks (|V|, |A|) lexicographically, which
// bounds the number of steps.

struct ReduceStep {
  enum class Status { Applied, NoVerdict, Fixpoint };
  Status status = Status::Fixpoint;
  std::optional<RuleApplication> application;  // set when Applied
  std::vector<Vertex> unreachable;             // set when NoVerdict
};

inline ReduceStep reduce_step(const RootedInstance& inst) {
  Rule1Outcome r1 = apply_rule1(inst);
  if (r1.kind == Rule1Outcome::Kind::NoVerdict) {
    ReduceStep s;
    s.status = ReduceStep::Status::NoVerdict;
    s.unreachable = std::move(r1.unreachable);
    return s;
  }
  if (r1.kind == Rule1Outcome::Kind::Removed)
    return {ReduceStep::Status::Applied, std::move(r1.removal), {}};
  for (auto* rule : {&apply_rule2, &apply_rule3, &apply_rule4, &apply_rule5})
    if (auto app = (*rule)(inst))
      return {ReduceStep::Status::Applied, std::move(app), {}};
  return {};
}

struct ReduceResult {
  std::optional<RootedInstance> instance;  // nullopt: Branching No verdict
  ReductionTrace trace;
};

namespace detail {

inline void advance_id_map(std::map<Vertex, Vertex>& id_map, const RuleEvent& ev) {
  switch (ev.rule) {
    case RuleId::Reachability: {
      std::set<Vertex> gone(ev.removed.begin(), ev.removed.end());
      for (auto it = id_map.begin(); it != id_map.end();)
        it = gone.count(it->second) ? id_map.erase(it) : std::next(it);
      break;
    }
    case RuleId::Bridge:
      for (auto& [orig, cur] : id_map)
        if (cur == ev.arc.tail || cur == ev.arc.head) cur = ev.merged;
      break;
    case RuleId::TwoDirectionalPath: {
      std::set<Vertex> keep{ev.path.front(), ev.path_in, ev.path_out, ev.path.back()};
      for (auto it = id_map.begin(); it != id_map.end();) {
        bool gone = std::find(ev.path.begin(), ev.path.end(), it->second) != ev.path.end() &&
                    !keep.count(it->second);
        it = gone ? id_map.erase(it) : std::next(it);
      }
      break;
    }
    default:
      break;  // arc deletions keep every vertex
  }
}

}  // namespace detail

inline ReduceResult reduce_to_fixpoint(const RootedInstance& inst) {
  ReduceResult res;
  for (Vertex v : inst.graph.vertices()) res.trace.id_map[v] = v;
  RootedInstance cur = inst;
  while (true) {
    ReduceStep step = reduce_step(cur);
    if (step.status == ReduceStep::Status::Fixpoint) {
      res.instance = std::move(cur);
      return res;
    }
    if (step.status == ReduceStep::Status::NoVerdict) {
      RuleEvent ev;
      ev.rule = RuleId::Reachability;
      ev.removed = std::move(step.unreachable);
      res.trace.events.push_back(std::move(ev));
      return res;  // res.instance stays empty: No
    }
    detail::advance_id_map(res.trace.id_map, step.application->event);
    res.trace.events.push_back(std::move(step.application->event));
    cur = std::move(step.application->next);
  }
}

/// Replays recorded events against the original instance without re-running
/// any detection. Returns the resulting digraph, or nullopt when the trace
/// ends in a Branching-variant No verdict. Minted ids must come out the same;
/// a mismatch means the trace does not belong to this instance.
inline std::optional<Digraph> replay_trace(const RootedInstance& original,
                                           const ReductionTrace& trace) {
  Digraph g = original.graph;
  for (const RuleEvent& ev : trace.events) {
    switch (ev.rule) {
      case RuleId::Reachability:
        if (original.variant == Variant::Branching) return std::nullopt;
        for (Vertex v : ev.removed) g.remove_vertex(v);
        break;
      case RuleId::UselessArc:
      case RuleId::AvoidableArc:
        if (!g.remove_arc(ev.arc.tail, ev.arc.head))
          throw std::invalid_argument("replay_trace: recorded arc is missing");
        break;
      case RuleId::Bridge: {
        Contraction c = contract_arc(g, ev.arc.tail, ev.arc.head);
        if (c.merged != ev.merged)
          throw std::invalid_argument("replay_trace: minted id mismatch");
        g = std::move(c.graph);
        break;
      }
      case RuleId::TwoDirectionalPath: {
        std::set<Vertex> keep{ev.path.front(), ev.path_in, ev.path_out, ev.path.back()};
        for (Vertex x : ev.path)
          if (!keep.count(x)) g.remove_vertex(x);
        Vertex u = g.fresh_vertex();
        g.add_vertex(u);
        Vertex v = g.fresh_vertex();
        g.add_vertex(v);
        if (u != ev.gadget_u || v != ev.gadget_v)
          throw std::invalid_argument("replay_trace: minted id mismatch");
        g.add_arc(ev.path_out, u);
        g.add_arc(u, v);
        g.add_arc(v, ev.path_in);
        g.add_arc(ev.path.back(), v);
        g.add_arc(v, u);
        g.add_arc(u, ev.path.front());
        break;
      }
    }
  }
  return g;
}

}  // namespace maxleaf
