#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "digraph.hpp"

namespace maxleaf {

// Lower-bound gadgetry: Set Cover embeds into willow graphs whose
// maximum-leaf out-branching count mirrors the optimum cover size, willows
// normalize to a common leaf target by padding, and padded willows chain into
// a single instance whose answer is the OR of the components'.

/// Set Cover instance over universe {1..universe_size}: does some subfamily of
/// at most `bound` sets cover every element? Valid instances cover every
/// element at least once and satisfy 1 <= bound <= m - 2 (the willow embedding
/// needs two slack sets).
struct SetCoverInstance {
  int universe_size = 0;
  std::vector<std::set<int>> family;
  int bound = 0;
};

inline void validate_set_cover(const SetCoverInstance& sc) {
  if (sc.universe_size < 1) throw std::invalid_argument("set cover: empty universe");
  int m = static_cast<int>(sc.family.size());
  if (sc.bound < 1 || sc.bound > m - 2)
    throw std::invalid_argument("set cover: bound must satisfy 1 <= b <= m - 2 (m = " +
                                std::to_string(m) + ", b = " + std::to_string(sc.bound) + ")");
  std::set<int> covered;
  for (const auto& s : sc.family)
    for (int e : s) {
      if (e < 1 || e > sc.universe_size)
        throw std::invalid_argument("set cover: element " + std::to_string(e) +
                                    " outside universe");
      covered.insert(e);
    }
  if (static_cast<int>(covered.size()) != sc.universe_size)
    throw std::invalid_argument("set cover: some element is covered by no set");
}

/// Willow: a spine path p_1..p_n (the stem, p_n on top) plus a DAG of strictly
/// backward arcs in which exactly one vertex has no incoming back-arc.
struct WillowGraph {
  Digraph graph;
  std::vector<Vertex> stem;  // p_1 (bottom) .. p_n (top)
  std::set<Arc> stem_arcs;   // A1: exactly the stem path
  std::set<Arc> back_arcs;   // A2: everything else, all pointing down-stem

  Vertex bottom() const { return stem.front(); }
  Vertex top() const { return stem.back(); }
};

inline bool is_willow(const WillowGraph& w) {
  if (w.stem.empty()) return false;
  std::vector<Vertex> vs = w.stem;
  std::sort(vs.begin(), vs.end());
  if (std::adjacent_find(vs.begin(), vs.end()) != vs.end()) return false;
  if (vs != w.graph.vertices()) return false;

  std::set<Arc> expected_stem;
  for (std::size_t i = 0; i + 1 < w.stem.size(); ++i)
    expected_stem.insert({w.stem[i], w.stem[i + 1]});
  if (w.stem_arcs != expected_stem) return false;

  std::vector<Arc> all = w.graph.arcs();
  if (w.stem_arcs.size() + w.back_arcs.size() != all.size()) return false;
  for (const Arc& a : all)
    if (!w.stem_arcs.count(a) && !w.back_arcs.count(a)) return false;

  std::map<Vertex, std::size_t> pos;
  for (std::size_t i = 0; i < w.stem.size(); ++i) pos[w.stem[i]] = i;
  std::map<Vertex, int> back_in;
  for (Vertex v : w.stem) back_in[v] = 0;
  for (const Arc& a : w.back_arcs) {
    if (pos[a.tail] <= pos[a.head]) return false;  // back-arcs point down-stem
    ++back_in[a.head];
  }
  // backwardness makes (V, A2) acyclic for free; one source required
  int sources = 0;
  for (const auto& [v, deg] : back_in)
    if (deg == 0) ++sources;
  return sources == 1;
}

/// Nice willow: the top additionally dominates the back-arc DAG. Concretely:
/// arcs p_n->p_{n-1} and p_n->p_{n-2} exist, no other back-arc touches
/// p_{n-1} or p_{n-2}, and every vertex is reachable from p_n inside A2.
/// Callers are expected to pass a structurally valid willow.
inline bool is_nice_willow(const WillowGraph& w) {
  if (w.stem.size() < 3) return false;
  Vertex top = w.top();
  Vertex s1 = w.stem[w.stem.size() - 2];
  Vertex s2 = w.stem[w.stem.size() - 3];
  if (!w.back_arcs.count({top, s1}) || !w.back_arcs.count({top, s2})) return false;
  for (const Arc& a : w.back_arcs) {
    bool touches_s1 = a.tail == s1 || a.head == s1;
    bool touches_s2 = a.tail == s2 || a.head == s2;
    if ((touches_s1 && a != Arc{top, s1}) || (touches_s2 && a != Arc{top, s2})) return false;
  }
  Digraph back;
  for (Vertex v : w.stem) back.add_vertex(v);
  for (const Arc& a : w.back_arcs) back.add_arc(a.tail, a.head);
  return reachable_from(back, top).size() == w.stem.size();
}

struct WillowReduction {
  WillowGraph willow;
  int target_leaves = 0;  // the willow has >= this many leaves iff the cover exists
};

/// Embeds a Set Cover instance (universe n, family S_1..S_m, bound b) into a
/// nice willow. Stem bottom-to-top: e_n .. e_1, s_m .. s_1, p, p', r.
/// Back-arcs: r->s_i for every set, s_i->e_j whenever e_j in S_i, and r->p,
/// r->p'. The cover of size <= b exists iff the willow has an out-branching
/// with at least n + m + 2 - b leaves.
inline WillowReduction set_cover_to_willow(const SetCoverInstance& sc) {
  validate_set_cover(sc);
  const int n = sc.universe_size;
  const int m = static_cast<int>(sc.family.size());
  auto elem = [&](int j) { return Vertex(j); };           // e_j, j in 1..n
  auto setv = [&](int i) { return Vertex(n + i); };       // s_i, i in 1..m
  const Vertex p = n + m + 1, pp = n + m + 2, r = n + m + 3;

  WillowGraph w;
  for (int j = n; j >= 1; --j) w.stem.push_back(elem(j));
  for (int i = m; i >= 1; --i) w.stem.push_back(setv(i));
  w.stem.push_back(p);
  w.stem.push_back(pp);
  w.stem.push_back(r);

  for (Vertex v : w.stem) w.graph.add_vertex(v);
  for (std::size_t i = 0; i + 1 < w.stem.size(); ++i) {
    w.graph.add_arc(w.stem[i], w.stem[i + 1]);
    w.stem_arcs.insert({w.stem[i], w.stem[i + 1]});
  }
  auto back = [&](Vertex t, Vertex h) {
    w.graph.add_arc(t, h);
    w.back_arcs.insert({t, h});
  };
  for (int i = 1; i <= m; ++i) back(r, setv(i));
  for (int i = 1; i <= m; ++i)
    for (int e : sc.family[static_cast<std::size_t>(i - 1)]) back(setv(i), elem(e));
  back(r, p);
  back(r, pp);

  return {std::move(w), n + m + 2 - sc.bound};
}

/// Normalizes a nice willow with leaf target b_i up to target b_max by
/// subdividing the last stem arc b_max - b_i times and hanging every
/// subdivision vertex off the top by a fresh back-arc. The result is again a
/// nice willow, and it has >= b_max leaves iff the input has >= b_i.
inline WillowGraph pad_willow(const WillowGraph& w, int b_i, int b_max) {
  if (b_i > b_max) throw std::invalid_argument("pad_willow: b_i exceeds b_max");
  if (!is_willow(w) || !is_nice_willow(w))
    throw std::invalid_argument("pad_willow: input must be a nice willow");
  WillowGraph out = w;
  for (int step = 0; step < b_max - b_i; ++step) {
    Vertex top = out.top();
    Vertex below = out.stem[out.stem.size() - 2];
    Vertex fresh = out.graph.fresh_vertex();
    out.graph.add_vertex(fresh);
    out.graph.remove_arc(below, top);
    out.stem_arcs.erase({below, top});
    out.graph.add_arc(below, fresh);
    out.graph.add_arc(fresh, top);
    out.stem_arcs.insert({below, fresh});
    out.stem_arcs.insert({fresh, top});
    out.graph.add_arc(top, fresh);
    out.back_arcs.insert({top, fresh});
    out.stem.insert(out.stem.end() - 1, fresh);
  }
  return out;
}

namespace detail {

/// Copy of d with vertices relabeled to next, next+1, ... in ascending id
/// order; returns the old->new map and advances next past the block.
inline std::pair<Digraph, std::map<Vertex, Vertex>> relabel_block(const Digraph& d, Vertex& next) {
  std::map<Vertex, Vertex> to_new;
  Digraph g;
  for (Vertex v : d.vertices()) {
    to_new[v] = next;
    g.add_vertex(next);
    ++next;
  }
  for (const Arc& a : d.arcs()) g.add_arc(to_new[a.tail], to_new[a.head]);
  return {std::move(g), std::move(to_new)};
}

}  // namespace detail

/// Disjoint union of instances that all share the same leaf target k. Since
/// an out-tree lives inside one connected component, the union is a yes
/// instance iff some part is. Components are relabeled to consecutive ids.
inline std::pair<Digraph, int> compose_disjoint_union(
    const std::vector<std::pair<Digraph, int>>& parts) {
  if (parts.empty()) throw std::invalid_argument("compose_disjoint_union: no instances");
  int k = parts.front().second;
  Digraph all;
  Vertex next = 1;
  for (const auto& [g, ki] : parts) {
    if (ki != k) throw std::invalid_argument("compose_disjoint_union: mismatched k");
    auto [block, _] = detail::relabel_block(g, next);
    for (Vertex v : block.vertices()) all.add_vertex(v);
    for (const Arc& a : block.arcs()) all.add_arc(a.tail, a.head);
  }
  return {std::move(all), k};
}

/// Chains nice willows W_1..W_n (all padded to the same target b_max) into a
/// single digraph: disjoint copies plus top(W_i)->bottom(W_{i+1}) and
/// top(W_n)->bottom(W_1). The chain has an out-branching with b_max + 1
/// leaves iff some W_i has one with b_max leaves from its top, so the paired
/// parameter is k = b_max + 1.
inline std::pair<Digraph, int> build_willow_chain(const std::vector<WillowGraph>& willows,
                                                  int b_max) {
  if (willows.empty()) throw std::invalid_argument("build_willow_chain: no willows");
  Digraph all;
  std::vector<Vertex> tops, bottoms;
  Vertex next = 1;
  for (const WillowGraph& w : willows) {
    if (!is_willow(w) || !is_nice_willow(w))
      throw std::invalid_argument("build_willow_chain: every component must be a nice willow");
    auto [block, to_new] = detail::relabel_block(w.graph, next);
    for (Vertex v : block.vertices()) all.add_vertex(v);
    for (const Arc& a : block.arcs()) all.add_arc(a.tail, a.head);
    tops.push_back(to_new.at(w.top()));
    bottoms.push_back(to_new.at(w.bottom()));
  }
  for (std::size_t i = 0; i < willows.size(); ++i)
    all.add_arc(tops[i], bottoms[(i + 1) % willows.size()]);
  return {std::move(all), b_max + 1};
}

}  // namespace maxleaf
