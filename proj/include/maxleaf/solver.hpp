#pragma once

#include <optional>
#include <string>
#include <vector>

#include "digraph.hpp"

namespace maxleaf {

/// Default cap for the exact search. Enumeration cost is the product of
/// in-degrees, so a dozen vertices is the comfortable desk-scale regime.
inline constexpr std::size_t kDefaultSolverBound = 12;

namespace detail {

inline void check_solver_bound(const Digraph& d, std::size_t bound, const char* who) {
  if (d.vertex_count() > bound)
    throw SizeBoundExceeded(std::string(who) + ": " + std::to_string(d.vertex_count()) +
                            " vertices exceeds bound " + std::to_string(bound));
}

}  // namespace detail

/// Calls visit for every spanning out-branching of d rooted at root, in a
/// deterministic order. Visit returns false to stop early.
template <typename Visitor>
void for_each_out_branching(const Digraph& d, Vertex root, Visitor&& visit,
                            std::size_t max_vertices = kDefaultSolverBound) {
  if (!d.has_vertex(root))
    throw std::invalid_argument("unknown root " + std::to_string(root));
  detail::check_solver_bound(d, max_vertices, "for_each_out_branching");
  detail::enumerate_parent_choices(d, root, [&](const std::map<Vertex, Vertex>& parent) {
    return visit(make_out_tree(root, parent));
  });
}

/// All spanning out-branchings rooted at root. Empty when none exists.
inline std::vector<OutTree> enumerate_out_branchings(const Digraph& d, Vertex root,
                                                     std::size_t max_vertices = kDefaultSolverBound) {
  std::vector<OutTree> all;
  for_each_out_branching(
      d, root,
      [&](OutTree t) {
        all.push_back(std::move(t));
        return true;
      },
      max_vertices);
  return all;
}

struct MaxLeafResult {
  int leaves = 0;
  OutTree witness;
};

/// Maximum-leaf spanning out-branching rooted at root, or nullopt when the
/// graph has no spanning out-branching from root at all.
inline std::optional<MaxLeafResult> max_leaf_out_branching(const Digraph& d, Vertex root,
                                                           std::size_t max_vertices = kDefaultSolverBound) {
  std::optional<MaxLeafResult> best;
  for_each_out_branching(
      d, root,
      [&](OutTree t) {
        if (!best || t.leaf_count > best->leaves) best = MaxLeafResult{t.leaf_count, std::move(t)};
        return true;
      },
      max_vertices);
  return best;
}

/// Maximum-leaf out-tree rooted at root. Out-trees need not span, and a
/// maximum one never profits from leaving out a reachable vertex, so this
/// equals the maximum-leaf out-branching of the subgraph induced by the
/// vertices reachable from root. Always defined: the one-vertex tree rooted
/// at root has one leaf.
inline MaxLeafResult max_leaf_out_tree(const Digraph& d, Vertex root,
                                       std::size_t max_vertices = kDefaultSolverBound) {
  Digraph core = induced_subgraph(d, reachable_from(d, root));
  auto best = max_leaf_out_branching(core, root, max_vertices);
  // root reaches every vertex of core, so a spanning out-branching exists
  return *best;
}

/// Exact decision for a rooted instance: does an out-branching (Branching) or
/// out-tree (Tree) rooted at inst.root with at least inst.k leaves exist?
inline bool decide(const RootedInstance& inst, std::size_t max_vertices = kDefaultSolverBound) {
  validate_instance(inst);
  if (inst.variant == Variant::Tree)
    return max_leaf_out_tree(inst.graph, inst.root, max_vertices).leaves >= inst.k;
  auto best = max_leaf_out_branching(inst.graph, inst.root, max_vertices);
  return best && best->leaves >= inst.k;
}

}  // namespace maxleaf
