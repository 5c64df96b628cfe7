#pragma once

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace maxleaf {

using Vertex = int;

struct Arc {
  Vertex tail = 0;
  Vertex head = 0;
  friend auto operator<=>(const Arc&, const Arc&) = default;
};

/// Thrown when an exact-search entry point is handed an instance larger than
/// its configured vertex bound.
struct SizeBoundExceeded : std::runtime_error {
  explicit SizeBoundExceeded(const std::string& msg) : std::runtime_error(msg) {}
};

/// Simple digraph: no self-loops, no parallel arcs, every arc endpoint is a
/// member of the vertex set. Vertex ids are plain ints that stay stable under
/// surgery; fresh ids are minted above the current maximum. Operations on
/// digraphs are pure functions of their inputs, so values can be copied and
/// shared freely.
class Digraph {
 public:
  Digraph() = default;

  void add_vertex(Vertex v) {
    out_.try_emplace(v);
    in_.try_emplace(v);
  }

  /// Inserts tail->head. Returns false if the arc is already present.
  /// Throws on self-loops and unknown endpoints.
  bool add_arc(Vertex tail, Vertex head) {
    if (tail == head)
      throw std::invalid_argument("self-loop at vertex " + std::to_string(tail));
    require_vertex(tail);
    require_vertex(head);
    if (!out_[tail].insert(head).second) return false;
    in_[head].insert(tail);
    ++arc_count_;
    return true;
  }

  bool remove_arc(Vertex tail, Vertex head) {
    auto it = out_.find(tail);
    if (it == out_.end() || it->second.erase(head) == 0) return false;
    in_[head].erase(tail);
    --arc_count_;
    return true;
  }

  /// Removes v together with all incident arcs. No-op if v is unknown.
  void remove_vertex(Vertex v) {
    auto it = out_.find(v);
    if (it == out_.end()) return;
    arc_count_ -= it->second.size() + in_[v].size();
    for (Vertex w : it->second) in_[w].erase(v);
    for (Vertex w : in_[v]) out_[w].erase(v);
    out_.erase(v);
    in_.erase(v);
  }

  bool has_vertex(Vertex v) const { return out_.count(v) != 0; }

  bool has_arc(Vertex tail, Vertex head) const {
    auto it = out_.find(tail);
    return it != out_.end() && it->second.count(head) != 0;
  }

  std::size_t vertex_count() const { return out_.size(); }
  std::size_t arc_count() const { return arc_count_; }

  std::vector<Vertex> vertices() const {
    std::vector<Vertex> vs;
    vs.reserve(out_.size());
    for (const auto& [v, _] : out_) vs.push_back(v);
    return vs;
  }

  std::vector<Arc> arcs() const {
    std::vector<Arc> as;
    as.reserve(arc_count_);
    for (const auto& [v, heads] : out_)
      for (Vertex h : heads) as.push_back({v, h});
    return as;  // ascending (tail, head) because both maps are ordered
  }

  const std::set<Vertex>& out_neighbors(Vertex v) const {
    auto it = out_.find(v);
    if (it == out_.end()) unknown_vertex(v);
    return it->second;
  }

  const std::set<Vertex>& in_neighbors(Vertex v) const {
    auto it = in_.find(v);
    if (it == in_.end()) unknown_vertex(v);
    return it->second;
  }

  int out_degree(Vertex v) const { return static_cast<int>(out_neighbors(v).size()); }
  int in_degree(Vertex v) const { return static_cast<int>(in_neighbors(v).size()); }

  /// Smallest id strictly above every existing vertex (1 for the empty graph).
  Vertex fresh_vertex() const { return out_.empty() ? 1 : out_.rbegin()->first + 1; }

  friend bool operator==(const Digraph& a, const Digraph& b) { return a.out_ == b.out_; }

 private:
  void require_vertex(Vertex v) const {
    if (!has_vertex(v)) unknown_vertex(v);
  }
  [[noreturn]] static void unknown_vertex(Vertex v) {
    throw std::invalid_argument("unknown vertex " + std::to_string(v));
  }

  std::map<Vertex, std::set<Vertex>> out_;
  std::map<Vertex, std::set<Vertex>> in_;  // mirror of out_
  std::size_t arc_count_ = 0;
};

enum class Variant { Branching, Tree };

/// A digraph with a designated root, a leaf target k, and the problem variant
/// (Branching: spanning out-tree; Tree: out-tree on any subset of vertices).
struct RootedInstance {
  Digraph graph;
  Vertex root = 0;
  int k = 1;
  Variant variant = Variant::Branching;
};

inline void validate_instance(const RootedInstance& inst) {
  if (!inst.graph.has_vertex(inst.root))
    throw std::invalid_argument("root " + std::to_string(inst.root) + " is not a vertex");
  if (inst.k < 1) throw std::invalid_argument("k must be >= 1");
}

/// Out-tree as a parent function: every vertex except the root has exactly one
/// parent and is reachable from the root along parent->child arcs. A leaf is a
/// vertex without children; the single-vertex tree counts its root as a leaf.
struct OutTree {
  Vertex root = 0;
  std::map<Vertex, Vertex> parent;  // child -> parent; root has no entry
  int leaf_count = 0;

  std::vector<Vertex> vertices() const {
    std::vector<Vertex> vs{root};
    for (const auto& [c, _] : parent)
      if (c != root) vs.push_back(c);
    std::sort(vs.begin(), vs.end());
    return vs;
  }

  std::vector<Arc> arcs() const {
    std::vector<Arc> as;
    as.reserve(parent.size());
    for (const auto& [c, p] : parent) as.push_back({p, c});
    std::sort(as.begin(), as.end());
    return as;
  }

  friend bool operator==(const OutTree& a, const OutTree& b) {
    return a.root == b.root && a.parent == b.parent;
  }
};

inline OutTree make_out_tree(Vertex root, std::map<Vertex, Vertex> parent) {
  OutTree t{root, std::move(parent), 0};
  std::set<Vertex> parents;
  for (const auto& [c, p] : t.parent) parents.insert(p);
  int leaves = parents.count(root) ? 0 : 1;
  for (const auto& [c, p] : t.parent)
    if (!parents.count(c)) ++leaves;
  t.leaf_count = leaves;
  return t;
}

namespace detail {

inline std::set<Vertex> reach(const Digraph& d, Vertex root, const std::set<Vertex>& avoid) {
  std::set<Vertex> seen;
  if (avoid.count(root)) return seen;
  std::deque<Vertex> queue{root};
  seen.insert(root);
  while (!queue.empty()) {
    Vertex v = queue.front();
    queue.pop_front();
    for (Vertex w : d.out_neighbors(v))
      if (!avoid.count(w) && seen.insert(w).second) queue.push_back(w);
  }
  return seen;
}

/// Parent-choice enumeration over all spanning out-branchings rooted at root:
/// each non-root vertex picks one in-neighbor, partial assignments that close
/// a cycle are pruned, so every complete assignment is an out-branching.
/// Visitor gets the parent map and returns false to stop the search.
template <typename Visitor>
void enumerate_parent_choices(const Digraph& d, Vertex root, Visitor&& visit) {
  std::vector<Vertex> order;
  for (Vertex v : d.vertices())
    if (v != root) order.push_back(v);

  std::map<Vertex, Vertex> parent;
  auto closes_cycle = [&](Vertex child, Vertex cand) {
    // walk the already-assigned ancestor chain of cand; hitting child closes a cycle
    Vertex cur = cand;
    while (true) {
      if (cur == child) return true;
      auto it = parent.find(cur);
      if (it == parent.end()) return false;
      cur = it->second;
    }
  };

  auto rec = [&](auto&& self, std::size_t i) -> bool {
    if (i == order.size()) return visit(std::as_const(parent));
    Vertex v = order[i];
    for (Vertex p : d.in_neighbors(v)) {
      if (closes_cycle(v, p)) continue;
      parent[v] = p;
      bool keep_going = self(self, i + 1);
      parent.erase(v);
      if (!keep_going) return false;
    }
    return true;
  };
  rec(rec, 0);
}

}  // namespace detail

/// Vertices reachable from root (including root itself).
inline std::set<Vertex> reachable_from(const Digraph& d, Vertex root) {
  if (!d.has_vertex(root))
    throw std::invalid_argument("unknown root " + std::to_string(root));
  return detail::reach(d, root, {});
}

/// True iff removing s leaves v unreachable from root. Requires v, root in the
/// graph and r, v outside s.
inline bool is_separator(const Digraph& d, Vertex root, const std::set<Vertex>& s, Vertex v) {
  if (!d.has_vertex(root) || !d.has_vertex(v))
    throw std::invalid_argument("separator query outside vertex set");
  if (s.count(root) || s.count(v))
    throw std::invalid_argument("separator set may contain neither the root nor the target");
  for (Vertex x : s)
    if (!d.has_vertex(x)) throw std::invalid_argument("separator vertex outside vertex set");
  return detail::reach(d, root, s).count(v) == 0;
}

/// dom[v] = vertices lying on every root->v path. Convention: the root
/// dominates every reachable vertex, every vertex dominates itself, and
/// unreachable vertices get an empty set. Computed by vertex-deletion probes,
/// which is plenty at the instance sizes this library targets.
inline std::map<Vertex, std::set<Vertex>> dominators(const Digraph& d, Vertex root) {
  std::set<Vertex> reachable = reachable_from(d, root);
  std::map<Vertex, std::set<Vertex>> dom;
  for (Vertex v : d.vertices()) dom[v] = {};
  for (Vertex v : reachable) dom[v] = {v, root};
  for (Vertex u : reachable) {
    if (u == root) continue;
    std::set<Vertex> without = detail::reach(d, root, {u});
    for (Vertex v : reachable)
      if (v != u && without.count(v) == 0) dom[v].insert(u);
  }
  return dom;
}

struct Contraction {
  Digraph graph;
  Vertex merged = 0;  // the freshly minted vertex replacing both endpoints
};

/// Contracts arc u->v into a fresh vertex u': in-arcs of u or v become in-arcs
/// of u', out-arcs become out-arcs of u'; duplicates merge and self-loops are
/// dropped. The fresh id is deterministic (max id + 1), so replays agree.
inline Contraction contract_arc(const Digraph& d, Vertex u, Vertex v) {
  if (!d.has_arc(u, v))
    throw std::invalid_argument("contract_arc: arc is not present");
  Vertex fresh = d.fresh_vertex();
  Digraph g;
  for (Vertex w : d.vertices())
    if (w != u && w != v) g.add_vertex(w);
  g.add_vertex(fresh);
  auto rename = [&](Vertex w) { return (w == u || w == v) ? fresh : w; };
  for (const Arc& a : d.arcs()) {
    Vertex t = rename(a.tail), h = rename(a.head);
    if (t != h) g.add_arc(t, h);
  }
  return {std::move(g), fresh};
}

/// Subgraph induced by keep (which must be a subset of the vertex set).
inline Digraph induced_subgraph(const Digraph& d, const std::set<Vertex>& keep) {
  Digraph g;
  for (Vertex v : keep) {
    if (!d.has_vertex(v))
      throw std::invalid_argument("induced_subgraph: vertex outside graph");
    g.add_vertex(v);
  }
  for (Vertex v : keep)
    for (Vertex w : d.out_neighbors(v))
      if (keep.count(w)) g.add_arc(v, w);
  return g;
}

/// The unique spanning out-branching of d rooted at root, if there is exactly
/// one. Intended for tiny induced subgraphs; throws SizeBoundExceeded above
/// max_vertices to guard against accidental exponential searches.
inline std::optional<OutTree> unique_out_branching(const Digraph& d, Vertex root,
                                                   std::size_t max_vertices = 8) {
  if (!d.has_vertex(root))
    throw std::invalid_argument("unknown root " + std::to_string(root));
  if (d.vertex_count() > max_vertices)
    throw SizeBoundExceeded("unique_out_branching: " + std::to_string(d.vertex_count()) +
                            " vertices exceeds bound " + std::to_string(max_vertices));
  std::optional<OutTree> found;
  bool unique = true;
  detail::enumerate_parent_choices(d, root, [&](const std::map<Vertex, Vertex>& parent) {
    if (found) {
      unique = false;
      return false;
    }
    found = make_out_tree(root, parent);
    return true;
  });
  if (!unique) return std::nullopt;
  return found;
}

}  // namespace maxleaf
