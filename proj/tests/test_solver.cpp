#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>

#include "maxleaf/solver.hpp"
#include "oracles.hpp"

using maxleaf::Digraph;
using maxleaf::OutTree;
using maxleaf::Variant;
using maxleaf::Vertex;
using oracle::make_graph;

namespace {

Digraph random_digraph(std::mt19937_64& rng, int n, double p) {
  Digraph d;
  for (int v = 1; v <= n; ++v) d.add_vertex(v);
  std::bernoulli_distribution coin(p);
  for (int t = 1; t <= n; ++t)
    for (int h = 1; h <= n; ++h)
      if (t != h && coin(rng)) d.add_arc(t, h);
  return d;
}

// Independent out-tree oracle: try every vertex subset containing the root,
// take the best spanning branching of the induced subgraph. Trees rooted at r
// only ever use vertices of their own subset, so this sweeps all out-trees.
std::optional<int> subset_max_leaf_out_tree(const Digraph& d, Vertex root) {
  std::vector<Vertex> others;
  for (Vertex v : d.vertices())
    if (v != root) others.push_back(v);
  std::optional<int> best;
  const int n = static_cast<int>(others.size());
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    std::set<Vertex> keep{root};
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) keep.insert(others[i]);
    auto sub = maxleaf::induced_subgraph(d, keep);
    auto val = oracle::max_leaf_out_branching(sub, root);
    if (val && (!best || *val > *best)) best = val;
  }
  return best;
}

// Checks that an OutTree is a genuine spanning out-branching of d.
void check_branching(const Digraph& d, const OutTree& t) {
  auto vs = t.vertices();
  CHECK(vs == d.vertices());
  for (const auto& [child, par] : t.parent) CHECK(d.has_arc(par, child));
  CHECK(maxleaf::reachable_from(maxleaf::induced_subgraph(d, {vs.begin(), vs.end()}), t.root).size() >=
        vs.size());
}

}  // namespace

TEST_CASE("enumerate_out_branchings on pinned shapes") {
  // star r=1 -> {2,3}: one branching
  CHECK(maxleaf::enumerate_out_branchings(make_graph(3, {{1, 2}, {1, 3}}), 1).size() == 1);

  // diamond: c picks one of two parents
  Digraph diamond = make_graph(4, {{1, 2}, {1, 3}, {2, 4}, {3, 4}});
  auto all = maxleaf::enumerate_out_branchings(diamond, 1);
  CHECK(all.size() == 2);
  for (const auto& t : all) check_branching(diamond, t);

  // unreachable vertex: no spanning branching
  CHECK(maxleaf::enumerate_out_branchings(make_graph(3, {{1, 2}}), 1).empty());

  // bound guard
  Digraph big = make_graph(13, {});
  CHECK_THROWS_AS(maxleaf::enumerate_out_branchings(big, 1), maxleaf::SizeBoundExceeded);
  CHECK_NOTHROW(maxleaf::enumerate_out_branchings(big, 1, 13));
}

TEST_CASE("enumeration count matches rejection oracle") {
  oracle::for_each_digraph(3, [](const Digraph& d) {
    for (Vertex root : d.vertices()) {
      auto all = maxleaf::enumerate_out_branchings(d, root);
      CHECK(static_cast<long long>(all.size()) == oracle::count_out_branchings(d, root));
      for (const auto& t : all) check_branching(d, t);
    }
  });

  std::mt19937_64 rng(20240610);
  for (int trial = 0; trial < 200; ++trial) {
    int n = 4 + static_cast<int>(rng() % 3);  // 4..6
    Digraph d = random_digraph(rng, n, 0.35);
    CHECK(static_cast<long long>(maxleaf::enumerate_out_branchings(d, 1).size()) ==
          oracle::count_out_branchings(d, 1));
  }
}

TEST_CASE("max_leaf_out_branching on pinned shapes") {
  // star r->a,b,c
  auto star = maxleaf::max_leaf_out_branching(make_graph(4, {{1, 2}, {1, 3}, {1, 4}}), 1);
  REQUIRE(star.has_value());
  CHECK(star->leaves == 3);
  CHECK(star->witness.leaf_count == 3);

  // path r->a->b
  auto path = maxleaf::max_leaf_out_branching(make_graph(3, {{1, 2}, {2, 3}}), 1);
  REQUIRE(path.has_value());
  CHECK(path->leaves == 1);

  // no branching at all
  CHECK_FALSE(maxleaf::max_leaf_out_branching(make_graph(2, {}), 1).has_value());

  // single vertex: the root is its own single leaf
  auto solo = maxleaf::max_leaf_out_branching(make_graph(1, {}), 1);
  REQUIRE(solo.has_value());
  CHECK(solo->leaves == 1);
}

TEST_CASE("max leaves of the one-set cover gadget") {
  // Covering structure for universe {1,2} and the single set {1,2}, wired the
  // way the willow construction does it: stem e2 e1 s1 p p' r with ids
  // 1=e1, 2=e2, 3=s1, 4=p, 5=p', 6=r, plus top arcs r->s1, s1->e1, s1->e2,
  // r->p, r->p'. Best branching: r->{s1,p,p'}, s1->{e1,e2} giving 4 leaves,
  // matching n+m+2-b at the optimal pick b=1.
  Digraph g = make_graph(6, {{2, 1}, {1, 3}, {3, 4}, {4, 5}, {5, 6},   // stem, bottom up
                             {6, 3}, {3, 1}, {3, 2}, {6, 4}, {6, 5}});  // top arcs
  auto best = maxleaf::max_leaf_out_branching(g, 6);
  REQUIRE(best.has_value());
  CHECK(best->leaves == 4);
  CHECK(oracle::max_leaf_out_branching(g, 6) == std::optional<int>(4));
}

TEST_CASE("max_leaf_out_branching agrees with rejection oracle") {
  oracle::for_each_digraph(3, [](const Digraph& d) {
    for (Vertex root : d.vertices()) {
      auto lib = maxleaf::max_leaf_out_branching(d, root);
      auto ref = oracle::max_leaf_out_branching(d, root);
      CHECK(lib.has_value() == ref.has_value());
      if (lib && ref) CHECK(lib->leaves == *ref);
    }
  });

  std::mt19937_64 rng(20240611);
  for (int trial = 0; trial < 200; ++trial) {
    int n = 4 + static_cast<int>(rng() % 4);  // 4..7
    Digraph d = random_digraph(rng, n, 0.3);
    auto lib = maxleaf::max_leaf_out_branching(d, 1);
    auto ref = oracle::max_leaf_out_branching(d, 1);
    CHECK(lib.has_value() == ref.has_value());
    if (lib && ref) CHECK(lib->leaves == *ref);
  }
}

TEST_CASE("max_leaf_out_tree on pinned shapes") {
  // r=1, a=2, c=3, d=4: restrict to {r,a}
  CHECK(maxleaf::max_leaf_out_tree(make_graph(4, {{1, 2}, {3, 4}}), 1).leaves == 1);

  // star plus an unreachable vertex
  CHECK(maxleaf::max_leaf_out_tree(make_graph(5, {{1, 2}, {1, 3}, {1, 4}}), 1).leaves == 3);

  // isolated root: the trivial tree
  CHECK(maxleaf::max_leaf_out_tree(make_graph(2, {}), 1).leaves == 1);
}

TEST_CASE("out-tree maximum equals subset enumeration") {
  oracle::for_each_digraph(3, [](const Digraph& d) {
    for (Vertex root : d.vertices()) {
      auto ref = subset_max_leaf_out_tree(d, root);
      REQUIRE(ref.has_value());  // the singleton {root} always qualifies
      CHECK(maxleaf::max_leaf_out_tree(d, root).leaves == *ref);
    }
  });

  std::mt19937_64 rng(20240612);
  for (int trial = 0; trial < 120; ++trial) {
    int n = 4 + static_cast<int>(rng() % 3);  // 4..6
    Digraph d = random_digraph(rng, n, 0.3);
    auto ref = subset_max_leaf_out_tree(d, 1);
    CHECK(maxleaf::max_leaf_out_tree(d, 1).leaves == *ref);
  }
}

TEST_CASE("out-tree maximum equals branching maximum when all reachable") {
  std::mt19937_64 rng(20240613);
  int covered = 0;
  for (int trial = 0; trial < 400 && covered < 150; ++trial) {
    int n = 2 + static_cast<int>(rng() % 7);  // 2..8
    Digraph d = random_digraph(rng, n, 0.4);
    if (maxleaf::reachable_from(d, 1).size() != d.vertex_count()) continue;
    ++covered;
    auto branching = maxleaf::max_leaf_out_branching(d, 1);
    REQUIRE(branching.has_value());
    CHECK(maxleaf::max_leaf_out_tree(d, 1).leaves == branching->leaves);
  }
  CHECK(covered >= 50);
}

TEST_CASE("arc deletion never increases the branching maximum") {
  std::mt19937_64 rng(20240614);
  for (int trial = 0; trial < 150; ++trial) {
    int n = 3 + static_cast<int>(rng() % 4);  // 3..6
    Digraph d = random_digraph(rng, n, 0.4);
    auto before = maxleaf::max_leaf_out_branching(d, 1);
    for (const maxleaf::Arc& a : d.arcs()) {
      Digraph less = d;
      less.remove_arc(a.tail, a.head);
      auto after = maxleaf::max_leaf_out_branching(less, 1);
      if (after) {
        REQUIRE(before.has_value());
        CHECK(after->leaves <= before->leaves);
      }
    }
  }
}

TEST_CASE("decide on pinned shapes") {
  Digraph star = make_graph(4, {{1, 2}, {1, 3}, {1, 4}});
  CHECK(maxleaf::decide({star, 1, 3, Variant::Branching}));
  CHECK_FALSE(maxleaf::decide({star, 1, 4, Variant::Branching}));

  Digraph split = make_graph(4, {{1, 2}, {1, 3}});
  CHECK_FALSE(maxleaf::decide({split, 1, 1, Variant::Branching}));
  CHECK(maxleaf::decide({split, 1, 1, Variant::Tree}));
  CHECK(maxleaf::decide({split, 1, 2, Variant::Tree}));
  CHECK_FALSE(maxleaf::decide({split, 1, 3, Variant::Tree}));
}
