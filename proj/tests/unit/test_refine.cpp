#include <doctest.h>

#include <cmath>
#include <random>

#include "dtw/oracle.hpp"
#include "dtw/refine.hpp"

using namespace dtw;

TEST_CASE("green tree sums and height") {
  std::mt19937_64 rng(4);
  for (int it = 0; it < 200; ++it) {
    std::size_t m = 1 + rng() % 60;
    std::vector<long long> h(m);
    for (auto& x : h) x = 1 + static_cast<long long>(rng() % (1 + rng() % 5000));
    long long Q = 0;
    for (auto x : h) Q += x;
    auto gt = green_tree(h);
    CHECK(gt.sum_lheight() <= 26 * Q);
    CHECK(gt.height() <= 2 * std::log2(static_cast<double>(Q)) + 10);
    for (std::size_t i = 0; i < m; ++i) CHECK(gt.label[gt.leaf_of[i]] == h[i]);
  }
  auto single = green_tree({7});
  CHECK(single.size() == 1);
}

TEST_CASE("balancing keeps validity and the width bound") {
  std::mt19937_64 rng(8);
  for (int it = 0; it < 40; ++it) {
    std::size_t n = 20 + rng() % 200;
    LabeledGraph g;
    for (Vertex v = 0; v < n; ++v) g.verts.push_back(v);
    g.g = LocalGraph(static_cast<int>(n));
    auto es = oracle::random_ktree(n, 1, rng);
    for (auto [u, v] : es) g.g.add_edge(static_cast<int>(u), static_cast<int>(v));
    auto d = *decompose_within(g, 1);
    auto b = balance_decomposition(d);
    CHECK(b.is_binary());
    CHECK(b.width() <= 3 * d.width() + 2);
    CHECK(plain_td_valid(b, g.verts, es));
    CHECK(b.height() <= 4 * (std::log2(static_cast<double>(b.size())) + 1));
  }
}

TEST_CASE("subset expansion") {
  PlainTD t;
  t.bags = {{0, 1, 2}, {2, 3}};
  t.parent = {-1, 0};
  t.root = 0;
  auto all = all_subsets_expand(t);
  std::set<VertexSet> seen(all.bags.begin(), all.bags.end());
  for (VertexSet s : {VertexSet{}, VertexSet{0, 2}, VertexSet{1}, VertexSet{2, 3}, VertexSet{0, 1, 2}})
    CHECK(seen.count(s));
  std::vector<int> leaf_of;
  auto e = expand_for(t, {{1, 2}, {3}}, leaf_of);
  REQUIRE(e.has_value());
  CHECK(e->bags[leaf_of[0]] == VertexSet{1, 2});
  CHECK(e->bags[leaf_of[1]] == VertexSet{3});
  CHECK_FALSE(expand_for(t, {{0, 3}}, leaf_of).has_value());
}

TEST_CASE("refine output is a valid decomposition of width at most ell") {
  std::mt19937_64 rng(12);
  for (auto mode : {ClosureMode::prefix, ClosureMode::exact}) {
    int done = 0;
    for (int it = 0; it < 40; ++it) {
      std::size_t n = 8 + rng() % 6;
      DynGraph g(n);
      for (auto [u, v] : oracle::random_tw_bounded(n, 1, 0.9, rng())) g.add_edge(u, v);
      auto td = AnnotatedTD::from_plain(oracle::random_decomposition(g, rng), g);
      if (td.width() > 11) continue;
      auto all = td.preorder();
      std::vector<NodeId> prefix;
      for (NodeId t = all[rng() % all.size()]; t != NIL; t = td.parent(t)) prefix.push_back(t);
      AutomatonRun<HeightAutomaton> h;
      AutomatonRun<CmpSizeAutomaton> cs;
      h.init(td);
      cs.init(td);
      PatternSource pat(td);
      RefineAux aux{&pat, [&](NodeId t) { return h.state(t); }, [&](NodeId t) { return cs.state(t); }};
      RefineConfig cfg{1, 11, mode == ClosureMode::exact ? 3 : 20736, mode, true};
      auto rr = refine(td, g, prefix, cfg, aux);
      if (!rr.update) {
        CHECK(rr.error == "no closure");
        continue;
      }
      ++done;
      td.apply(*rr.update);
      CHECK(td.validate(g).empty());
      CHECK(td.width() <= 11);
    }
    CHECK(done > 0);
  }
}

TEST_CASE("potential grows with bag size and height") {
  auto a = AnnotatedTD::complete_binary(3);
  auto b = AnnotatedTD::complete_binary(7);
  CHECK(potential(a, 11) < potential(b, 11));
  CHECK(potential(a, 11) == BigInt(53 * 15) * (2 + 1 + 1));
}
