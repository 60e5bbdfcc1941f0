#include <doctest.h>

#include <random>

#include "dtw/oracle.hpp"
#include "dtw/treewidth.hpp"

using namespace dtw;

namespace {

LabeledGraph labeled(int n, const std::vector<Edge>& es) {
  LabeledGraph g;
  for (int i = 0; i < n; ++i) g.verts.push_back(static_cast<Vertex>(i));
  g.g = LocalGraph(n);
  for (auto [u, v] : es) g.g.add_edge(static_cast<int>(u), static_cast<int>(v));
  return g;
}

}  // namespace

TEST_CASE("exact decision agrees with subset dp") {
  std::mt19937_64 rng(11);
  for (int it = 0; it < 200; ++it) {
    int n = 2 + static_cast<int>(rng() % 9);
    std::vector<Edge> es;
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v)
        if (rng() % 3 == 0) es.push_back({static_cast<Vertex>(u), static_cast<Vertex>(v)});
    auto g = labeled(n, es);
    int tw = oracle::exact_treewidth(n, es);
    CHECK(treewidth_exact(g.g) == tw);
    for (int k = 0; k <= 3; ++k) {
      std::vector<int> order;
      auto r = tw_at_most(g.g, k, &order);
      REQUIRE(r.has_value());
      CHECK(*r == (tw <= k));
      if (*r) CHECK(elimination_width(g.g, order) <= k);
    }
  }
}

TEST_CASE("decompose_within and binarize") {
  std::mt19937_64 rng(5);
  for (int it = 0; it < 50; ++it) {
    int n = 5 + static_cast<int>(rng() % 30);
    auto es = oracle::random_ktree(static_cast<std::size_t>(n), 2, rng);
    auto g = labeled(n, es);
    auto d = decompose_within(g, 2);
    REQUIRE(d.has_value());
    CHECK(d->width() <= 2);
    CHECK(plain_td_valid(*d, g.verts, es));
    auto b = binarize(*d);
    CHECK(b.is_binary());
    CHECK(b.width() == d->width());
    CHECK(plain_td_valid(b, g.verts, es));
  }
}

TEST_CASE("heuristic orders give valid decompositions") {
  auto g = labeled(6, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 0}});
  for (auto order : {min_degree_order(g.g), min_fill_order(g.g)}) {
    auto td = td_from_order(g, order);
    CHECK(td.width() == 2);
    CHECK(plain_td_valid(td, g.verts, g.edges()));
  }
}
