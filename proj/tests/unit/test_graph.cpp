#include <doctest.h>

#include "dtw/graph.hpp"

using namespace dtw;

TEST_CASE("dyn graph add remove") {
  DynGraph g(4);
  g.add_edge(0, 1);
  g.add_edge(2, 1);
  CHECK(g.has_edge(1, 0));
  CHECK(g.num_edges() == 2);
  g.remove_edge(1, 0);
  CHECK_FALSE(g.has_edge(0, 1));
  CHECK(g.neighbors(1) == VertexSet{2});
  CHECK(g.edges() == std::vector<Edge>{{1, 2}});
}

TEST_CASE("components and torso of a path") {
  DynGraph g(5);
  for (Vertex v = 0; v + 1 < 5; ++v) g.add_edge(v, v + 1);
  auto cc = components_minus(g, {2});
  CHECK(cc.size() == 2);
  CHECK(neighborhood(g, {0, 1}) == VertexSet{2});
  auto t = torso(g, {0, 4});
  CHECK(t.edges() == std::vector<Edge>{{0, 4}});
  auto t2 = torso(g, {0, 2, 4});
  CHECK(t2.edges().size() == 2);
}

TEST_CASE("separators") {
  // 2x3 grid: 0-1-2 / 3-4-5 with rungs
  DynGraph g(6);
  for (auto [u, v] : std::vector<Edge>{{0, 1}, {1, 2}, {3, 4}, {4, 5}, {0, 3}, {1, 4}, {2, 5}}) g.add_edge(u, v);
  CHECK(min_separator_size(g, {0}, {5}) == 1);  // {0} itself
  CHECK(min_separator_size(g, {0, 3}, {2, 5}) == 2);
  CHECK(is_separator(g, {0}, {5}, {1, 3}));
  CHECK_FALSE(is_separator(g, {0}, {5}, {1}));
}

TEST_CASE("set helpers") {
  VertexSet a{1, 3, 5}, b{3, 4};
  CHECK(set_union(a, b) == VertexSet{1, 3, 4, 5});
  CHECK(set_intersection(a, b) == VertexSet{3});
  CHECK(set_difference(a, b) == VertexSet{1, 5});
  insert_sorted(a, 2);
  CHECK(a == VertexSet{1, 2, 3, 5});
  erase_sorted(a, 3);
  CHECK(a == VertexSet{1, 2, 5});
}
