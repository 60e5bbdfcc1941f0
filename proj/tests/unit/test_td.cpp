#include <doctest.h>

#include <random>
#include <sstream>

#include "dtw/dyntw.hpp"
#include "dtw/oracle.hpp"
#include "dtw/td.hpp"

using namespace dtw;

TEST_CASE("complete binary start") {
  auto one = AnnotatedTD::complete_binary(1);
  CHECK(one.size() == 1);
  CHECK(one.bag(one.root()) == VertexSet{0});
  auto seven = AnnotatedTD::complete_binary(7);
  CHECK(seven.height() == 3);
  CHECK(seven.width() == 0);
  CHECK(seven.validate(DynGraph(7)).empty());
  auto big = AnnotatedTD::complete_binary(10000);
  CHECK(big.validate(DynGraph(10000)).empty());
  auto empty = AnnotatedTD::complete_binary(0);
  CHECK(empty.size() == 1);
  CHECK(empty.bag(empty.root()).empty());
}

TEST_CASE("validate catches broken decompositions") {
  DynGraph g(3);
  g.add_edge(0, 2);
  auto td = AnnotatedTD::complete_binary(3);
  CHECK_FALSE(td.validate(g).empty());  // edge 02 uncovered
  PlainTD p;
  p.bags = {{0, 1}, {1, 2}, {0, 2}};
  p.parent = {-1, 0, 1};
  p.root = 0;
  // vertex 0 in bags 0 and 2 but not 1: disconnected
  CHECK_FALSE(AnnotatedTD::from_plain(p, g).validate(g).empty());
  p.bags = {{0, 1, 2}, {1, 2}, {2}};
  CHECK(AnnotatedTD::from_plain(p, g).validate(g).empty());
}

TEST_CASE("edge update relocates along the root path") {
  DynGraph g(3);
  PlainTD p;
  p.bags = {{0, 1, 2}, {1, 2}};
  p.parent = {-1, 0};
  p.root = 0;
  auto td = AnnotatedTD::from_plain(p, g);
  g.add_edge(1, 2);
  NodeId leaf = td.node(td.root()).child[0];
  auto u = edge_update(td, leaf, {1, 2}, true);
  CHECK(u.old_prefix.size() == 2);
  td.apply(u);
  // stored at the copy of the leaf, but the shallowest common node is the root
  CHECK_FALSE(td.validate(g).empty());
  auto fix = replace_all(td, p, g);
  td.apply(fix);
  CHECK(td.validate(g).empty());
  CHECK(td.node(td.root()).edges == std::vector<Edge>{{1, 2}});
}

TEST_CASE("update log round trip and faithful replay") {
  std::mt19937_64 rng(3);
  for (int run = 0; run < 5; ++run) {
    DynTW d(20, DynConfig{.k = 2});
    for (const auto& o : oracle::random_update_stream(20, 2, 150, 40 + run)) {
      AnnotatedTD before = d.td();
      auto log = o.kind == '+' ? d.insert_edge(o.u, o.v) : d.delete_edge(o.u, o.v);
      std::stringstream ss;
      for (const auto& u : log) write_update(ss, u);
      PrefixUpdate u;
      while (read_update(ss, u)) before.apply(u);
      REQUIRE(before.same_as(d.td()));
    }
  }
}

TEST_CASE("strengthen recomputes edges of new nodes") {
  DynGraph g(4);
  g.add_edge(0, 1);
  g.add_edge(2, 3);
  PlainTD p;
  p.bags = {{0, 1}, {1, 2}, {2, 3}};
  p.parent = {-1, 0, 1};
  p.root = 0;
  auto td = AnnotatedTD::from_plain(p, g);
  g.add_edge(0, 3);
  WeakPrefixUpdate w;
  w.old_prefix = td.preorder();
  NodeId a = td.fresh_id(), b = td.fresh_id(), c = td.fresh_id();
  w.nodes = {{a, NIL, {0, 1, 3}, {}}, {b, a, {1, 2, 3}, {}}, {c, b, {2, 3}, {}}};
  td.apply(strengthen(td, g, w));
  CHECK(td.validate(g).empty());
  CHECK(is_prefix(td, {td.root()}));
}
