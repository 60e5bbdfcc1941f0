#pragma once
// Plain (unannotated) rooted decompositions and the width-bounded decomposition
// routines used to build T^X and for rebuilds.

#include <cstdint>
#include <optional>
#include <vector>

#include "dtw/graph.hpp"

namespace dtw {

struct PlainTD {
  std::vector<VertexSet> bags;
  std::vector<int> parent;  // -1 for the root
  int root = -1;

  int size() const { return static_cast<int>(bags.size()); }
  int width() const;
  int height() const;  // number of nodes on a longest root-leaf path
  std::vector<std::vector<int>> children() const;
  bool is_binary() const;
};

// Checks the vertex and edge conditions of `td` against the graph (edges given
// with vertex ids). Vertices listed in `verts` must all be covered.
bool plain_td_valid(const PlainTD& td, const VertexSet& verts, const std::vector<Edge>& edges);

// Elimination-ordering based decomposition of a labelled graph.
PlainTD td_from_order(const LabeledGraph& g, const std::vector<int>& order);
int elimination_width(const LocalGraph& g, const std::vector<int>& order);

std::vector<int> min_degree_order(const LocalGraph& g);
std::vector<int> min_fill_order(const LocalGraph& g);

// Exact decision tw(g) <= k by memoised elimination search with safe
// reductions. Returns nullopt when the node budget is exhausted.
std::optional<bool> tw_at_most(const LocalGraph& g, int k, std::vector<int>* order = nullptr,
                               std::int64_t budget = 2'000'000);

// Exact treewidth (small graphs only).
int treewidth_exact(const LocalGraph& g, std::vector<int>* order = nullptr);

// A decomposition of width <= target, or nullopt if none was found
// (heuristics first, exact search for small graphs).
std::optional<PlainTD> decompose_within(const LabeledGraph& g, int target,
                                        std::int64_t exact_budget = 200'000);

// Make every node have at most two children by chaining copies.
PlainTD binarize(const PlainTD& td);

}  // namespace dtw
