#pragma once
// Brute-force ground truth and workload generators. Nothing here reuses the
// decision procedures of the library; only plain data types are shared.

#include <map>
#include <optional>
#include <random>
#include <string>

#include "dtw/td.hpp"

namespace dtw::oracle {

// Vertex-subset DP, n <= 20. `order` receives an optimal elimination order.
int exact_treewidth(int n, const std::vector<Edge>& edges, std::vector<int>* order = nullptr);
// Branch and bound over elimination orders (independent cross-check, small n).
int treewidth_bnb(int n, const std::vector<Edge>& edges);

std::vector<VertexSet> components(const DynGraph& g, const VertexSet& X);
// Pairs of X joined by a path whose inner vertices avoid X.
std::vector<Edge> torso_edges(const DynGraph& g, const VertexSet& X);

// Depth (root = 0) of the highest node containing each vertex.
std::vector<long long> top_depths(const AnnotatedTD& td, std::size_t n);

struct Closure {
  VertexSet X;
  long long size = 0;
  long long depth = 0;
};
// Minimum (|X|, d(X), lex X) over c-small k-closures of bags(prefix).
std::optional<Closure> brute_closure(const DynGraph& g, const AnnotatedTD& td, const std::vector<NodeId>& prefix,
                                     int k, long long c);

// Shallowest nodes below the prefix that are component or clique blockages.
std::map<NodeId, char> brute_blockages(const DynGraph& g, const AnnotatedTD& td, const std::vector<NodeId>& prefix,
                                       const VertexSet& X);

struct Rep {
  long long depth = 0;
  VertexSet Y;
  std::vector<Edge> torso;
};
// Canonical form of a boundaried graph up to isomorphisms fixing the boundary.
std::string canon(const VertexSet& boundary, const VertexSet& inner, const std::vector<Edge>& edges);
// Every Y ⊆ component(x) with |Y| <= c, grouped by canon, minimal (depth, lex).
std::map<std::string, Rep> brute_reps(const AnnotatedTD& td, NodeId x, long long c);

// Brute-force problem answers.
int max_independent_set(const DynGraph& g);
bool colorable(const DynGraph& g, int q);

// ---------------------------------------------------------------- generators

std::vector<Edge> random_ktree(std::size_t n, int k, std::mt19937_64& rng);
// Subgraph of a random k-tree, each edge kept with probability p.
std::vector<Edge> random_tw_bounded(std::size_t n, int k, double p, std::uint64_t seed);

struct Op {
  char kind = '+';  // '+', '-'
  Vertex u = 0, v = 0;
};
// Insertions and deletions of edges of a hidden random k-tree host.
std::vector<Op> random_update_stream(std::size_t n, int k, std::size_t ops, std::uint64_t seed,
                                     double insert_bias = 0.6);
// Unconstrained edges (treewidth may exceed any bound).
std::vector<Op> random_free_stream(std::size_t n, std::size_t ops, std::uint64_t seed, double insert_bias = 0.6);

std::vector<std::pair<std::string, std::vector<Edge>>> degenerate_shapes(std::size_t n);

// Random valid (generally unbalanced) decomposition of g from a random
// elimination order; single root.
PlainTD random_decomposition(const DynGraph& g, std::mt19937_64& rng);

}  // namespace dtw::oracle
