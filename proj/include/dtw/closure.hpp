#pragma once
// Closures of bags(Tpref), blockages, exploration and collected components.

#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>

#include "dtw/automata.hpp"
#include "dtw/treewidth.hpp"

namespace dtw {

struct ClosureParams {
  int k = 1;
  int ell = 11;
  long long c = 3;
};

// ---------------------------------------------------------------- reps^c

struct RepsPair {
  long long depth = 0;      // sum of local depths of Y
  VertexSet Y;              // interior vertices chosen
  std::vector<Edge> torso;  // torso of G_x on Y ∪ adh(x)
  std::string key;          // boundary-fixed isomorphism class
  bool operator==(const RepsPair& o) const {
    return depth == o.depth && Y == o.Y && torso == o.torso && key == o.key;
  }
};

// Canonical form of a graph on adh ∪ Y up to isomorphisms fixing adh.
std::string reps_key(const VertexSet& adh, const VertexSet& Y, const std::vector<Edge>& edges);

struct RepsAutomaton {
  long long c = 2;
  using State = std::vector<RepsPair>;  // sorted by key
  State leaf(const NodeView& v) const { return join_impl(v, nullptr, nullptr); }
  State join(const NodeView& v, const State& a, const State* b) const { return join_impl(v, &a, b); }
  State join_impl(const NodeView& v, const State* a, const State* b) const;
};

// Pairs {u,v} of `verts` joined in J by a path whose inner vertices satisfy
// `inner_ok` (a direct J edge counts).
std::vector<Edge> connect_pairs(const VertexSet& verts, const std::vector<Edge>& J,
                                const std::function<bool(Vertex)>& inner_ok);

// Pattern automaton states, either from a maintained run or recomputed.
class PatternSource {
 public:
  explicit PatternSource(const AnnotatedTD& td, const AutomatonRun<PatternAutomaton>* run = nullptr)
      : td_(td), run_(run) {}
  const std::vector<Edge>& get(NodeId t);

 private:
  const AnnotatedTD& td_;
  const AutomatonRun<PatternAutomaton>* run_;
  std::unordered_map<NodeId, std::vector<Edge>> memo_;
};

// ---------------------------------------------------------------- closures

struct ClosureResult {
  VertexSet X;
  LabeledGraph torso;
  long long size = 0;
  long long depth = 0;  // d_T(X) (exact mode only)
  std::vector<NodeId> tx;  // prefix mode: X = bags(tx)
  std::optional<PlainTD> certificate;  // decomposition of torso of width <= 2k+1
};

// d_T-minimal c-small k-closure of bags(prefix) (exact; small instances).
std::optional<ClosureResult> closure_query(const AnnotatedTD& td, const std::vector<NodeId>& prefix,
                                           const ClosureParams& p);

// Depth of the top node of every vertex (root depth 0).
std::vector<long long> vertex_depths(const AnnotatedTD& td, std::size_t n);

// Torso of X = bags(tx) for a prefix tx, from stored edges and appendix patterns.
LabeledGraph prefix_torso(const AnnotatedTD& td, const std::vector<NodeId>& tx, PatternSource& pat);

struct PrefixClosureStats {
  int rounds = 0;
  int expanded = 0;
  int shrunk = 0;
};

// Production closure: X = bags(Tx) for a prefix Tx ⊇ prefix with a certified
// decomposition of torso(X) of width <= 2k+1, shrunk under clique blockages.
std::optional<ClosureResult> prefix_closure(const AnnotatedTD& td, const std::vector<NodeId>& prefix,
                                            const ClosureParams& p, PatternSource& pat,
                                            PrefixClosureStats* stats = nullptr);

// ---------------------------------------------------------------- blockages

struct BlockageInfo {
  std::vector<NodeId> explored;   // exploration F (prefix nodes first)
  std::vector<NodeId> blockages;  // appendices of F
  std::unordered_map<NodeId, char> kind;  // 'c' component / 'q' clique
  std::unordered_map<NodeId, std::vector<Edge>> profile;
};

// Blockages of X w.r.t. prefix. `torso` is torso(X); `marked` must contain
// every node z with component(z) ∩ X ≠ ∅ outside the prefix (other nodes use
// the pattern source).
BlockageInfo find_blockages(const AnnotatedTD& td, const std::vector<NodeId>& prefix, const VertexSet& X,
                            const LabeledGraph& torso, PatternSource& pat,
                            const std::unordered_set<NodeId>& marked);

// Nodes z with component(z) ∩ X ≠ ∅.
std::unordered_set<NodeId> marked_nodes(const AnnotatedTD& td, const VertexSet& X);

struct CollectedComponent {
  VertexSet explored;             // explored vertices (unblocked only)
  std::vector<NodeId> blockages;  // blockage vertices of the H-component
  bool blocked = false;
  VertexSet interface;
  NodeId home = NIL;
  int height = 0;  // height of T^C

  VertexSet vertices(const AnnotatedTD& td) const;
};

struct Exploration {
  std::vector<NodeId> F;
  std::vector<NodeId> blockages;
  std::vector<CollectedComponent> comps;
};

Exploration exploration_and_components(const AnnotatedTD& td, const std::vector<NodeId>& prefix,
                                       const VertexSet& X, const BlockageInfo& bl,
                                       const std::function<int(NodeId)>& height_of,
                                       const std::function<long long(NodeId)>& cmp_size);

}  // namespace dtw
