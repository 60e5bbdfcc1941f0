#pragma once
// Promise-mode dynamic treewidth structure: keeps an annotated binary
// decomposition of width <= 6k+5 of a graph of treewidth <= k under edge
// insertions and deletions.

#include <memory>
#include <string>

#include "dtw/height.hpp"
#include "dtw/refine.hpp"

namespace dtw {

struct DynConfig {
  int k = 1;
  ClosureMode closure = ClosureMode::prefix;
  long long c0 = 0;             // 0: (ℓ+1)^4
  int c_doublings = 4;          // c0·2^i for i <= c_doublings before a rebuild
  double C = 4.0;               // schedule c = 20·C·log2 n
  long long c_height = 0;       // fixed schedule c (overrides C when > 0)
  double B_impl = 64.0;         // shrink when |V(T)| >= B_impl·n·log2 n
  bool symmetric = false;       // add both endpoints along P_u ∪ P_v
  bool validate = false;        // full check after every refine (rebuild on failure)
  bool track_potential = false; // exact Φ trace around improve_height
  bool check = true;            // refine's local assertions
  int max_height_rounds = 64;   // then a balanced rebuild
};

struct DynStats {
  long long inserts = 0, deletes = 0;
  long long refines = 0, refine_failures = 0, rebuilds = 0, shrinks = 0;
  long long height_calls = 0, height_rounds = 0, height_rebuilds = 0;
  long long height_violations = 0, size_violations = 0;
  long long phi_rounds = 0, phi_round_violations = 0, phi_call_violations = 0;
  std::string last_error;
};

class DynTW {
 public:
  explicit DynTW(std::size_t n, DynConfig cfg = {});

  // Returns the prefix-update log of the operation.
  std::vector<PrefixUpdate> insert_edge(Vertex u, Vertex v);
  std::vector<PrefixUpdate> delete_edge(Vertex u, Vertex v);

  const AnnotatedTD& td() const { return td_; }
  const DynGraph& graph() const { return g_; }
  int k() const { return cfg_.k; }
  int ell() const { return 6 * cfg_.k + 5; }
  const DynConfig& config() const { return cfg_; }
  const DynStats& stats() const { return stats_; }

  template <class A>
  AutomatonRun<A>& register_automaton(A a) {
    auto run = std::make_unique<AutomatonRun<A>>(std::move(a));
    run->init(td_);
    auto& r = *run;
    user_.push_back(std::move(run));
    return r;
  }
  template <class A>
  const typename A::State& root_state(const AutomatonRun<A>& run) const {
    return run.state(td_.root());
  }

  Schedule schedule() const;
  double size_bound() const;
  // Empty when the decomposition is valid for the graph and of width <= ℓ.
  std::string check() const;
  void improve_height();

  // Runs maintained alongside the decomposition.
  int subtree_height(NodeId t) const { return height_.state(t); }
  long long subtree_size(NodeId t) const { return size_.state(t); }
  NodeId top(Vertex v) const { return top_.top(v); }

 private:
  void apply(const PrefixUpdate& u);
  bool refine_prefix(const std::vector<NodeId>& prefix);
  void rebuild();

  DynConfig cfg_;
  DynGraph g_;
  AnnotatedTD td_;
  AutomatonRun<HeightAutomaton> height_;
  AutomatonRun<SizeAutomaton> size_;
  AutomatonRun<CmpSizeAutomaton> cmp_;
  AutomatonRun<PatternAutomaton> pat_;
  TopMap top_;
  std::vector<std::unique_ptr<RunBase>> user_;
  std::vector<PrefixUpdate>* log_ = nullptr;
  DynStats stats_;
};

// Decomposition of g of width <= 6k+5 from scratch: width <= 2k+1 by the
// heuristic/exact pipeline, then balanced.
PlainTD fresh_decomposition(const DynGraph& g, int k);

}  // namespace dtw
