#pragma once
// Exact "treewidth at most k" automaton. The state at x is G_x folded by safe
// reductions on interior vertices (simplicial / almost simplicial of degree
// <= k are eliminated, a simplicial vertex of degree > k rejects). What
// remains is a small core kept verbatim; the root core is decided exactly.

#include <optional>

#include "dtw/automata.hpp"

namespace dtw {

struct BkAutomaton {
  int k = 1;

  struct State {
    bool reject = false;
    VertexSet verts;
    std::vector<Edge> edges;
    bool operator==(const State& o) const {
      return reject == o.reject && verts == o.verts && edges == o.edges;
    }
  };

  State leaf(const NodeView& v) const { return join_impl(v, nullptr, nullptr, nullptr); }
  State join(const NodeView& v, const State& a, const State* b) const { return join_impl(v, &a, b, nullptr); }
  // Also reports the eliminated interior vertices in elimination order.
  State join_impl(const NodeView& v, const State* a, const State* b, std::vector<Vertex>* elim) const;
  bool accepting(const State& root) const;
};

bool bk_decide(const AnnotatedTD& td, int k);

// Decomposition of width <= k of the graph stored in td (edges functions),
// built from the automaton's elimination trace plus an exact order of the
// root core. nullopt iff tw > k.
std::optional<AnnotatedTD> bk_construct(const AnnotatedTD& td, const DynGraph& g, int k);

}  // namespace dtw
