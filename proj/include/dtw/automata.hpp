#pragma once
// Tree decomposition automata: a state per node computed bottom-up from the
// node's bag, adhesion, edges and the children's adhesions and states.
//
// An automaton type A provides
//   using State = ...;                       (equality comparable)
//   State leaf(const NodeView&) const;
//   State join(const NodeView&, const State& qy, const State* qz) const;
// NodeView carries bag, adhesion, edges and the children's adhesions.

#include <algorithm>
#include <memory>
#include <unordered_map>
#include <vector>

#include "dtw/td.hpp"

namespace dtw {

struct NodeView {
  const VertexSet& bag;
  const VertexSet& adh;
  const VertexSet* adh_y;  // null at leaves
  const VertexSet* adh_z;  // null unless two children
  const std::vector<Edge>& edges;
};

class RunBase {
 public:
  virtual ~RunBase() = default;
  virtual void init(const AnnotatedTD& td) = 0;
  // `u` has already been applied to td; `removed` lists nodes that vanished.
  virtual void update(const AnnotatedTD& td, const PrefixUpdate& u, const std::vector<NodeId>& removed) = 0;
};

// Nodes whose state must be recomputed after `u`: attached appendices first,
// then the new prefix bottom-up.
std::vector<NodeId> recompute_order(const PrefixUpdate& u);

template <class A>
class AutomatonRun : public RunBase {
 public:
  using State = typename A::State;

  explicit AutomatonRun(A a = A{}) : a_(std::move(a)) {}

  const A& automaton() const { return a_; }
  const State& state(NodeId t) const { return st_.at(t); }
  const std::unordered_map<NodeId, State>& states() const { return st_; }

  void init(const AnnotatedTD& td) override {
    st_.clear();
    auto order = td.preorder();
    for (auto it = order.rbegin(); it != order.rend(); ++it) compute(td, *it);
  }

  void update(const AnnotatedTD& td, const PrefixUpdate& u, const std::vector<NodeId>& removed) override {
    for (NodeId t : removed) st_.erase(t);
    for (NodeId t : recompute_order(u)) compute(td, t);
  }

  void compute(const AnnotatedTD& td, NodeId t) {
    const auto& x = td.node(t);
    VertexSet adh = td.adhesion(t);
    if (x.child[0] == NIL) {
      NodeView v{x.bag, adh, nullptr, nullptr, x.edges};
      st_[t] = a_.leaf(v);
      return;
    }
    VertexSet ay = td.adhesion(x.child[0]);
    if (x.child[1] == NIL) {
      NodeView v{x.bag, adh, &ay, nullptr, x.edges};
      st_[t] = a_.join(v, st_.at(x.child[0]), nullptr);
      return;
    }
    VertexSet az = td.adhesion(x.child[1]);
    NodeView v{x.bag, adh, &ay, &az, x.edges};
    st_[t] = a_.join(v, st_.at(x.child[0]), &st_.at(x.child[1]));
  }

 private:
  A a_;
  std::unordered_map<NodeId, State> st_;
};

struct HeightAutomaton {
  using State = int;
  State leaf(const NodeView&) const { return 1; }
  State join(const NodeView&, const State& a, const State* b) const { return 1 + std::max(a, b ? *b : 0); }
};

struct SizeAutomaton {
  using State = long long;
  State leaf(const NodeView&) const { return 1; }
  State join(const NodeView&, const State& a, const State* b) const { return 1 + a + (b ? *b : 0); }
};

// |component(x)|
struct CmpSizeAutomaton {
  using State = long long;
  State leaf(const NodeView& v) const { return static_cast<State>(v.bag.size() - v.adh.size()); }
  State join(const NodeView& v, const State& a, const State* b) const {
    return static_cast<State>(v.bag.size() - v.adh.size()) + a + (b ? *b : 0);
  }
};

// Pairs of adh(x) joined by a path whose inner vertices lie in component(x):
// the torso of G_x on its boundary.
struct PatternAutomaton {
  using State = std::vector<Edge>;
  State leaf(const NodeView& v) const { return join_impl(v, nullptr, nullptr); }
  State join(const NodeView& v, const State& a, const State* b) const { return join_impl(v, &a, b); }
  static State join_impl(const NodeView& v, const State* a, const State* b);
};

// Maximum independent set: for every subset S of adh(x) (bitmask in adh
// order) the largest |I ∩ component(x)| over independent sets I of G_x with
// I ∩ adh(x) = S.
struct MisAutomaton {
  using State = std::vector<int>;
  State leaf(const NodeView& v) const { return join_impl(v, nullptr, nullptr); }
  State join(const NodeView& v, const State& a, const State* b) const { return join_impl(v, &a, b); }
  State join_impl(const NodeView& v, const State* a, const State* b) const;
  static int value(const State& root) { return root.at(0); }
};

// q-colouring: the set of colourings of adh(x) (normalised by first
// occurrence, 3 bits per vertex) that extend to a proper colouring of G_x.
struct ColoringAutomaton {
  int q = 3;
  using State = std::vector<std::uint64_t>;
  State leaf(const NodeView& v) const { return join_impl(v, nullptr, nullptr); }
  State join(const NodeView& v, const State& a, const State* b) const { return join_impl(v, &a, b); }
  State join_impl(const NodeView& v, const State* a, const State* b) const;
  static bool accepting(const State& root) { return !root.empty(); }
};

// Highest node containing each vertex.
class TopMap : public RunBase {
 public:
  void init(const AnnotatedTD& td) override;
  void update(const AnnotatedTD& td, const PrefixUpdate& u, const std::vector<NodeId>& removed) override;
  NodeId top(Vertex v) const { return top_.at(v); }
  const std::vector<NodeId>& all() const { return top_; }
  void resize(std::size_t n) { top_.assign(n, NIL); }

 private:
  std::vector<NodeId> top_;
};

}  // namespace dtw
