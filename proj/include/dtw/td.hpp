#pragma once
// Annotated binary tree decompositions and prefix-rebuilding updates.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "dtw/graph.hpp"
#include "dtw/treewidth.hpp"

namespace dtw {

using NodeId = std::uint64_t;
inline constexpr NodeId NIL = ~NodeId{0};

struct TDNode {
  NodeId id = NIL;
  NodeId parent = NIL;
  NodeId child[2] = {NIL, NIL};
  VertexSet bag;
  std::vector<Edge> edges;  // sorted

  int num_children() const { return (child[0] != NIL) + (child[1] != NIL); }
};

struct NewNode {
  NodeId id = NIL;
  NodeId parent = NIL;  // NIL for the new root
  VertexSet bag;
  std::vector<Edge> edges;
};

// Replace the prefix `old_prefix` by `nodes`; `attach` maps appendices of the
// old prefix to their new parents. Appendices not mentioned are dropped
// together with their subtrees.
struct PrefixUpdate {
  std::vector<NodeId> old_prefix;
  std::vector<NewNode> nodes;
  std::vector<std::pair<NodeId, NodeId>> attach;

  std::size_t size() const { return old_prefix.size() + nodes.size(); }
};

// Same as PrefixUpdate but without the edges annotation (graph unchanged).
struct WeakPrefixUpdate {
  std::vector<NodeId> old_prefix;
  std::vector<NewNode> nodes;  // edges ignored
  std::vector<std::pair<NodeId, NodeId>> attach;
};

struct ApplyResult {
  std::vector<NodeId> removed;  // old prefix plus dropped subtrees
};

class AnnotatedTD {
 public:
  AnnotatedTD() = default;

  // Complete binary tree with one singleton bag per vertex, no edges.
  static AnnotatedTD complete_binary(std::size_t n);
  // Annotated decomposition of `g` from a plain decomposition (made binary).
  static AnnotatedTD from_plain(const PlainTD& td, const DynGraph& g, NodeId first_id = 0);

  NodeId root() const { return root_; }
  std::size_t size() const { return nodes_.size(); }
  bool has_node(NodeId t) const { return nodes_.count(t) != 0; }
  const TDNode& node(NodeId t) const;
  const VertexSet& bag(NodeId t) const { return node(t).bag; }
  NodeId parent(NodeId t) const { return node(t).parent; }
  std::vector<NodeId> children(NodeId t) const;
  const std::unordered_map<NodeId, TDNode>& nodes() const { return nodes_; }

  VertexSet adhesion(NodeId t) const;
  VertexSet component_vertices(NodeId t) const;
  std::vector<NodeId> subtree(NodeId t) const;  // preorder
  std::vector<NodeId> preorder() const { return subtree(root_); }
  int depth(NodeId t) const;
  int width() const;
  int height() const;
  int height(NodeId t) const;
  std::size_t subtree_size(NodeId t) const;

  NodeId fresh_id() const { return next_id_++; }
  NodeId peek_next_id() const { return next_id_; }

  ApplyResult apply(const PrefixUpdate& u);

  // Empty string when valid, otherwise a description of the first violation.
  std::string validate(const DynGraph& g) const;

  // PACE-style dump; vertices and bag ids are written 1-based.
  void dump_pace(std::ostream& os, std::size_t n) const;

  bool same_as(const AnnotatedTD& o) const;

 private:
  std::unordered_map<NodeId, TDNode> nodes_;
  NodeId root_ = NIL;
  mutable NodeId next_id_ = 0;
};

// Nodes of `prefix` plus their appendices.
std::vector<NodeId> appendices(const AnnotatedTD& td, const std::vector<NodeId>& prefix);
bool is_prefix(const AnnotatedTD& td, const std::vector<NodeId>& prefix);

// Edges of g inside `bag` that are not inside `parent_bag`.
std::vector<Edge> edges_between(const DynGraph& g, const VertexSet& bag, const VertexSet* parent_bag);

PrefixUpdate strengthen(const AnnotatedTD& td, const DynGraph& g, const WeakPrefixUpdate& w);

// Root-path update that copies root..t and adds (or removes) edge e at t.
PrefixUpdate edge_update(const AnnotatedTD& td, NodeId t, Edge e, bool add);

// Replace the whole tree by `fresh` (used for rebuilds).
PrefixUpdate replace_all(const AnnotatedTD& td, const PlainTD& fresh, const DynGraph& g);

// Update-log serialisation.
void write_update(std::ostream& os, const PrefixUpdate& u);
bool read_update(std::istream& is, PrefixUpdate& u);

}  // namespace dtw
