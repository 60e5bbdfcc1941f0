#pragma once
// Graph storage and the pure graph routines used by everything else.

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace dtw {

using Vertex = std::uint64_t;
using VertexSet = std::vector<Vertex>;  // always sorted, no duplicates
using Edge = std::pair<Vertex, Vertex>;  // first < second

inline Edge make_edge(Vertex u, Vertex v) { return u < v ? Edge{u, v} : Edge{v, u}; }

inline bool contains(const VertexSet& s, Vertex v) { return std::binary_search(s.begin(), s.end(), v); }

inline VertexSet set_union(const VertexSet& a, const VertexSet& b) {
  VertexSet r;
  r.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r));
  return r;
}
inline VertexSet set_intersection(const VertexSet& a, const VertexSet& b) {
  VertexSet r;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r));
  return r;
}
inline VertexSet set_difference(const VertexSet& a, const VertexSet& b) {
  VertexSet r;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r));
  return r;
}
inline bool is_subset(const VertexSet& a, const VertexSet& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}
inline void normalize(VertexSet& s) {
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
}
inline void insert_sorted(VertexSet& s, Vertex v) {
  auto it = std::lower_bound(s.begin(), s.end(), v);
  if (it == s.end() || *it != v) s.insert(it, v);
}
inline void erase_sorted(VertexSet& s, Vertex v) {
  auto it = std::lower_bound(s.begin(), s.end(), v);
  if (it != s.end() && *it == v) s.erase(it);
}

// Vertices are 0..n-1; adjacency lists kept sorted.
class DynGraph {
 public:
  DynGraph() = default;
  explicit DynGraph(std::size_t n) : adj_(n) {}

  std::size_t n() const { return adj_.size(); }
  std::size_t num_edges() const { return m_; }
  bool has_vertex(Vertex v) const { return v < adj_.size(); }

  void add_edge(Vertex u, Vertex v);
  void remove_edge(Vertex u, Vertex v);
  bool has_edge(Vertex u, Vertex v) const;
  const VertexSet& neighbors(Vertex v) const { return adj_.at(v); }
  std::vector<Edge> edges() const;

 private:
  std::vector<VertexSet> adj_;
  std::size_t m_ = 0;
};

// Small graph on local indices 0..n-1, used for torsos and decomposition work.
struct LocalGraph {
  std::vector<std::vector<int>> adj;

  LocalGraph() = default;
  explicit LocalGraph(int n) : adj(n) {}
  int n() const { return static_cast<int>(adj.size()); }
  bool has_edge(int u, int v) const {
    return std::binary_search(adj[u].begin(), adj[u].end(), v);
  }
  void add_edge(int u, int v);
  std::size_t num_edges() const;
};

// A graph on arbitrary vertex ids with a local index.
struct LabeledGraph {
  VertexSet verts;
  LocalGraph g;

  int index(Vertex v) const {
    auto it = std::lower_bound(verts.begin(), verts.end(), v);
    if (it == verts.end() || *it != v) return -1;
    return static_cast<int>(it - verts.begin());
  }
  std::vector<Edge> edges() const;
};

LabeledGraph induced(const DynGraph& g, const VertexSet& X);

std::vector<VertexSet> components_minus(const DynGraph& g, const VertexSet& X);

// Open neighbourhood of a vertex set.
VertexSet neighborhood(const DynGraph& g, const VertexSet& C);

LabeledGraph torso(const DynGraph& g, const VertexSet& X);

// Vertex-capacitated max-flow; separators may meet A and B.
int min_separator_size(const DynGraph& g, const VertexSet& A, const VertexSet& B);
inline int disjoint_paths(const DynGraph& g, const VertexSet& A, const VertexSet& B) {
  return min_separator_size(g, A, B);
}

bool is_separator(const DynGraph& g, const VertexSet& A, const VertexSet& B, const VertexSet& S);

}  // namespace dtw
