#include "dtw/graph.hpp"

#include <queue>

namespace dtw {

void DynGraph::add_edge(Vertex u, Vertex v) {
  if (u == v) throw std::invalid_argument("self-loop");
  if (!has_vertex(u) || !has_vertex(v)) throw std::out_of_range("vertex out of range");
  auto& a = adj_[u];
  auto it = std::lower_bound(a.begin(), a.end(), v);
  if (it != a.end() && *it == v) return;
  a.insert(it, v);
  insert_sorted(adj_[v], u);
  ++m_;
}

void DynGraph::remove_edge(Vertex u, Vertex v) {
  if (!has_vertex(u) || !has_vertex(v) || u == v) return;
  auto& a = adj_[u];
  auto it = std::lower_bound(a.begin(), a.end(), v);
  if (it == a.end() || *it != v) return;
  a.erase(it);
  erase_sorted(adj_[v], u);
  --m_;
}

bool DynGraph::has_edge(Vertex u, Vertex v) const {
  if (!has_vertex(u) || !has_vertex(v)) return false;
  if (adj_[u].size() > adj_[v].size()) std::swap(u, v);
  return std::binary_search(adj_[u].begin(), adj_[u].end(), v);
}

std::vector<Edge> DynGraph::edges() const {
  std::vector<Edge> r;
  r.reserve(m_);
  for (Vertex u = 0; u < adj_.size(); ++u)
    for (Vertex v : adj_[u])
      if (u < v) r.emplace_back(u, v);
  return r;
}

void LocalGraph::add_edge(int u, int v) {
  if (u == v) return;
  auto& a = adj[u];
  auto it = std::lower_bound(a.begin(), a.end(), v);
  if (it != a.end() && *it == v) return;
  a.insert(it, v);
  auto& b = adj[v];
  b.insert(std::lower_bound(b.begin(), b.end(), u), u);
}

std::size_t LocalGraph::num_edges() const {
  std::size_t s = 0;
  for (auto& a : adj) s += a.size();
  return s / 2;
}

std::vector<Edge> LabeledGraph::edges() const {
  std::vector<Edge> r;
  for (int u = 0; u < g.n(); ++u)
    for (int v : g.adj[u])
      if (u < v) r.emplace_back(verts[u], verts[v]);
  return r;
}

LabeledGraph induced(const DynGraph& g, const VertexSet& X) {
  LabeledGraph r;
  r.verts = X;
  r.g = LocalGraph(static_cast<int>(X.size()));
  for (int i = 0; i < r.g.n(); ++i)
    for (Vertex w : g.neighbors(X[i])) {
      int j = r.index(w);
      if (j > i) r.g.add_edge(i, j);
    }
  return r;
}

std::vector<VertexSet> components_minus(const DynGraph& g, const VertexSet& X) {
  std::vector<char> seen(g.n(), 0);
  for (Vertex x : X) seen[x] = 1;
  std::vector<VertexSet> out;
  std::vector<Vertex> stack;
  for (Vertex s = 0; s < g.n(); ++s) {
    if (seen[s]) continue;
    VertexSet comp;
    seen[s] = 1;
    stack.push_back(s);
    while (!stack.empty()) {
      Vertex v = stack.back();
      stack.pop_back();
      comp.push_back(v);
      for (Vertex w : g.neighbors(v))
        if (!seen[w]) {
          seen[w] = 1;
          stack.push_back(w);
        }
    }
    std::sort(comp.begin(), comp.end());
    out.push_back(std::move(comp));
  }
  return out;
}

VertexSet neighborhood(const DynGraph& g, const VertexSet& C) {
  VertexSet r;
  for (Vertex v : C)
    for (Vertex w : g.neighbors(v))
      if (!contains(C, w)) r.push_back(w);
  normalize(r);
  return r;
}

LabeledGraph torso(const DynGraph& g, const VertexSet& X) {
  LabeledGraph t = induced(g, X);
  for (const auto& C : components_minus(g, X)) {
    VertexSet N = neighborhood(g, C);
    for (std::size_t i = 0; i < N.size(); ++i)
      for (std::size_t j = i + 1; j < N.size(); ++j) t.g.add_edge(t.index(N[i]), t.index(N[j]));
  }
  return t;
}

namespace {

struct FlowNet {
  struct Arc {
    int to, cap;
  };
  std::vector<Arc> arcs;
  std::vector<std::vector<int>> out;
  explicit FlowNet(int n) : out(n) {}
  void add(int u, int v, int c) {
    out[u].push_back(static_cast<int>(arcs.size()));
    arcs.push_back({v, c});
    out[v].push_back(static_cast<int>(arcs.size()));
    arcs.push_back({u, 0});
  }
  int maxflow(int s, int t) {
    int flow = 0;
    for (;;) {
      std::vector<int> prev(out.size(), -1);
      std::queue<int> q;
      q.push(s);
      prev[s] = -2;
      while (!q.empty() && prev[t] == -1) {
        int u = q.front();
        q.pop();
        for (int a : out[u])
          if (arcs[a].cap > 0 && prev[arcs[a].to] == -1) {
            prev[arcs[a].to] = a;
            q.push(arcs[a].to);
          }
      }
      if (prev[t] == -1) return flow;
      for (int v = t; v != s;) {
        int a = prev[v];
        arcs[a].cap -= 1;
        arcs[a ^ 1].cap += 1;
        v = arcs[a ^ 1].to;
      }
      ++flow;
    }
  }
};

}  // namespace

int min_separator_size(const DynGraph& g, const VertexSet& A, const VertexSet& B) {
  const int n = static_cast<int>(g.n());
  const int INF = n + 1;
  FlowNet net(2 * n + 2);
  const int s = 2 * n, t = 2 * n + 1;
  for (int v = 0; v < n; ++v) {
    net.add(2 * v, 2 * v + 1, 1);
    for (Vertex w : g.neighbors(v)) net.add(2 * v + 1, 2 * static_cast<int>(w), INF);
  }
  for (Vertex a : A) net.add(s, 2 * static_cast<int>(a), INF);
  for (Vertex b : B) net.add(2 * static_cast<int>(b) + 1, t, INF);
  return net.maxflow(s, t);
}

bool is_separator(const DynGraph& g, const VertexSet& A, const VertexSet& B, const VertexSet& S) {
  std::vector<char> seen(g.n(), 0);
  std::vector<Vertex> stack;
  for (Vertex a : A)
    if (!contains(S, a) && !seen[a]) {
      seen[a] = 1;
      stack.push_back(a);
    }
  while (!stack.empty()) {
    Vertex v = stack.back();
    stack.pop_back();
    if (contains(B, v)) return false;
    for (Vertex w : g.neighbors(v))
      if (!seen[w] && !contains(S, w)) {
        seen[w] = 1;
        stack.push_back(w);
      }
  }
  return true;
}

}  // namespace dtw
