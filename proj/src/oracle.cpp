#include "dtw/oracle.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>

namespace dtw::oracle {

namespace {

std::vector<std::uint32_t> masks(int n, const std::vector<Edge>& edges) {
  std::vector<std::uint32_t> adj(n, 0);
  for (auto [u, v] : edges) {
    adj[u] |= 1u << v;
    adj[v] |= 1u << u;
  }
  return adj;
}

}  // namespace

int exact_treewidth(int n, const std::vector<Edge>& edges, std::vector<int>* order) {
  if (n > 20) throw std::length_error("exact_treewidth: n too large");
  if (n == 0) return -1;
  auto adj = masks(n, edges);
  const std::uint32_t full = (n == 32) ? ~0u : ((1u << n) - 1);
  // q(S, v): vertices outside S ∪ {v} reachable from v through S
  auto q = [&](std::uint32_t S, int v) {
    std::uint32_t reach = 0, seen = 0, front = adj[v] & S;
    while (front) {
      seen |= front;
      std::uint32_t nxt = 0;
      for (std::uint32_t f = front; f; f &= f - 1) nxt |= adj[__builtin_ctz(f)];
      front = nxt & S & ~seen;
    }
    reach = adj[v];
    for (std::uint32_t f = seen; f; f &= f - 1) reach |= adj[__builtin_ctz(f)];
    return __builtin_popcount(reach & ~S & ~(1u << v));
  };
  std::vector<signed char> tw(std::size_t{1} << n, 0);
  std::vector<signed char> arg(std::size_t{1} << n, -1);
  tw[0] = -1;
  for (std::uint32_t S = 1; S <= full; ++S) {
    int best = 127;
    for (std::uint32_t f = S; f; f &= f - 1) {
      int v = __builtin_ctz(f);
      std::uint32_t R = S & ~(1u << v);
      int val = std::max<int>(tw[R], q(R, v));
      if (val < best) {
        best = val;
        arg[S] = static_cast<signed char>(v);
      }
    }
    tw[S] = static_cast<signed char>(best);
    if (S == full) break;
  }
  if (order) {
    // arg[S] is eliminated after S \ {arg}
    order->clear();
    for (std::uint32_t S = full; S; S &= ~(1u << arg[S])) order->push_back(arg[S]);
    std::reverse(order->begin(), order->end());
  }
  return tw[full];
}

int treewidth_bnb(int n, const std::vector<Edge>& edges) {
  if (n == 0) return -1;
  std::vector<std::vector<char>> a(n, std::vector<char>(n, 0));
  for (auto [u, v] : edges) a[u][v] = a[v][u] = 1;
  int best = n - 1;
  std::vector<char> gone(n, 0);
  auto rec = [&](auto&& self, std::vector<std::vector<char>>& adj, int left, int cur) -> void {
    if (cur >= best) return;
    if (left <= cur + 1) {
      best = cur;
      return;
    }
    for (int v = 0; v < n; ++v) {
      if (gone[v]) continue;
      std::vector<int> nb;
      for (int w = 0; w < n; ++w)
        if (!gone[w] && adj[v][w]) nb.push_back(w);
      int d = static_cast<int>(nb.size());
      if (std::max(cur, d) >= best) continue;
      auto saved = adj;
      for (int x : nb)
        for (int y : nb)
          if (x != y) adj[x][y] = 1;
      gone[v] = 1;
      self(self, adj, left - 1, std::max(cur, d));
      gone[v] = 0;
      adj = std::move(saved);
    }
  };
  rec(rec, a, n, 0);
  return best;
}

std::vector<VertexSet> components(const DynGraph& g, const VertexSet& X) {
  std::vector<char> seen(g.n(), 0);
  for (Vertex x : X) seen[x] = 1;
  std::vector<VertexSet> out;
  for (Vertex s = 0; s < g.n(); ++s) {
    if (seen[s]) continue;
    VertexSet c{s};
    seen[s] = 1;
    for (std::size_t i = 0; i < c.size(); ++i)
      for (Vertex w : g.neighbors(c[i]))
        if (!seen[w]) {
          seen[w] = 1;
          c.push_back(w);
        }
    std::sort(c.begin(), c.end());
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<Edge> torso_edges(const DynGraph& g, const VertexSet& X) {
  std::set<Edge> out;
  std::vector<char> inX(g.n(), 0);
  for (Vertex x : X) inX[x] = 1;
  for (Vertex s : X) {
    // search from s through vertices outside X
    std::vector<char> seen(g.n(), 0);
    std::vector<Vertex> st{s};
    seen[s] = 1;
    while (!st.empty()) {
      Vertex v = st.back();
      st.pop_back();
      for (Vertex w : g.neighbors(v)) {
        if (seen[w]) continue;
        seen[w] = 1;
        if (inX[w])
          out.insert(make_edge(s, w));
        else
          st.push_back(w);
      }
    }
  }
  return {out.begin(), out.end()};
}

std::vector<long long> top_depths(const AnnotatedTD& td, std::size_t n) {
  std::vector<long long> d(n, -1);
  for (auto& [t, x] : td.nodes()) {
    long long dep = 0;
    for (NodeId p = x.parent; p != NIL; p = td.node(p).parent) ++dep;
    for (Vertex v : x.bag)
      if (d[v] < 0 || dep < d[v]) d[v] = dep;
  }
  return d;
}

namespace {

struct TreeFacts {
  VertexSet W;
  std::vector<NodeId> apps;
  std::vector<VertexSet> comp;  // per appendix
};

TreeFacts facts(const AnnotatedTD& td, const std::vector<NodeId>& prefix) {
  TreeFacts f;
  std::set<NodeId> in(prefix.begin(), prefix.end());
  for (NodeId t : prefix)
    for (Vertex v : td.node(t).bag) f.W.push_back(v);
  std::sort(f.W.begin(), f.W.end());
  f.W.erase(std::unique(f.W.begin(), f.W.end()), f.W.end());
  for (auto& [t, x] : td.nodes())
    if (!in.count(t) && x.parent != NIL && in.count(x.parent)) f.apps.push_back(t);
  std::sort(f.apps.begin(), f.apps.end());
  for (NodeId a : f.apps) {
    std::set<Vertex> below;
    std::vector<NodeId> st{a};
    while (!st.empty()) {
      NodeId t = st.back();
      st.pop_back();
      for (Vertex v : td.node(t).bag) below.insert(v);
      for (NodeId c : td.node(t).child)
        if (c != NIL) st.push_back(c);
    }
    const auto& pb = td.node(td.node(a).parent).bag;
    VertexSet c;
    for (Vertex v : below)
      if (!std::binary_search(pb.begin(), pb.end(), v) || !std::binary_search(td.node(a).bag.begin(), td.node(a).bag.end(), v))
        c.push_back(v);
    f.comp.push_back(std::move(c));
  }
  return f;
}

}  // namespace

std::optional<Closure> brute_closure(const DynGraph& g, const AnnotatedTD& td, const std::vector<NodeId>& prefix,
                                     int k, long long c) {
  TreeFacts f = facts(td, prefix);
  auto depth = top_depths(td, g.n());
  VertexSet cand;
  for (Vertex v = 0; v < g.n(); ++v)
    if (!std::binary_search(f.W.begin(), f.W.end(), v)) cand.push_back(v);
  const int m = static_cast<int>(cand.size());
  for (int s = 0; s <= m; ++s) {
    std::optional<Closure> best;
    std::vector<int> pick(s);
    std::iota(pick.begin(), pick.end(), 0);
    for (bool more = true; more;) {
      VertexSet X = f.W;
      for (int i : pick) X.push_back(cand[i]);
      std::sort(X.begin(), X.end());
      bool small = true;
      for (const auto& comp : f.comp) {
        long long cnt = 0;
        for (Vertex v : comp) cnt += std::binary_search(X.begin(), X.end(), v);
        if (cnt > c) small = false;
      }
      if (small) {
        long long d = 0;
        for (Vertex v : X) d += depth[v];
        if (!best || d < best->depth || (d == best->depth && X < best->X)) {
          auto te = torso_edges(g, X);
          std::vector<Edge> local;
          for (auto [a, b] : te)
            local.push_back({static_cast<Vertex>(std::lower_bound(X.begin(), X.end(), a) - X.begin()),
                             static_cast<Vertex>(std::lower_bound(X.begin(), X.end(), b) - X.begin())});
          if (exact_treewidth(static_cast<int>(X.size()), local) <= 2 * k + 1)
            best = Closure{X, static_cast<long long>(X.size()), d};
        }
      }
      // next combination
      int i = s - 1;
      while (i >= 0 && pick[i] == m - s + i) --i;
      if (i < 0) {
        more = false;
      } else {
        ++pick[i];
        for (int j = i + 1; j < s; ++j) pick[j] = pick[j - 1] + 1;
      }
    }
    if (best) return best;
  }
  return std::nullopt;
}

std::map<NodeId, char> brute_blockages(const DynGraph& g, const AnnotatedTD& td, const std::vector<NodeId>& prefix,
                                       const VertexSet& X) {
  std::set<NodeId> in(prefix.begin(), prefix.end());
  auto comps = components(g, X);
  auto te = torso_edges(g, X);
  std::set<Edge> tset(te.begin(), te.end());
  auto inX = [&](Vertex v) { return std::binary_search(X.begin(), X.end(), v); };
  auto is_block = [&](NodeId t) -> char {
    const auto& bag = td.node(t).bag;
    if (std::all_of(bag.begin(), bag.end(), inX)) {
      for (std::size_t i = 0; i < bag.size(); ++i)
        for (std::size_t j = i + 1; j < bag.size(); ++j)
          if (!tset.count({bag[i], bag[j]})) return 0;
      return 'q';
    }
    for (const auto& C : comps) {
      bool meets = false;
      for (Vertex v : bag) meets |= std::binary_search(C.begin(), C.end(), v);
      if (!meets) continue;
      std::set<Vertex> closed(C.begin(), C.end());
      for (Vertex v : C)
        for (Vertex w : g.neighbors(v)) closed.insert(w);
      if (std::all_of(bag.begin(), bag.end(), [&](Vertex v) { return closed.count(v) > 0; })) return 'c';
    }
    return 0;
  };
  std::map<NodeId, char> out;
  for (auto& [t, x] : td.nodes()) {
    if (in.count(t)) continue;
    char kd = is_block(t);
    if (!kd) continue;
    bool shallowest = true;
    for (NodeId p = x.parent; p != NIL && !in.count(p); p = td.node(p).parent)
      if (is_block(p)) shallowest = false;
    if (shallowest) out[t] = kd;
  }
  return out;
}

std::string canon(const VertexSet& boundary, const VertexSet& inner, const std::vector<Edge>& edges) {
  const std::size_t b = boundary.size(), s = inner.size();
  std::map<Vertex, std::size_t> id;
  for (std::size_t i = 0; i < b; ++i) id[boundary[i]] = i;
  for (std::size_t i = 0; i < s; ++i) id[inner[i]] = b + i;
  std::vector<std::vector<char>> a(b + s, std::vector<char>(b + s, 0));
  for (auto [u, v] : edges) a[id.at(u)][id.at(v)] = a[id.at(v)][id.at(u)] = 1;
  std::vector<std::size_t> perm(s);
  std::iota(perm.begin(), perm.end(), 0);
  std::string best;
  bool first = true;
  do {
    std::vector<std::size_t> lab(b + s);
    for (std::size_t i = 0; i < b; ++i) lab[i] = i;
    for (std::size_t i = 0; i < s; ++i) lab[b + i] = b + perm[i];
    // rows in slot order
    std::vector<std::size_t> at(b + s);
    for (std::size_t i = 0; i < b + s; ++i) at[lab[i]] = i;
    std::string key = "B" + std::to_string(b) + "S" + std::to_string(s);
    for (std::size_t r = 0; r < b + s; ++r) {
      key.push_back('|');
      for (std::size_t q = 0; q < b + s; ++q) key.push_back(a[at[r]][at[q]] ? 'x' : '.');
    }
    if (first || key < best) best = key, first = false;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

std::map<std::string, Rep> brute_reps(const AnnotatedTD& td, NodeId x, long long c) {
  // G_x: bags and stored edges of the subtree, local depths
  std::map<Vertex, long long> dep;
  std::set<Edge> es;
  std::vector<std::pair<NodeId, long long>> st{{x, 0}};
  while (!st.empty()) {
    auto [t, d] = st.back();
    st.pop_back();
    for (Vertex v : td.node(t).bag) {
      auto it = dep.find(v);
      if (it == dep.end() || d < it->second) dep[v] = d;
    }
    for (auto e : td.node(t).edges) es.insert(e);
    for (NodeId ch : td.node(t).child)
      if (ch != NIL) st.push_back({ch, d + 1});
  }
  VertexSet adh;
  if (td.node(x).parent != NIL) {
    const auto& pb = td.node(td.node(x).parent).bag;
    for (Vertex v : td.node(x).bag)
      if (std::binary_search(pb.begin(), pb.end(), v)) adh.push_back(v);
  }
  VertexSet all, comp;
  for (auto& [v, d] : dep) {
    all.push_back(v);
    if (!std::binary_search(adh.begin(), adh.end(), v)) comp.push_back(v);
  }
  std::map<Vertex, std::vector<Vertex>> nb;
  for (auto [u, v] : es) nb[u].push_back(v), nb[v].push_back(u);
  std::map<std::string, Rep> out;
  const std::size_t m = comp.size();
  for (std::uint64_t mask = 0; mask < (1ull << m); ++mask) {
    if (static_cast<long long>(__builtin_popcountll(mask)) > c) continue;
    VertexSet Y;
    for (std::size_t i = 0; i < m; ++i)
      if (mask >> i & 1) Y.push_back(comp[i]);
    VertexSet keep = adh;
    keep.insert(keep.end(), Y.begin(), Y.end());
    std::sort(keep.begin(), keep.end());
    auto kept = [&](Vertex v) { return std::binary_search(keep.begin(), keep.end(), v); };
    std::set<Edge> tor;
    for (Vertex s : keep) {
      std::set<Vertex> seen{s};
      std::vector<Vertex> q{s};
      while (!q.empty()) {
        Vertex v = q.back();
        q.pop_back();
        for (Vertex w : nb[v]) {
          if (seen.count(w)) continue;
          seen.insert(w);
          if (kept(w))
            tor.insert(make_edge(s, w));
          else
            q.push_back(w);
        }
      }
    }
    Rep r;
    r.Y = Y;
    for (Vertex v : Y) r.depth += dep[v];
    r.torso.assign(tor.begin(), tor.end());
    std::string key = canon(adh, Y, r.torso);
    auto it = out.find(key);
    if (it == out.end() || r.depth < it->second.depth || (r.depth == it->second.depth && r.Y < it->second.Y))
      out[key] = std::move(r);
  }
  return out;
}

int max_independent_set(const DynGraph& g) {
  const int n = static_cast<int>(g.n());
  std::vector<std::uint64_t> adj(n, 0);
  for (auto [u, v] : g.edges()) adj[u] |= 1ull << v, adj[v] |= 1ull << u;
  int best = 0;
  auto rec = [&](auto&& self, int i, std::uint64_t chosen, int cnt) -> void {
    if (cnt + (n - i) <= best) return;
    if (i == n) {
      best = cnt;
      return;
    }
    if (!(adj[i] & chosen)) self(self, i + 1, chosen | (1ull << i), cnt + 1);
    self(self, i + 1, chosen, cnt);
  };
  rec(rec, 0, 0, 0);
  return best;
}

bool colorable(const DynGraph& g, int q) {
  const int n = static_cast<int>(g.n());
  std::vector<int> col(n, -1);
  auto rec = [&](auto&& self, int i) -> bool {
    if (i == n) return true;
    for (int c = 0; c < q; ++c) {
      bool ok = true;
      for (Vertex w : g.neighbors(i))
        if (static_cast<int>(w) < i && col[w] == c) ok = false;
      if (!ok) continue;
      col[i] = c;
      if (self(self, i + 1)) return true;
    }
    col[i] = -1;
    return false;
  };
  return rec(rec, 0);
}

std::vector<Edge> random_ktree(std::size_t n, int k, std::mt19937_64& rng) {
  std::vector<Vertex> lab(n);
  std::iota(lab.begin(), lab.end(), 0);
  std::shuffle(lab.begin(), lab.end(), rng);
  std::set<Edge> es;
  std::size_t base = std::min<std::size_t>(n, k + 1);
  for (std::size_t i = 0; i < base; ++i)
    for (std::size_t j = i + 1; j < base; ++j) es.insert(make_edge(lab[i], lab[j]));
  std::vector<std::vector<Vertex>> cliques;
  if (base == static_cast<std::size_t>(k + 1)) cliques.push_back({lab.begin(), lab.begin() + base});
  for (std::size_t i = base; i < n; ++i) {
    auto cl = cliques[rng() % cliques.size()];
    cl.erase(cl.begin() + static_cast<long>(rng() % cl.size()));
    for (Vertex w : cl) es.insert(make_edge(lab[i], w));
    cl.push_back(lab[i]);
    cliques.push_back(cl);
  }
  return {es.begin(), es.end()};
}

std::vector<Edge> random_tw_bounded(std::size_t n, int k, double p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution keep(p);
  std::vector<Edge> out;
  for (auto e : random_ktree(n, k, rng))
    if (keep(rng)) out.push_back(e);
  return out;
}

namespace {

std::vector<Op> stream_over(const std::vector<Edge>& host, std::size_t ops, std::mt19937_64& rng, double bias) {
  std::vector<Op> out;
  if (host.empty()) return out;
  std::vector<std::size_t> present, absent(host.size());
  std::iota(absent.begin(), absent.end(), 0);
  std::bernoulli_distribution ins(bias);
  for (std::size_t i = 0; i < ops; ++i) {
    bool do_ins = absent.empty() ? false : present.empty() ? true : ins(rng);
    auto& from = do_ins ? absent : present;
    auto& to = do_ins ? present : absent;
    std::size_t j = rng() % from.size();
    std::size_t e = from[j];
    from[j] = from.back();
    from.pop_back();
    to.push_back(e);
    out.push_back({do_ins ? '+' : '-', host[e].first, host[e].second});
  }
  return out;
}

}  // namespace

std::vector<Op> random_update_stream(std::size_t n, int k, std::size_t ops, std::uint64_t seed, double insert_bias) {
  std::mt19937_64 rng(seed);
  auto host = random_ktree(n, k, rng);
  return stream_over(host, ops, rng, insert_bias);
}

std::vector<Op> random_free_stream(std::size_t n, std::size_t ops, std::uint64_t seed, double insert_bias) {
  std::mt19937_64 rng(seed);
  std::vector<Edge> host;
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v) host.push_back({u, v});
  return stream_over(host, ops, rng, insert_bias);
}

std::vector<std::pair<std::string, std::vector<Edge>>> degenerate_shapes(std::size_t n) {
  std::vector<std::pair<std::string, std::vector<Edge>>> out;
  out.push_back({"empty", {}});
  std::vector<Edge> path, star, cycle, bintree, caterpillar, ladder;
  for (Vertex v = 1; v < n; ++v) {
    path.push_back({v - 1, v});
    star.push_back({0, v});
    bintree.push_back({(v - 1) / 2, v});
  }
  cycle = path;
  if (n >= 3) cycle.push_back({0, n - 1});
  for (Vertex v = 0; v + 2 < n; v += 2) {
    caterpillar.push_back({v, v + 2});
    caterpillar.push_back({v, v + 1});
  }
  for (Vertex v = 0; v + 2 < n; ++v) ladder.push_back({v, v + 2});
  for (Vertex v = 0; v + 1 < n; v += 2) ladder.push_back({v, v + 1});
  out.push_back({"path", path});
  out.push_back({"star", star});
  out.push_back({"cycle", cycle});
  out.push_back({"bintree", bintree});
  out.push_back({"caterpillar", caterpillar});
  out.push_back({"ladder", ladder});
  return out;
}

PlainTD random_decomposition(const DynGraph& g, std::mt19937_64& rng) {
  const std::size_t n = g.n();
  PlainTD t;
  if (n == 0) {
    t.bags.push_back({});
    t.parent.push_back(-1);
    t.root = 0;
    return t;
  }
  std::vector<std::set<Vertex>> adj(n);
  for (auto [u, v] : g.edges()) adj[u].insert(v), adj[v].insert(u);
  std::vector<Vertex> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<std::size_t> when(n);
  for (std::size_t i = 0; i < n; ++i) when[order[i]] = i;
  t.bags.resize(n);
  t.parent.assign(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    Vertex v = order[i];
    VertexSet bag{v};
    std::size_t first = n;
    for (Vertex w : adj[v]) {
      bag.push_back(w);
      first = std::min(first, when[w]);
    }
    std::sort(bag.begin(), bag.end());
    t.bags[i] = bag;
    if (first < n) t.parent[i] = static_cast<int>(first);
    for (Vertex a : adj[v])
      for (Vertex b : adj[v])
        if (a != b) adj[a].insert(b);
    for (Vertex a : adj[v]) adj[a].erase(v);
    adj[v].clear();
  }
  // several roots: hang them below the last eliminated vertex
  t.root = static_cast<int>(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i)
    if (t.parent[i] < 0) t.parent[i] = static_cast<int>(n - 1);
  return t;
}

}  // namespace dtw::oracle
