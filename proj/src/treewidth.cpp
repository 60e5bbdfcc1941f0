#include "dtw/treewidth.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <unordered_set>

namespace dtw {

int PlainTD::width() const {
  int w = -1;
  for (auto& b : bags) w = std::max(w, static_cast<int>(b.size()) - 1);
  return w;
}

std::vector<std::vector<int>> PlainTD::children() const {
  std::vector<std::vector<int>> ch(bags.size());
  for (int i = 0; i < size(); ++i)
    if (parent[i] >= 0) ch[parent[i]].push_back(i);
  return ch;
}

int PlainTD::height() const {
  if (bags.empty()) return 0;
  auto ch = children();
  std::vector<int> h(bags.size(), 0), order{root};
  for (std::size_t i = 0; i < order.size(); ++i)
    for (int c : ch[order[i]]) order.push_back(c);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    int best = 0;
    for (int c : ch[*it]) best = std::max(best, h[c]);
    h[*it] = best + 1;
  }
  return h[root];
}

bool PlainTD::is_binary() const {
  for (auto& c : children())
    if (c.size() > 2) return false;
  return true;
}

bool plain_td_valid(const PlainTD& td, const VertexSet& verts, const std::vector<Edge>& edges) {
  if (td.bags.empty()) return verts.empty();
  int roots = 0;
  for (int i = 0; i < td.size(); ++i)
    if (td.parent[i] < 0) ++roots;
  if (roots != 1 || td.parent[td.root] >= 0) return false;
  auto ch = td.children();
  // reachability from root (tree shape)
  std::vector<int> order{td.root};
  for (std::size_t i = 0; i < order.size(); ++i)
    for (int c : ch[order[i]]) order.push_back(c);
  if (static_cast<int>(order.size()) != td.size()) return false;
  // vertex condition: nodes containing v whose parent does not contain v: exactly one
  for (Vertex v : verts) {
    int tops = 0;
    for (int i = 0; i < td.size(); ++i)
      if (contains(td.bags[i], v) && (td.parent[i] < 0 || !contains(td.bags[td.parent[i]], v))) ++tops;
    if (tops != 1) return false;
  }
  for (auto& [u, v] : edges) {
    bool ok = false;
    for (auto& b : td.bags)
      if (contains(b, u) && contains(b, v)) {
        ok = true;
        break;
      }
    if (!ok) return false;
  }
  return true;
}

namespace {

// Adjacency as sorted sets that fill in as vertices are eliminated.
struct ElimGraph {
  std::vector<std::set<int>> adj;
  explicit ElimGraph(const LocalGraph& g) : adj(g.n()) {
    for (int v = 0; v < g.n(); ++v) adj[v].insert(g.adj[v].begin(), g.adj[v].end());
  }
  void eliminate(int v) {
    std::vector<int> nb(adj[v].begin(), adj[v].end());
    for (int a : nb) adj[a].erase(v);
    for (std::size_t i = 0; i < nb.size(); ++i)
      for (std::size_t j = i + 1; j < nb.size(); ++j) {
        adj[nb[i]].insert(nb[j]);
        adj[nb[j]].insert(nb[i]);
      }
    adj[v].clear();
  }
  int fill(int v) const {
    int missing = 0;
    for (auto i = adj[v].begin(); i != adj[v].end(); ++i) {
      auto j = i;
      for (++j; j != adj[v].end(); ++j)
        if (!adj[*i].count(*j)) ++missing;
    }
    return missing;
  }
};

}  // namespace

PlainTD td_from_order(const LabeledGraph& lg, const std::vector<int>& order) {
  const int n = lg.g.n();
  PlainTD td;
  if (n == 0) {
    td.bags.push_back({});
    td.parent.push_back(-1);
    td.root = 0;
    return td;
  }
  std::vector<int> pos(n);
  for (int i = 0; i < n; ++i) pos[order[i]] = i;
  ElimGraph eg(lg.g);
  td.bags.resize(n);
  td.parent.assign(n, -1);
  // node i corresponds to the i-th eliminated vertex
  for (int i = 0; i < n; ++i) {
    int v = order[i];
    VertexSet bag{lg.verts[v]};
    int par = -1;
    for (int w : eg.adj[v]) {
      bag.push_back(lg.verts[w]);
      if (par < 0 || pos[w] < par) par = pos[w];
    }
    normalize(bag);
    td.bags[i] = std::move(bag);
    td.parent[i] = par;
    eg.eliminate(v);
  }
  // join a forest into one tree: hang every other root below the last root
  td.root = n - 1;
  for (int i = 0; i < n - 1; ++i)
    if (td.parent[i] < 0) td.parent[i] = n - 1;
  return td;
}

int elimination_width(const LocalGraph& g, const std::vector<int>& order) {
  ElimGraph eg(g);
  int w = 0;
  for (int v : order) {
    w = std::max(w, static_cast<int>(eg.adj[v].size()));
    eg.eliminate(v);
  }
  return w;
}

std::vector<int> min_degree_order(const LocalGraph& g) {
  ElimGraph eg(g);
  const int n = g.n();
  std::set<std::pair<int, int>> pq;
  std::vector<int> deg(n);
  for (int v = 0; v < n; ++v) {
    deg[v] = static_cast<int>(eg.adj[v].size());
    pq.insert({deg[v], v});
  }
  std::vector<int> order;
  order.reserve(n);
  while (!pq.empty()) {
    int v = pq.begin()->second;
    pq.erase(pq.begin());
    std::vector<int> nb(eg.adj[v].begin(), eg.adj[v].end());
    eg.eliminate(v);
    order.push_back(v);
    for (int w : nb) {
      pq.erase({deg[w], w});
      deg[w] = static_cast<int>(eg.adj[w].size());
      pq.insert({deg[w], w});
    }
  }
  return order;
}

std::vector<int> min_fill_order(const LocalGraph& g) {
  ElimGraph eg(g);
  const int n = g.n();
  std::vector<int> fill(n), deg(n);
  std::set<std::tuple<int, int, int>> pq;
  for (int v = 0; v < n; ++v) {
    fill[v] = eg.fill(v);
    deg[v] = static_cast<int>(eg.adj[v].size());
    pq.insert({fill[v], deg[v], v});
  }
  std::vector<char> done(n, 0);
  std::vector<int> order;
  order.reserve(n);
  while (!pq.empty()) {
    int v = std::get<2>(*pq.begin());
    pq.erase(pq.begin());
    std::vector<int> nb(eg.adj[v].begin(), eg.adj[v].end());
    eg.eliminate(v);
    done[v] = 1;
    order.push_back(v);
    // fill values change within distance two of v
    std::vector<int> touched;
    for (int w : nb) {
      touched.push_back(w);
      for (int x : eg.adj[w]) touched.push_back(x);
    }
    std::sort(touched.begin(), touched.end());
    touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
    for (int w : touched) {
      if (done[w]) continue;
      pq.erase({fill[w], deg[w], w});
      fill[w] = eg.fill(w);
      deg[w] = static_cast<int>(eg.adj[w].size());
      pq.insert({fill[w], deg[w], w});
    }
  }
  return order;
}

namespace {

struct Bits {
  std::vector<std::uint64_t> w;
  explicit Bits(int n = 0) : w((n + 63) / 64, 0) {}
  void set(int i) { w[i >> 6] |= 1ull << (i & 63); }
  void reset(int i) { w[i >> 6] &= ~(1ull << (i & 63)); }
  bool test(int i) const { return (w[i >> 6] >> (i & 63)) & 1; }
  bool operator==(const Bits& o) const { return w == o.w; }
};

struct BitsHash {
  std::size_t operator()(const Bits& b) const {
    std::size_t h = 1469598103934665603ull;
    for (auto x : b.w) h = (h ^ x) * 1099511628211ull;
    return h;
  }
};

class ElimSearch {
 public:
  ElimSearch(const LocalGraph& g, int k, std::int64_t budget) : n_(g.n()), k_(k), budget_(budget) {
    adj_.assign(n_, Bits(n_));
    for (int v = 0; v < n_; ++v)
      for (int w : g.adj[v]) adj_[v].set(w);
  }

  std::optional<bool> run(std::vector<int>* order) {
    Bits gone(n_);
    std::vector<int> seq;
    auto r = dfs(adj_, gone, n_, seq);
    if (r && *r && order) *order = seq;
    return r;
  }

 private:
  int n_, k_;
  std::int64_t budget_;
  std::vector<Bits> adj_;
  std::unordered_set<Bits, BitsHash> failed_;

  static int count(const Bits& b) {
    int c = 0;
    for (auto x : b.w) c += __builtin_popcountll(x);
    return c;
  }

  std::vector<int> members(const Bits& b) const {
    std::vector<int> r;
    for (int i = 0; i < n_; ++i)
      if (b.test(i)) r.push_back(i);
    return r;
  }

  void eliminate(std::vector<Bits>& adj, Bits& gone, int v) const {
    auto nb = members(adj[v]);
    for (int a : nb) {
      adj[a].reset(v);
      for (int b : nb)
        if (b != a) adj[a].set(b);
    }
    adj[v] = Bits(n_);
    gone.set(v);
  }

  // number of non-adjacent pairs in N(v), capped at 2
  int missing_pairs(const std::vector<Bits>& adj, int v, int* culprit) const {
    auto nb = members(adj[v]);
    // almost simplicial: some u such that N(v)\{u} is a clique
    int miss = 0;
    std::vector<int> bad(nb.size(), 0);
    for (std::size_t i = 0; i < nb.size(); ++i)
      for (std::size_t j = i + 1; j < nb.size(); ++j)
        if (!adj[nb[i]].test(nb[j])) {
          ++miss;
          ++bad[i];
          ++bad[j];
        }
    if (miss == 0) return 0;
    for (std::size_t i = 0; i < nb.size(); ++i)
      if (bad[i] == miss) {
        *culprit = nb[i];
        return 1;
      }
    return 2;
  }

  std::optional<bool> dfs(std::vector<Bits> adj, Bits gone, int remaining, std::vector<int>& seq) {
    std::size_t seq_mark = seq.size();
    // safe reductions
    for (bool changed = true; changed;) {
      changed = false;
      if (remaining <= k_ + 1) {
        for (int v = 0; v < n_; ++v)
          if (!gone.test(v)) seq.push_back(v);
        return true;
      }
      for (int v = 0; v < n_; ++v) {
        if (gone.test(v)) continue;
        int d = count(adj[v]);
        int culprit = -1;
        int m = missing_pairs(adj, v, &culprit);
        if (m == 0 && d > k_) {
          seq.resize(seq_mark);
          return false;
        }
        if (m <= 1 && d <= k_) {
          eliminate(adj, gone, v);
          seq.push_back(v);
          --remaining;
          changed = true;
          break;
        }
      }
    }
    if (failed_.count(gone)) {
      seq.resize(seq_mark);
      return false;
    }
    if (--budget_ < 0) return std::nullopt;
    std::vector<std::pair<int, int>> cand;
    for (int v = 0; v < n_; ++v)
      if (!gone.test(v)) {
        int d = count(adj[v]);
        if (d <= k_) cand.push_back({d, v});
      }
    std::sort(cand.begin(), cand.end());
    for (auto [d, v] : cand) {
      auto a2 = adj;
      auto g2 = gone;
      eliminate(a2, g2, v);
      seq.push_back(v);
      auto r = dfs(std::move(a2), std::move(g2), remaining - 1, seq);
      if (!r) return r;
      if (*r) return true;
      seq.resize(seq_mark);
    }
    failed_.insert(gone);
    seq.resize(seq_mark);
    return false;
  }
};

}  // namespace

std::optional<bool> tw_at_most(const LocalGraph& g, int k, std::vector<int>* order, std::int64_t budget) {
  if (k < 0) return g.n() == 0;
  ElimSearch s(g, k, budget);
  return s.run(order);
}

int treewidth_exact(const LocalGraph& g, std::vector<int>* order) {
  if (g.n() == 0) return -1;
  for (int k = 0;; ++k) {
    auto r = tw_at_most(g, k, order, INT64_MAX);
    if (r && *r) return k;
  }
}

std::optional<PlainTD> decompose_within(const LabeledGraph& g, int target, std::int64_t exact_budget) {
  auto order = min_degree_order(g.g);
  if (elimination_width(g.g, order) <= target) return td_from_order(g, order);
  order = min_fill_order(g.g);
  if (elimination_width(g.g, order) <= target) return td_from_order(g, order);
  if (g.g.n() <= 80) {
    std::vector<int> ord;
    auto r = tw_at_most(g.g, target, &ord, exact_budget);
    if (r && *r) return td_from_order(g, ord);
  }
  return std::nullopt;
}

PlainTD binarize(const PlainTD& td) {
  PlainTD out;
  if (td.bags.empty()) return out;
  auto ch = td.children();
  out.bags = td.bags;
  out.parent.assign(td.size(), -1);
  out.root = td.root;
  for (int v = 0; v < td.size(); ++v) {
    int attach = v;
    const auto& c = ch[v];
    // keep one child directly, route the rest through a chain of copies
    for (std::size_t i = 0; i < c.size(); ++i) {
      bool last = i + 1 == c.size();
      if (i == 0 || last) {
        out.parent[c[i]] = attach;
      } else {
        int copy = out.size();
        out.bags.push_back(td.bags[v]);
        out.parent.push_back(attach);
        out.parent[c[i]] = copy;
        attach = copy;
      }
    }
  }
  return out;
}

}  // namespace dtw
