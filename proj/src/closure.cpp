#include "dtw/closure.hpp"

#include <map>
#include <numeric>
#include <queue>
#include <set>

namespace dtw {

namespace {

struct UnionFind {
  std::vector<int> p;
  explicit UnionFind(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  int find(int x) {
    while (p[x] != x) x = p[x] = p[p[x]];
    return x;
  }
  void unite(int a, int b) { p[find(a)] = find(b); }
};

// Torso of the graph (U, es) onto keep ⊆ U.
std::vector<Edge> torso_onto(const VertexSet& U, const std::vector<Edge>& es, const VertexSet& keep) {
  const int n = static_cast<int>(U.size());
  auto idx = [&](Vertex x) { return static_cast<int>(std::lower_bound(U.begin(), U.end(), x) - U.begin()); };
  std::vector<char> kept(n, 0);
  for (Vertex x : keep) kept[idx(x)] = 1;
  UnionFind uf(n);
  std::vector<Edge> out;
  std::vector<std::pair<int, int>> touch;  // (component rep, kept index)
  std::vector<std::pair<int, int>> cross;
  for (auto [p, q] : es) {
    int i = idx(p), j = idx(q);
    if (kept[i] && kept[j])
      out.push_back(make_edge(p, q));
    else if (!kept[i] && !kept[j])
      uf.unite(i, j);
    else
      cross.push_back(kept[i] ? std::pair{j, i} : std::pair{i, j});
  }
  for (auto [inner, k] : cross) touch.emplace_back(uf.find(inner), k);
  std::sort(touch.begin(), touch.end());
  touch.erase(std::unique(touch.begin(), touch.end()), touch.end());
  for (std::size_t s = 0; s < touch.size();) {
    std::size_t e = s;
    while (e < touch.size() && touch[e].first == touch[s].first) ++e;
    for (std::size_t a = s; a < e; ++a)
      for (std::size_t b = a + 1; b < e; ++b) out.push_back(make_edge(U[touch[a].second], U[touch[b].second]));
    s = e;
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void for_each_subset_upto(const VertexSet& pool, std::size_t maxsz, const std::function<void(const VertexSet&)>& f) {
  VertexSet cur;
  auto rec = [&](auto&& self, std::size_t i) -> void {
    if (i == pool.size()) {
      f(cur);
      return;
    }
    self(self, i + 1);
    if (cur.size() < maxsz) {
      cur.push_back(pool[i]);
      self(self, i + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0);
}

LabeledGraph make_graph(VertexSet verts, const std::vector<Edge>& es) {
  LabeledGraph lg;
  normalize(verts);
  lg.verts = std::move(verts);
  lg.g = LocalGraph(static_cast<int>(lg.verts.size()));
  for (auto [p, q] : es) lg.g.add_edge(lg.index(p), lg.index(q));
  return lg;
}

}  // namespace

std::string reps_key(const VertexSet& adh, const VertexSet& Y, const std::vector<Edge>& edges) {
  const std::size_t b = adh.size(), s = Y.size(), n = b + s;
  VertexSet all = set_union(adh, Y);
  auto pos = [&](Vertex x) { return static_cast<std::size_t>(std::lower_bound(all.begin(), all.end(), x) - all.begin()); };
  // local label: boundary vertices 0..b-1 in order, interior b..n-1
  std::vector<std::size_t> label(n);
  for (std::size_t i = 0; i < b; ++i) label[pos(adh[i])] = i;
  std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
  std::vector<std::size_t> perm(s);
  std::iota(perm.begin(), perm.end(), 0);
  for (std::size_t i = 0; i < s; ++i) label[pos(Y[i])] = b + i;
  for (auto [p, q] : edges) {
    auto i = label[pos(p)], j = label[pos(q)];
    adj[i][j] = adj[j][i] = 1;
  }
  std::string best;
  do {
    // interior vertex i is placed at slot perm[i]
    std::vector<std::size_t> at(n);
    for (std::size_t i = 0; i < b; ++i) at[i] = i;
    for (std::size_t i = 0; i < s; ++i) at[b + perm[i]] = b + i;
    std::string key = std::to_string(b) + ":" + std::to_string(s) + ":";
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) key.push_back(adj[at[i]][at[j]] ? '1' : '0');
    if (best.empty() || key < best) best = std::move(key);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

RepsAutomaton::State RepsAutomaton::join_impl(const NodeView& v, const State* a, const State* b) const {
  static const RepsPair empty_pair{};
  const VertexSet inner = set_difference(v.bag, v.adh);
  std::vector<const RepsPair*> la{&empty_pair}, lb{&empty_pair};
  if (a) {
    la.clear();
    for (auto& p : *a) la.push_back(&p);
  }
  if (b) {
    lb.clear();
    for (auto& p : *b) lb.push_back(&p);
  }
  std::map<std::string, RepsPair> best;
  for (const RepsPair* pa : la)
    for (const RepsPair* pb : lb) {
      const long long used = static_cast<long long>(pa->Y.size() + pb->Y.size());
      if (used > c) continue;
      VertexSet U = set_union(v.bag, set_union(pa->Y, pb->Y));
      std::vector<Edge> es = v.edges;
      es.insert(es.end(), pa->torso.begin(), pa->torso.end());
      es.insert(es.end(), pb->torso.begin(), pb->torso.end());
      const VertexSet childY = set_union(pa->Y, pb->Y);
      const long long depth = pa->depth + pb->depth + used;
      for_each_subset_upto(inner, static_cast<std::size_t>(c - used), [&](const VertexSet& X) {
        RepsPair r;
        r.depth = depth;
        r.Y = set_union(X, childY);
        r.torso = torso_onto(U, es, set_union(r.Y, v.adh));
        r.key = reps_key(v.adh, r.Y, r.torso);
        auto it = best.find(r.key);
        if (it == best.end())
          best.emplace(r.key, std::move(r));
        else if (std::tie(r.depth, r.Y) < std::tie(it->second.depth, it->second.Y))
          it->second = std::move(r);
      });
    }
  State out;
  for (auto& [k, r] : best) out.push_back(std::move(r));
  return out;
}

std::vector<Edge> connect_pairs(const VertexSet& verts, const std::vector<Edge>& J,
                                const std::function<bool(Vertex)>& inner_ok) {
  const int n = static_cast<int>(verts.size());
  auto idx = [&](Vertex x) { return static_cast<int>(std::lower_bound(verts.begin(), verts.end(), x) - verts.begin()); };
  std::vector<char> ok(n);
  for (int i = 0; i < n; ++i) ok[i] = inner_ok(verts[i]);
  UnionFind uf(n);
  std::vector<Edge> out;
  for (auto [p, q] : J) {
    int i = idx(p), j = idx(q);
    if (ok[i] && ok[j]) uf.unite(i, j);
    out.push_back(make_edge(p, q));
  }
  // A(u): inner components adjacent to u, plus u's own
  std::vector<std::vector<int>> A(n);
  for (int i = 0; i < n; ++i)
    if (ok[i]) A[i].push_back(uf.find(i));
  for (auto [p, q] : J) {
    int i = idx(p), j = idx(q);
    if (ok[j]) A[i].push_back(uf.find(j));
    if (ok[i]) A[j].push_back(uf.find(i));
  }
  std::map<int, std::vector<int>> by_comp;
  for (int i = 0; i < n; ++i) {
    auto& s = A[i];
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    for (int r : s) by_comp[r].push_back(i);
  }
  for (auto& [r, mem] : by_comp)
    for (std::size_t x = 0; x < mem.size(); ++x)
      for (std::size_t y = x + 1; y < mem.size(); ++y) out.push_back(make_edge(verts[mem[x]], verts[mem[y]]));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

const std::vector<Edge>& PatternSource::get(NodeId t) {
  if (run_) return run_->state(t);
  auto it = memo_.find(t);
  if (it != memo_.end()) return it->second;
  auto order = td_.subtree(t);
  for (auto i = order.rbegin(); i != order.rend(); ++i) {
    if (memo_.count(*i)) continue;
    const auto& x = td_.node(*i);
    VertexSet adh = td_.adhesion(*i);
    const std::vector<Edge>* qa = x.child[0] != NIL ? &memo_.at(x.child[0]) : nullptr;
    const std::vector<Edge>* qb = x.child[1] != NIL ? &memo_.at(x.child[1]) : nullptr;
    NodeView v{x.bag, adh, nullptr, nullptr, x.edges};
    memo_[*i] = PatternAutomaton::join_impl(v, qa, qb);
  }
  return memo_.at(t);
}

std::vector<long long> vertex_depths(const AnnotatedTD& td, std::size_t n) {
  std::vector<long long> d(n, -1);
  std::vector<std::pair<NodeId, long long>> st{{td.root(), 0}};
  while (!st.empty()) {
    auto [t, dep] = st.back();
    st.pop_back();
    for (Vertex v : td.bag(t))
      if (v < n && d[v] < 0) d[v] = dep;
    for (NodeId c : td.node(t).child)
      if (c != NIL) st.push_back({c, dep + 1});
  }
  return d;
}

std::optional<ClosureResult> closure_query(const AnnotatedTD& td, const std::vector<NodeId>& prefix,
                                           const ClosureParams& p) {
  VertexSet W;
  std::vector<Edge> wedges;
  for (NodeId t : prefix) {
    const auto& x = td.node(t);
    W.insert(W.end(), x.bag.begin(), x.bag.end());
    wedges.insert(wedges.end(), x.edges.begin(), x.edges.end());
  }
  normalize(W);
  Vertex nmax = 0;
  for (auto& [t, x] : td.nodes())
    if (!x.bag.empty()) nmax = std::max(nmax, x.bag.back() + 1);
  auto vdepth = vertex_depths(td, nmax);

  // reps^c per appendix, flattened to (s, d) keyed candidate lists
  struct Cand {
    long long key;
    const RepsPair* pair;
  };
  RepsAutomaton ra{p.c};
  std::unordered_map<NodeId, RepsAutomaton::State> st;
  auto apps = appendices(td, prefix);
  std::vector<std::vector<Cand>> lists;
  constexpr long long BIG = 1'000'000'000LL;
  for (NodeId a : apps) {
    auto order = td.subtree(a);
    for (auto i = order.rbegin(); i != order.rend(); ++i) {
      const auto& x = td.node(*i);
      VertexSet adh = td.adhesion(*i);
      const auto* qa = x.child[0] != NIL ? &st.at(x.child[0]) : nullptr;
      const auto* qb = x.child[1] != NIL ? &st.at(x.child[1]) : nullptr;
      NodeView v{x.bag, adh, nullptr, nullptr, x.edges};
      st[*i] = ra.join_impl(v, qa, qb);
    }
    const long long da = td.depth(a);
    std::vector<Cand> l;
    for (auto& r : st.at(a)) {
      long long s = static_cast<long long>(r.Y.size());
      l.push_back({s * BIG + r.depth + da * s, &r});
    }
    std::stable_sort(l.begin(), l.end(), [](const Cand& x, const Cand& y) {
      return std::tie(x.key, x.pair->Y) < std::tie(y.key, y.pair->Y);
    });
    lists.push_back(std::move(l));
  }

  const int target = 2 * p.k + 1;
  using Entry = std::tuple<long long, std::vector<int>, int>;
  auto cmp = [](const Entry& x, const Entry& y) {
    return std::tie(std::get<0>(x), std::get<1>(x)) > std::tie(std::get<0>(y), std::get<1>(y));
  };
  std::priority_queue<Entry, std::vector<Entry>, decltype(cmp)> pq(cmp);
  {
    long long tot = 0;
    for (auto& l : lists) tot += l[0].key;
    pq.push({tot, std::vector<int>(lists.size(), 0), 0});
  }
  while (!pq.empty()) {
    auto [tot, ix, last] = pq.top();
    pq.pop();
    VertexSet X = W;
    std::vector<Edge> es = wedges;
    for (std::size_t i = 0; i < lists.size(); ++i) {
      const RepsPair* r = lists[i][ix[i]].pair;
      X.insert(X.end(), r->Y.begin(), r->Y.end());
      es.insert(es.end(), r->torso.begin(), r->torso.end());
    }
    LabeledGraph H = make_graph(X, es);
    std::vector<int> ord;
    auto ok = tw_at_most(H.g, target, &ord, INT64_MAX);
    if (ok && *ok) {
      ClosureResult res;
      res.X = H.verts;
      res.size = static_cast<long long>(res.X.size());
      for (Vertex v : res.X) res.depth += vdepth[v];
      res.certificate = td_from_order(H, ord);
      res.torso = std::move(H);
      return res;
    }
    for (std::size_t i = static_cast<std::size_t>(last); i < lists.size(); ++i) {
      if (ix[i] + 1 >= static_cast<int>(lists[i].size())) continue;
      auto nx = ix;
      ++nx[i];
      pq.push({tot - lists[i][ix[i]].key + lists[i][nx[i]].key, std::move(nx), static_cast<int>(i)});
    }
  }
  return std::nullopt;
}

LabeledGraph prefix_torso(const AnnotatedTD& td, const std::vector<NodeId>& tx, PatternSource& pat) {
  VertexSet X;
  std::vector<Edge> es;
  for (NodeId t : tx) {
    const auto& x = td.node(t);
    X.insert(X.end(), x.bag.begin(), x.bag.end());
    es.insert(es.end(), x.edges.begin(), x.edges.end());
  }
  for (NodeId a : appendices(td, tx)) {
    const auto& pa = pat.get(a);
    es.insert(es.end(), pa.begin(), pa.end());
  }
  return make_graph(std::move(X), es);
}

namespace {

// Vertices lying in bags of width-overflowing nodes of the heuristic order.
VertexSet overloaded(const LabeledGraph& torso, int target) {
  PlainTD d = td_from_order(torso, min_fill_order(torso.g));
  VertexSet o;
  for (auto& b : d.bags)
    if (static_cast<int>(b.size()) > target + 1) o.insert(o.end(), b.begin(), b.end());
  normalize(o);
  return o;
}

}  // namespace

std::optional<ClosureResult> prefix_closure(const AnnotatedTD& td, const std::vector<NodeId>& prefix,
                                            const ClosureParams& p, PatternSource& pat, PrefixClosureStats* stats) {
  const int target = 2 * p.k + 1;
  std::vector<NodeId> tx = prefix;
  std::unordered_set<NodeId> in_tx(prefix.begin(), prefix.end());
  std::unordered_map<NodeId, NodeId> origin;  // node outside prefix -> appendix of prefix
  std::unordered_map<NodeId, VertexSet> inside;  // appendix -> X ∩ component(appendix)
  std::unordered_map<NodeId, VertexSet> app_adh;
  for (NodeId a : appendices(td, prefix)) {
    origin[a] = a;
    app_adh[a] = td.adhesion(a);
  }
  LabeledGraph torso;
  std::optional<PlainTD> cert;
  for (;;) {
    if (stats) ++stats->rounds;
    torso = prefix_torso(td, tx, pat);
    cert = decompose_within(torso, target);
    if (cert) break;
    auto apps = appendices(td, tx);
    if (apps.empty()) return std::nullopt;
    VertexSet o = overloaded(torso, target);
    std::vector<NodeId> pick;
    for (NodeId a : apps)
      for (auto [u, v] : pat.get(a))
        if (contains(o, u) || contains(o, v)) {
          pick.push_back(a);
          break;
        }
    if (pick.empty())
      for (NodeId a : apps)
        if (!pat.get(a).empty()) pick.push_back(a);
    if (pick.empty()) pick = apps;
    for (NodeId a : pick) {
      tx.push_back(a);
      in_tx.insert(a);
      NodeId o = origin.at(a);
      for (NodeId c : td.node(a).child)
        if (c != NIL) origin[c] = o;
      auto& s = inside[o];
      for (Vertex v : td.bag(a))
        if (!contains(app_adh.at(o), v)) insert_sorted(s, v);
      if (static_cast<long long>(s.size()) > p.c) return std::nullopt;
      if (stats) ++stats->expanded;
    }
  }
  // shrink under clique blockages lying inside tx
  for (;;) {
    VertexSet X = torso.verts;
    std::unordered_set<NodeId> marked;
    for (NodeId t : tx)
      if (origin.count(t)) marked.insert(t);
    BlockageInfo bl = find_blockages(td, prefix, X, torso, pat, marked);
    std::vector<NodeId> drop;
    for (NodeId b : bl.blockages)
      if (in_tx.count(b)) drop.push_back(b);
    if (drop.empty()) break;
    for (NodeId b : drop)
      for (NodeId t : td.subtree(b)) in_tx.erase(t);
    std::vector<NodeId> keep;
    for (NodeId t : tx)
      if (in_tx.count(t)) keep.push_back(t);
    tx = std::move(keep);
    if (stats) stats->shrunk += static_cast<int>(drop.size());
    torso = prefix_torso(td, tx, pat);
    // torso(X') ⊆ torso(X)[X']: restricting the certificate stays valid
    for (auto& bag : cert->bags) bag = set_intersection(bag, torso.verts);
  }
  ClosureResult res;
  res.X = torso.verts;
  res.size = static_cast<long long>(res.X.size());
  res.torso = std::move(torso);
  res.tx = std::move(tx);
  res.certificate = std::move(cert);
  return res;
}

std::unordered_set<NodeId> marked_nodes(const AnnotatedTD& td, const VertexSet& X) {
  std::unordered_set<NodeId> m;
  std::unordered_map<Vertex, NodeId> top;
  for (NodeId t : td.preorder())
    for (Vertex v : td.bag(t))
      if (contains(X, v)) top.emplace(v, t);
  for (auto& [v, t] : top)
    for (NodeId z = t; z != NIL && m.insert(z).second; z = td.parent(z)) {
    }
  return m;
}

BlockageInfo find_blockages(const AnnotatedTD& td, const std::vector<NodeId>& prefix, const VertexSet& X,
                            const LabeledGraph& torso, PatternSource& pat,
                            const std::unordered_set<NodeId>& marked) {
  BlockageInfo out;
  auto notX = [&](Vertex v) { return !contains(X, v); };
  std::unordered_map<NodeId, std::vector<Edge>> patx;
  // X-aware pattern: pairs of adh(z) joined through component(z) \ X
  auto pattern_x = [&](auto&& self, NodeId z) -> const std::vector<Edge>& {
    if (!marked.count(z)) return pat.get(z);
    auto it = patx.find(z);
    if (it != patx.end()) return it->second;
    const auto& x = td.node(z);
    VertexSet adh = td.adhesion(z);
    std::vector<Edge> J = x.edges;
    for (NodeId c : x.child)
      if (c != NIL) {
        const auto& q = self(self, c);
        J.insert(J.end(), q.begin(), q.end());
      }
    auto all = connect_pairs(x.bag, J, [&](Vertex v) { return notX(v) && !contains(adh, v); });
    std::vector<Edge> r;
    for (auto e : all)
      if (contains(adh, e.first) && contains(adh, e.second)) r.push_back(e);
    return patx[z] = std::move(r);
  };
  std::unordered_set<NodeId> in_prefix(prefix.begin(), prefix.end());
  std::vector<NodeId> pre;  // prefix in preorder
  for (std::vector<NodeId> st{td.root()}; !st.empty();) {
    NodeId t = st.back();
    st.pop_back();
    pre.push_back(t);
    const auto& ch = td.node(t).child;
    for (int i = 1; i >= 0; --i)
      if (ch[i] != NIL && in_prefix.count(ch[i])) st.push_back(ch[i]);
  }
  for (NodeId t : pre) {
    out.explored.push_back(t);
    const auto& bag = td.bag(t);
    std::vector<Edge> pr;
    for (std::size_t i = 0; i < bag.size(); ++i)
      for (std::size_t j = i + 1; j < bag.size(); ++j) {
        int a = torso.index(bag[i]), b = torso.index(bag[j]);
        if (a >= 0 && b >= 0 && torso.g.has_edge(a, b)) pr.push_back({bag[i], bag[j]});
      }
    out.profile[t] = std::move(pr);
  }
  std::vector<NodeId> stack;
  {
    auto apps = appendices(td, out.explored);
    for (auto it = apps.rbegin(); it != apps.rend(); ++it) stack.push_back(*it);
  }
  while (!stack.empty()) {
    NodeId y = stack.back();
    stack.pop_back();
    const auto& x = td.node(y);
    VertexSet adh = td.adhesion(y);
    std::vector<Edge> J = x.edges;
    for (auto e : out.profile.at(x.parent))
      if (contains(adh, e.first) && contains(adh, e.second)) J.push_back(e);
    for (NodeId c : x.child)
      if (c != NIL) {
        const auto& q = pattern_x(pattern_x, c);
        J.insert(J.end(), q.begin(), q.end());
      }
    auto prof = connect_pairs(x.bag, J, notX);
    const auto& bag = x.bag;
    const std::size_t b = bag.size();
    char kind = 0;
    if (std::all_of(bag.begin(), bag.end(), [&](Vertex v) { return !notX(v); })) {
      if (prof.size() == b * (b - 1) / 2) kind = 'q';
    } else {
      std::vector<std::size_t> deg(b, 0);
      auto idx = [&](Vertex v) { return static_cast<std::size_t>(std::lower_bound(bag.begin(), bag.end(), v) - bag.begin()); };
      for (auto [u, v] : prof) ++deg[idx(u)], ++deg[idx(v)];
      for (std::size_t i = 0; i < b; ++i)
        if (notX(bag[i]) && deg[i] + 1 == b) kind = 'c';
    }
    out.profile[y] = std::move(prof);
    if (kind) {
      out.blockages.push_back(y);
      out.kind[y] = kind;
      continue;
    }
    out.explored.push_back(y);
    for (int i = 1; i >= 0; --i)
      if (x.child[i] != NIL) stack.push_back(x.child[i]);
  }
  return out;
}

VertexSet CollectedComponent::vertices(const AnnotatedTD& td) const {
  VertexSet r = explored;
  for (NodeId b : blockages) r = set_union(r, td.component_vertices(b));
  return r;
}

Exploration exploration_and_components(const AnnotatedTD& td, const std::vector<NodeId>& prefix,
                                       const VertexSet& X, const BlockageInfo& bl,
                                       const std::function<int(NodeId)>& height_of,
                                       const std::function<long long(NodeId)>& cmp_size) {
  Exploration ex;
  ex.F = bl.explored;
  for (NodeId b : bl.blockages)
    if (cmp_size(b) > 0) ex.blockages.push_back(b);  // empty ones hold no vertex and no edge
  (void)prefix;
  // F in preorder with depths, tops of explored vertices
  std::unordered_set<NodeId> inF(ex.F.begin(), ex.F.end());
  std::unordered_map<Vertex, std::pair<int, NodeId>> top;
  {
    std::vector<std::pair<NodeId, int>> st{{td.root(), 0}};
    while (!st.empty()) {
      auto [t, d] = st.back();
      st.pop_back();
      for (Vertex v : td.bag(t)) top.emplace(v, std::pair{d, t});
      for (int i = 1; i >= 0; --i) {
        NodeId c = td.node(t).child[i];
        if (c != NIL && inF.count(c)) st.push_back({c, d + 1});
      }
    }
  }
  // local ids: non-X explored vertices, then blockages
  VertexSet ev;
  for (auto& [v, dt] : top)
    if (!contains(X, v)) ev.push_back(v);
  normalize(ev);
  const int nv = static_cast<int>(ev.size()), nb = static_cast<int>(ex.blockages.size());
  auto vid = [&](Vertex v) { return static_cast<int>(std::lower_bound(ev.begin(), ev.end(), v) - ev.begin()); };
  UnionFind uf(nv + nb);
  std::vector<std::vector<Vertex>> nbrX(nv + nb);
  for (NodeId t : ex.F)
    for (auto [u, v] : td.node(t).edges) {
      bool xu = contains(X, u), xv = contains(X, v);
      if (!xu && !xv)
        uf.unite(vid(u), vid(v));
      else if (!xu)
        nbrX[vid(u)].push_back(v);
      else if (!xv)
        nbrX[vid(v)].push_back(u);
    }
  for (int i = 0; i < nb; ++i) {
    for (Vertex v : td.adhesion(ex.blockages[i])) {
      if (contains(X, v))
        nbrX[nv + i].push_back(v);
      else
        uf.unite(nv + i, vid(v));
    }
  }
  std::map<int, int> slot;
  for (int i = 0; i < nv + nb; ++i) {
    int r = uf.find(i);
    auto [it, fresh] = slot.emplace(r, static_cast<int>(ex.comps.size()));
    if (fresh) ex.comps.emplace_back();
    auto& c = ex.comps[it->second];
    if (i < nv)
      c.explored.push_back(ev[i]);
    else
      c.blockages.push_back(ex.blockages[i - nv]);
    c.interface.insert(c.interface.end(), nbrX[i].begin(), nbrX[i].end());
  }
  for (auto& c : ex.comps) {
    normalize(c.interface);
    if (c.explored.empty()) {
      c.blocked = true;
      c.home = c.blockages.front();
      c.interface = set_intersection(td.bag(c.home), X);
      c.height = height_of(c.home);
    } else {
      int best = INT32_MAX;
      for (Vertex v : c.explored) {
        auto [d, t] = top.at(v);
        if (d < best) best = d, c.home = t;
      }
    }
  }
  return ex;
}

}  // namespace dtw
