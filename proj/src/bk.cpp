#include "dtw/bk.hpp"

#include "dtw/treewidth.hpp"

namespace dtw {

namespace {

// Folds interior vertices out of lg. `boundary` holds local flags.
void fold(LabeledGraph& lg, const std::vector<char>& boundary, int k, bool& reject, std::vector<Vertex>* elim,
          std::vector<char>& gone) {
  const int n = lg.g.n();
  auto& adj = lg.g.adj;
  for (bool changed = true; changed && !reject;) {
    changed = false;
    for (int v = 0; v < n && !reject; ++v) {
      if (boundary[v] || gone[v]) continue;
      const auto& nb = adj[v];
      const int d = static_cast<int>(nb.size());
      int miss = 0;
      std::vector<int> bad(nb.size(), 0);
      for (std::size_t i = 0; i < nb.size(); ++i)
        for (std::size_t j = i + 1; j < nb.size(); ++j)
          if (!lg.g.has_edge(nb[i], nb[j])) {
            ++miss;
            ++bad[i];
            ++bad[j];
          }
      bool almost = miss == 0;
      if (!almost)
        for (std::size_t i = 0; i < nb.size(); ++i)
          if (bad[i] == miss) almost = true;
      if (miss == 0 && d > k) {
        reject = true;
        break;
      }
      if (!almost || d > k) continue;
      std::vector<int> nbc = nb;
      for (int a : nbc) {
        auto& av = adj[a];
        av.erase(std::lower_bound(av.begin(), av.end(), v));
      }
      for (std::size_t i = 0; i < nbc.size(); ++i)
        for (std::size_t j = i + 1; j < nbc.size(); ++j) lg.g.add_edge(nbc[i], nbc[j]);
      adj[v].clear();
      gone[v] = 1;
      if (elim) elim->push_back(lg.verts[v]);
      changed = true;
    }
  }
}

}  // namespace

BkAutomaton::State BkAutomaton::join_impl(const NodeView& v, const State* a, const State* b,
                                          std::vector<Vertex>* elim) const {
  State out;
  if ((a && a->reject) || (b && b->reject)) {
    out.reject = true;
    return out;
  }
  LabeledGraph lg;
  lg.verts = v.bag;
  if (a) lg.verts.insert(lg.verts.end(), a->verts.begin(), a->verts.end());
  if (b) lg.verts.insert(lg.verts.end(), b->verts.begin(), b->verts.end());
  normalize(lg.verts);
  lg.g = LocalGraph(static_cast<int>(lg.verts.size()));
  auto add = [&](const std::vector<Edge>& es) {
    for (auto [p, q] : es) lg.g.add_edge(lg.index(p), lg.index(q));
  };
  add(v.edges);
  if (a) add(a->edges);
  if (b) add(b->edges);
  const int n = lg.g.n();
  std::vector<char> boundary(n, 0), gone(n, 0);
  for (Vertex x : v.adh) boundary[lg.index(x)] = 1;
  bool reject = false;
  fold(lg, boundary, k, reject, elim, gone);
  if (reject) {
    out.reject = true;
    return out;
  }
  int core = 0;
  for (int i = 0; i < n; ++i)
    if (!gone[i] && !boundary[i]) ++core;
  for (int i = 0; i < n; ++i)
    if (!gone[i]) out.verts.push_back(lg.verts[i]);
  for (int i = 0; i < n; ++i)
    for (int j : lg.g.adj[i])
      if (i < j) out.edges.push_back({lg.verts[i], lg.verts[j]});
  std::sort(out.edges.begin(), out.edges.end());
  // a large unreduced core is checked once: the state graph is a minor of G
  if (core > 2 * k + 6) {
    LabeledGraph h;
    h.verts = out.verts;
    h.g = LocalGraph(static_cast<int>(h.verts.size()));
    for (auto [p, q] : out.edges) h.g.add_edge(h.index(p), h.index(q));
    auto r = tw_at_most(h.g, k, nullptr, 100'000);
    if (r && !*r) {
      State rej;
      rej.reject = true;
      return rej;
    }
  }
  return out;
}

bool BkAutomaton::accepting(const State& root) const {
  if (root.reject) return false;
  LabeledGraph h;
  h.verts = root.verts;
  h.g = LocalGraph(static_cast<int>(h.verts.size()));
  for (auto [p, q] : root.edges) h.g.add_edge(h.index(p), h.index(q));
  auto r = tw_at_most(h.g, k, nullptr, INT64_MAX);
  return r && *r;
}

bool bk_decide(const AnnotatedTD& td, int k) {
  AutomatonRun<BkAutomaton> run(BkAutomaton{k});
  run.init(td);
  return run.automaton().accepting(run.state(td.root()));
}

std::optional<AnnotatedTD> bk_construct(const AnnotatedTD& td, const DynGraph& g, int k) {
  BkAutomaton a{k};
  std::unordered_map<NodeId, BkAutomaton::State> st;
  std::vector<Vertex> seq;
  auto order = td.preorder();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    NodeId t = *it;
    const auto& x = td.node(t);
    VertexSet adh = td.adhesion(t), ay, az;
    const BkAutomaton::State* qa = nullptr;
    const BkAutomaton::State* qb = nullptr;
    if (x.child[0] != NIL) {
      ay = td.adhesion(x.child[0]);
      qa = &st.at(x.child[0]);
    }
    if (x.child[1] != NIL) {
      az = td.adhesion(x.child[1]);
      qb = &st.at(x.child[1]);
    }
    NodeView v{x.bag, adh, qa ? &ay : nullptr, qb ? &az : nullptr, x.edges};
    st[t] = a.join_impl(v, qa, qb, &seq);
    if (st[t].reject) return std::nullopt;
  }
  const auto& root = st.at(td.root());
  LabeledGraph h;
  h.verts = root.verts;
  h.g = LocalGraph(static_cast<int>(h.verts.size()));
  for (auto [p, q] : root.edges) h.g.add_edge(h.index(p), h.index(q));
  std::vector<int> core_order;
  auto r = tw_at_most(h.g, k, &core_order, INT64_MAX);
  if (!r || !*r) return std::nullopt;
  for (int i : core_order) seq.push_back(h.verts[i]);
  VertexSet all;
  for (Vertex v = 0; v < g.n(); ++v) all.push_back(v);
  LabeledGraph full = induced(g, all);
  std::vector<int> ord;
  for (Vertex v : seq) ord.push_back(full.index(v));
  PlainTD p = td_from_order(full, ord);
  if (p.width() > k) return std::nullopt;
  return AnnotatedTD::from_plain(p, g, td.peek_next_id());
}

}  // namespace dtw
