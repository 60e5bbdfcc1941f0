#include "dtw/refine.hpp"

#include <map>
#include <numeric>
#include <unordered_set>

namespace dtw {

BigInt potential(const AnnotatedTD& td, int ell) {
  const BigInt base = 53 * (ell + 4);
  std::unordered_map<NodeId, int> h;
  auto order = td.preorder();
  BigInt phi = 0;
  std::map<std::size_t, BigInt> pw;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const auto& x = td.node(*it);
    int hh = 1;
    for (NodeId c : x.child)
      if (c != NIL) hh = std::max(hh, 1 + h.at(c));
    h[*it] = hh;
    auto p = pw.find(x.bag.size());
    if (p == pw.end()) p = pw.emplace(x.bag.size(), boost::multiprecision::pow(base, static_cast<unsigned>(x.bag.size()))).first;
    phi += p->second * hh;
  }
  return phi;
}

// ---------------------------------------------------------------- green trees

std::vector<long long> GreenTree::lheight() const {
  std::vector<long long> lh(parent.size(), 0);
  // children have larger indices than parents except leaves; iterate to a fixpoint order
  std::vector<std::vector<int>> ch(parent.size());
  for (int v = 0; v < size(); ++v)
    if (parent[v] >= 0) ch[parent[v]].push_back(v);
  std::vector<int> order{root};
  for (std::size_t i = 0; i < order.size(); ++i)
    for (int c : ch[order[i]]) order.push_back(c);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    int v = *it;
    if (ch[v].empty()) {
      lh[v] = label[v];
    } else {
      long long m = 0;
      for (int c : ch[v]) m = std::max(m, lh[c]);
      lh[v] = 1 + m;
    }
  }
  return lh;
}

long long GreenTree::sum_lheight() const {
  auto lh = lheight();
  return std::accumulate(lh.begin(), lh.end(), 0LL);
}

int GreenTree::height() const {
  int best = 0;
  for (int v = 0; v < size(); ++v) {
    int h = 1;
    for (int u = v; parent[u] >= 0; u = parent[u]) ++h;
    best = std::max(best, h);
  }
  return best;
}

namespace {

int ceil_log2(long long a) {
  int r = 0;
  while ((1LL << r) < a) ++r;
  return r;
}

}  // namespace

GreenTree green_tree(const std::vector<long long>& labels) {
  if (labels.empty()) throw std::invalid_argument("green_tree: no labels");
  GreenTree t;
  long long Q = 0;
  for (long long h : labels) {
    if (h <= 0) throw std::invalid_argument("green_tree: labels must be positive");
    Q += h;
  }
  const int CQ = ceil_log2(Q);
  auto add = [&](int par, long long lab) {
    t.parent.push_back(par);
    t.label.push_back(lab);
    return t.size() - 1;
  };
  t.leaf_of.assign(labels.size(), -1);
  // groups G_j: h ∈ (Q/2^{j+1}, Q/2^j], i.e. the largest j with h·2^j <= Q
  std::vector<std::vector<int>> group(CQ + 1);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    int j = 0;
    while (j < CQ && (labels[i] << (j + 1)) <= Q) ++j;
    group[j].push_back(static_cast<int>(i));
  }
  int last = CQ;
  while (last >= 0 && group[last].empty()) --last;
  // spine v_0..v_last; v_i gets the root of the balanced tree of G_i
  std::vector<int> spine;
  for (int i = 0; i <= last; ++i) spine.push_back(add(i == 0 ? -1 : spine.back(), -1));
  for (int i = 0; i <= last; ++i) {
    const auto& gi = group[i];
    if (gi.empty()) continue;
    auto build = [&](auto&& self, int par, std::size_t lo, std::size_t hi) -> void {
      if (hi - lo == 1) {
        t.leaf_of[gi[lo]] = add(par, labels[gi[lo]]);
        return;
      }
      int v = add(par, -1);
      std::size_t mid = lo + (hi - lo + 1) / 2;
      self(self, v, lo, mid);
      self(self, v, mid, hi);
    };
    build(build, spine[i], 0, gi.size());
  }
  // splice out unary spine nodes
  std::vector<std::vector<int>> ch(t.size());
  for (int v = 0; v < t.size(); ++v)
    if (t.parent[v] >= 0) ch[t.parent[v]].push_back(v);
  std::vector<char> gone(t.size(), 0);
  int root = spine[0];
  for (int s : spine) {
    if (ch[s].size() != 1) continue;
    int c = ch[s][0];
    int p = t.parent[s];
    t.parent[c] = p;
    if (p >= 0) std::replace(ch[p].begin(), ch[p].end(), s, c);
    if (s == root) root = c;
    gone[s] = 1;
  }
  // compact
  std::vector<int> nid(t.size(), -1);
  GreenTree out;
  for (int v = 0; v < t.size(); ++v)
    if (!gone[v]) {
      nid[v] = out.size();
      out.parent.push_back(t.parent[v]);
      out.label.push_back(t.label[v]);
    }
  for (auto& p : out.parent)
    if (p >= 0) p = nid[p];
  out.root = nid[root];
  for (int l : t.leaf_of) out.leaf_of.push_back(nid[l]);
  return out;
}

// ---------------------------------------------------------------- balancing

namespace {

struct Balancer {
  const PlainTD& in;
  std::vector<std::vector<int>> adj;
  std::vector<int> mark;
  int stamp = 0;
  PlainTD out;

  explicit Balancer(const PlainTD& t) : in(t), adj(t.size()), mark(t.size(), 0) {
    for (int v = 0; v < t.size(); ++v)
      if (t.parent[v] >= 0) {
        adj[v].push_back(t.parent[v]);
        adj[t.parent[v]].push_back(v);
      }
  }

  // piece: node list; bnd: (inside, outside) tree edges leaving the piece
  int build(const std::vector<int>& piece, const std::vector<std::pair<int, int>>& bnd, int par) {
    const int my = ++stamp;
    for (int v : piece) mark[v] = my;
    auto inside = [&](int v) { return mark[v] == my; };
    // rooted at piece[0]: parents and subtree sizes
    const int n = static_cast<int>(piece.size());
    std::vector<int> order{piece[0]};
    std::unordered_map<int, int> par_of{{piece[0], -1}};
    for (std::size_t i = 0; i < order.size(); ++i)
      for (int w : adj[order[i]])
        if (inside(w) && w != par_of[order[i]]) {
          par_of[w] = order[i];
          order.push_back(w);
        }
    std::unordered_map<int, int> sz;
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      sz[*it] += 1;
      if (par_of[*it] >= 0) sz[par_of[*it]] += sz[*it];
    }
    int cen = piece[0];
    for (int v : order) {
      int mx = n - sz[v];
      for (int w : adj[v])
        if (inside(w) && w != par_of[v]) mx = std::max(mx, sz[w]);
      if (2 * mx <= n) {
        cen = v;
        break;
      }
    }
    int s = cen;
    if (bnd.size() >= 2) {
      // project the centroid onto the path between the two boundary nodes
      int x1 = bnd[0].first, x2 = bnd[1].first;
      std::unordered_map<int, int> p1{{x1, -1}};
      std::vector<int> q{x1};
      for (std::size_t i = 0; i < q.size(); ++i)
        for (int w : adj[q[i]])
          if (inside(w) && !p1.count(w)) {
            p1[w] = q[i];
            q.push_back(w);
          }
      std::unordered_set<int> path;
      for (int v = x2; v != -1; v = p1[v]) path.insert(v);
      s = cen;
      while (!path.count(s)) s = p1[s];
    }
    VertexSet bag = in.bags[s];
    for (auto [x, y] : bnd) bag = set_union(bag, set_intersection(in.bags[x], in.bags[y]));
    int me = out.size();
    out.bags.push_back(std::move(bag));
    out.parent.push_back(par);
    // components of piece - s
    std::vector<std::vector<int>> parts;
    std::vector<std::vector<std::pair<int, int>>> pb;
    const int cut = ++stamp;
    for (int nb : adj[s]) {
      if (!inside(nb)) continue;
      std::vector<int> comp{nb};
      mark[nb] = cut;
      for (std::size_t i = 0; i < comp.size(); ++i)
        for (int w : adj[comp[i]])
          if (w != s && inside(w)) {
            mark[w] = cut;
            comp.push_back(w);
          }
      parts.push_back(std::move(comp));
      pb.push_back({{nb, s}});
    }
    // restore marks for boundary lookup: which part holds each boundary node
    for (std::size_t i = 0; i < parts.size(); ++i) {
      for (int v : parts[i]) mark[v] = my;
    }
    std::unordered_map<int, int> part_of;
    for (std::size_t i = 0; i < parts.size(); ++i)
      for (int v : parts[i]) part_of[v] = static_cast<int>(i);
    for (auto [x, y] : bnd)
      if (x != s) pb[part_of.at(x)].push_back({x, y});
    for (std::size_t i = 0; i < parts.size(); ++i) build(parts[i], pb[i], me);
    return me;
  }
};

}  // namespace

PlainTD balance_decomposition(const PlainTD& td) {
  if (td.size() <= 1) return td;
  PlainTD bin = td.is_binary() ? td : binarize(td);
  Balancer b(bin);
  std::vector<int> all(bin.size());
  std::iota(all.begin(), all.end(), 0);
  b.out.root = b.build(all, {}, -1);
  return binarize(b.out);
}

// ---------------------------------------------------------------- subset leaves

namespace {

// Hangs `extra` new leaves (bags given) under node s, keeping the tree binary
// by a balanced tree of copies of bag(s). Returns the new leaf indices.
std::vector<int> hang(PlainTD& t, std::vector<std::vector<int>>& ch, int s, const std::vector<VertexSet>& extra) {
  std::vector<int> leaves;
  std::vector<int> items = ch[s];
  for (auto& b : extra) {
    t.bags.push_back(b);
    t.parent.push_back(-1);
    ch.emplace_back();
    leaves.push_back(t.size() - 1);
    items.push_back(t.size() - 1);
  }
  ch[s].clear();
  auto link = [&](int p, int c) {
    t.parent[c] = p;
    ch[p].push_back(c);
  };
  auto build = [&](auto&& self, int par, std::size_t lo, std::size_t hi) -> void {
    if (hi - lo == 1) {
      link(par, items[lo]);
      return;
    }
    t.bags.push_back(t.bags[s]);
    t.parent.push_back(-1);
    ch.emplace_back();
    int v = t.size() - 1;
    link(par, v);
    std::size_t mid = lo + (hi - lo + 1) / 2;
    self(self, v, lo, mid);
    self(self, v, mid, hi);
  };
  if (items.size() <= 2) {
    for (int c : items) link(s, c);
  } else {
    std::size_t mid = (items.size() + 1) / 2;
    build(build, s, 0, mid);
    build(build, s, mid, items.size());
  }
  return leaves;
}

}  // namespace

PlainTD all_subsets_expand(const PlainTD& td) {
  PlainTD t = td;
  auto ch = t.children();
  const int n0 = t.size();
  for (int s = 0; s < n0; ++s) {
    const auto& bag = td.bags[s];
    std::vector<VertexSet> subs;
    for (std::uint64_t m = 0; m < (1ull << bag.size()); ++m) {
      VertexSet b;
      for (std::size_t i = 0; i < bag.size(); ++i)
        if (m >> i & 1) b.push_back(bag[i]);
      subs.push_back(std::move(b));
    }
    hang(t, ch, s, subs);
  }
  return t;
}

std::optional<PlainTD> expand_for(const PlainTD& td, const std::vector<VertexSet>& needed, std::vector<int>& leaf_of) {
  PlainTD t = td;
  auto ch = t.children();
  leaf_of.assign(needed.size(), -1);
  // shallowest node containing each set
  std::vector<int> order{t.root};
  for (std::size_t i = 0; i < order.size(); ++i)
    for (int c : ch[order[i]]) order.push_back(c);
  std::map<int, std::vector<std::size_t>> at;
  for (std::size_t i = 0; i < needed.size(); ++i) {
    int host = -1;
    for (int v : order)
      if (is_subset(needed[i], t.bags[v])) {
        host = v;
        break;
      }
    if (host < 0) return std::nullopt;
    at[host].push_back(i);
  }
  for (auto& [s, idx] : at) {
    std::vector<VertexSet> bags;
    for (std::size_t i : idx) bags.push_back(needed[i]);
    auto leaves = hang(t, ch, s, bags);
    for (std::size_t j = 0; j < idx.size(); ++j) leaf_of[idx[j]] = leaves[j];
  }
  return t;
}

// ---------------------------------------------------------------- refine

RefineResult refine(const AnnotatedTD& td, const DynGraph& g, const std::vector<NodeId>& prefix,
                    const RefineConfig& cfg, RefineAux& aux) {
  RefineResult rr;
  ClosureParams cp{cfg.k, cfg.ell, cfg.c};
  // Step 1: closure, blockages, collected components
  std::optional<ClosureResult> cl;
  std::unordered_set<NodeId> marked;
  if (cfg.mode == ClosureMode::exact) {
    cl = closure_query(td, prefix, cp);
    if (cl) marked = marked_nodes(td, cl->X);
  } else {
    cl = prefix_closure(td, prefix, cp, *aux.pat, &rr.stats.closure);
    if (cl)
      for (NodeId t : cl->tx) marked.insert(t);
  }
  if (!cl) {
    rr.error = "no closure";
    return rr;
  }
  const VertexSet& X = cl->X;
  BlockageInfo bl = find_blockages(td, prefix, X, cl->torso, *aux.pat, marked);
  Exploration ex = exploration_and_components(td, prefix, X, bl, aux.height, aux.cmp_size);
  rr.stats.closure_size = X.size();
  rr.stats.explored = ex.F.size();
  rr.stats.components = ex.comps.size();

  // Step 2: T^X, balanced, with a leaf per interface
  PlainTD tx;
  if (cl->certificate && cl->certificate->size() > 0)
    tx = balance_decomposition(binarize(*cl->certificate));
  else {
    tx.bags.push_back(X);
    tx.parent.push_back(-1);
    tx.root = 0;
  }
  std::map<VertexSet, std::vector<std::size_t>> by_iface;
  for (std::size_t i = 0; i < ex.comps.size(); ++i) by_iface[ex.comps[i].interface].push_back(i);
  std::vector<VertexSet> needed;
  for (auto& [b, v] : by_iface) needed.push_back(b);
  rr.stats.interfaces = needed.size();
  std::vector<int> leaf_of;
  auto txe = expand_for(tx, needed, leaf_of);
  if (!txe) {
    rr.error = "interface not covered by T^X";
    return rr;
  }
  tx = std::move(*txe);
  if (tx.width() > cfg.ell) {
    rr.error = "T^X too wide";
    return rr;
  }

  PrefixUpdate u;
  u.old_prefix = ex.F;
  std::unordered_map<NodeId, std::size_t> pos;  // new node id -> index in u.nodes
  auto add_node = [&](NodeId parent, VertexSet bag) {
    NewNode nn;
    nn.id = td.fresh_id();
    nn.parent = parent;
    nn.bag = std::move(bag);
    pos[nn.id] = u.nodes.size();
    u.nodes.push_back(std::move(nn));
    return u.nodes.back().id;
  };
  std::vector<NodeId> txid(tx.size(), NIL);
  {
    auto ch = tx.children();
    std::vector<int> order{tx.root};
    for (std::size_t i = 0; i < order.size(); ++i)
      for (int c : ch[order[i]]) order.push_back(c);
    for (int v : order) txid[v] = add_node(tx.parent[v] < 0 ? NIL : txid[tx.parent[v]], tx.bags[v]);
  }

  // Step 3: T^C for unblocked components
  std::unordered_map<Vertex, int> comp_of;
  for (std::size_t i = 0; i < ex.comps.size(); ++i)
    for (Vertex v : ex.comps[i].explored) comp_of[v] = static_cast<int>(i);
  std::unordered_set<NodeId> inF(ex.F.begin(), ex.F.end());
  std::vector<NodeId> fpre;  // F in preorder
  {
    std::vector<NodeId> st{td.root()};
    while (!st.empty()) {
      NodeId t = st.back();
      st.pop_back();
      fpre.push_back(t);
      const auto& x = td.node(t);
      for (int i = 1; i >= 0; --i)
        if (x.child[i] != NIL && inF.count(x.child[i])) st.push_back(x.child[i]);
    }
  }
  // X ∩ component(t) for pull sets (empty for prefix closures)
  std::unordered_map<NodeId, VertexSet> xcomp;
  if (cfg.mode == ClosureMode::exact)
    for (auto it = fpre.rbegin(); it != fpre.rend(); ++it) {
      const auto& x = td.node(*it);
      VertexSet s = set_difference(set_intersection(x.bag, X), td.adhesion(*it));
      for (NodeId c : x.child)
        if (c != NIL && xcomp.count(c)) s = set_union(s, xcomp[c]);
      xcomp[*it] = std::move(s);
    }
  std::map<std::pair<std::size_t, NodeId>, NodeId> copy;  // (component, origin) -> new id
  std::vector<NodeId> croot(ex.comps.size(), NIL);
  std::vector<int> cheight(ex.comps.size(), 0);
  std::unordered_map<NodeId, int> hnew;
  std::vector<std::pair<NodeId, std::size_t>> copies;  // (origin, comp) in preorder
  std::vector<VertexSet> nbag;  // bags in the same order
  for (NodeId t : fpre) {
    std::vector<int> met;
    for (Vertex v : td.bag(t)) {
      auto it = comp_of.find(v);
      if (it != comp_of.end()) met.push_back(it->second);
    }
    std::sort(met.begin(), met.end());
    met.erase(std::unique(met.begin(), met.end()), met.end());
    for (int ci : met) {
      const auto& c = ex.comps[ci];
      VertexSet keep = set_union(c.explored, c.interface);
      VertexSet bag = set_intersection(td.bag(t), keep);
      if (cfg.mode == ClosureMode::exact) bag = set_union(bag, set_difference(set_intersection(c.interface, xcomp[t]), td.bag(t)));
      if (cfg.check && bag.size() >= td.bag(t).size()) {
        rr.error = "collected bag not smaller than its origin";
        return rr;
      }
      NodeId p = td.parent(t);
      auto pit = p == NIL ? copy.end() : copy.find({ci, p});
      NodeId id;
      if (pit == copy.end()) {
        if (croot[ci] != NIL || t != c.home) {
          rr.error = "T^C is not rooted at its home";
          return rr;
        }
        id = add_node(NIL, std::move(bag));  // parent fixed in step 4
        croot[ci] = id;
      } else {
        id = add_node(pit->second, std::move(bag));
      }
      copy[{ci, t}] = id;
      copies.push_back({t, static_cast<std::size_t>(ci)});
    }
  }
  // blockage reattachment and heights
  std::unordered_map<NodeId, NodeId> attach_to;
  for (std::size_t ci = 0; ci < ex.comps.size(); ++ci) {
    const auto& c = ex.comps[ci];
    if (c.blocked) {
      ++rr.stats.blocked;
      croot[ci] = c.home;
      cheight[ci] = c.height;
      continue;
    }
    for (NodeId b : c.blockages) {
      auto it = copy.find({ci, td.parent(b)});
      if (it == copy.end()) {
        rr.error = "blockage parent outside T^C";
        return rr;
      }
      attach_to[b] = it->second;
      hnew[it->second] = std::max(hnew[it->second], 1 + aux.height(b));
    }
  }
  for (auto it = copies.rbegin(); it != copies.rend(); ++it) {
    NodeId id = copy.at({it->second, it->first});
    int h = std::max(hnew[id], 1);
    hnew[id] = h;
    NodeId p = u.nodes[pos.at(id)].parent;
    if (p != NIL) hnew[p] = std::max(hnew[p], h + 1);
  }
  for (std::size_t ci = 0; ci < ex.comps.size(); ++ci)
    if (!ex.comps[ci].blocked) cheight[ci] = hnew.at(croot[ci]);

  // Step 4: a green tree per interface below its leaf of T^X
  for (std::size_t ii = 0; ii < needed.size(); ++ii) {
    const auto& members = by_iface.at(needed[ii]);
    std::vector<long long> labels;
    long long sum_h = 0;
    for (std::size_t ci : members) {
      labels.push_back(cheight[ci] + 1);
      sum_h += cheight[ci];
    }
    GreenTree gt = green_tree(labels);
    if (cfg.check && gt.sum_lheight() > 52 * sum_h) {
      rr.error = "green tree height sum above bound";
      return rr;
    }
    std::vector<NodeId> gid(gt.size(), NIL);
    std::vector<int> order{gt.root};
    {
      std::vector<std::vector<int>> ch(gt.size());
      for (int v = 0; v < gt.size(); ++v)
        if (gt.parent[v] >= 0) ch[gt.parent[v]].push_back(v);
      for (std::size_t i = 0; i < order.size(); ++i)
        for (int c : ch[order[i]]) order.push_back(c);
    }
    for (int v : order) gid[v] = add_node(gt.parent[v] < 0 ? txid[leaf_of[ii]] : gid[gt.parent[v]], needed[ii]);
    for (std::size_t j = 0; j < members.size(); ++j) {
      std::size_t ci = members[j];
      NodeId leaf = gid[gt.leaf_of[j]];
      if (ex.comps[ci].blocked)
        attach_to[croot[ci]] = leaf;
      else
        u.nodes[pos.at(croot[ci])].parent = leaf;
    }
  }

  // Step 5: edges of the new nodes and the attachment map
  for (auto& nn : u.nodes) {
    const VertexSet* pb = nn.parent == NIL ? nullptr : &u.nodes[pos.at(nn.parent)].bag;
    nn.edges = edges_between(g, nn.bag, pb);
    if (static_cast<int>(nn.bag.size()) > cfg.ell + 1) {
      rr.error = "new bag above width bound";
      return rr;
    }
  }
  for (NodeId b : ex.blockages) {
    auto it = attach_to.find(b);
    if (it == attach_to.end()) {
      rr.error = "blockage left unattached";
      return rr;
    }
    u.attach.push_back({b, it->second});
  }
  rr.stats.new_nodes = u.nodes.size();
  rr.update = std::move(u);
  return rr;
}

}  // namespace dtw
