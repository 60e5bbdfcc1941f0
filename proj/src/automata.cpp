#include "dtw/automata.hpp"

#include <unordered_set>

#include <climits>
#include <stdexcept>

namespace dtw {

std::vector<NodeId> recompute_order(const PrefixUpdate& u) {
  std::vector<NodeId> order;
  for (auto& [a, p] : u.attach) order.push_back(a);
  std::unordered_map<NodeId, std::size_t> pos;
  for (std::size_t i = 0; i < u.nodes.size(); ++i) pos[u.nodes[i].id] = i;
  std::vector<int> depth(u.nodes.size(), -1);
  for (std::size_t i = 0; i < u.nodes.size(); ++i) {
    // walk up until a node with known depth
    std::vector<std::size_t> chain;
    std::size_t j = i;
    while (depth[j] < 0) {
      chain.push_back(j);
      NodeId p = u.nodes[j].parent;
      if (p == NIL) break;
      j = pos.at(p);
    }
    int d = depth[j] >= 0 ? depth[j] : -1;
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) depth[*it] = ++d;
  }
  std::vector<std::size_t> idx(u.nodes.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return depth[a] > depth[b]; });
  for (std::size_t i : idx) order.push_back(u.nodes[i].id);
  return order;
}

PatternAutomaton::State PatternAutomaton::join_impl(const NodeView& v, const State* a, const State* b) {
  const auto& bag = v.bag;
  const int n = static_cast<int>(bag.size());
  auto idx = [&](Vertex x) { return static_cast<int>(std::lower_bound(bag.begin(), bag.end(), x) - bag.begin()); };
  std::vector<char> inner(n, 1);
  for (Vertex x : v.adh) inner[idx(x)] = 0;
  std::vector<int> uf(n);
  for (int i = 0; i < n; ++i) uf[i] = i;
  auto find = [&](int x) {
    while (uf[x] != x) x = uf[x] = uf[uf[x]];
    return x;
  };
  std::vector<Edge> direct;
  std::vector<std::pair<int, int>> touch;  // (boundary index, inner index)
  auto take = [&](Vertex p, Vertex q) {
    int i = idx(p), j = idx(q);
    if (inner[i] && inner[j])
      uf[find(i)] = find(j);
    else if (inner[i])
      touch.emplace_back(j, i);
    else if (inner[j])
      touch.emplace_back(i, j);
    else
      direct.push_back(make_edge(p, q));
  };
  for (auto [p, q] : v.edges) take(p, q);
  if (a)
    for (auto [p, q] : *a) take(p, q);
  if (b)
    for (auto [p, q] : *b) take(p, q);
  // boundary vertices grouped by the inner component they touch
  std::vector<std::pair<int, int>> by_comp;
  for (auto [bi, ii] : touch) by_comp.emplace_back(find(ii), bi);
  std::sort(by_comp.begin(), by_comp.end());
  by_comp.erase(std::unique(by_comp.begin(), by_comp.end()), by_comp.end());
  State out = std::move(direct);
  for (std::size_t s = 0; s < by_comp.size();) {
    std::size_t e = s;
    while (e < by_comp.size() && by_comp[e].first == by_comp[s].first) ++e;
    for (std::size_t i = s; i < e; ++i)
      for (std::size_t j = i + 1; j < e; ++j) out.push_back(make_edge(bag[by_comp[i].second], bag[by_comp[j].second]));
    s = e;
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

struct LocalBag {
  std::vector<std::uint64_t> nbr;  // adjacency masks over bag indices (edges(x) only)
  std::uint64_t adh_mask = 0;
  std::vector<int> adh_pos, y_pos, z_pos;  // bag indices in adhesion order
};

LocalBag local_bag(const NodeView& v) {
  const auto& bag = v.bag;
  if (bag.size() > 64) throw std::length_error("bag too large for automaton");
  auto idx = [&](Vertex x) { return static_cast<int>(std::lower_bound(bag.begin(), bag.end(), x) - bag.begin()); };
  LocalBag lb;
  lb.nbr.assign(bag.size(), 0);
  for (auto [p, q] : v.edges) {
    int i = idx(p), j = idx(q);
    lb.nbr[i] |= 1ull << j;
    lb.nbr[j] |= 1ull << i;
  }
  for (Vertex x : v.adh) {
    lb.adh_pos.push_back(idx(x));
    lb.adh_mask |= 1ull << idx(x);
  }
  if (v.adh_y)
    for (Vertex x : *v.adh_y) lb.y_pos.push_back(idx(x));
  if (v.adh_z)
    for (Vertex x : *v.adh_z) lb.z_pos.push_back(idx(x));
  return lb;
}

std::size_t project(std::uint64_t mask, const std::vector<int>& pos) {
  std::size_t r = 0;
  for (std::size_t j = 0; j < pos.size(); ++j)
    if (mask >> pos[j] & 1) r |= std::size_t{1} << j;
  return r;
}

}  // namespace

MisAutomaton::State MisAutomaton::join_impl(const NodeView& v, const State* a, const State* b) const {
  LocalBag lb = local_bag(v);
  const int n = static_cast<int>(v.bag.size());
  if (lb.adh_pos.size() > 30) throw std::length_error("adhesion too large for MIS automaton");
  State out(std::size_t{1} << lb.adh_pos.size(), INT_MIN);
  // enumerate independent subsets of the bag w.r.t. edges(x)
  std::vector<std::pair<int, std::uint64_t>> stack{{0, 0}};
  while (!stack.empty()) {
    auto [i, mask] = stack.back();
    stack.pop_back();
    if (i == n) {
      int val = __builtin_popcountll(mask & ~lb.adh_mask);
      if (a) val += (*a)[project(mask, lb.y_pos)];
      if (b) val += (*b)[project(mask, lb.z_pos)];
      auto& slot = out[project(mask, lb.adh_pos)];
      slot = std::max(slot, val);
      continue;
    }
    stack.push_back({i + 1, mask});
    if (!(lb.nbr[i] & mask)) stack.push_back({i + 1, mask | (1ull << i)});
  }
  return out;
}

namespace {

int color_bits(int q) {
  int b = 1;
  while ((1 << b) < q) ++b;
  return b;
}

// normalised code of the colouring restricted to `pos` (colours renamed by
// first occurrence)
std::uint64_t restrict_code(const std::vector<int>& col, const std::vector<int>& pos, int bits) {
  int rename[64];
  for (int& r : rename) r = -1;
  int next = 0;
  std::uint64_t code = 0;
  for (std::size_t j = 0; j < pos.size(); ++j) {
    int c = col[pos[j]];
    if (rename[c] < 0) rename[c] = next++;
    code |= static_cast<std::uint64_t>(rename[c]) << (bits * j);
  }
  return code;
}

}  // namespace

ColoringAutomaton::State ColoringAutomaton::join_impl(const NodeView& v, const State* a, const State* b) const {
  if (q < 1) return {};
  LocalBag lb = local_bag(v);
  const int n = static_cast<int>(v.bag.size());
  const int bits = color_bits(q);
  if (bits * static_cast<int>(v.bag.size()) > 64) throw std::length_error("bag too large for colouring automaton");
  // assignment order: adh(y), then adh(z), then the rest
  std::vector<int> order;
  std::vector<char> placed(n, 0);
  for (int p : lb.y_pos)
    if (!placed[p]) order.push_back(p), placed[p] = 1;
  const int after_y = static_cast<int>(order.size());
  for (int p : lb.z_pos)
    if (!placed[p]) order.push_back(p), placed[p] = 1;
  const int after_z = static_cast<int>(order.size());
  for (int p = 0; p < n; ++p)
    if (!placed[p]) order.push_back(p);
  std::vector<int> col(n, -1);
  State out;
  auto child_ok = [&](const State* s, const std::vector<int>& pos) {
    return std::binary_search(s->begin(), s->end(), restrict_code(col, pos, bits));
  };
  // recursive backtracking with colour-symmetry breaking
  auto rec = [&](auto&& self, int i, int used) -> void {
    if (i == after_y && a && !child_ok(a, lb.y_pos)) return;
    if (i == after_z && b && !child_ok(b, lb.z_pos)) return;
    if (i == n) {
      out.push_back(restrict_code(col, lb.adh_pos, bits));
      return;
    }
    int p = order[i];
    for (int c = 0; c < std::min(q, used + 1); ++c) {
      bool ok = true;
      for (int j = 0; j < i && ok; ++j)
        if ((lb.nbr[p] >> order[j] & 1) && col[order[j]] == c) ok = false;
      if (!ok) continue;
      col[p] = c;
      self(self, i + 1, std::max(used, c + 1));
      col[p] = -1;
    }
  };
  rec(rec, 0, 0);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void TopMap::init(const AnnotatedTD& td) {
  Vertex mx = 0;
  for (auto& [t, x] : td.nodes())
    if (!x.bag.empty()) mx = std::max(mx, x.bag.back() + 1);
  if (top_.size() < mx) top_.resize(mx, NIL);
  std::fill(top_.begin(), top_.end(), NIL);
  for (NodeId t : td.preorder())
    for (Vertex v : td.bag(t))
      if (top_[v] == NIL) top_[v] = t;
}

void TopMap::update(const AnnotatedTD& td, const PrefixUpdate& u, const std::vector<NodeId>&) {
  std::vector<Vertex> touched;
  auto visit = [&](NodeId t, std::unordered_set<Vertex>& seen) {
    for (Vertex v : td.bag(t)) {
      if (v >= top_.size()) top_.resize(v + 1, NIL);
      if (seen.insert(v).second) {
        touched.push_back(v);
        top_[v] = t;
      }
    }
  };
  std::unordered_set<Vertex> seen;
  // new prefix top-down
  std::unordered_map<NodeId, std::vector<NodeId>> kids;
  NodeId root = NIL;
  for (auto& x : u.nodes) {
    if (x.parent == NIL)
      root = x.id;
    else
      kids[x.parent].push_back(x.id);
  }
  std::vector<NodeId> q{root};
  for (std::size_t i = 0; i < q.size(); ++i) {
    visit(q[i], seen);
    for (NodeId c : kids[q[i]]) q.push_back(c);
  }
  // attached appendices in new-prefix order
  std::unordered_map<NodeId, std::size_t> rank;
  for (std::size_t i = 0; i < q.size(); ++i) rank[q[i]] = i;
  auto att = u.attach;
  std::stable_sort(att.begin(), att.end(), [&](auto& x, auto& y) { return rank[x.second] < rank[y.second]; });
  for (auto& [a, p] : att) visit(a, seen);
}

}  // namespace dtw
