#include "dtw/td.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace dtw {

AnnotatedTD AnnotatedTD::complete_binary(std::size_t n) {
  AnnotatedTD td;
  if (n == 0) {
    TDNode r;
    r.id = 0;
    td.nodes_.emplace(0, r);
    td.root_ = 0;
    td.next_id_ = 1;
    return td;
  }
  // node i (heap order) holds vertex i
  for (std::size_t i = 0; i < n; ++i) {
    TDNode x;
    x.id = i;
    x.parent = i == 0 ? NIL : (i - 1) / 2;
    if (2 * i + 1 < n) x.child[0] = 2 * i + 1;
    if (2 * i + 2 < n) x.child[1] = 2 * i + 2;
    x.bag = {static_cast<Vertex>(i)};
    td.nodes_.emplace(i, std::move(x));
  }
  td.root_ = 0;
  td.next_id_ = n;
  return td;
}

AnnotatedTD AnnotatedTD::from_plain(const PlainTD& in, const DynGraph& g, NodeId first_id) {
  PlainTD p = binarize(in);
  AnnotatedTD td;
  td.next_id_ = first_id;
  std::vector<NodeId> ids(p.size());
  for (int i = 0; i < p.size(); ++i) ids[i] = td.next_id_++;
  auto ch = p.children();
  for (int i = 0; i < p.size(); ++i) {
    TDNode x;
    x.id = ids[i];
    x.parent = p.parent[i] < 0 ? NIL : ids[p.parent[i]];
    for (std::size_t j = 0; j < ch[i].size(); ++j) x.child[j] = ids[ch[i][j]];
    x.bag = p.bags[i];
    x.edges = edges_between(g, x.bag, p.parent[i] < 0 ? nullptr : &p.bags[p.parent[i]]);
    td.nodes_.emplace(x.id, std::move(x));
  }
  td.root_ = ids[p.root];
  return td;
}

const TDNode& AnnotatedTD::node(NodeId t) const {
  auto it = nodes_.find(t);
  if (it == nodes_.end()) throw std::out_of_range("unknown node " + std::to_string(t));
  return it->second;
}

std::vector<NodeId> AnnotatedTD::children(NodeId t) const {
  const auto& x = node(t);
  std::vector<NodeId> r;
  for (NodeId c : x.child)
    if (c != NIL) r.push_back(c);
  return r;
}

VertexSet AnnotatedTD::adhesion(NodeId t) const {
  const auto& x = node(t);
  if (x.parent == NIL) return {};
  return set_intersection(x.bag, node(x.parent).bag);
}

std::vector<NodeId> AnnotatedTD::subtree(NodeId t) const {
  std::vector<NodeId> out, stack{t};
  while (!stack.empty()) {
    NodeId x = stack.back();
    stack.pop_back();
    out.push_back(x);
    const auto& nx = node(x);
    for (int i = 1; i >= 0; --i)
      if (nx.child[i] != NIL) stack.push_back(nx.child[i]);
  }
  return out;
}

VertexSet AnnotatedTD::component_vertices(NodeId t) const {
  VertexSet all;
  for (NodeId x : subtree(t)) all.insert(all.end(), node(x).bag.begin(), node(x).bag.end());
  normalize(all);
  return set_difference(all, adhesion(t));
}

int AnnotatedTD::depth(NodeId t) const {
  int d = 0;
  for (NodeId x = node(t).parent; x != NIL; x = node(x).parent) ++d;
  return d;
}

int AnnotatedTD::width() const {
  int w = -1;
  for (auto& [id, x] : nodes_) w = std::max(w, static_cast<int>(x.bag.size()) - 1);
  return w;
}

int AnnotatedTD::height(NodeId t) const {
  // iterative post-order
  std::vector<NodeId> order = subtree(t);
  std::unordered_map<NodeId, int> h;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    int best = 0;
    for (NodeId c : node(*it).child)
      if (c != NIL) best = std::max(best, h[c]);
    h[*it] = best + 1;
  }
  return h[t];
}

int AnnotatedTD::height() const { return root_ == NIL ? 0 : height(root_); }

std::size_t AnnotatedTD::subtree_size(NodeId t) const { return subtree(t).size(); }

std::vector<NodeId> appendices(const AnnotatedTD& td, const std::vector<NodeId>& prefix) {
  std::unordered_set<NodeId> in(prefix.begin(), prefix.end());
  std::vector<NodeId> r;
  for (NodeId t : prefix)
    for (NodeId c : td.node(t).child)
      if (c != NIL && !in.count(c)) r.push_back(c);
  return r;
}

bool is_prefix(const AnnotatedTD& td, const std::vector<NodeId>& prefix) {
  std::unordered_set<NodeId> in(prefix.begin(), prefix.end());
  if (!in.count(td.root())) return false;
  for (NodeId t : prefix) {
    if (!td.has_node(t)) return false;
    NodeId p = td.node(t).parent;
    if (p != NIL && !in.count(p)) return false;
  }
  return true;
}

ApplyResult AnnotatedTD::apply(const PrefixUpdate& u) {
  std::unordered_set<NodeId> old(u.old_prefix.begin(), u.old_prefix.end());
  if (!is_prefix(*this, u.old_prefix)) throw std::invalid_argument("apply: not a prefix");
  std::unordered_map<NodeId, const NewNode*> fresh;
  NodeId new_root = NIL;
  for (auto& x : u.nodes) {
    if (nodes_.count(x.id) && !old.count(x.id)) throw std::invalid_argument("apply: id collision");
    fresh[x.id] = &x;
    if (x.parent == NIL) {
      if (new_root != NIL) throw std::invalid_argument("apply: two roots");
      new_root = x.id;
    }
  }
  if (new_root == NIL) throw std::invalid_argument("apply: no root");
  for (auto& x : u.nodes)
    if (x.parent != NIL && !fresh.count(x.parent)) throw std::invalid_argument("apply: parent outside prefix");
  auto apps = appendices(*this, u.old_prefix);
  std::unordered_set<NodeId> app_set(apps.begin(), apps.end());
  std::unordered_set<NodeId> kept;
  for (auto& [a, p] : u.attach) {
    if (!app_set.count(a)) throw std::invalid_argument("apply: attach of non-appendix");
    if (!fresh.count(p)) throw std::invalid_argument("apply: attach target outside prefix");
    if (!kept.insert(a).second) throw std::invalid_argument("apply: appendix attached twice");
  }
  ApplyResult res;
  for (NodeId a : apps)
    if (!kept.count(a))
      for (NodeId x : subtree(a)) {
        res.removed.push_back(x);
        nodes_.erase(x);
      }
  for (NodeId t : u.old_prefix) {
    res.removed.push_back(t);
    nodes_.erase(t);
  }
  for (auto& x : u.nodes) {
    TDNode n;
    n.id = x.id;
    n.parent = x.parent;
    n.bag = x.bag;
    n.edges = x.edges;
    std::sort(n.edges.begin(), n.edges.end());
    nodes_[x.id] = std::move(n);
    next_id_ = std::max(next_id_, x.id + 1);
  }
  auto add_child = [&](NodeId p, NodeId c) {
    auto& np = nodes_.at(p);
    if (np.child[0] == NIL)
      np.child[0] = c;
    else if (np.child[1] == NIL)
      np.child[1] = c;
    else
      throw std::invalid_argument("apply: non-binary result");
  };
  for (auto& x : u.nodes)
    if (x.parent != NIL) add_child(x.parent, x.id);
  for (auto& [a, p] : u.attach) {
    nodes_.at(a).parent = p;
    add_child(p, a);
  }
  root_ = new_root;
  return res;
}

std::string AnnotatedTD::validate(const DynGraph& g) const {
  std::ostringstream err;
  if (root_ == NIL || !nodes_.count(root_)) return "no root";
  if (node(root_).parent != NIL) return "root has a parent";
  // tree shape
  std::size_t reached = 0;
  std::vector<NodeId> stack{root_};
  while (!stack.empty()) {
    NodeId t = stack.back();
    stack.pop_back();
    ++reached;
    const auto& x = node(t);
    if (x.child[0] == NIL && x.child[1] != NIL) return "child slots out of order at " + std::to_string(t);
    for (NodeId c : x.child)
      if (c != NIL) {
        if (!nodes_.count(c)) return "dangling child " + std::to_string(c);
        if (node(c).parent != t) return "parent link mismatch at " + std::to_string(c);
        stack.push_back(c);
      }
    if (reached > nodes_.size()) return "cycle";
  }
  if (reached != nodes_.size()) return "unreachable nodes";
  // bags and the vertex condition
  std::vector<int> tops(g.n(), 0);
  for (auto& [t, x] : nodes_) {
    if (!std::is_sorted(x.bag.begin(), x.bag.end()) ||
        std::adjacent_find(x.bag.begin(), x.bag.end()) != x.bag.end())
      return "bag not a sorted set at " + std::to_string(t);
    const VertexSet* pb = x.parent == NIL ? nullptr : &node(x.parent).bag;
    for (Vertex v : x.bag) {
      if (v >= g.n()) return "vertex out of range in bag " + std::to_string(t);
      if (!pb || !contains(*pb, v)) ++tops[v];
    }
  }
  for (Vertex v = 0; v < g.n(); ++v)
    if (tops[v] != 1) {
      err << "vertex condition: vertex " << v << " has " << tops[v] << " top occurrences";
      return err.str();
    }
  // edges function
  std::size_t stored = 0;
  for (auto& [t, x] : nodes_) {
    const VertexSet* pb = x.parent == NIL ? nullptr : &node(x.parent).bag;
    for (auto [u, v] : x.edges) {
      if (u >= v) return "edge not normalised at " + std::to_string(t);
      if (!contains(x.bag, u) || !contains(x.bag, v)) {
        err << "edge " << u << "-" << v << " outside bag " << t;
        return err.str();
      }
      if (pb && contains(*pb, u) && contains(*pb, v)) {
        err << "edge " << u << "-" << v << " not at shallowest node (" << t << ")";
        return err.str();
      }
      if (!g.has_edge(u, v)) {
        err << "edge " << u << "-" << v << " not in graph";
        return err.str();
      }
      ++stored;
    }
  }
  // each graph edge is stored at most once by the shallowest rule; count them
  if (stored != g.num_edges()) {
    err << "edge uncovered: stored " << stored << " of " << g.num_edges();
    return err.str();
  }
  return "";
}

void AnnotatedTD::dump_pace(std::ostream& os, std::size_t n) const {
  // canonical order: children by smallest vertex in subtree
  std::unordered_map<NodeId, Vertex> minv;
  auto order = preorder();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const auto& x = node(*it);
    Vertex m = x.bag.empty() ? ~Vertex{0} : x.bag.front();
    for (NodeId c : x.child)
      if (c != NIL) m = std::min(m, minv[c]);
    minv[*it] = m;
  }
  std::vector<NodeId> seq;
  std::unordered_map<NodeId, std::size_t> num;
  std::vector<NodeId> stack{root_};
  while (!stack.empty()) {
    NodeId t = stack.back();
    stack.pop_back();
    num[t] = seq.size() + 1;
    seq.push_back(t);
    auto ch = children(t);
    std::stable_sort(ch.begin(), ch.end(), [&](NodeId a, NodeId b) { return minv[a] < minv[b]; });
    for (auto it = ch.rbegin(); it != ch.rend(); ++it) stack.push_back(*it);
  }
  os << "s td " << seq.size() << ' ' << (width() + 1) << ' ' << n << '\n';
  for (NodeId t : seq) {
    os << "b " << num[t];
    for (Vertex v : node(t).bag) os << ' ' << (v + 1);
    os << '\n';
  }
  for (NodeId t : seq)
    if (node(t).parent != NIL) os << num[node(t).parent] << ' ' << num[t] << '\n';
  for (NodeId t : seq)
    for (auto [u, v] : node(t).edges) os << "e " << num[t] << ' ' << (u + 1) << ' ' << (v + 1) << '\n';
}

bool AnnotatedTD::same_as(const AnnotatedTD& o) const {
  if (root_ != o.root_ || nodes_.size() != o.nodes_.size()) return false;
  for (auto& [t, x] : nodes_) {
    auto it = o.nodes_.find(t);
    if (it == o.nodes_.end()) return false;
    const auto& y = it->second;
    if (x.parent != y.parent || x.child[0] != y.child[0] || x.child[1] != y.child[1] || x.bag != y.bag ||
        x.edges != y.edges)
      return false;
  }
  return true;
}

std::vector<Edge> edges_between(const DynGraph& g, const VertexSet& bag, const VertexSet* parent_bag) {
  std::vector<Edge> r;
  for (std::size_t i = 0; i < bag.size(); ++i)
    for (std::size_t j = i + 1; j < bag.size(); ++j) {
      if (parent_bag && contains(*parent_bag, bag[i]) && contains(*parent_bag, bag[j])) continue;
      if (g.has_edge(bag[i], bag[j])) r.emplace_back(bag[i], bag[j]);
    }
  return r;
}

PrefixUpdate strengthen(const AnnotatedTD& td, const DynGraph& g, const WeakPrefixUpdate& w) {
  PrefixUpdate u;
  u.old_prefix = w.old_prefix;
  u.nodes = w.nodes;
  std::unordered_map<NodeId, NodeId> target(w.attach.begin(), w.attach.end());
  for (NodeId a : appendices(td, w.old_prefix)) {
    u.old_prefix.push_back(a);
    auto it = target.find(a);
    if (it == target.end()) continue;  // dropped with its subtree
    NewNode copy;
    copy.id = td.fresh_id();
    copy.parent = it->second;
    copy.bag = td.bag(a);
    u.nodes.push_back(std::move(copy));
    for (NodeId c : td.children(a)) u.attach.emplace_back(c, u.nodes.back().id);
  }
  std::unordered_map<NodeId, std::size_t> pos;
  for (std::size_t i = 0; i < u.nodes.size(); ++i) pos[u.nodes[i].id] = i;
  for (auto& x : u.nodes) {
    const VertexSet* pb = nullptr;
    if (x.parent != NIL) pb = &u.nodes[pos.at(x.parent)].bag;
    x.edges = edges_between(g, x.bag, pb);
  }
  return u;
}

PrefixUpdate edge_update(const AnnotatedTD& td, NodeId t, Edge e, bool add) {
  std::vector<NodeId> path;
  for (NodeId x = t; x != NIL; x = td.parent(x)) path.push_back(x);
  std::reverse(path.begin(), path.end());
  PrefixUpdate u;
  u.old_prefix = path;
  std::vector<NodeId> ids(path.size());
  for (std::size_t i = 0; i < path.size(); ++i) {
    const auto& x = td.node(path[i]);
    NewNode n;
    n.id = ids[i] = td.fresh_id();
    n.parent = i == 0 ? NIL : ids[i - 1];
    n.bag = x.bag;
    n.edges = x.edges;
    if (i + 1 == path.size()) {
      auto it = std::lower_bound(n.edges.begin(), n.edges.end(), e);
      if (add) {
        if (it == n.edges.end() || *it != e) n.edges.insert(it, e);
      } else if (it != n.edges.end() && *it == e) {
        n.edges.erase(it);
      }
    }
    u.nodes.push_back(std::move(n));
  }
  // keep child order: the path child goes where it was
  for (std::size_t i = 0; i < path.size(); ++i)
    for (NodeId c : td.node(path[i]).child)
      if (c != NIL && (i + 1 == path.size() || c != path[i + 1])) u.attach.emplace_back(c, ids[i]);
  return u;
}

PrefixUpdate replace_all(const AnnotatedTD& td, const PlainTD& fresh, const DynGraph& g) {
  PrefixUpdate u;
  u.old_prefix = td.preorder();
  AnnotatedTD tmp = AnnotatedTD::from_plain(fresh, g, td.peek_next_id());
  for (NodeId t : tmp.preorder()) {
    const auto& x = tmp.node(t);
    u.nodes.push_back({x.id, x.parent, x.bag, x.edges});
  }
  // reserve the ids used
  while (td.peek_next_id() < tmp.peek_next_id()) td.fresh_id();
  return u;
}

void write_update(std::ostream& os, const PrefixUpdate& u) {
  os << "u " << u.old_prefix.size() << ' ' << u.nodes.size() << '\n';
  os << 'o';
  for (NodeId t : u.old_prefix) os << ' ' << t;
  os << '\n';
  for (auto& x : u.nodes) {
    os << "n " << x.id << ' ';
    if (x.parent == NIL)
      os << '-';
    else
      os << x.parent;
    os << ' ' << x.bag.size();
    for (Vertex v : x.bag) os << ' ' << v;
    os << ' ' << x.edges.size();
    for (auto [a, b] : x.edges) os << ' ' << a << ' ' << b;
    os << '\n';
  }
  for (auto [a, p] : u.attach) os << "a " << a << ' ' << p << '\n';
}

bool read_update(std::istream& is, PrefixUpdate& u) {
  u = PrefixUpdate{};
  std::string tag;
  std::size_t np, nn;
  if (!(is >> tag)) return false;
  if (tag != "u" || !(is >> np >> nn)) throw std::runtime_error("update log: expected header");
  is >> tag;
  if (tag != "o") throw std::runtime_error("update log: expected old prefix");
  u.old_prefix.resize(np);
  for (auto& t : u.old_prefix) is >> t;
  for (std::size_t i = 0; i < nn; ++i) {
    NewNode x;
    std::string par;
    std::size_t b, e;
    is >> tag >> x.id >> par >> b;
    if (tag != "n") throw std::runtime_error("update log: expected node record");
    x.parent = par == "-" ? NIL : std::stoull(par);
    x.bag.resize(b);
    for (auto& v : x.bag) is >> v;
    is >> e;
    x.edges.resize(e);
    for (auto& [p, q] : x.edges) is >> p >> q;
    u.nodes.push_back(std::move(x));
  }
  if (!is) throw std::runtime_error("update log: truncated");
  while (is >> std::ws && is.peek() == 'a') {
    NodeId a, p;
    if (!(is >> tag >> a >> p)) throw std::runtime_error("update log: truncated");
    u.attach.emplace_back(a, p);
  }
  if (is.eof()) is.clear(std::ios::eofbit);
  return true;
}

}  // namespace dtw
