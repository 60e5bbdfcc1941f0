#include "dtw/dyntw.hpp"

#include <cmath>

namespace dtw {

PlainTD fresh_decomposition(const DynGraph& g, int k) {
  VertexSet all(g.n());
  for (Vertex v = 0; v < g.n(); ++v) all[v] = v;
  if (all.empty()) {
    PlainTD t;
    t.bags.push_back({});
    t.parent.push_back(-1);
    t.root = 0;
    return t;
  }
  LabeledGraph lg = induced(g, all);
  auto d = decompose_within(lg, 2 * k + 1, 50'000);
  PlainTD t = d ? *d : td_from_order(lg, min_fill_order(lg.g));
  return balance_decomposition(binarize(t));
}

DynTW::DynTW(std::size_t n, DynConfig cfg) : cfg_(cfg), g_(n), td_(AnnotatedTD::complete_binary(n)) {
  if (cfg_.c0 <= 0) {
    long long b = ell() + 1;
    cfg_.c0 = b * b * b * b;
  }
  height_.init(td_);
  size_.init(td_);
  cmp_.init(td_);
  pat_.init(td_);
  top_.init(td_);
}

void DynTW::apply(const PrefixUpdate& u) {
  auto res = td_.apply(u);
  height_.update(td_, u, res.removed);
  size_.update(td_, u, res.removed);
  cmp_.update(td_, u, res.removed);
  pat_.update(td_, u, res.removed);
  top_.update(td_, u, res.removed);
  for (auto& r : user_) r->update(td_, u, res.removed);
  if (log_) log_->push_back(u);
}

void DynTW::rebuild() {
  ++stats_.rebuilds;
  apply(replace_all(td_, fresh_decomposition(g_, cfg_.k), g_));
}

std::string DynTW::check() const {
  std::string e = td_.validate(g_);
  if (!e.empty()) return e;
  if (td_.width() > ell()) return "width " + std::to_string(td_.width()) + " above " + std::to_string(ell());
  return "";
}

bool DynTW::refine_prefix(const std::vector<NodeId>& prefix) {
  ++stats_.refines;
  PatternSource ps(td_, &pat_);
  RefineAux aux;
  aux.pat = &ps;
  aux.height = [this](NodeId t) { return height_.state(t); };
  aux.cmp_size = [this](NodeId t) { return cmp_.state(t); };
  RefineConfig rc;
  rc.k = cfg_.k;
  rc.ell = ell();
  rc.mode = cfg_.closure;
  rc.check = cfg_.check;
  for (int i = 0; i <= cfg_.c_doublings; ++i) {
    rc.c = cfg_.c0 << i;
    RefineResult rr = refine(td_, g_, prefix, rc, aux);
    if (rr.update) {
      apply(*rr.update);
      if (cfg_.validate) {
        std::string e = check();
        if (!e.empty()) {
          stats_.last_error = "refine output invalid: " + e;
          ++stats_.refine_failures;
          rebuild();
          return false;
        }
      }
      return true;
    }
    stats_.last_error = rr.error;
    if (rr.error != "no closure") break;
  }
  ++stats_.refine_failures;
  rebuild();
  return false;
}

std::vector<PrefixUpdate> DynTW::insert_edge(Vertex u, Vertex v) {
  if (u == v) throw std::invalid_argument("self-loop");
  if (!g_.has_vertex(u) || !g_.has_vertex(v)) throw std::out_of_range("vertex out of range");
  std::vector<PrefixUpdate> log;
  if (g_.has_edge(u, v)) return log;
  log_ = &log;
  ++stats_.inserts;
  g_.add_edge(u, v);
  const Edge e = make_edge(u, v);
  NodeId tu = top_.top(u), tv = top_.top(v);
  if (contains(td_.bag(tu), v)) {
    apply(edge_update(td_, tu, e, true));
  } else if (contains(td_.bag(tv), u)) {
    apply(edge_update(td_, tv, e, true));
  } else {
    int du = td_.depth(tu), dv = td_.depth(tv);
    VertexSet add;
    if (cfg_.symmetric)
      add = {std::min(u, v), std::max(u, v)};
    else
      add = {du > dv ? u : dv > du ? v : std::min(u, v)};
    std::vector<NodeId> path;
    std::unordered_set<NodeId> seen;
    for (NodeId s : {tu, tv}) {
      std::vector<NodeId> p;
      for (NodeId x = s; x != NIL && !seen.count(x); x = td_.parent(x)) p.push_back(x);
      for (auto it = p.rbegin(); it != p.rend(); ++it) {
        seen.insert(*it);
        path.push_back(*it);
      }
    }
    WeakPrefixUpdate w;
    w.old_prefix = path;
    std::unordered_map<NodeId, NodeId> nid;
    for (NodeId t : path) nid[t] = td_.fresh_id();
    for (NodeId t : path) {
      NewNode nn;
      nn.id = nid[t];
      NodeId p = td_.parent(t);
      nn.parent = p == NIL ? NIL : nid.at(p);
      nn.bag = set_union(td_.bag(t), add);
      w.nodes.push_back(std::move(nn));
    }
    for (NodeId a : appendices(td_, path)) w.attach.push_back({a, nid.at(td_.parent(a))});
    // g already holds uv, so the edge lands at the shallowest node containing both
    apply(strengthen(td_, g_, w));
    std::vector<NodeId> prefix;
    for (NodeId t : path) prefix.push_back(nid[t]);
    if (refine_prefix(prefix)) improve_height();
  }
  log_ = nullptr;
  return log;
}

std::vector<PrefixUpdate> DynTW::delete_edge(Vertex u, Vertex v) {
  if (!g_.has_vertex(u) || !g_.has_vertex(v) || !g_.has_edge(u, v)) throw std::invalid_argument("edge absent");
  std::vector<PrefixUpdate> log;
  log_ = &log;
  ++stats_.deletes;
  NodeId tu = top_.top(u), tv = top_.top(v);
  NodeId t = td_.depth(tu) >= td_.depth(tv) ? tu : tv;
  g_.remove_edge(u, v);
  apply(edge_update(td_, t, make_edge(u, v), false));
  log_ = nullptr;
  return log;
}

Schedule DynTW::schedule() const {
  long long c = cfg_.c_height > 0 ? cfg_.c_height : height_c(g_.n(), cfg_.C);
  return thresholds(static_cast<long long>(td_.size()), c);
}

double DynTW::size_bound() const {
  double n = std::max<double>(2.0, static_cast<double>(g_.n()));
  return cfg_.B_impl * n * std::log2(n);
}

void DynTW::improve_height() {
  ++stats_.height_calls;
  BigInt phi_start, phi_prev;
  if (cfg_.track_potential) phi_start = phi_prev = potential(td_, ell());
  auto round_done = [&] {
    if (!cfg_.track_potential) return;
    BigInt phi = potential(td_, ell());
    ++stats_.phi_rounds;
    if (phi >= phi_prev) ++stats_.phi_round_violations;
    phi_prev = phi;
  };
  for (int round = 0;; ++round) {
    if (static_cast<double>(td_.size()) >= size_bound()) {
      ++stats_.shrinks;
      rebuild();
      round_done();
      continue;
    }
    Schedule s = schedule();
    if (s.degenerate || height_.state(td_.root()) <= s.h1()) break;
    if (round >= cfg_.max_height_rounds) {
      ++stats_.height_rebuilds;
      rebuild();
      round_done();
      break;
    }
    ++stats_.height_rounds;
    auto W = get_unbalanced(
        td_, s, [this](NodeId t) { return height_.state(t); }, [this](NodeId t) { return size_.state(t); });
    refine_prefix(W);
    round_done();
  }
  if (cfg_.track_potential && potential(td_, ell()) > phi_start) ++stats_.phi_call_violations;
  Schedule s = schedule();
  if (!s.degenerate && height_.state(td_.root()) > s.h1()) ++stats_.height_violations;
  if (static_cast<double>(td_.size()) >= size_bound()) ++stats_.size_violations;
}

}  // namespace dtw
