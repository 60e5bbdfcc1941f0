#include "dtw/wrapper.hpp"

#include <algorithm>

namespace dtw {

namespace {

DynConfig bump(DynConfig c) {
  ++c.k;
  c.c0 = 0;
  return c;
}

}  // namespace

StrongDynTW::StrongDynTW(std::size_t n, DynConfig cfg) : dk_(n, cfg), dk1_(n, bump(cfg)) {
  bk_ = &dk1_.register_automaton(BkAutomaton{cfg.k});
}

bool StrongDynTW::accepted_by_bk() const { return bk_->automaton().accepting(bk_->state(dk1_.td().root())); }

bool StrongDynTW::has_edge(Vertex u, Vertex v) const {
  return dk_.graph().has_edge(u, v) || in_buffer_.count(make_edge(u, v));
}

std::optional<std::vector<PrefixUpdate>> StrongDynTW::try_insert(Vertex u, Vertex v) {
  if (dk_.graph().has_edge(u, v)) return std::vector<PrefixUpdate>{};
  dk1_.insert_edge(u, v);
  if (!accepted_by_bk()) {
    dk1_.delete_edge(u, v);
    return std::nullopt;
  }
  return dk_.insert_edge(u, v);
}

void StrongDynTW::retry_front(std::vector<PrefixUpdate>& log) {
  while (!buffer_.empty()) {
    Edge e = buffer_.front();
    ++retries_;
    auto r = try_insert(e.first, e.second);
    if (!r) {
      ++failed_retries_;
      return;
    }
    log.insert(log.end(), r->begin(), r->end());
    buffer_.pop_front();
    in_buffer_.erase(e);
  }
}

std::vector<PrefixUpdate> StrongDynTW::strong_insert(Vertex u, Vertex v) {
  Edge e = make_edge(u, v);
  if (has_edge(u, v)) return {};
  if (buffer_.empty())
    if (auto r = try_insert(u, v)) return std::move(*r);
  buffer_.push_back(e);
  in_buffer_.insert(e);
  return {};
}

std::vector<PrefixUpdate> StrongDynTW::strong_delete(Vertex u, Vertex v) {
  Edge e = make_edge(u, v);
  std::vector<PrefixUpdate> log;
  if (in_buffer_.count(e)) {
    in_buffer_.erase(e);
    bool front = buffer_.front() == e;
    buffer_.erase(std::find(buffer_.begin(), buffer_.end(), e));
    if (front) retry_front(log);
    return log;
  }
  if (!dk_.graph().has_edge(u, v)) return log;
  log = dk_.delete_edge(u, v);
  dk1_.delete_edge(u, v);
  retry_front(log);
  return log;
}

}  // namespace dtw
