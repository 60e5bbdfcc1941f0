#pragma once
// Treewidth-detecting wrapper: a structure for k+1 with an exact "tw <= k"
// automaton on its decomposition decides each insertion; rejected insertions
// are either reported (try_insert) or postponed in a FIFO buffer (strong mode).

#include <deque>
#include <optional>
#include <set>

#include "dtw/bk.hpp"
#include "dtw/dyntw.hpp"

namespace dtw {

class StrongDynTW {
 public:
  StrongDynTW(std::size_t n, DynConfig cfg = {});

  // nullopt: treewidth would exceed k (nothing changed).
  std::optional<std::vector<PrefixUpdate>> try_insert(Vertex u, Vertex v);

  // Logical-graph updates; the graph may temporarily have treewidth > k.
  // Return the prefix updates applied to main().
  std::vector<PrefixUpdate> strong_insert(Vertex u, Vertex v);
  std::vector<PrefixUpdate> strong_delete(Vertex u, Vertex v);

  bool tw_ok() const { return buffer_.empty(); }
  // The structure for k; describes the logical graph whenever tw_ok().
  DynTW& main() { return dk_; }
  const DynTW& main() const { return dk_; }
  const DynTW& relaxed() const { return dk1_; }
  bool has_edge(Vertex u, Vertex v) const;
  std::size_t buffered() const { return buffer_.size(); }
  long long retries() const { return retries_; }
  long long failed_retries() const { return failed_retries_; }

 private:
  bool accepted_by_bk() const;
  void retry_front(std::vector<PrefixUpdate>& log);

  DynTW dk_, dk1_;
  AutomatonRun<BkAutomaton>* bk_ = nullptr;
  std::deque<Edge> buffer_;
  std::set<Edge> in_buffer_;
  long long retries_ = 0, failed_retries_ = 0;
};

}  // namespace dtw
