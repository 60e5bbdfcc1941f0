#pragma once
// Height thresholds and the unbalanced-prefix search.

#include <cstdint>
#include <functional>

#include "dtw/td.hpp"

namespace dtw {

struct Schedule {
  long long N = 0, c = 0;
  int a = 1;
  bool degenerate = true;  // never unbalanced
  std::vector<long long> h, n;  // 1-based: h[1..a], n[1..a]; index 0 unused

  long long h1() const { return degenerate ? INT64_MAX : h[1]; }
};

// a = least integer with c^{a(a+1)/2} >= N; h_i = c^{a+2-i}; n_i = c^{(a-i+1)(a-i+2)/2}.
// Powers saturate at 2^62.
Schedule thresholds(long long N, long long c);

// c = 20·C·log2(n), at least 2.
long long height_c(std::size_t n, double C);

// Union of deepest paths, recursing into appendices that are (j+1)-deep and
// (j+1)-small. `height`/`size` answer for subtrees of td.
std::vector<NodeId> get_unbalanced(const AnnotatedTD& td, const Schedule& s,
                                   const std::function<int(NodeId)>& height,
                                   const std::function<long long(NodeId)>& size);

}  // namespace dtw
