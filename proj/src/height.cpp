#include "dtw/height.hpp"

#include <cmath>

namespace dtw {

namespace {

constexpr long long CAP = 1LL << 62;

long long sat_pow(long long c, long long e) {
  long long r = 1;
  for (long long i = 0; i < e; ++i) {
    if (r > CAP / c) return CAP;
    r *= c;
  }
  return r;
}

}  // namespace

Schedule thresholds(long long N, long long c) {
  Schedule s;
  s.N = N;
  s.c = c;
  if (c <= 1 || c >= N) return s;
  int a = 1;
  while (sat_pow(c, static_cast<long long>(a) * (a + 1) / 2) < N) ++a;
  s.a = a;
  s.degenerate = false;
  s.h.assign(a + 1, 0);
  s.n.assign(a + 1, 0);
  for (int i = 1; i <= a; ++i) {
    s.h[i] = sat_pow(c, a + 2 - i);
    s.n[i] = sat_pow(c, static_cast<long long>(a - i + 1) * (a - i + 2) / 2);
  }
  return s;
}

long long height_c(std::size_t n, double C) {
  double lg = n > 1 ? std::log2(static_cast<double>(n)) : 1.0;
  return std::max<long long>(2, static_cast<long long>(std::ceil(20.0 * C * lg)));
}

std::vector<NodeId> get_unbalanced(const AnnotatedTD& td, const Schedule& s,
                                   const std::function<int(NodeId)>& height,
                                   const std::function<long long(NodeId)>& size) {
  std::vector<NodeId> W;
  if (s.degenerate) return W;
  std::vector<std::pair<NodeId, int>> todo{{td.root(), 1}};
  while (!todo.empty()) {
    auto [t, j] = todo.back();
    todo.pop_back();
    // deepest path from t
    std::vector<NodeId> path;
    for (NodeId x = t; x != NIL;) {
      path.push_back(x);
      const auto& nd = td.node(x);
      NodeId next = NIL;
      int best = 0;
      for (NodeId c : nd.child)
        if (c != NIL && height(c) > best) best = height(c), next = c;
      x = next;
    }
    W.insert(W.end(), path.begin(), path.end());
    if (j + 1 > s.a) continue;
    for (std::size_t i = 0; i < path.size(); ++i)
      for (NodeId c : td.node(path[i]).child) {
        if (c == NIL || (i + 1 < path.size() && c == path[i + 1])) continue;
        if (height(c) >= s.h[j + 1] && size(c) <= s.n[j + 1]) todo.push_back({c, j + 1});
      }
  }
  return W;
}

}  // namespace dtw
