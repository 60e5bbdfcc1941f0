#pragma once
// Refinement: rebuild a prefix into T^X + green trees + component subtrees.

#include <boost/multiprecision/cpp_int.hpp>
#include <functional>
#include <optional>
#include <string>

#include "dtw/closure.hpp"

namespace dtw {

using BigInt = boost::multiprecision::cpp_int;

// Σ_t (53(ℓ+4))^{|bag(t)|} · height(t)
BigInt potential(const AnnotatedTD& td, int ell);

struct GreenTree {
  std::vector<int> parent;       // -1 at the root
  std::vector<long long> label;  // leaf label, -1 for inner nodes
  std::vector<int> leaf_of;      // node carrying label i
  int root = -1;

  int size() const { return static_cast<int>(parent.size()); }
  std::vector<long long> lheight() const;
  long long sum_lheight() const;
  int height() const;  // nodes on a longest root-leaf path
};

GreenTree green_tree(const std::vector<long long>& labels);

// Recursive separator balancing; binary output of width <= 3w+2.
PlainTD balance_decomposition(const PlainTD& td);

// Every subset of every bag becomes the bag of some leaf.
PlainTD all_subsets_expand(const PlainTD& td);

// Only the given subsets get leaves; leaf_of[i] is the leaf whose bag is
// needed[i]. nullopt if some set is in no bag.
std::optional<PlainTD> expand_for(const PlainTD& td, const std::vector<VertexSet>& needed, std::vector<int>& leaf_of);

enum class ClosureMode { prefix, exact };

struct RefineConfig {
  int k = 1;
  int ell = 11;
  long long c = 20736;
  ClosureMode mode = ClosureMode::prefix;
  bool check = true;  // per-node bag-size and green-tree sum assertions
};

struct RefineAux {
  PatternSource* pat = nullptr;
  std::function<int(NodeId)> height;
  std::function<long long(NodeId)> cmp_size;
};

struct RefineStats {
  std::size_t closure_size = 0;
  std::size_t explored = 0;
  std::size_t components = 0;
  std::size_t blocked = 0;
  std::size_t interfaces = 0;
  std::size_t new_nodes = 0;
  PrefixClosureStats closure;
};

struct RefineResult {
  std::optional<PrefixUpdate> update;
  std::string error;
  RefineStats stats;
};

RefineResult refine(const AnnotatedTD& td, const DynGraph& g, const std::vector<NodeId>& prefix,
                    const RefineConfig& cfg, RefineAux& aux);

}  // namespace dtw
