#pragma once

#include <cstddef>
#include <vector>

namespace gnpr {

/// Cluster labels 0..cluster_count-1 for N items.
struct Partition {
  std::vector<int> labels;
  int cluster_count = 0;

  std::size_t size() const { return labels.size(); }
  bool operator==(const Partition&) const = default;
};

/// Relabels clusters in order of first appearance (item 0 gets label 0) and
/// recomputes cluster_count. Two partitions equal up to relabeling have the
/// same canonical form.
Partition canonical(const std::vector<int>& labels);

/// Number of items per label, indexed by label.
std::vector<std::size_t> cluster_sizes(const Partition& p);

}  // namespace gnpr
