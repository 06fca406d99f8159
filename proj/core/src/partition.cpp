#include "gnpr/partition.hpp"

#include <map>

#include "gnpr/error.hpp"

namespace gnpr {

Partition canonical(const std::vector<int>& labels) {
  std::map<int, int> remap;
  Partition out;
  out.labels.reserve(labels.size());
  for (int label : labels) {
    auto [it, inserted] = remap.try_emplace(label, static_cast<int>(remap.size()));
    out.labels.push_back(it->second);
  }
  out.cluster_count = static_cast<int>(remap.size());
  return out;
}

std::vector<std::size_t> cluster_sizes(const Partition& p) {
  std::vector<std::size_t> sizes(static_cast<std::size_t>(std::max(p.cluster_count, 0)), 0);
  for (int label : p.labels) {
    if (label < 0 || label >= p.cluster_count)
      throw ValidationError("partition label " + std::to_string(label) + " out of range");
    ++sizes[static_cast<std::size_t>(label)];
  }
  return sizes;
}

}  // namespace gnpr
