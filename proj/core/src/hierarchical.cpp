#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "gnpr/cluster.hpp"
#include "gnpr/error.hpp"

namespace gnpr {

std::string_view to_string(Linkage linkage) {
  return linkage == Linkage::average ? "average" : "ward";
}

Dendrogram agglomerate(const DistanceMatrix& d, Linkage linkage) {
  d.validate();
  const std::size_t n = d.size();
  if (n == 0) throw ValidationError("cannot cluster an empty distance matrix");

  std::vector<double> work(d.values());
  if (linkage == Linkage::ward)
    for (double& v : work) v *= v;
  auto at = [&](std::size_t i, std::size_t j) -> double& { return work[i * n + j]; };

  std::vector<bool> active(n, true);
  std::vector<std::size_t> size(n, 1);
  std::vector<std::size_t> id(n);
  std::iota(id.begin(), id.end(), std::size_t{0});

  Dendrogram tree;
  tree.leaf_count = n;
  tree.merges.reserve(n - 1);
  for (std::size_t step = 0; step + 1 < n; ++step) {
    std::size_t bi = 0, bj = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
      if (!active[i]) continue;
      for (std::size_t j = i + 1; j < n; ++j) {
        if (active[j] && at(i, j) < best) {
          best = at(i, j);
          bi = i;
          bj = j;
        }
      }
    }

    const double ni = static_cast<double>(size[bi]);
    const double nj = static_cast<double>(size[bj]);
    for (std::size_t k = 0; k < n; ++k) {
      if (!active[k] || k == bi || k == bj) continue;
      double updated;
      if (linkage == Linkage::average) {
        updated = (ni * at(bi, k) + nj * at(bj, k)) / (ni + nj);
      } else {
        const double nk = static_cast<double>(size[k]);
        updated = ((ni + nk) * at(bi, k) + (nj + nk) * at(bj, k) - nk * best) / (ni + nj + nk);
      }
      at(bi, k) = updated;
      at(k, bi) = updated;
    }

    Merge merge;
    merge.first = std::min(id[bi], id[bj]);
    merge.second = std::max(id[bi], id[bj]);
    merge.height = linkage == Linkage::ward ? std::sqrt(std::max(best, 0.0)) : best;
    merge.size = size[bi] + size[bj];
    tree.merges.push_back(merge);

    active[bj] = false;
    size[bi] = merge.size;
    id[bi] = n + step;
  }
  return tree;
}

Partition cut(const Dendrogram& tree, std::size_t q) {
  const std::size_t n = tree.leaf_count;
  if (q < 1 || q > n)
    throw ValidationError("cluster count " + std::to_string(q) + " must lie in [1, " +
                          std::to_string(n) + "]");
  // parent links over leaves and internal nodes
  std::vector<std::size_t> parent(2 * n - 1);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  for (std::size_t s = 0; s < n - q; ++s) {
    parent[tree.merges[s].first] = n + s;
    parent[tree.merges[s].second] = n + s;
  }
  std::vector<int> roots(n);
  for (std::size_t leaf = 0; leaf < n; ++leaf) {
    std::size_t node = leaf;
    while (parent[node] != node) node = parent[node];
    roots[leaf] = static_cast<int>(node);
  }
  return canonical(roots);
}

HierarchicalResult hc_cluster(const DistanceMatrix& d, Linkage linkage, std::size_t q) {
  if (q < 1 || q > d.size())
    throw ValidationError("cluster count " + std::to_string(q) + " must lie in [1, " +
                          std::to_string(d.size()) + "]");
  HierarchicalResult out;
  out.dendrogram = agglomerate(d, linkage);
  out.partition = cut(out.dendrogram, q);
  return out;
}

}  // namespace gnpr
