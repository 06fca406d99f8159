#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "gnpr/metrics.hpp"
#include "gnpr/partition.hpp"

namespace gnpr {

// -- agglomerative ------------------------------------------------------------

enum class Linkage { average, ward };

std::string_view to_string(Linkage linkage);

/// One agglomeration step. Leaves are ids 0..N-1; the cluster created at step
/// s gets id N + s. `first` < `second`.
struct Merge {
  std::size_t first = 0;
  std::size_t second = 0;
  double height = 0.0;
  std::size_t size = 0;
};

struct Dendrogram {
  std::size_t leaf_count = 0;
  std::vector<Merge> merges;  // leaf_count - 1 steps
};

/// Full agglomeration with Lance-Williams updates. Ward works on squared
/// entries and reports heights as their square root. The minimum-linkage pair
/// is the first one in row-major order among ties.
Dendrogram agglomerate(const DistanceMatrix& d, Linkage linkage);

/// Partition after the first N - q merges.
Partition cut(const Dendrogram& tree, std::size_t q);

struct HierarchicalResult {
  Partition partition;
  Dendrogram dendrogram;
};

HierarchicalResult hc_cluster(const DistanceMatrix& d, Linkage linkage, std::size_t q);

// -- k-means++ ----------------------------------------------------------------

struct KMeansResult {
  Partition partition;
  double inertia = 0.0;
  std::size_t best_restart = 0;
  /// Inertia after each assignment step of the winning restart.
  std::vector<double> inertia_trace;
};

/// k-means++ seeding followed by Lloyd iterations until no assignment changes
/// (or max_iter); best inertia over `restarts` runs drawn from one seeded stream.
KMeansResult kmeanspp(const Embedding& e, std::size_t q, std::uint64_t seed,
                      std::size_t restarts = 10, std::size_t max_iter = 300);

// -- affinity propagation ---------------------------------------------------

struct AffinityOptions {
  /// Self-similarity; median of the off-diagonal similarities when unset.
  std::optional<double> preference;
  double damping = 0.9;
  std::size_t max_iter = 1000;
  std::size_t convergence_iter = 15;
};

struct AffinityResult {
  Partition partition;
  std::vector<std::size_t> exemplars;
  bool converged = false;
  std::size_t iterations = 0;
  double preference = 0.0;
  /// Largest |responsibility| or |availability| seen during message passing.
  double max_abs_message = 0.0;
};

/// Message passing on similarities s(i, j) = -d(i, j)^2.
AffinityResult affinity_propagation(const DistanceMatrix& d, const AffinityOptions& options = {});

// -- comparison ---------------------------------------------------------------

/// Hubert-Arabie adjusted Rand index.
double ari(const Partition& p, const Partition& q);

}  // namespace gnpr
