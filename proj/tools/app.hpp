#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gnpr/cluster.hpp"
#include "gnpr/metrics.hpp"
#include "gnpr/panel.hpp"
#include "gnpr/synth.hpp"

namespace gnpr::app {

enum class Algorithm { hc_average, hc_ward, kmeanspp, ap };

std::string to_string(Algorithm algo);
Algorithm parse_algorithm(const std::string& name);

struct ClusteringConfig {
  DistanceKind kind = DistanceKind::gnpr;
  double theta = 0.5;
  Algorithm algorithm = Algorithm::hc_average;
  std::size_t q = 0;  // ignored by ap
  std::size_t bins = kDefaultBinCount;
  std::uint64_t seed = 1;
  std::size_t restarts = 10;
  AffinityOptions affinity;
  std::size_t threads = 1;
};

struct ClusteringOutcome {
  Partition partition;
  std::optional<Dendrogram> dendrogram;
  bool converged = true;
};

/// Builds whatever the algorithm needs from the panel (distance matrix or
/// embedding) and clusters it.
ClusteringOutcome cluster_panel(const Panel& panel, const ClusteringConfig& config);

/// Same for a precomputed matrix; k-means++ is rejected (no coordinates).
ClusteringOutcome cluster_matrix(const DistanceMatrix& d, const ClusteringConfig& config);

// -- subcommands ----------------------------------------------------------------

struct GenerateOptions {
  std::optional<std::string> preset;
  std::optional<std::filesystem::path> spec_path;
  std::optional<std::size_t> n, t;
  std::optional<double> beta;
  std::optional<std::uint64_t> seed;
  std::filesystem::path out_panel;
  std::filesystem::path out_labels;
  std::optional<std::filesystem::path> out_spec;  // defaults next to the panel
};

/// Returns the path the spec was echoed to.
std::filesystem::path cmd_generate(const GenerateOptions& options);

struct IngestOptions {
  std::filesystem::path in_prices;
  std::filesystem::path out_panel;
  bool diff = false;
};

/// Returns the number of dropped rows.
std::size_t cmd_ingest(const IngestOptions& options);

struct DistanceOptions {
  std::filesystem::path panel;
  std::filesystem::path out;
  DistanceKind kind = DistanceKind::gnpr;
  double theta = 0.5;
  std::size_t bins = kDefaultBinCount;
  std::size_t threads = 0;
};

void cmd_distance(const DistanceOptions& options);

struct ClusterOptions {
  std::optional<std::filesystem::path> panel;
  std::optional<std::filesystem::path> distance;
  std::optional<std::filesystem::path> labels;  // ground truth, prints ARI
  std::filesystem::path out;
  std::optional<std::filesystem::path> out_dendrogram;
  ClusteringConfig config;
};

/// Returns the ARI against the supplied labels, if any.
std::optional<double> cmd_cluster(const ClusterOptions& options);

struct BenchmarkOptions {
  std::vector<std::string> presets{"A", "B", "C"};
  std::vector<DistanceKind> distances{DistanceKind::gnpr};
  std::vector<double> thetas{0.0, 1.0, 0.5};
  std::vector<Algorithm> algorithms{Algorithm::hc_average};
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  std::optional<std::size_t> n, t;
  std::optional<double> beta;
  std::size_t bins = kDefaultBinCount;
  std::size_t restarts = 10;
  AffinityOptions affinity;
  std::size_t threads = 0;
  std::optional<std::filesystem::path> out_json;
  std::optional<std::filesystem::path> out_markdown;
  std::optional<std::filesystem::path> out_timings;
};

struct BenchmarkCell {
  std::string dataset;
  DistanceKind kind;
  std::optional<double> theta;
  Algorithm algorithm;
  std::vector<std::uint64_t> seeds;
  std::vector<double> aris;  // one per successful seed
  std::vector<std::string> failures;
  double runtime_seconds = 0.0;

  double mean() const;
  double stddev() const;
  std::string label() const;
};

struct BenchmarkReport {
  std::vector<BenchmarkCell> cells;
  nlohmann::json config;

  const BenchmarkCell* find(const std::string& dataset, DistanceKind kind,
                            std::optional<double> theta, Algorithm algorithm) const;
  nlohmann::json to_json() const;
  nlohmann::json timings_json() const;
  std::string markdown() const;
};

BenchmarkReport cmd_benchmark(const BenchmarkOptions& options);

struct ConsistencyOptions {
  std::vector<std::size_t> ns{64};
  std::vector<std::size_t> ts{10, 50, 200, 500, 2000};
  double theta = 0.5;
  Algorithm algorithm = Algorithm::hc_average;
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  std::size_t bins = kDefaultBinCount;
  std::size_t restarts = 10;
  AffinityOptions affinity;
  std::size_t threads = 0;
  std::optional<std::filesystem::path> out_csv;
};

struct ConsistencyRow {
  std::size_t n = 0;
  std::size_t t = 0;
  double mean_ari = 0.0;
  double std_ari = 0.0;
};

std::vector<ConsistencyRow> cmd_consistency(const ConsistencyOptions& options);
std::string consistency_csv(const std::vector<ConsistencyRow>& rows);

/// "<distance>:<algorithm>", e.g. "gnpr:hc-ward" or "l2:hc-ward".
struct StabilityMethod {
  DistanceKind kind = DistanceKind::gnpr;
  Algorithm algorithm = Algorithm::hc_ward;

  static StabilityMethod parse(const std::string& text);
  std::string label() const;
};

struct StabilityOptions {
  std::filesystem::path panel;
  std::vector<StabilityMethod> methods{{DistanceKind::gnpr, Algorithm::hc_ward},
                                       {DistanceKind::l2, Algorithm::hc_ward}};
  double theta = 0.5;
  std::size_t q = 10;
  std::uint64_t seed = 1;
  std::size_t bins = kDefaultBinCount;
  std::size_t restarts = 10;
  AffinityOptions affinity;
  std::size_t threads = 0;
  std::optional<std::filesystem::path> out_json;
};

struct StabilityEntry {
  StabilityMethod method;
  double ari = 0.0;
  Partition even;
  Partition odd;
};

struct StabilityReport {
  std::size_t length = 0;
  std::size_t even_length = 0;
  std::size_t odd_length = 0;
  double theta = 0.0;
  std::size_t q = 0;
  std::vector<StabilityEntry> entries;

  nlohmann::json to_json() const;
};

/// Clusters even (0-based) and odd time indices separately and compares.
StabilityReport stability(const Panel& panel, const StabilityOptions& options);
StabilityReport cmd_stability(const StabilityOptions& options);

}  // namespace gnpr::app
