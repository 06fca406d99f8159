#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gnpr/cluster.hpp"
#include "gnpr/metrics.hpp"
#include "gnpr/panel.hpp"
#include "gnpr/synth.hpp"

namespace gnpr::io {

/// Shortest round-trip-safe rendering: 17 significant digits.
std::string format_real(double value);

// Panels: header row of series ids, then one row per time step.
void write_panel(std::ostream& out, const Panel& panel);
void write_panel(const std::filesystem::path& path, const Panel& panel);
Panel read_panel(std::istream& in);
Panel read_panel(const std::filesystem::path& path);

/// Price table in panel layout where empty, "NA" or "NaN" cells mark missing
/// values; rows with a missing value are dropped.
struct PriceTable {
  std::vector<std::string> ids;
  std::vector<std::vector<double>> rows;  // time-major, complete rows only
  std::size_t dropped_rows = 0;
};
PriceTable read_prices(std::istream& in);
PriceTable read_prices(const std::filesystem::path& path);

/// Panel of first differences (with_diff) or the levels themselves.
Panel prices_to_panel(const PriceTable& prices, bool with_diff);

// Distance matrices: top-left cell holds the kind, then a header row and a
// header column of series ids around the full N x N block.
void write_distance_matrix(std::ostream& out, const DistanceMatrix& d);
void write_distance_matrix(const std::filesystem::path& path, const DistanceMatrix& d);
DistanceMatrix read_distance_matrix(std::istream& in);
DistanceMatrix read_distance_matrix(const std::filesystem::path& path);

// Partitions: "series_id,label" rows.
struct LabeledIds {
  std::vector<std::string> ids;
  Partition partition;
};
void write_partition(std::ostream& out, const std::vector<std::string>& ids, const Partition& p);
void write_partition(const std::filesystem::path& path, const std::vector<std::string>& ids,
                     const Partition& p);
LabeledIds read_partition(std::istream& in);
LabeledIds read_partition(const std::filesystem::path& path);

/// Reorders `labels` to follow `ids`; throws ValidationError on any mismatch.
Partition align_partition(const LabeledIds& labels, const std::vector<std::string>& ids);

// Dendrograms: "step,first,second,height,size" rows.
void write_dendrogram(std::ostream& out, const Dendrogram& tree);
void write_dendrogram(const std::filesystem::path& path, const Dendrogram& tree);

// Synthetic specs as JSON {name?, N, T, K, D, beta, factor_dist, noise_dists, seed}.
nlohmann::json to_json(const Distribution& dist);
Distribution distribution_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SyntheticSpec& spec, std::uint64_t seed);
struct SeededSpec {
  SyntheticSpec spec;
  std::uint64_t seed = 0;
};
SeededSpec spec_from_json(const nlohmann::json& j);

nlohmann::json read_json(const std::filesystem::path& path);
/// Pretty-printed with two-space indent and a trailing newline.
void write_json(const std::filesystem::path& path, const nlohmann::json& j);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace gnpr::io
