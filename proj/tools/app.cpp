#include "app.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iostream>
#include <map>
#include <sstream>

#include "gnpr/error.hpp"
#include "gnpr/io.hpp"
#include "gnpr/parallel.hpp"
#include "gnpr/repr.hpp"

namespace gnpr::app {

namespace {

constexpr int kSchemaVersion = 1;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

Linkage linkage_of(Algorithm algo) {
  return algo == Algorithm::hc_ward ? Linkage::ward : Linkage::average;
}

bool uses_theta(DistanceKind kind) { return kind == DistanceKind::gnpr || kind == DistanceKind::gpr; }

std::string theta_text(double theta) {
  std::ostringstream os;
  os << theta;
  return os.str();
}

nlohmann::json affinity_json(const AffinityOptions& ap) {
  nlohmann::json j;
  j["damping"] = ap.damping;
  j["max_iter"] = ap.max_iter;
  j["convergence_iter"] = ap.convergence_iter;
  if (ap.preference)
    j["preference"] = *ap.preference;
  else
    j["preference"] = "median";
  return j;
}

double population_stddev(const std::vector<double>& xs) {
  if (xs.empty()) return 0.0;
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(xs.size()));
}

double mean_of(const std::vector<double>& xs) {
  if (xs.empty()) return std::nan("");
  double sum = 0.0;
  for (double x : xs) sum += x;
  return sum / static_cast<double>(xs.size());
}

}  // namespace

std::string to_string(Algorithm algo) {
  switch (algo) {
    case Algorithm::hc_average: return "hc-average";
    case Algorithm::hc_ward: return "hc-ward";
    case Algorithm::kmeanspp: return "kmeanspp";
    case Algorithm::ap: return "ap";
  }
  return "unknown";
}

Algorithm parse_algorithm(const std::string& name) {
  for (auto algo : {Algorithm::hc_average, Algorithm::hc_ward, Algorithm::kmeanspp, Algorithm::ap})
    if (to_string(algo) == name) return algo;
  throw ValidationError("unknown algorithm '" + name + "' (expected hc-average, hc-ward, kmeanspp or ap)");
}

ClusteringOutcome cluster_matrix(const DistanceMatrix& d, const ClusteringConfig& config) {
  ClusteringOutcome out;
  switch (config.algorithm) {
    case Algorithm::hc_average:
    case Algorithm::hc_ward: {
      auto hc = hc_cluster(d, linkage_of(config.algorithm), config.q);
      out.partition = std::move(hc.partition);
      out.dendrogram = std::move(hc.dendrogram);
      return out;
    }
    case Algorithm::ap: {
      auto ap = affinity_propagation(d, config.affinity);
      out.partition = std::move(ap.partition);
      out.converged = ap.converged;
      return out;
    }
    case Algorithm::kmeanspp:
      throw ValidationError("kmeanspp needs a panel (coordinates), not a distance matrix");
  }
  throw ValidationError("unsupported algorithm");
}

ClusteringOutcome cluster_panel(const Panel& panel, const ClusteringConfig& config) {
  const ThetaWeight theta(config.theta);
  if (config.algorithm != Algorithm::kmeanspp)
    return cluster_matrix(panel_distance_matrix(panel, config.kind, theta, config.bins, config.threads),
                          config);

  Embedding e;
  if (config.kind == DistanceKind::gnpr)
    e = gnpr_embedding(build_representation(panel, config.bins, config.threads), theta);
  else
    e = baseline_embedding(panel, config.kind);
  ClusteringOutcome out;
  out.partition = kmeanspp(e, config.q, config.seed, config.restarts).partition;
  return out;
}

// -- generate -------------------------------------------------------------------

std::filesystem::path cmd_generate(const GenerateOptions& options) {
  if (options.preset.has_value() == options.spec_path.has_value())
    throw ValidationError("exactly one of --preset or --spec is required");
  SyntheticSpec spec;
  std::uint64_t seed = 1;
  if (options.preset) {
    spec = preset(*options.preset, options.n, options.t);
  } else {
    auto seeded = io::spec_from_json(io::read_json(*options.spec_path));
    spec = std::move(seeded.spec);
    seed = seeded.seed;
    if (options.n) spec.n = *options.n;
    if (options.t) spec.t = *options.t;
  }
  if (options.beta) spec.beta = *options.beta;
  if (options.seed) seed = *options.seed;
  spec.validate();

  const auto data = generate(spec, seed);
  io::write_panel(options.out_panel, data.panel);
  io::write_partition(options.out_labels, data.panel.series_ids(), data.labels);

  auto spec_path = options.out_spec.value_or(
      std::filesystem::path(options.out_panel).replace_extension(".spec.json"));
  io::write_json(spec_path, io::to_json(spec, seed));
  return spec_path;
}

// -- ingest ---------------------------------------------------------------------

std::size_t cmd_ingest(const IngestOptions& options) {
  const auto prices = io::read_prices(options.in_prices);
  if (prices.dropped_rows > 0)
    std::cerr << "warning: " << prices.dropped_rows << (prices.dropped_rows == 1 ? " row" : " rows")
              << " dropped (missing values)\n";
  io::write_panel(options.out_panel, io::prices_to_panel(prices, options.diff));
  return prices.dropped_rows;
}

// -- distance -------------------------------------------------------------------

void cmd_distance(const DistanceOptions& options) {
  const Panel panel = io::read_panel(options.panel);
  const auto start = Clock::now();
  const auto d = panel_distance_matrix(panel, options.kind, ThetaWeight(options.theta),
                                       options.bins, options.threads);
  const double elapsed = seconds_since(start);
  const double pairs = static_cast<double>(d.size()) * static_cast<double>(d.size() - 1) / 2.0;
  std::cerr << "distance: " << to_string(options.kind) << " N=" << panel.series_count()
            << " T=" << panel.length() << " threads=" << resolve_threads(options.threads) << " in "
            << elapsed << " s (" << (elapsed > 0 ? pairs / elapsed : 0.0) << " pairs/s)\n";
  io::write_distance_matrix(options.out, d);
}

// -- cluster --------------------------------------------------------------------

std::optional<double> cmd_cluster(const ClusterOptions& options) {
  if (options.panel.has_value() == options.distance.has_value())
    throw ValidationError("exactly one of --panel or --distance is required");
  if (options.config.algorithm != Algorithm::ap && options.config.q == 0)
    throw ValidationError("--Q is required for " + to_string(options.config.algorithm));

  std::vector<std::string> ids;
  ClusteringOutcome outcome;
  if (options.panel) {
    const Panel panel = io::read_panel(*options.panel);
    ids = panel.series_ids();
    outcome = cluster_panel(panel, options.config);
  } else {
    const auto d = io::read_distance_matrix(*options.distance);
    ids = d.series_ids();
    outcome = cluster_matrix(d, options.config);
  }
  if (!outcome.converged) std::cerr << "warning: affinity propagation did not converge\n";

  io::write_partition(options.out, ids, outcome.partition);
  if (options.out_dendrogram) {
    if (!outcome.dendrogram) throw ValidationError("--dendrogram requires a hierarchical algorithm");
    io::write_dendrogram(*options.out_dendrogram, *outcome.dendrogram);
  }
  std::cout << "clusters: " << outcome.partition.cluster_count << '\n';
  if (!options.labels) return std::nullopt;
  const auto truth = io::align_partition(io::read_partition(*options.labels), ids);
  const double score = ari(outcome.partition, truth);
  std::cout << "ARI: " << io::format_real(score) << '\n';
  return score;
}

// -- benchmark ------------------------------------------------------------------

double BenchmarkCell::mean() const { return mean_of(aris); }
double BenchmarkCell::stddev() const { return population_stddev(aris); }

std::string BenchmarkCell::label() const {
  std::string out = std::string(gnpr::to_string(kind));
  if (theta) out += " theta=" + theta_text(*theta);
  return out;
}

const BenchmarkCell* BenchmarkReport::find(const std::string& dataset, DistanceKind kind,
                                           std::optional<double> theta, Algorithm algorithm) const {
  for (const auto& c : cells)
    if (c.dataset == dataset && c.kind == kind && c.algorithm == algorithm &&
        (!uses_theta(kind) || c.theta == theta))
      return &c;
  return nullptr;
}

nlohmann::json BenchmarkReport::to_json() const {
  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  j["config"] = config;
  j["cells"] = nlohmann::json::array();
  for (const auto& c : cells) {
    nlohmann::json cell;
    cell["dataset"] = c.dataset;
    cell["distance"] = gnpr::to_string(c.kind);
    cell["theta"] = c.theta ? nlohmann::json(*c.theta) : nlohmann::json(nullptr);
    cell["algorithm"] = to_string(c.algorithm);
    cell["runs"] = nlohmann::json::array();
    for (std::size_t s = 0, ok = 0; s < c.seeds.size(); ++s) {
      nlohmann::json run{{"seed", c.seeds[s]}};
      if (c.failures[s].empty())
        run["ari"] = c.aris[ok++];
      else
        run["error"] = c.failures[s];
      cell["runs"].push_back(run);
    }
    cell["successful_runs"] = c.aris.size();
    cell["mean_ari"] = c.aris.empty() ? nlohmann::json(nullptr) : nlohmann::json(c.mean());
    cell["std_ari"] = c.aris.empty() ? nlohmann::json(nullptr) : nlohmann::json(c.stddev());
    j["cells"].push_back(cell);
  }
  return j;
}

nlohmann::json BenchmarkReport::timings_json() const {
  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  j["cells"] = nlohmann::json::array();
  for (const auto& c : cells)
    j["cells"].push_back({{"dataset", c.dataset},
                          {"distance", gnpr::to_string(c.kind)},
                          {"theta", c.theta ? nlohmann::json(*c.theta) : nlohmann::json(nullptr)},
                          {"algorithm", to_string(c.algorithm)},
                          {"runtime_seconds", c.runtime_seconds}});
  return j;
}

std::string BenchmarkReport::markdown() const {
  std::vector<std::string> datasets;
  std::vector<std::pair<Algorithm, std::string>> rows;
  for (const auto& c : cells) {
    if (std::find(datasets.begin(), datasets.end(), c.dataset) == datasets.end())
      datasets.push_back(c.dataset);
    std::pair<Algorithm, std::string> row{c.algorithm, c.label()};
    if (std::find(rows.begin(), rows.end(), row) == rows.end()) rows.push_back(row);
  }
  std::ostringstream md;
  md << "| Algo. | Distance |";
  for (const auto& ds : datasets) md << ' ' << ds << " |";
  md << "\n|---|---|";
  for (std::size_t k = 0; k < datasets.size(); ++k) md << "---|";
  md << '\n';
  char buf[64];
  for (const auto& [algo, label] : rows) {
    md << "| " << to_string(algo) << " | " << label << " |";
    for (const auto& ds : datasets) {
      const BenchmarkCell* cell = nullptr;
      for (const auto& c : cells)
        if (c.dataset == ds && c.algorithm == algo && c.label() == label) cell = &c;
      if (cell == nullptr || cell->aris.empty()) {
        md << " n/a |";
      } else {
        std::snprintf(buf, sizeof buf, " %.2f ±%.2f |", cell->mean(), cell->stddev());
        md << buf;
      }
    }
    md << '\n';
  }
  return md.str();
}

BenchmarkReport cmd_benchmark(const BenchmarkOptions& options) {
  if (options.presets.empty() || options.distances.empty() || options.algorithms.empty() ||
      options.seeds.empty())
    throw ValidationError("benchmark needs at least one preset, distance, algorithm and seed");
  for (const auto& kind : options.distances)
    if (uses_theta(kind) && options.thetas.empty())
      throw ValidationError("benchmark needs at least one theta for " + std::string(gnpr::to_string(kind)));
  for (double theta : options.thetas) ThetaWeight{theta};

  // distance variants: theta only matters for gnpr / gpr
  std::vector<std::pair<DistanceKind, std::optional<double>>> variants;
  for (auto kind : options.distances) {
    if (uses_theta(kind))
      for (double theta : options.thetas) variants.emplace_back(kind, theta);
    else
      variants.emplace_back(kind, std::nullopt);
  }

  BenchmarkReport report;
  for (const auto& ds : options.presets)
    for (const auto& [kind, theta] : variants)
      for (auto algo : options.algorithms) {
        BenchmarkCell cell{ds, kind, theta, algo, {}, {}, {}, 0.0};
        cell.seeds = options.seeds;
        report.cells.push_back(std::move(cell));
      }

  struct Job {
    std::size_t preset;
    std::size_t seed;
  };
  std::vector<Job> jobs;
  for (std::size_t p = 0; p < options.presets.size(); ++p)
    for (std::size_t s = 0; s < options.seeds.size(); ++s) jobs.push_back({p, s});

  // results[cell][seed]: ari or failure text
  struct Slot {
    double ari = 0.0;
    std::string error;
    double seconds = 0.0;
  };
  std::vector<std::vector<Slot>> slots(report.cells.size(), std::vector<Slot>(options.seeds.size()));

  std::vector<SyntheticSpec> specs;
  for (const auto& name : options.presets) {
    auto spec = preset(name, options.n, options.t);
    if (options.beta) spec.beta = *options.beta;
    spec.validate();
    specs.push_back(std::move(spec));
  }

  parallel_for(jobs.size(), options.threads, [&](std::size_t job_index) {
    const auto [p, s] = jobs[job_index];
    const auto data = generate(specs[p], options.seeds[s]);
    for (std::size_t c = 0; c < report.cells.size(); ++c) {
      const auto& cell = report.cells[c];
      if (cell.dataset != options.presets[p]) continue;
      auto& slot = slots[c][s];
      const auto start = Clock::now();
      try {
        ClusteringConfig config;
        config.kind = cell.kind;
        config.theta = cell.theta.value_or(0.5);
        config.algorithm = cell.algorithm;
        config.q = specs[p].cluster_count();
        config.bins = options.bins;
        config.seed = options.seeds[s];
        config.restarts = options.restarts;
        config.affinity = options.affinity;
        slot.ari = ari(cluster_panel(data.panel, config).partition, data.labels);
      } catch (const std::exception& e) {
        slot.error = e.what();
        if (slot.error.empty()) slot.error = "failed";
      }
      slot.seconds = seconds_since(start);
    }
  });

  for (std::size_t c = 0; c < report.cells.size(); ++c) {
    auto& cell = report.cells[c];
    for (const auto& slot : slots[c]) {
      cell.failures.push_back(slot.error);
      if (slot.error.empty()) cell.aris.push_back(slot.ari);
      cell.runtime_seconds += slot.seconds;
    }
  }

  nlohmann::json config;
  config["presets"] = options.presets;
  config["seeds"] = options.seeds;
  config["bins"] = options.bins;
  config["restarts"] = options.restarts;
  config["affinity"] = affinity_json(options.affinity);
  nlohmann::json datasets = nlohmann::json::object();
  for (std::size_t p = 0; p < specs.size(); ++p) datasets[options.presets[p]] = io::to_json(specs[p], 0);
  config["datasets"] = datasets;
  config["flags"] = nlohmann::json::array();
  if (options.beta) config["flags"].push_back("beta overridden to " + theta_text(*options.beta) +
                                              " (differs from the preset table)");
  if (options.n || options.t) config["flags"].push_back("N/T overridden");
  report.config = config;

  if (options.out_json) io::write_json(*options.out_json, report.to_json());
  if (options.out_markdown) io::write_text(*options.out_markdown, report.markdown());
  if (options.out_timings) io::write_json(*options.out_timings, report.timings_json());
  return report;
}

// -- consistency ----------------------------------------------------------------

std::vector<ConsistencyRow> cmd_consistency(const ConsistencyOptions& options) {
  if (options.ns.empty() || options.ts.empty() || options.seeds.empty())
    throw ValidationError("consistency needs at least one N, one T and one seed");
  ThetaWeight{options.theta};

  struct Cell {
    std::size_t n, t;
  };
  std::vector<Cell> cells;
  for (auto n : options.ns)
    for (auto t : options.ts) {
      preset("G", n, t);  // validates divisibility up front
      cells.push_back({n, t});
    }

  std::vector<std::vector<double>> scores(cells.size(), std::vector<double>(options.seeds.size()));
  parallel_for(cells.size() * options.seeds.size(), options.threads, [&](std::size_t k) {
    const std::size_t c = k / options.seeds.size();
    const std::size_t s = k % options.seeds.size();
    const auto spec = preset("G", cells[c].n, cells[c].t);
    const auto data = generate(spec, options.seeds[s]);
    ClusteringConfig config;
    config.kind = DistanceKind::gnpr;
    config.theta = options.theta;
    config.algorithm = options.algorithm;
    config.q = spec.cluster_count();
    config.bins = options.bins;
    config.seed = options.seeds[s];
    config.restarts = options.restarts;
    config.affinity = options.affinity;
    scores[c][s] = ari(cluster_panel(data.panel, config).partition, data.labels);
  });

  std::vector<ConsistencyRow> rows;
  for (std::size_t c = 0; c < cells.size(); ++c)
    rows.push_back({cells[c].n, cells[c].t, mean_of(scores[c]), population_stddev(scores[c])});
  if (options.out_csv) io::write_text(*options.out_csv, consistency_csv(rows));
  return rows;
}

std::string consistency_csv(const std::vector<ConsistencyRow>& rows) {
  std::ostringstream out;
  out << "N,T,mean_ari,std_ari\n";
  for (const auto& r : rows)
    out << r.n << ',' << r.t << ',' << io::format_real(r.mean_ari) << ','
        << io::format_real(r.std_ari) << '\n';
  return out.str();
}

// -- stability ------------------------------------------------------------------

StabilityMethod StabilityMethod::parse(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos)
    throw ValidationError("stability method '" + text + "' must look like <distance>:<algorithm>");
  return {parse_distance_kind(text.substr(0, colon)), parse_algorithm(text.substr(colon + 1))};
}

std::string StabilityMethod::label() const {
  return std::string(gnpr::to_string(kind)) + ":" + to_string(algorithm);
}

nlohmann::json StabilityReport::to_json() const {
  auto half_json = [](const Partition& p) {
    auto sizes = cluster_sizes(p);
    std::sort(sizes.rbegin(), sizes.rend());
    std::map<std::size_t, std::size_t> histogram;
    for (auto s : sizes) ++histogram[s];
    nlohmann::json hist = nlohmann::json::array();
    for (const auto& [size, count] : histogram) hist.push_back({{"size", size}, {"clusters", count}});
    return nlohmann::json{{"cluster_count", p.cluster_count},
                          {"cluster_sizes", sizes},
                          {"size_histogram", hist},
                          {"labels", p.labels}};
  };
  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  j["T"] = length;
  j["even_length"] = even_length;
  j["odd_length"] = odd_length;
  j["theta"] = theta;
  j["Q"] = q;
  j["methods"] = nlohmann::json::array();
  for (const auto& e : entries)
    j["methods"].push_back({{"method", e.method.label()},
                            {"distance", gnpr::to_string(e.method.kind)},
                            {"algorithm", to_string(e.method.algorithm)},
                            {"ari", e.ari},
                            {"even", half_json(e.even)},
                            {"odd", half_json(e.odd)}});
  return j;
}

StabilityReport stability(const Panel& panel, const StabilityOptions& options) {
  if (panel.length() < 4) throw ValidationError("stability needs T >= 4");
  if (options.methods.empty()) throw ValidationError("stability needs at least one method");
  const Panel even = panel.time_parity(0);
  const Panel odd = panel.time_parity(1);

  StabilityReport report;
  report.length = panel.length();
  report.even_length = even.length();
  report.odd_length = odd.length();
  report.theta = options.theta;
  report.q = options.q;
  for (const auto& method : options.methods) {
    ClusteringConfig config;
    config.kind = method.kind;
    config.theta = options.theta;
    config.algorithm = method.algorithm;
    config.q = options.q;
    config.bins = options.bins;
    config.seed = options.seed;
    config.restarts = options.restarts;
    config.affinity = options.affinity;
    config.threads = options.threads;
    StabilityEntry entry;
    entry.method = method;
    entry.even = cluster_panel(even, config).partition;
    entry.odd = cluster_panel(odd, config).partition;
    entry.ari = ari(entry.even, entry.odd);
    report.entries.push_back(std::move(entry));
  }
  return report;
}

StabilityReport cmd_stability(const StabilityOptions& options) {
  auto report = stability(io::read_panel(options.panel), options);
  for (const auto& e : report.entries)
    std::cout << e.method.label() << " stability ARI: " << io::format_real(e.ari) << '\n';
  if (options.out_json) io::write_json(*options.out_json, report.to_json());
  return report;
}

}  // namespace gnpr::app
