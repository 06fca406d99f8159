#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "app.hpp"
#include "gnpr/error.hpp"
#include "gnpr/io.hpp"

namespace {

using namespace gnpr;
using namespace gnpr::app;

constexpr int kExitValidation = 1;
constexpr int kExitIo = 2;

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

template <typename T, typename Parse>
std::vector<T> parse_list(const std::string& text, Parse parse) {
  std::vector<T> out;
  for (const auto& item : split_list(text)) out.push_back(parse(item));
  return out;
}

double to_real(const std::string& s) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ValidationError("'" + s + "' is not a number");
  }
}

std::uint64_t to_u64(const std::string& s) {
  try {
    std::size_t used = 0;
    const auto v = std::stoull(s, &used);
    if (used != s.size() || s.front() == '-') throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ValidationError("'" + s + "' is not a non-negative integer");
  }
}

AffinityOptions affinity_from(double damping, const std::string& preference, std::size_t max_iter) {
  AffinityOptions ap;
  ap.damping = damping;
  ap.max_iter = max_iter;
  if (preference != "median") ap.preference = to_real(preference);
  return ap;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App cli{"Generic non-parametric representation (GNPR) distances and clustering of i.i.d. series"};
  cli.require_subcommand(1);

  std::size_t threads = 0;
  cli.add_option("--threads", threads, "Worker threads (0 = hardware concurrency); never changes results")
      ->check(CLI::NonNegativeNumber);

  // generate
  GenerateOptions gen;
  std::string gen_preset, gen_spec;
  std::size_t gen_n = 0, gen_t = 0;
  double gen_beta = 0.0;
  std::uint64_t gen_seed = 1;
  std::string gen_out_spec;
  gen.out_panel = "panel.csv";
  gen.out_labels = "labels.csv";
  auto* generate_cmd = cli.add_subcommand("generate", "Generate a labeled synthetic panel");
  generate_cmd->add_option("--preset", gen_preset, "Preset name: A, B, C or G");
  generate_cmd->add_option("--spec", gen_spec, "JSON synthetic spec");
  auto* gen_n_opt = generate_cmd->add_option("--N", gen_n, "Override series count");
  auto* gen_t_opt = generate_cmd->add_option("--T", gen_t, "Override series length");
  auto* gen_beta_opt = generate_cmd->add_option("--beta", gen_beta, "Override factor loading");
  auto* gen_seed_opt = generate_cmd->add_option("--seed", gen_seed, "RNG seed");
  generate_cmd->add_option("--out-panel", gen.out_panel, "Panel CSV path")->capture_default_str();
  generate_cmd->add_option("--out-labels", gen.out_labels, "Ground-truth labels CSV path")->capture_default_str();
  generate_cmd->add_option("--out-spec", gen_out_spec, "Echoed spec JSON (default: <panel>.spec.json)");

  // ingest
  IngestOptions ing;
  auto* ingest_cmd = cli.add_subcommand("ingest", "Turn a price-level CSV into a panel");
  ingest_cmd->add_option("--in", ing.in_prices, "Price CSV, one column per instrument")->required();
  ingest_cmd->add_option("--out", ing.out_panel, "Panel CSV path")->required();
  ingest_cmd->add_flag("--diff", ing.diff, "Emit first differences");

  // distance
  DistanceOptions dist;
  std::string dist_kind = "gnpr";
  auto* distance_cmd = cli.add_subcommand("distance", "Compute a full distance matrix");
  distance_cmd->add_option("--panel", dist.panel, "Panel CSV")->required();
  distance_cmd->add_option("--out", dist.out, "Distance matrix CSV")->required();
  distance_cmd->add_option("--kind", dist_kind, "gnpr | gpr | l2 | pearson")->capture_default_str();
  distance_cmd->add_option("--theta", dist.theta, "Dependence weight in [0, 1]")->capture_default_str();
  distance_cmd->add_option("--bins", dist.bins, "Histogram bins")->capture_default_str();

  // cluster
  ClusterOptions clu;
  std::string clu_panel, clu_distance, clu_labels, clu_dendro, clu_algo = "hc-average", clu_kind = "gnpr";
  std::string clu_pref = "median";
  double clu_damping = 0.9;
  std::size_t clu_max_iter = 1000;
  auto* cluster_cmd = cli.add_subcommand("cluster", "Cluster a panel or a distance matrix");
  cluster_cmd->add_option("--panel", clu_panel, "Panel CSV (distance computed on the fly)");
  cluster_cmd->add_option("--distance", clu_distance, "Precomputed distance matrix CSV");
  cluster_cmd->add_option("--algo", clu_algo, "hc-average | hc-ward | kmeanspp | ap")->capture_default_str();
  cluster_cmd->add_option("--Q", clu.config.q, "Cluster count (hc, kmeanspp)");
  cluster_cmd->add_option("--kind", clu_kind, "Distance for --panel input")->capture_default_str();
  cluster_cmd->add_option("--theta", clu.config.theta, "Dependence weight")->capture_default_str();
  cluster_cmd->add_option("--bins", clu.config.bins, "Histogram bins")->capture_default_str();
  cluster_cmd->add_option("--seed", clu.config.seed, "k-means++ seed")->capture_default_str();
  cluster_cmd->add_option("--restarts", clu.config.restarts, "k-means++ restarts")->capture_default_str();
  cluster_cmd->add_option("--damping", clu_damping, "Affinity propagation damping")->capture_default_str();
  cluster_cmd->add_option("--preference", clu_pref, "AP preference or 'median'")->capture_default_str();
  cluster_cmd->add_option("--max-iter", clu_max_iter, "AP iteration cap")->capture_default_str();
  cluster_cmd->add_option("--labels", clu_labels, "Ground-truth labels CSV; prints ARI");
  cluster_cmd->add_option("--out", clu.out, "Partition CSV")->required();
  cluster_cmd->add_option("--dendrogram", clu_dendro, "Merge table CSV (hierarchical only)");

  // benchmark
  BenchmarkOptions bench;
  std::string b_presets = "A,B,C", b_distances = "gnpr", b_thetas = "0,1,0.5", b_algos = "hc-average",
              b_seeds = "1,2,3,4,5", b_out, b_md, b_timings, b_pref = "median";
  std::size_t b_n = 0, b_t = 0, b_max_iter = 1000;
  double b_beta = 0.0, b_damping = 0.9;
  auto* benchmark_cmd = cli.add_subcommand("benchmark", "ARI table over presets x distances x algorithms x seeds");
  benchmark_cmd->add_option("--presets", b_presets, "Comma-separated presets")->capture_default_str();
  benchmark_cmd->add_option("--distances", b_distances, "Comma-separated: gnpr,gpr,l2,pearson")->capture_default_str();
  benchmark_cmd->add_option("--thetas", b_thetas, "Comma-separated theta values")->capture_default_str();
  benchmark_cmd->add_option("--algos", b_algos, "Comma-separated algorithms")->capture_default_str();
  benchmark_cmd->add_option("--seeds", b_seeds, "Comma-separated seeds")->capture_default_str();
  auto* b_n_opt = benchmark_cmd->add_option("--N", b_n, "Override series count");
  auto* b_t_opt = benchmark_cmd->add_option("--T", b_t, "Override series length");
  auto* b_beta_opt = benchmark_cmd->add_option("--beta", b_beta, "Override factor loading (flagged in report)");
  benchmark_cmd->add_option("--bins", bench.bins, "Histogram bins")->capture_default_str();
  benchmark_cmd->add_option("--restarts", bench.restarts, "k-means++ restarts")->capture_default_str();
  benchmark_cmd->add_option("--damping", b_damping, "AP damping")->capture_default_str();
  benchmark_cmd->add_option("--preference", b_pref, "AP preference or 'median'")->capture_default_str();
  benchmark_cmd->add_option("--max-iter", b_max_iter, "AP iteration cap")->capture_default_str();
  benchmark_cmd->add_option("--out", b_out, "Report JSON");
  benchmark_cmd->add_option("--markdown", b_md, "Markdown table");
  benchmark_cmd->add_option("--timings", b_timings, "Per-cell runtime JSON");

  // consistency
  ConsistencyOptions cons;
  std::string c_ns = "64", c_ts = "10,50,200,500,2000", c_seeds = "1,2,3,4,5", c_algo = "hc-average", c_out,
              c_pref = "median";
  double c_damping = 0.9;
  auto* consistency_cmd = cli.add_subcommand("consistency", "Mean ARI on preset G over an (N, T) grid");
  consistency_cmd->add_option("--Ns", c_ns, "Comma-separated series counts")->capture_default_str();
  consistency_cmd->add_option("--Ts", c_ts, "Comma-separated lengths")->capture_default_str();
  consistency_cmd->add_option("--theta", cons.theta, "Dependence weight")->capture_default_str();
  consistency_cmd->add_option("--algo", c_algo, "Algorithm")->capture_default_str();
  consistency_cmd->add_option("--seeds", c_seeds, "Comma-separated seeds")->capture_default_str();
  consistency_cmd->add_option("--bins", cons.bins, "Histogram bins")->capture_default_str();
  consistency_cmd->add_option("--restarts", cons.restarts, "k-means++ restarts")->capture_default_str();
  consistency_cmd->add_option("--damping", c_damping, "AP damping")->capture_default_str();
  consistency_cmd->add_option("--preference", c_pref, "AP preference or 'median'")->capture_default_str();
  consistency_cmd->add_option("--out", c_out, "CSV path (stdout when omitted)");

  // stability
  StabilityOptions stab;
  std::string s_methods = "gnpr:hc-ward,l2:hc-ward", s_out, s_pref = "median";
  double s_damping = 0.9;
  auto* stability_cmd = cli.add_subcommand("stability", "Odd/even time-split clustering agreement");
  stability_cmd->add_option("--panel", stab.panel, "Panel CSV")->required();
  stability_cmd->add_option("--methods", s_methods, "Comma-separated <distance>:<algorithm>")->capture_default_str();
  stability_cmd->add_option("--theta", stab.theta, "Dependence weight")->capture_default_str();
  stability_cmd->add_option("--Q", stab.q, "Cluster count")->capture_default_str();
  stability_cmd->add_option("--seed", stab.seed, "k-means++ seed")->capture_default_str();
  stability_cmd->add_option("--bins", stab.bins, "Histogram bins")->capture_default_str();
  stability_cmd->add_option("--restarts", stab.restarts, "k-means++ restarts")->capture_default_str();
  stability_cmd->add_option("--damping", s_damping, "AP damping")->capture_default_str();
  stability_cmd->add_option("--preference", s_pref, "AP preference or 'median'")->capture_default_str();
  stability_cmd->add_option("--out", s_out, "Report JSON");

  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = cli.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    if (generate_cmd->parsed()) {
      if (!gen_preset.empty()) gen.preset = gen_preset;
      if (!gen_spec.empty()) gen.spec_path = gen_spec;
      if (gen_n_opt->count()) gen.n = gen_n;
      if (gen_t_opt->count()) gen.t = gen_t;
      if (gen_beta_opt->count()) gen.beta = gen_beta;
      if (gen_seed_opt->count()) gen.seed = gen_seed;
      if (!gen_out_spec.empty()) gen.out_spec = gen_out_spec;
      const auto spec_path = cmd_generate(gen);
      std::cerr << "wrote " << gen.out_panel.string() << ", " << gen.out_labels.string() << ", " << spec_path.string() << '\n';
    } else if (ingest_cmd->parsed()) {
      cmd_ingest(ing);
    } else if (distance_cmd->parsed()) {
      dist.kind = parse_distance_kind(dist_kind);
      dist.threads = threads;
      cmd_distance(dist);
    } else if (cluster_cmd->parsed()) {
      if (!clu_panel.empty()) clu.panel = clu_panel;
      if (!clu_distance.empty()) clu.distance = clu_distance;
      if (!clu_labels.empty()) clu.labels = clu_labels;
      if (!clu_dendro.empty()) clu.out_dendrogram = clu_dendro;
      clu.config.algorithm = parse_algorithm(clu_algo);
      clu.config.kind = parse_distance_kind(clu_kind);
      clu.config.affinity = affinity_from(clu_damping, clu_pref, clu_max_iter);
      clu.config.threads = threads;
      cmd_cluster(clu);
    } else if (benchmark_cmd->parsed()) {
      bench.presets = split_list(b_presets);
      bench.distances = parse_list<DistanceKind>(b_distances, [](const std::string& s) { return parse_distance_kind(s); });
      bench.thetas = parse_list<double>(b_thetas, to_real);
      bench.algorithms = parse_list<Algorithm>(b_algos, parse_algorithm);
      bench.seeds = parse_list<std::uint64_t>(b_seeds, to_u64);
      if (b_n_opt->count()) bench.n = b_n;
      if (b_t_opt->count()) bench.t = b_t;
      if (b_beta_opt->count()) bench.beta = b_beta;
      bench.affinity = affinity_from(b_damping, b_pref, b_max_iter);
      bench.threads = threads;
      if (!b_out.empty()) bench.out_json = b_out;
      if (!b_md.empty()) bench.out_markdown = b_md;
      if (!b_timings.empty()) bench.out_timings = b_timings;
      const auto report = cmd_benchmark(bench);
      std::cout << report.markdown();
      for (const auto& cell : report.cells)
        for (const auto& failure : cell.failures)
          if (!failure.empty()) std::cerr << "cell " << cell.dataset << '/' << cell.label() << ": " << failure << '\n';
    } else if (consistency_cmd->parsed()) {
      cons.ns = parse_list<std::size_t>(c_ns, to_u64);
      cons.ts = parse_list<std::size_t>(c_ts, to_u64);
      cons.seeds = parse_list<std::uint64_t>(c_seeds, to_u64);
      cons.algorithm = parse_algorithm(c_algo);
      cons.affinity = affinity_from(c_damping, c_pref, 1000);
      cons.threads = threads;
      if (!c_out.empty()) cons.out_csv = c_out;
      const auto rows = cmd_consistency(cons);
      if (c_out.empty()) std::cout << consistency_csv(rows);
    } else if (stability_cmd->parsed()) {
      stab.methods = parse_list<StabilityMethod>(s_methods, StabilityMethod::parse);
      stab.affinity = affinity_from(s_damping, s_pref, 1000);
      stab.threads = threads;
      if (!s_out.empty()) stab.out_json = s_out;
      cmd_stability(stab);
    }
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  return 0;
}
