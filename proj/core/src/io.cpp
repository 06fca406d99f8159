#include "gnpr/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "gnpr/error.hpp"

namespace gnpr::io {

namespace {

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  for (char c : line) {
    if (c == ',') {
      cells.push_back(std::move(cell));
      cell.clear();
    } else if (c != '\r') {
      cell.push_back(c);
    }
  }
  cells.push_back(std::move(cell));
  return cells;
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

bool parse_real(const std::string& raw, double& value) {
  const std::string s = trim(raw);
  if (s.empty()) return false;
  const char* begin = s.data();
  if (*begin == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, s.data() + s.size(), value);
  return ec == std::errc() && ptr == s.data() + s.size();
}

double require_real(const std::string& raw, std::size_t line, std::size_t column) {
  double value = 0.0;
  if (!parse_real(raw, value) || !std::isfinite(value))
    throw ValidationError("non-numeric cell '" + raw + "' at line " + std::to_string(line) +
                          ", column " + std::to_string(column + 1));
  return value;
}

bool is_missing(const std::string& raw) {
  const std::string s = trim(raw);
  return s.empty() || s == "NA" || s == "NaN" || s == "nan" || s == "null";
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return in;
}

template <typename WriteFn>
void write_file(const std::filesystem::path& path, WriteFn&& write) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  write(out);
  out.flush();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

bool next_line(std::istream& in, std::string& line) {
  while (std::getline(in, line)) {
    if (!trim(line).empty() && trim(line) != "\r") return true;
  }
  return false;
}

std::vector<std::string> read_header(std::istream& in, const char* what) {
  std::string line;
  if (!next_line(in, line)) throw ValidationError(std::string(what) + " file is empty");
  auto ids = split_row(line);
  for (auto& id : ids) id = trim(id);
  return ids;
}

}  // namespace

std::string format_real(double value) {
  char buf[32];
  const int len = std::snprintf(buf, sizeof buf, "%.17g", value == 0.0 ? 0.0 : value);
  return std::string(buf, static_cast<std::size_t>(len));
}

void write_panel(std::ostream& out, const Panel& panel) {
  const auto& ids = panel.series_ids();
  for (std::size_t i = 0; i < ids.size(); ++i) out << (i ? "," : "") << ids[i];
  out << '\n';
  for (std::size_t t = 0; t < panel.length(); ++t) {
    for (std::size_t i = 0; i < panel.series_count(); ++i)
      out << (i ? "," : "") << format_real(panel.at(i, t));
    out << '\n';
  }
}

void write_panel(const std::filesystem::path& path, const Panel& panel) {
  write_file(path, [&](std::ostream& out) { write_panel(out, panel); });
}

Panel read_panel(std::istream& in) {
  const auto ids = read_header(in, "panel");
  std::vector<std::vector<double>> columns(ids.size());
  std::string line;
  std::size_t line_no = 1;
  while (next_line(in, line)) {
    ++line_no;
    const auto cells = split_row(line);
    if (cells.size() != ids.size())
      throw ValidationError("panel line " + std::to_string(line_no) + " has " +
                            std::to_string(cells.size()) + " cells, expected " +
                            std::to_string(ids.size()));
    for (std::size_t i = 0; i < cells.size(); ++i)
      columns[i].push_back(require_real(cells[i], line_no, i));
  }
  const std::size_t len = columns.empty() ? 0 : columns.front().size();
  std::vector<double> values;
  values.reserve(ids.size() * len);
  for (const auto& c : columns) values.insert(values.end(), c.begin(), c.end());
  return Panel(std::move(values), len, ids);
}

Panel read_panel(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_panel(in);
}

PriceTable read_prices(std::istream& in) {
  PriceTable table;
  table.ids = read_header(in, "price");
  std::string line;
  std::size_t line_no = 1;
  while (next_line(in, line)) {
    ++line_no;
    const auto cells = split_row(line);
    if (cells.size() != table.ids.size())
      throw ValidationError("price line " + std::to_string(line_no) + " has " +
                            std::to_string(cells.size()) + " cells, expected " +
                            std::to_string(table.ids.size()));
    std::vector<double> row(cells.size());
    bool complete = true;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (is_missing(cells[i])) {
        complete = false;
        continue;
      }
      row[i] = require_real(cells[i], line_no, i);
    }
    if (complete)
      table.rows.push_back(std::move(row));
    else
      ++table.dropped_rows;
  }
  return table;
}

PriceTable read_prices(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_prices(in);
}

Panel prices_to_panel(const PriceTable& prices, bool with_diff) {
  if (prices.rows.size() < 3)
    throw ValidationError("need at least 3 complete price rows, got " +
                          std::to_string(prices.rows.size()));
  const std::size_t n = prices.ids.size();
  const std::size_t len = with_diff ? prices.rows.size() - 1 : prices.rows.size();
  std::vector<double> values(n * len);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t t = 0; t < len; ++t)
      values[i * len + t] =
          with_diff ? prices.rows[t + 1][i] - prices.rows[t][i] : prices.rows[t][i];
  return Panel(std::move(values), len, prices.ids);
}

void write_distance_matrix(std::ostream& out, const DistanceMatrix& d) {
  const auto& ids = d.series_ids();
  out << to_string(d.kind());
  for (const auto& id : ids) out << ',' << id;
  out << '\n';
  for (std::size_t i = 0; i < d.size(); ++i) {
    out << ids[i];
    for (std::size_t j = 0; j < d.size(); ++j) out << ',' << format_real(d(i, j));
    out << '\n';
  }
}

void write_distance_matrix(const std::filesystem::path& path, const DistanceMatrix& d) {
  write_file(path, [&](std::ostream& out) { write_distance_matrix(out, d); });
}

DistanceMatrix read_distance_matrix(std::istream& in) {
  auto header = read_header(in, "distance matrix");
  const DistanceKind kind = parse_distance_kind(header.front());
  std::vector<std::string> ids(header.begin() + 1, header.end());
  DistanceMatrix d(ids.size(), kind, ids);
  std::vector<double> raw(ids.size() * ids.size());
  std::string line;
  std::size_t row = 0;
  while (next_line(in, line)) {
    const auto cells = split_row(line);
    if (row >= ids.size() || cells.size() != ids.size() + 1 || trim(cells[0]) != ids[row])
      throw ValidationError("distance matrix row " + std::to_string(row + 1) + " is malformed");
    for (std::size_t j = 0; j < ids.size(); ++j) raw[row * ids.size() + j] = require_real(cells[j + 1], row + 2, j + 1);
    ++row;
  }
  if (row != ids.size()) throw ValidationError("distance matrix is not square");
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (raw[i * ids.size() + i] != 0.0)
      throw ValidationError("distance matrix diagonal entry " + std::to_string(i) + " is not 0");
    for (std::size_t j = i + 1; j < ids.size(); ++j) {
      if (raw[i * ids.size() + j] != raw[j * ids.size() + i])
        throw ValidationError("distance matrix is not symmetric");
      d.set(i, j, raw[i * ids.size() + j]);
    }
  }
  d.validate();
  return d;
}

DistanceMatrix read_distance_matrix(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_distance_matrix(in);
}

void write_partition(std::ostream& out, const std::vector<std::string>& ids, const Partition& p) {
  if (ids.size() != p.size()) throw ValidationError("partition and id list differ in length");
  out << "series_id,label\n";
  for (std::size_t i = 0; i < ids.size(); ++i) out << ids[i] << ',' << p.labels[i] << '\n';
}

void write_partition(const std::filesystem::path& path, const std::vector<std::string>& ids,
                     const Partition& p) {
  write_file(path, [&](std::ostream& out) { write_partition(out, ids, p); });
}

LabeledIds read_partition(std::istream& in) {
  const auto header = read_header(in, "partition");
  if (header.size() != 2 || header[0] != "series_id" || header[1] != "label")
    throw ValidationError("partition header must be 'series_id,label'");
  LabeledIds out;
  std::vector<int> labels;
  std::string line;
  std::size_t line_no = 1;
  while (next_line(in, line)) {
    ++line_no;
    const auto cells = split_row(line);
    int label = 0;
    const std::string text = cells.size() == 2 ? trim(cells[1]) : std::string();
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), label);
    if (cells.size() != 2 || ec != std::errc() || ptr != text.data() + text.size() || label < 0)
      throw ValidationError("partition line " + std::to_string(line_no) + " is malformed");
    out.ids.push_back(trim(cells[0]));
    labels.push_back(label);
  }
  int max_label = -1;
  for (int l : labels) max_label = std::max(max_label, l);
  out.partition.labels = std::move(labels);
  out.partition.cluster_count = max_label + 1;
  return out;
}

LabeledIds read_partition(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_partition(in);
}

Partition align_partition(const LabeledIds& labels, const std::vector<std::string>& ids) {
  if (labels.ids.size() != ids.size())
    throw ValidationError("label file has " + std::to_string(labels.ids.size()) +
                          " entries for " + std::to_string(ids.size()) + " series");
  std::unordered_map<std::string, int> lookup;
  for (std::size_t i = 0; i < labels.ids.size(); ++i) lookup[labels.ids[i]] = labels.partition.labels[i];
  Partition out;
  out.cluster_count = labels.partition.cluster_count;
  for (const auto& id : ids) {
    auto it = lookup.find(id);
    if (it == lookup.end()) throw ValidationError("no label for series '" + id + "'");
    out.labels.push_back(it->second);
  }
  return out;
}

void write_dendrogram(std::ostream& out, const Dendrogram& tree) {
  out << "step,first,second,height,size\n";
  for (std::size_t s = 0; s < tree.merges.size(); ++s) {
    const auto& m = tree.merges[s];
    out << s << ',' << m.first << ',' << m.second << ',' << format_real(m.height) << ',' << m.size
        << '\n';
  }
}

void write_dendrogram(const std::filesystem::path& path, const Dendrogram& tree) {
  write_file(path, [&](std::ostream& out) { write_dendrogram(out, tree); });
}

nlohmann::json to_json(const Distribution& dist) {
  switch (dist.family) {
    case Distribution::Family::normal:
      return {{"family", "normal"}, {"mean", dist.mean}, {"stddev", dist.stddev}};
    case Distribution::Family::laplace:
      return {{"family", "laplace"}};
    case Distribution::Family::student_t3_scaled:
      return {{"family", "student_t3_scaled"}};
  }
  throw ValidationError("unknown distribution family");
}

Distribution distribution_from_json(const nlohmann::json& j) {
  try {
    const auto family = j.at("family").get<std::string>();
    if (family == "normal")
      return Distribution::normal(j.value("mean", 0.0), j.value("stddev", 1.0));
    if (family == "laplace") return Distribution::laplace();
    if (family == "student_t3_scaled") return Distribution::student_t3_scaled();
    throw ValidationError("unknown distribution family '" + family + "'");
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed distribution: ") + e.what());
  }
}

nlohmann::json to_json(const SyntheticSpec& spec, std::uint64_t seed) {
  nlohmann::json j;
  if (spec.name) j["name"] = *spec.name;
  j["N"] = spec.n;
  j["T"] = spec.t;
  j["K"] = spec.k;
  j["D"] = spec.d;
  j["beta"] = spec.beta;
  j["factor_dist"] = to_json(spec.factor_dist);
  j["noise_dists"] = nlohmann::json::array();
  for (const auto& dist : spec.noise_dists) j["noise_dists"].push_back(to_json(dist));
  j["seed"] = seed;
  return j;
}

SeededSpec spec_from_json(const nlohmann::json& j) {
  SeededSpec out;
  try {
    if (j.contains("name")) out.spec.name = j.at("name").get<std::string>();
    out.spec.n = j.at("N").get<std::size_t>();
    out.spec.t = j.at("T").get<std::size_t>();
    out.spec.k = j.at("K").get<std::size_t>();
    out.spec.d = j.at("D").get<std::size_t>();
    out.spec.beta = j.at("beta").get<double>();
    out.spec.factor_dist = distribution_from_json(j.at("factor_dist"));
    for (const auto& dist : j.at("noise_dists")) out.spec.noise_dists.push_back(distribution_from_json(dist));
    out.seed = j.value("seed", std::uint64_t{0});
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed synthetic spec: ") + e.what());
  }
  out.spec.validate();
  return out;
}

nlohmann::json read_json(const std::filesystem::path& path) {
  auto in = open_in(path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError("invalid JSON in '" + path.string() + "': " + e.what());
  }
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  write_file(path, [&](std::ostream& out) { out << j.dump(2) << '\n'; });
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  write_file(path, [&](std::ostream& out) { out << text; });
}

}  // namespace gnpr::io
