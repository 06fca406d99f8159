#include "gnpr/repr.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <string>

#include "gnpr/error.hpp"
#include "gnpr/parallel.hpp"

namespace gnpr {

std::vector<double> RankMatrix::normalized_row(std::size_t i) const {
  std::vector<double> out(t_);
  for (std::size_t t = 0; t < t_; ++t) out[t] = normalized(i, t);
  return out;
}

std::vector<double> average_ranks(std::span<const double> series) {
  const std::size_t n = series.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return series[a] < series[b]; });

  std::vector<double> ranks(n);
  std::size_t start = 0;
  while (start < n) {
    std::size_t stop = start + 1;
    while (stop < n && series[order[stop]] == series[order[start]]) ++stop;
    // positions start..stop-1 hold 1-based ranks start+1..stop
    const double rank = 0.5 * static_cast<double>(start + 1 + stop);
    for (std::size_t k = start; k < stop; ++k) ranks[order[k]] = rank;
    start = stop;
  }
  return ranks;
}

RankMatrix empirical_margins(const Panel& panel, std::size_t threads) {
  const std::size_t n = panel.series_count();
  const std::size_t len = panel.length();
  std::vector<double> raw(n * len);
  parallel_for(n, threads, [&](std::size_t i) {
    const auto ranks = average_ranks(panel.series(i));
    std::copy(ranks.begin(), ranks.end(), raw.begin() + static_cast<std::ptrdiff_t>(i * len));
  });
  return RankMatrix(std::move(raw), n, len);
}

Grid shared_grid(const Panel& panel, std::size_t bin_count) {
  if (bin_count == 0) throw ValidationError("bin_count must be at least 1");
  const auto [lo, hi] = std::minmax_element(panel.values().begin(), panel.values().end());
  Grid grid;
  grid.origin = *lo;
  grid.bin_count = bin_count;
  grid.bandwidth = *hi > *lo ? (*hi - *lo) / static_cast<double>(bin_count) : 1.0;
  return grid;
}

BinnedDensity histogram_density(std::span<const double> series, const Grid& grid,
                                std::string_view series_label) {
  if (series.empty()) throw ValidationError("cannot build a histogram of an empty series");
  if (!(grid.bandwidth > 0.0) || grid.bin_count == 0)
    throw ValidationError("grid needs a positive bandwidth and at least one bin");

  std::vector<std::size_t> counts(grid.bin_count, 0);
  const double top = grid.origin + static_cast<double>(grid.bin_count) * grid.bandwidth;
  const double edge_slack =
      1e-12 * std::max({1.0, std::abs(top), std::abs(grid.origin)});
  for (double x : series) {
    const double offset = std::floor((x - grid.origin) / grid.bandwidth);
    // Rounding in (max - min) / h can put the pooled maximum on (or a few ulps
    // past) the top edge; that value belongs to the last bin.
    const bool on_top_edge = offset >= static_cast<double>(grid.bin_count) &&
                             x - top <= edge_slack;
    if (offset < 0.0 || (offset >= static_cast<double>(grid.bin_count) && !on_top_edge) ||
        !std::isfinite(x)) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "value " << x << " of " << series_label << " lies outside the grid ["
          << grid.origin << ", " << top << "]";
      throw ValidationError(msg.str());
    }
    const auto k = on_top_edge ? grid.bin_count - 1 : static_cast<std::size_t>(offset);
    ++counts[k];
  }

  BinnedDensity density;
  density.grid = grid;
  density.masses.resize(grid.bin_count);
  const double total = static_cast<double>(series.size());
  for (std::size_t k = 0; k < grid.bin_count; ++k)
    density.masses[k] = static_cast<double>(counts[k]) / total;
  return density;
}

GnprRepresentation build_representation(const Panel& panel, std::size_t bin_count,
                                        std::size_t threads) {
  GnprRepresentation repr;
  repr.ranks = empirical_margins(panel, threads);
  repr.grid = shared_grid(panel, bin_count);
  repr.series_ids = panel.series_ids();
  repr.densities.resize(panel.series_count());
  parallel_for(panel.series_count(), threads, [&](std::size_t i) {
    repr.densities[i] = histogram_density(panel.series(i), repr.grid,
                                          "series '" + panel.series_ids()[i] + "'");
  });
  return repr;
}

}  // namespace gnpr
