#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gnpr/panel.hpp"

namespace gnpr {

/// Per-series ranks. Stored as raw average ranks in [1, T] (half-integers
/// under ties) so rank arithmetic stays exact; normalized() divides by T.
class RankMatrix {
 public:
  RankMatrix() = default;
  RankMatrix(std::vector<double> raw, std::size_t series_count, std::size_t length)
      : raw_(std::move(raw)), n_(series_count), t_(length) {}

  std::size_t series_count() const { return n_; }
  std::size_t length() const { return t_; }

  std::span<const double> raw(std::size_t i) const { return {raw_.data() + i * t_, t_}; }
  double normalized(std::size_t i, std::size_t t) const {
    return raw_[i * t_ + t] / static_cast<double>(t_);
  }
  std::vector<double> normalized_row(std::size_t i) const;

  bool operator==(const RankMatrix&) const = default;

 private:
  std::vector<double> raw_;
  std::size_t n_ = 0;
  std::size_t t_ = 0;
};

/// Histogram grid shared by every series of a panel: bin k covers
/// [origin + k*h, origin + (k+1)*h), the last bin is right-closed.
struct Grid {
  double origin = 0.0;
  double bandwidth = 1.0;
  std::size_t bin_count = 1;

  bool operator==(const Grid&) const = default;
};

struct BinnedDensity {
  std::vector<double> masses;
  Grid grid;

  bool operator==(const BinnedDensity&) const = default;
};

struct GnprRepresentation {
  RankMatrix ranks;
  std::vector<BinnedDensity> densities;
  Grid grid;
  std::vector<std::string> series_ids;

  std::size_t series_count() const { return ranks.series_count(); }
  std::size_t length() const { return ranks.length(); }

  bool operator==(const GnprRepresentation&) const = default;
};

inline constexpr std::size_t kDefaultBinCount = 100;

/// Average ranks (1-based) of one series.
std::vector<double> average_ranks(std::span<const double> series);

/// Empirical copula transform of every series (ties get the average rank).
RankMatrix empirical_margins(const Panel& panel, std::size_t threads = 1);

/// origin = pooled min, h = (max - min) / bin_count, or h = 1 when the panel
/// is constant.
Grid shared_grid(const Panel& panel, std::size_t bin_count);

/// Bin masses of one series on `grid`. Throws ValidationError naming the
/// series label and value when an observation falls outside the grid.
BinnedDensity histogram_density(std::span<const double> series, const Grid& grid,
                                std::string_view series_label = "series");

GnprRepresentation build_representation(const Panel& panel,
                                        std::size_t bin_count = kDefaultBinCount,
                                        std::size_t threads = 1);

}  // namespace gnpr
