#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gnpr/panel.hpp"
#include "gnpr/repr.hpp"

namespace gnpr {

/// Weight of the dependence term; validated to lie in [0, 1].
class ThetaWeight {
 public:
  explicit ThetaWeight(double theta);
  double value() const { return theta_; }

 private:
  double theta_;
};

enum class DistanceKind { gnpr, gpr, l2, pearson };

std::string_view to_string(DistanceKind kind);
DistanceKind parse_distance_kind(std::string_view name);

/// Dense symmetric N x N matrix with an exactly zero diagonal.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  DistanceMatrix(std::size_t n, DistanceKind kind, std::vector<std::string> ids);

  std::size_t size() const { return n_; }
  DistanceKind kind() const { return kind_; }
  const std::vector<std::string>& series_ids() const { return ids_; }

  double operator()(std::size_t i, std::size_t j) const { return values_[i * n_ + j]; }
  /// Sets both (i, j) and (j, i).
  void set(std::size_t i, std::size_t j, double value) {
    values_[i * n_ + j] = value;
    values_[j * n_ + i] = value;
  }
  const std::vector<double>& values() const { return values_; }

  /// Checks symmetry (within tol), zero diagonal and, for gnpr/gpr, the [0, 1]
  /// range. Throws ValidationError describing the first violation.
  void validate(double tol = 1e-12) const;

  bool operator==(const DistanceMatrix&) const = default;

 private:
  std::size_t n_ = 0;
  DistanceKind kind_ = DistanceKind::gnpr;
  std::vector<std::string> ids_;
  std::vector<double> values_;
};

struct GaussianParams {
  double mean = 0.0;
  double stddev = 1.0;
};

/// Rows whose squared Euclidean distances reproduce a distance of interest.
struct Embedding {
  std::vector<std::vector<double>> rows;
  double theta = 0.0;

  std::size_t size() const { return rows.size(); }
  std::size_t dimension() const { return rows.empty() ? 0 : rows.front().size(); }
};

// -- empirical GNPR distance ------------------------------------------------

/// Dependence term d1^2 = 3 / (T (T^2 - 1)) * sum_t (rx_t - ry_t)^2 on raw
/// (unnormalized) ranks.
double dep_distance_sq(std::span<const double> ranks_x, std::span<const double> ranks_y);

/// Hellinger term d0^2 = 1/2 * sum_k (sqrt p_k - sqrt q_k)^2, clamped to [0, 1].
double dist_distance_sq(const BinnedDensity& p, const BinnedDensity& q);

double gnpr_distance(const GnprRepresentation& repr, std::size_t i, std::size_t j,
                     ThetaWeight theta);

/// All pairs of d_theta. Bit-identical for every thread count.
DistanceMatrix distance_matrix(const GnprRepresentation& repr, ThetaWeight theta,
                               std::size_t threads = 1);

/// Coordinates e_i such that |e_i - e_j|^2 = d_theta^2(i, j).
Embedding gnpr_embedding(const GnprRepresentation& repr, ThetaWeight theta);

// -- Gaussian closed forms --------------------------------------------------

double gpr_gaussian_distance(const GaussianParams& x, const GaussianParams& y,
                             double spearman_rho, ThetaWeight theta);

/// rho_S = 6/pi * asin(rho/2) for a bivariate Gaussian.
double pearson_to_spearman_gaussian(double rho);

/// E[(X - Y)^2] for a bivariate Gaussian with correlation rho.
double l2_gaussian_closed_form(const GaussianParams& x, const GaussianParams& y, double rho);

// -- baselines ----------------------------------------------------------------

/// Sample mean of squared differences.
double l2_distance_empirical(std::span<const double> x, std::span<const double> y);

double pearson_correlation(std::span<const double> x, std::span<const double> y);

/// (1 - rho) / 2 with rho the sample Pearson correlation.
double pearson_distance(std::span<const double> x, std::span<const double> y);

/// Sample mean and (T-1)-normalized standard deviation.
GaussianParams fit_gaussian(std::span<const double> series);

/// Matrix of the requested kind over all series of `panel`. theta and
/// bin_count are ignored by l2 and pearson.
DistanceMatrix panel_distance_matrix(const Panel& panel, DistanceKind kind, ThetaWeight theta,
                                     std::size_t bin_count = kDefaultBinCount,
                                     std::size_t threads = 1);

/// Coordinates for k-means under a baseline distance: for l2, squared
/// Euclidean distance equals the l2 entry; for pearson, the pearson entry.
Embedding baseline_embedding(const Panel& panel, DistanceKind kind);

}  // namespace gnpr
