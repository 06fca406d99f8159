#include "gnpr/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "gnpr/error.hpp"
#include "gnpr/parallel.hpp"

namespace gnpr {

namespace {

void require_same_length(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size())
    throw ValidationError("series lengths differ: " + std::to_string(x.size()) + " vs " +
                          std::to_string(y.size()));
}

void require_gaussian(const GaussianParams& g) {
  if (!(g.stddev > 0.0) || !std::isfinite(g.stddev) || !std::isfinite(g.mean))
    throw ValidationError("Gaussian standard deviation must be positive and finite");
}

void require_correlation(double rho) {
  if (!(rho >= -1.0 && rho <= 1.0)) throw ValidationError("correlation must lie in [-1, 1]");
}

double hellinger_sq_from_roots(std::span<const double> root_p, std::span<const double> root_q) {
  double sum = 0.0;
  for (std::size_t k = 0; k < root_p.size(); ++k) {
    const double diff = root_p[k] - root_q[k];
    sum += diff * diff;
  }
  return std::min(1.0, 0.5 * sum);
}

std::vector<double> sqrt_masses(const BinnedDensity& density) {
  std::vector<double> roots(density.masses.size());
  std::transform(density.masses.begin(), density.masses.end(), roots.begin(),
                 [](double m) { return std::sqrt(m); });
  return roots;
}

double combine(double dep_sq, double dist_sq, double theta) {
  return std::sqrt(theta * dep_sq + (1.0 - theta) * dist_sq);
}

// Fills the upper triangle row by row; every entry depends only on (i, j).
template <typename PairFn>
DistanceMatrix fill_matrix(std::size_t n, DistanceKind kind, std::vector<std::string> ids,
                           std::size_t threads, PairFn&& pair) {
  DistanceMatrix out(n, kind, std::move(ids));
  parallel_for(n, threads, [&](std::size_t i) {
    for (std::size_t j = i + 1; j < n; ++j) out.set(i, j, pair(i, j));
  });
  return out;
}

}  // namespace

ThetaWeight::ThetaWeight(double theta) : theta_(theta) {
  if (!(theta >= 0.0 && theta <= 1.0)) throw ValidationError("theta must lie in [0, 1]");
}

std::string_view to_string(DistanceKind kind) {
  switch (kind) {
    case DistanceKind::gnpr: return "gnpr";
    case DistanceKind::gpr: return "gpr";
    case DistanceKind::l2: return "l2";
    case DistanceKind::pearson: return "pearson";
  }
  return "unknown";
}

DistanceKind parse_distance_kind(std::string_view name) {
  for (auto kind : {DistanceKind::gnpr, DistanceKind::gpr, DistanceKind::l2, DistanceKind::pearson})
    if (to_string(kind) == name) return kind;
  throw ValidationError("unknown distance kind '" + std::string(name) + "'");
}

DistanceMatrix::DistanceMatrix(std::size_t n, DistanceKind kind, std::vector<std::string> ids)
    : n_(n), kind_(kind), ids_(std::move(ids)), values_(n * n, 0.0) {
  if (ids_.size() != n) throw ValidationError("distance matrix needs one id per row");
}

void DistanceMatrix::validate(double tol) const {
  const bool bounded = kind_ == DistanceKind::gnpr || kind_ == DistanceKind::gpr;
  for (std::size_t i = 0; i < n_; ++i) {
    if ((*this)(i, i) != 0.0)
      throw ValidationError("distance matrix diagonal entry " + std::to_string(i) + " is not 0");
    for (std::size_t j = 0; j < n_; ++j) {
      const double v = (*this)(i, j);
      if (!std::isfinite(v)) throw ValidationError("distance matrix holds a non-finite entry");
      if (std::abs(v - (*this)(j, i)) > tol)
        throw ValidationError("distance matrix is not symmetric at (" + std::to_string(i) + ", " +
                              std::to_string(j) + ")");
      if (bounded && (v < 0.0 || v > 1.0))
        throw ValidationError("distance matrix entry outside [0, 1]");
    }
  }
}

double dep_distance_sq(std::span<const double> ranks_x, std::span<const double> ranks_y) {
  require_same_length(ranks_x, ranks_y);
  const double t = static_cast<double>(ranks_x.size());
  if (ranks_x.size() < 2) throw ValidationError("rank vectors need at least 2 entries");
  double sum = 0.0;
  for (std::size_t k = 0; k < ranks_x.size(); ++k) {
    const double diff = ranks_x[k] - ranks_y[k];
    sum += diff * diff;
  }
  return 3.0 * sum / (t * (t * t - 1.0));
}

double dist_distance_sq(const BinnedDensity& p, const BinnedDensity& q) {
  if (!(p.grid == q.grid) || p.masses.size() != q.masses.size())
    throw ValidationError("densities are defined on different grids");
  return hellinger_sq_from_roots(sqrt_masses(p), sqrt_masses(q));
}

double gnpr_distance(const GnprRepresentation& repr, std::size_t i, std::size_t j,
                     ThetaWeight theta) {
  const std::size_t n = repr.series_count();
  if (i >= n || j >= n)
    throw ValidationError("series index out of range (N=" + std::to_string(n) + ")");
  if (i == j) return 0.0;
  const double dep = dep_distance_sq(repr.ranks.raw(i), repr.ranks.raw(j));
  const double dist = dist_distance_sq(repr.densities[i], repr.densities[j]);
  return combine(dep, dist, theta.value());
}

DistanceMatrix distance_matrix(const GnprRepresentation& repr, ThetaWeight theta,
                               std::size_t threads) {
  const std::size_t n = repr.series_count();
  std::vector<std::vector<double>> roots(n);
  parallel_for(n, threads, [&](std::size_t i) { roots[i] = sqrt_masses(repr.densities[i]); });

  std::vector<std::string> ids = repr.series_ids;
  if (ids.size() != n) {
    ids.resize(n);
    for (std::size_t i = 0; i < n; ++i) ids[i] = "s" + std::to_string(i);
  }
  const double w = theta.value();
  return fill_matrix(n, DistanceKind::gnpr, std::move(ids), threads, [&](std::size_t i, std::size_t j) {
    const double dep = dep_distance_sq(repr.ranks.raw(i), repr.ranks.raw(j));
    const double dist = hellinger_sq_from_roots(roots[i], roots[j]);
    return combine(dep, dist, w);
  });
}

Embedding gnpr_embedding(const GnprRepresentation& repr, ThetaWeight theta) {
  const double t = static_cast<double>(repr.length());
  const double w = theta.value();
  const double rank_scale = std::sqrt(3.0 * w / (t * (t * t - 1.0)));
  const double mass_scale = std::sqrt((1.0 - w) / 2.0);

  Embedding out;
  out.theta = w;
  out.rows.resize(repr.series_count());
  for (std::size_t i = 0; i < repr.series_count(); ++i) {
    auto& row = out.rows[i];
    row.reserve(repr.length() + repr.grid.bin_count);
    for (double r : repr.ranks.raw(i)) row.push_back(rank_scale * r);
    for (double m : repr.densities[i].masses) row.push_back(mass_scale * std::sqrt(m));
  }
  return out;
}

double gpr_gaussian_distance(const GaussianParams& x, const GaussianParams& y,
                             double spearman_rho, ThetaWeight theta) {
  require_gaussian(x);
  require_gaussian(y);
  require_correlation(spearman_rho);
  const double var_sum = x.stddev * x.stddev + y.stddev * y.stddev;
  const double mean_gap = x.mean - y.mean;
  const double affinity =
      std::sqrt(2.0 * x.stddev * y.stddev / var_sum) * std::exp(-0.25 * mean_gap * mean_gap / var_sum);
  const double dist_sq = std::clamp(1.0 - affinity, 0.0, 1.0);
  const double dep_sq = (1.0 - spearman_rho) / 2.0;
  return combine(dep_sq, dist_sq, theta.value());
}

double pearson_to_spearman_gaussian(double rho) {
  require_correlation(rho);
  return 6.0 / std::numbers::pi * std::asin(rho / 2.0);
}

double l2_gaussian_closed_form(const GaussianParams& x, const GaussianParams& y, double rho) {
  require_gaussian(x);
  require_gaussian(y);
  require_correlation(rho);
  const double mean_gap = x.mean - y.mean;
  const double sd_gap = x.stddev - y.stddev;
  return mean_gap * mean_gap + sd_gap * sd_gap + 2.0 * x.stddev * y.stddev * (1.0 - rho);
}

double l2_distance_empirical(std::span<const double> x, std::span<const double> y) {
  require_same_length(x, y);
  if (x.empty()) throw ValidationError("series must not be empty");
  double sum = 0.0;
  for (std::size_t t = 0; t < x.size(); ++t) {
    const double diff = x[t] - y[t];
    sum += diff * diff;
  }
  return sum / static_cast<double>(x.size());
}

double pearson_correlation(std::span<const double> x, std::span<const double> y) {
  require_same_length(x, y);
  if (x.size() < 2) throw ValidationError("correlation needs at least 2 observations");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t t = 0; t < x.size(); ++t) {
    mx += x[t];
    my += y[t];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t t = 0; t < x.size(); ++t) {
    const double dx = x[t] - mx;
    const double dy = y[t] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0)
    throw ValidationError("correlation is undefined for a zero-variance series");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double pearson_distance(std::span<const double> x, std::span<const double> y) {
  return (1.0 - pearson_correlation(x, y)) / 2.0;
}

GaussianParams fit_gaussian(std::span<const double> series) {
  if (series.size() < 2) throw ValidationError("need at least 2 observations to fit a Gaussian");
  const double n = static_cast<double>(series.size());
  double mean = 0.0;
  for (double v : series) mean += v;
  mean /= n;
  double ss = 0.0;
  for (double v : series) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / (n - 1.0))};
}

DistanceMatrix panel_distance_matrix(const Panel& panel, DistanceKind kind, ThetaWeight theta,
                                     std::size_t bin_count, std::size_t threads) {
  const std::size_t n = panel.series_count();
  switch (kind) {
    case DistanceKind::gnpr:
      return distance_matrix(build_representation(panel, bin_count, threads), theta, threads);
    case DistanceKind::gpr: {
      const RankMatrix ranks = empirical_margins(panel, threads);
      std::vector<GaussianParams> fits(n);
      for (std::size_t i = 0; i < n; ++i) {
        fits[i] = fit_gaussian(panel.series(i));
        if (!(fits[i].stddev > 0.0))
          throw ValidationError("gpr distance needs non-constant series; '" +
                                panel.series_ids()[i] + "' is constant");
      }
      return fill_matrix(n, kind, panel.series_ids(), threads, [&](std::size_t i, std::size_t j) {
        const double rho_s = std::clamp(1.0 - 2.0 * dep_distance_sq(ranks.raw(i), ranks.raw(j)), -1.0, 1.0);
        return gpr_gaussian_distance(fits[i], fits[j], rho_s, theta);
      });
    }
    case DistanceKind::l2:
      return fill_matrix(n, kind, panel.series_ids(), threads, [&](std::size_t i, std::size_t j) {
        return l2_distance_empirical(panel.series(i), panel.series(j));
      });
    case DistanceKind::pearson:
      return fill_matrix(n, kind, panel.series_ids(), threads, [&](std::size_t i, std::size_t j) {
        return pearson_distance(panel.series(i), panel.series(j));
      });
  }
  throw ValidationError("unsupported distance kind");
}

Embedding baseline_embedding(const Panel& panel, DistanceKind kind) {
  const double t = static_cast<double>(panel.length());
  Embedding out;
  out.rows.resize(panel.series_count());
  for (std::size_t i = 0; i < panel.series_count(); ++i) {
    const auto s = panel.series(i);
    auto& row = out.rows[i];
    row.assign(s.begin(), s.end());
    if (kind == DistanceKind::l2) {
      const double scale = 1.0 / std::sqrt(t);
      for (double& v : row) v *= scale;
    } else if (kind == DistanceKind::pearson) {
      double mean = 0.0;
      for (double v : row) mean += v;
      mean /= t;
      double ss = 0.0;
      for (double v : row) ss += (v - mean) * (v - mean);
      if (ss == 0.0)
        throw ValidationError("pearson embedding needs non-constant series; '" +
                              panel.series_ids()[i] + "' is constant");
      // |z_x - z_y|^2 = 2 (1 - rho) for unit-norm centered rows, so z / 2 gives (1 - rho) / 2.
      const double scale = 1.0 / (2.0 * std::sqrt(ss));
      for (double& v : row) v = (v - mean) * scale;
    } else {
      throw ValidationError("no baseline embedding for distance kind '" +
                            std::string(to_string(kind)) + "'");
    }
  }
  return out;
}

}  // namespace gnpr
