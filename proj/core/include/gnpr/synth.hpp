#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gnpr/panel.hpp"
#include "gnpr/partition.hpp"
#include "gnpr/rng.hpp"

namespace gnpr {

/// Marginal law used for factors and idiosyncratic noise.
struct Distribution {
  enum class Family { normal, laplace, student_t3_scaled };

  Family family = Family::normal;
  double mean = 0.0;    // normal only
  double stddev = 1.0;  // normal only

  static Distribution normal(double mean, double stddev) { return {Family::normal, mean, stddev}; }
  /// Laplace(0, 1/sqrt(2)): zero mean, unit variance.
  static Distribution laplace() { return {Family::laplace, 0.0, 1.0}; }
  /// Student t with 3 degrees of freedom divided by sqrt(3): zero mean, unit variance.
  static Distribution student_t3_scaled() { return {Family::student_t3_scaled, 0.0, 1.0}; }

  bool operator==(const Distribution&) const = default;
};

double sample(const Distribution& dist, Rng& rng);

/// Parameters of the factor model X_i = beta * Y_{k(i)} + Z_{d(i), i}.
struct SyntheticSpec {
  std::optional<std::string> name;
  std::size_t n = 0;  // series count
  std::size_t t = 0;  // observations per series
  std::size_t k = 1;  // correlation clusters
  std::size_t d = 1;  // distribution clusters
  double beta = 0.0;
  Distribution factor_dist;
  std::vector<Distribution> noise_dists;

  std::size_t cluster_count() const { return k * d; }
  std::size_t cluster_size() const { return k * d == 0 ? 0 : n / (k * d); }

  /// Throws ValidationError unless N is a positive multiple of K*D, T >= 2,
  /// beta in [0, 1] and there is one noise law per distribution cluster.
  void validate() const;

  bool operator==(const SyntheticSpec&) const = default;
};

struct LabeledPanel {
  Panel panel;
  Partition labels;
};

/// 0-based correlation cluster of 0-based series j, i.e. ceil((j+1) K / N) - 1.
std::size_t factor_cluster(const SyntheticSpec& spec, std::size_t j);
/// 0-based distribution cluster of 0-based series j, i.e. j mod D.
std::size_t noise_cluster(const SyntheticSpec& spec, std::size_t j);

/// Draw order per time step: K factor values, then one noise value per series
/// in series order.
LabeledPanel generate(const SyntheticSpec& spec, std::uint64_t seed);

/// Named test cases "A", "B", "C" and "G" with optional N / T overrides.
SyntheticSpec preset(const std::string& name, std::optional<std::size_t> n = std::nullopt,
                     std::optional<std::size_t> t = std::nullopt);

}  // namespace gnpr
