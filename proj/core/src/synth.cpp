#include "gnpr/synth.hpp"

#include <cmath>
#include <numbers>

#include "gnpr/error.hpp"

namespace gnpr {

double sample(const Distribution& dist, Rng& rng) {
  switch (dist.family) {
    case Distribution::Family::normal:
      return dist.mean + dist.stddev * rng.normal();
    case Distribution::Family::laplace: {
      // inverse cdf with scale 1/sqrt(2)
      const double u = rng.uniform() - 0.5;
      const double magnitude = -std::numbers::sqrt2 / 2.0 * std::log(1.0 - 2.0 * std::abs(u));
      return u < 0.0 ? -magnitude : magnitude;
    }
    case Distribution::Family::student_t3_scaled: {
      // t3 / sqrt(3) = Z / sqrt(chi2_3)
      const double z = rng.normal();
      double chi2 = 0.0;
      for (int k = 0; k < 3; ++k) {
        const double g = rng.normal();
        chi2 += g * g;
      }
      return z / std::sqrt(chi2);
    }
  }
  throw ValidationError("unknown distribution family");
}

void SyntheticSpec::validate() const {
  if (k == 0 || d == 0) throw ValidationError("K and D must be at least 1");
  if (n == 0 || n % (k * d) != 0)
    throw ValidationError("N=" + std::to_string(n) + " is not a positive multiple of K*D=" +
                          std::to_string(k * d));
  if (t < 2) throw ValidationError("T must be at least 2");
  if (!(beta >= 0.0 && beta <= 1.0)) throw ValidationError("beta must lie in [0, 1]");
  if (noise_dists.size() != d)
    throw ValidationError("expected " + std::to_string(d) + " noise distributions, got " +
                          std::to_string(noise_dists.size()));
  auto check = [](const Distribution& dist) {
    if (dist.family == Distribution::Family::normal &&
        (!(dist.stddev > 0.0) || !std::isfinite(dist.stddev) || !std::isfinite(dist.mean)))
      throw ValidationError("normal distribution needs a finite mean and positive stddev");
  };
  check(factor_dist);
  for (const auto& dist : noise_dists) check(dist);
}

std::size_t factor_cluster(const SyntheticSpec& spec, std::size_t j) {
  // ceil(i K / N) with i = j + 1
  return ((j + 1) * spec.k + spec.n - 1) / spec.n - 1;
}

std::size_t noise_cluster(const SyntheticSpec& spec, std::size_t j) { return j % spec.d; }

LabeledPanel generate(const SyntheticSpec& spec, std::uint64_t seed) {
  spec.validate();
  const std::size_t n = spec.n;
  const std::size_t len = spec.t;

  std::vector<std::size_t> factor_of(n), noise_of(n);
  std::vector<int> labels(n);
  for (std::size_t j = 0; j < n; ++j) {
    factor_of[j] = factor_cluster(spec, j);
    noise_of[j] = noise_cluster(spec, j);
    labels[j] = static_cast<int>(factor_of[j] * spec.d + noise_of[j]);
  }

  Rng rng(seed);
  std::vector<double> values(n * len);
  std::vector<double> factors(spec.k);
  for (std::size_t t = 0; t < len; ++t) {
    for (auto& y : factors) y = sample(spec.factor_dist, rng);
    for (std::size_t j = 0; j < n; ++j) {
      const double z = sample(spec.noise_dists[noise_of[j]], rng);
      values[j * len + t] = spec.beta * factors[factor_of[j]] + z;
    }
  }

  std::vector<std::string> ids(n);
  for (std::size_t j = 0; j < n; ++j) ids[j] = "s" + std::to_string(j);

  LabeledPanel out{Panel(std::move(values), len, std::move(ids)), {}};
  out.labels.labels = std::move(labels);
  out.labels.cluster_count = static_cast<int>(spec.cluster_count());
  return out;
}

SyntheticSpec preset(const std::string& name, std::optional<std::size_t> n,
                     std::optional<std::size_t> t) {
  const auto normal01 = Distribution::normal(0.0, 1.0);
  // N(0,2) in the dataset table is variance 2
  const auto normal02 = Distribution::normal(0.0, std::numbers::sqrt2);
  const auto laplace = Distribution::laplace();
  const auto student = Distribution::student_t3_scaled();

  SyntheticSpec spec;
  spec.name = name;
  spec.n = 200;
  spec.t = 5000;
  if (name == "A") {
    spec.k = 1;
    spec.d = 4;
    spec.beta = 0.0;
    spec.factor_dist = normal01;
    spec.noise_dists = {normal01, laplace, student, normal02};
  } else if (name == "B") {
    spec.k = 10;
    spec.d = 1;
    spec.beta = 0.1;
    spec.factor_dist = student;
    spec.noise_dists = {student};
  } else if (name == "C") {
    spec.k = 5;
    spec.d = 2;
    spec.beta = 0.1;
    spec.factor_dist = normal01;
    spec.noise_dists = {normal01, student};
  } else if (name == "G") {
    spec.n = 64;
    spec.t = 500;
    spec.k = 8;
    spec.d = 4;
    spec.beta = 0.1;
    spec.factor_dist = normal01;
    spec.noise_dists = {normal01, normal02, laplace, student};
  } else {
    throw ValidationError("unknown preset '" + name + "' (expected A, B, C or G)");
  }
  if (n) spec.n = *n;
  if (t) spec.t = *t;
  spec.validate();
  return spec;
}

}  // namespace gnpr
