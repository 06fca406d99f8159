#pragma once

// Test-only reference computations. Each one takes a different route from the
// library code it checks (counting instead of sorting, pair enumeration instead
// of contingency tables, quadrature instead of closed forms).

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <numeric>
#include <vector>

#include "gnpr/partition.hpp"

namespace oracle {

/// Average rank by counting: 1 + #{smaller} + (#{equal} - 1) / 2. O(T^2).
inline std::vector<double> counting_ranks(const std::vector<double>& x) {
  std::vector<double> r(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    double less = 0, equal = 0;
    for (double y : x) {
      if (y < x[i]) ++less;
      if (y == x[i]) ++equal;
    }
    r[i] = 1.0 + less + (equal - 1.0) / 2.0;
  }
  return r;
}

/// Spearman correlation as the Pearson correlation of counting ranks.
inline double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  const auto rx = counting_ranks(x);
  const auto ry = counting_ranks(y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t t = 0; t < rx.size(); ++t) {
    sxy += (rx[t] - mx) * (ry[t] - my);
    sxx += (rx[t] - mx) * (rx[t] - mx);
    syy += (ry[t] - my) * (ry[t] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

/// Composite Simpson rule on [a, b] with an even number of panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int panels) {
  const double h = (b - a) / panels;
  double sum = f(a) + f(b);
  for (int k = 1; k < panels; ++k) sum += f(a + k * h) * (k % 2 ? 4.0 : 2.0);
  return sum * h / 3.0;
}

inline double normal_pdf(double x, double mu, double sigma) {
  const double z = (x - mu) / sigma;
  return std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * std::numbers::pi));
}

/// Squared Hellinger distance 1 - int sqrt(f g) between two Gaussians.
inline double gaussian_hellinger_sq(double mu_x, double sd_x, double mu_y, double sd_y) {
  const double lo = std::min(mu_x - 40 * sd_x, mu_y - 40 * sd_y);
  const double hi = std::max(mu_x + 40 * sd_x, mu_y + 40 * sd_y);
  const double bc = simpson(
      [&](double x) { return std::sqrt(normal_pdf(x, mu_x, sd_x) * normal_pdf(x, mu_y, sd_y)); },
      lo, hi, 200000);
  return 1.0 - bc;
}

/// ARI from pair counts: a = same/same, b = same/diff, c = diff/same,
/// d = diff/diff; ARI = 2 (ad - bc) / ((a+b)(b+d) + (a+c)(c+d)).
inline double pair_counting_ari(const std::vector<int>& p, const std::vector<int>& q) {
  long long a = 0, b = 0, c = 0, d = 0;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = i + 1; j < p.size(); ++j) {
      const bool sp = p[i] == p[j];
      const bool sq = q[i] == q[j];
      if (sp && sq) ++a;
      else if (sp) ++b;
      else if (sq) ++c;
      else ++d;
    }
  long long num = 2 * (a * d - b * c);
  long long den = (a + b) * (b + d) + (a + c) * (c + d);
  if (den == 0) return 1.0;
  const long long g = std::gcd(num < 0 ? -num : num, den);
  if (g != 0) {
    num /= g;
    den /= g;
  }
  return static_cast<double>(num) / static_cast<double>(den);
}

/// Every partition of {0..n-1} into exactly k non-empty blocks (restricted
/// growth strings).
inline std::vector<std::vector<int>> partitions_into(std::size_t n, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> labels(n, 0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t i, int used) {
    if (i == n) {
      if (used == k) out.push_back(labels);
      return;
    }
    for (int l = 0; l <= std::min(used, k - 1); ++l) {
      labels[i] = l;
      rec(i + 1, std::max(used, l + 1));
    }
  };
  rec(0, 0);
  return out;
}

}  // namespace oracle
