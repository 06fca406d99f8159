#include <limits>

#include "gnpr/cluster.hpp"
#include "gnpr/error.hpp"
#include "gnpr/rng.hpp"

namespace gnpr {

namespace {

using Point = std::vector<double>;

double squared_distance(const Point& a, const Point& b) {
  double sum = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double diff = a[k] - b[k];
    sum += diff * diff;
  }
  return sum;
}

std::vector<Point> seed_centers(const std::vector<Point>& rows, std::size_t q, Rng& rng) {
  const std::size_t n = rows.size();
  std::vector<Point> centers;
  centers.reserve(q);
  centers.push_back(rows[rng.below(n)]);

  std::vector<double> nearest(n);
  for (std::size_t i = 0; i < n; ++i) nearest[i] = squared_distance(rows[i], centers[0]);
  while (centers.size() < q) {
    double total = 0.0;
    for (double v : nearest) total += v;
    std::size_t pick = n - 1;
    if (total > 0.0) {
      const double target = rng.uniform() * total;
      double running = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        running += nearest[i];
        if (running > target) {
          pick = i;
          break;
        }
      }
    } else {
      pick = rng.below(n);
    }
    centers.push_back(rows[pick]);
    for (std::size_t i = 0; i < n; ++i)
      nearest[i] = std::min(nearest[i], squared_distance(rows[i], centers.back()));
  }
  return centers;
}

struct LloydRun {
  std::vector<int> assignment;
  double inertia = 0.0;
  std::vector<double> trace;
};

LloydRun lloyd(const std::vector<Point>& rows, std::vector<Point> centers, std::size_t max_iter) {
  const std::size_t n = rows.size();
  const std::size_t q = centers.size();
  const std::size_t dim = rows.front().size();
  LloydRun run;
  run.assignment.assign(n, -1);

  for (std::size_t iter = 0; iter < max_iter; ++iter) {
    bool changed = false;
    double inertia = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      int best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < q; ++c) {
        const double dist = squared_distance(rows[i], centers[c]);
        if (dist < best_d) {
          best_d = dist;
          best = static_cast<int>(c);
        }
      }
      inertia += best_d;
      if (run.assignment[i] != best) {
        run.assignment[i] = best;
        changed = true;
      }
    }
    run.trace.push_back(inertia);
    if (!changed) break;

    std::vector<Point> sums(q, Point(dim, 0.0));
    std::vector<std::size_t> counts(q, 0);
    for (std::size_t i = 0; i < n; ++i) {
      const auto c = static_cast<std::size_t>(run.assignment[i]);
      ++counts[c];
      for (std::size_t k = 0; k < dim; ++k) sums[c][k] += rows[i][k];
    }
    // an emptied cluster keeps its previous center
    for (std::size_t c = 0; c < q; ++c) {
      if (counts[c] == 0) continue;
      for (std::size_t k = 0; k < dim; ++k)
        centers[c][k] = sums[c][k] / static_cast<double>(counts[c]);
    }
  }

  run.inertia = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    run.inertia += squared_distance(rows[i], centers[static_cast<std::size_t>(run.assignment[i])]);
  return run;
}

}  // namespace

KMeansResult kmeanspp(const Embedding& e, std::size_t q, std::uint64_t seed, std::size_t restarts,
                      std::size_t max_iter) {
  const std::size_t n = e.size();
  if (q < 1 || q > n)
    throw ValidationError("cluster count " + std::to_string(q) + " must lie in [1, " +
                          std::to_string(n) + "]");
  if (restarts < 1) throw ValidationError("restarts must be at least 1");
  if (max_iter < 1) throw ValidationError("max_iter must be at least 1");
  for (const auto& row : e.rows)
    if (row.size() != e.dimension()) throw ValidationError("embedding rows differ in length");

  Rng rng(seed);
  KMeansResult best;
  best.inertia = std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < restarts; ++r) {
    auto run = lloyd(e.rows, seed_centers(e.rows, q, rng), max_iter);
    if (run.inertia < best.inertia) {
      best.inertia = run.inertia;
      best.best_restart = r;
      best.partition = canonical(run.assignment);
      best.inertia_trace = std::move(run.trace);
    }
  }
  return best;
}

}  // namespace gnpr
