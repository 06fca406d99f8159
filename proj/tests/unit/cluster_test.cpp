#include <doctest.h>

#include <cmath>
#include <limits>

#include "gnpr/cluster.hpp"
#include "gnpr/error.hpp"
#include "gnpr/rng.hpp"
#include "oracles.hpp"

using namespace gnpr;

namespace {

DistanceMatrix from_points(const std::vector<std::vector<double>>& pts, DistanceKind kind = DistanceKind::l2) {
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < pts.size(); ++i) ids.push_back("p" + std::to_string(i));
  DistanceMatrix d(pts.size(), kind, ids);
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      double sq = 0;
      for (std::size_t k = 0; k < pts[i].size(); ++k) sq += std::pow(pts[i][k] - pts[j][k], 2);
      d.set(i, j, std::sqrt(sq));
    }
  return d;
}

std::vector<std::vector<double>> random_points(std::size_t n, std::size_t dim, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::vector<double>> pts(n, std::vector<double>(dim));
  for (auto& p : pts)
    for (auto& v : p) v = rng.normal();
  return pts;
}

Partition labels_of(std::vector<int> l) { return canonical(l); }

}  // namespace

TEST_CASE("canonical relabeling") {
  const auto p = canonical({5, 5, 2, 9, 2});
  CHECK(p.labels == std::vector<int>{0, 0, 1, 2, 1});
  CHECK(p.cluster_count == 3);
  CHECK(cluster_sizes(p) == std::vector<std::size_t>{2, 2, 1});
}

TEST_CASE("ARI hand cases") {
  CHECK(ari(labels_of({0, 0, 1, 1}), labels_of({0, 0, 1, 1})) == 1.0);
  CHECK(ari(labels_of({0, 0, 1, 1}), labels_of({1, 1, 0, 0})) == 1.0);
  CHECK(ari(labels_of({0, 0, 1, 1}), labels_of({0, 1, 0, 1})) == -0.5);
  CHECK(ari(labels_of({0, 1, 2}), labels_of({0, 1, 2})) == 1.0);
  CHECK(ari(labels_of({0, 0, 0}), labels_of({0, 0, 0})) == 1.0);
  CHECK(ari(labels_of({0, 0, 0}), labels_of({0, 1, 2})) == 0.0);
  CHECK_THROWS_AS(ari(labels_of({0, 1}), labels_of({0})), ValidationError);
}

TEST_CASE("ARI matches pair counting, is symmetric and relabeling invariant") {
  Rng rng(8);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng.below(11);
    std::vector<int> a(n), b(n);
    for (auto& v : a) v = static_cast<int>(rng.below(4));
    for (auto& v : b) v = static_cast<int>(rng.below(5));
    const double value = ari(labels_of(a), labels_of(b));
    CHECK(value == oracle::pair_counting_ari(a, b));
    CHECK(value == ari(labels_of(b), labels_of(a)));
    std::vector<int> shifted(a);
    for (auto& v : shifted) v = 7 - 2 * v;
    CHECK(value == ari(Partition{shifted, 8}, labels_of(b)));
  }
}

TEST_CASE("hierarchical clustering basics") {
  const auto d = from_points(random_points(9, 3, 1));
  for (auto linkage : {Linkage::average, Linkage::ward}) {
    CHECK(hc_cluster(d, linkage, 9).partition.cluster_count == 9);
    CHECK(hc_cluster(d, linkage, 1).partition.labels == std::vector<int>(9, 0));
    const auto tree = agglomerate(d, linkage);
    CHECK(tree.merges.size() == 8);
    CHECK(tree.merges.back().size == 9);
    for (std::size_t s = 1; s < tree.merges.size(); ++s)
      CHECK(tree.merges[s].height >= tree.merges[s - 1].height - 1e-12);
  }
  CHECK_THROWS_AS(hc_cluster(d, Linkage::average, 0), ValidationError);
  CHECK_THROWS_AS(hc_cluster(d, Linkage::average, 10), ValidationError);
}

TEST_CASE("four points: hierarchical split matches the brute-force best partition") {
  DistanceMatrix d(4, DistanceKind::gnpr, {"1", "2", "3", "4"});
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = i + 1; j < 4; ++j) d.set(i, j, 0.9);
  d.set(0, 1, 0.1);
  d.set(2, 3, 0.1);

  // brute force: the 2-block partition with the smallest mean within-block distance
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> best_labels;
  for (const auto& labels : oracle::partitions_into(4, 2)) {
    double sum = 0;
    int count = 0;
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = i + 1; j < 4; ++j)
        if (labels[i] == labels[j]) {
          sum += d(i, j);
          ++count;
        }
    if (count > 0 && sum / count < best) {
      best = sum / count;
      best_labels = labels;
    }
  }
  for (auto linkage : {Linkage::average, Linkage::ward}) {
    const auto p = hc_cluster(d, linkage, 2).partition;
    CHECK(p.labels == canonical(best_labels).labels);
    CHECK(p.labels == std::vector<int>{0, 0, 1, 1});
  }
}

TEST_CASE("average linkage merges follow the arithmetic-mean update") {
  // points on a line: 0, 1, 3, 7
  const auto d = from_points({{0}, {1}, {3}, {7}});
  const auto tree = agglomerate(d, Linkage::average);
  CHECK(tree.merges[0].first == 0);
  CHECK(tree.merges[0].second == 1);
  CHECK(tree.merges[0].height == 1.0);
  // {0,1} to 3: mean(3, 2) = 2.5 -> merges with node 4 ({0,1})
  CHECK(tree.merges[1].first == 2);
  CHECK(tree.merges[1].second == 4);
  CHECK(tree.merges[1].height == 2.5);
  // {0,1,3} to 7: mean(7, 6, 4) = 17/3
  CHECK(tree.merges[2].height == doctest::Approx(17.0 / 3.0));
}

TEST_CASE("ward heights equal the variance-increase criterion") {
  // Ward merge height^2 = 2 n_a n_b / (n_a + n_b) |c_a - c_b|^2 on Euclidean input
  const auto d = from_points({{0}, {1}, {3}, {7}});
  const auto tree = agglomerate(d, Linkage::ward);
  CHECK(tree.merges[0].height == doctest::Approx(1.0));
  // {0,1} centroid 0.5 with {3}: 2*2*1/3 * 2.5^2
  CHECK(tree.merges[1].height == doctest::Approx(std::sqrt(2.0 * 2 * 1 / 3 * 6.25)));
  // {0,1,3} centroid 4/3 with {7}: 2*3*1/4 * (17/3)^2
  CHECK(tree.merges[2].height == doctest::Approx(std::sqrt(2.0 * 3 / 4 * std::pow(17.0 / 3, 2))));
}

TEST_CASE("ties break toward the smallest pair index") {
  DistanceMatrix d(4, DistanceKind::gnpr, {"a", "b", "c", "d"});
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = i + 1; j < 4; ++j) d.set(i, j, 0.5);
  const auto tree = agglomerate(d, Linkage::average);
  CHECK(tree.merges[0].first == 0);
  CHECK(tree.merges[0].second == 1);
  CHECK(hc_cluster(d, Linkage::average, 3).partition.labels == std::vector<int>{0, 0, 1, 2});
}

TEST_CASE("k-means++") {
  SUBCASE("identical rows") {
    Embedding e;
    e.rows.assign(6, {1.0, 2.0});
    const auto r = kmeanspp(e, 1, 3, 2);
    CHECK(r.partition.labels == std::vector<int>(6, 0));
    CHECK(r.inertia == 0.0);
  }
  SUBCASE("two separated clouds") {
    Rng rng(4);
    Embedding e;
    std::vector<int> truth;
    for (int i = 0; i < 40; ++i) {
      const double offset = i % 2 ? 100.0 : 0.0;
      e.rows.push_back({offset + 0.1 * rng.normal(), 0.1 * rng.normal()});
      truth.push_back(i % 2);
    }
    const auto r = kmeanspp(e, 2, 11, 3);
    CHECK(ari(r.partition, canonical(truth)) == 1.0);
  }
  SUBCASE("inertia never increases across Lloyd steps and runs are deterministic") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      Embedding e;
      e.rows = random_points(60, 4, seed);
      const auto r = kmeanspp(e, 5, seed, 3);
      for (std::size_t k = 1; k < r.inertia_trace.size(); ++k)
        CHECK(r.inertia_trace[k] <= r.inertia_trace[k - 1] + 1e-12);
      CHECK(r.inertia <= r.inertia_trace.back() + 1e-12);
      CHECK(kmeanspp(e, 5, seed, 3).partition == r.partition);
    }
  }
  Embedding small;
  small.rows = random_points(3, 2, 1);
  CHECK_THROWS_AS(kmeanspp(small, 4, 1, 1), ValidationError);
  CHECK_THROWS_AS(kmeanspp(small, 2, 1, 0), ValidationError);
}

TEST_CASE("affinity propagation") {
  SUBCASE("single point") {
    DistanceMatrix d(1, DistanceKind::gnpr, {"a"});
    const auto r = affinity_propagation(d);
    CHECK(r.partition.labels == std::vector<int>{0});
    CHECK(r.exemplars == std::vector<std::size_t>{0});
  }
  SUBCASE("two groups of identical points") {
    const auto d = from_points({{0}, {0}, {0}, {5}, {5}, {5}});
    const auto r = affinity_propagation(d);
    CHECK(r.converged);
    CHECK(r.partition.labels == std::vector<int>{0, 0, 0, 1, 1, 1});

    // brute force over exemplar sets: maximise sum_i s(i, e(i)) with self-similarity = preference
    double best = -std::numeric_limits<double>::infinity();
    int best_count = 0;
    for (unsigned mask = 1; mask < 64; ++mask) {
      double net = 0;
      int count = 0;
      for (std::size_t i = 0; i < 6; ++i) {
        if (mask & (1u << i)) {
          net += r.preference;
          ++count;
          continue;
        }
        double nearest = -std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < 6; ++k)
          if (mask & (1u << k)) nearest = std::max(nearest, -d(i, k) * d(i, k));
        net += nearest;
      }
      if (net > best + 1e-12) {
        best = net;
        best_count = count;
      }
    }
    CHECK(best_count == 2);
    CHECK(r.partition.cluster_count == best_count);
  }
  SUBCASE("well separated blobs with an explicit preference") {
    Rng rng(6);
    std::vector<std::vector<double>> pts;
    std::vector<int> truth;
    for (int i = 0; i < 30; ++i) {
      pts.push_back({(i % 3) * 20.0 + rng.normal() * 0.3, rng.normal() * 0.3});
      truth.push_back(i % 3);
    }
    AffinityOptions options;
    options.preference = -50.0;
    const auto r = affinity_propagation(from_points(pts), options);
    CHECK(r.converged);
    CHECK(ari(r.partition, canonical(truth)) == 1.0);
  }
  SUBCASE("messages stay bounded on random inputs") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const auto d = from_points(random_points(25, 3, seed));
      double max_d = 0;
      for (double v : d.values()) max_d = std::max(max_d, v);
      const auto r = affinity_propagation(d);
      // every fresh message is a difference of two similarities (plus clipped
      // sums of responsibilities), so damping keeps them within N * range
      CHECK(r.max_abs_message <= 25 * 2 * max_d * max_d);
      CHECK(affinity_propagation(d).partition == r.partition);
    }
  }
  SUBCASE("non-convergence is flagged") {
    const auto d = from_points(random_points(20, 2, 3));
    AffinityOptions options;
    options.max_iter = 2;
    CHECK_FALSE(affinity_propagation(d, options).converged);
  }
  const auto d = from_points({{0}, {1}});
  AffinityOptions bad;
  bad.damping = 1.0;
  CHECK_THROWS_AS(affinity_propagation(d, bad), ValidationError);
}
