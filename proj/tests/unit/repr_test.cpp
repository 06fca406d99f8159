#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gnpr/error.hpp"
#include "gnpr/repr.hpp"
#include "gnpr/rng.hpp"
#include "gnpr/synth.hpp"
#include "oracles.hpp"

using namespace gnpr;

namespace {

Panel random_panel(std::size_t n, std::size_t t, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::vector<double>> rows(n, std::vector<double>(t));
  for (auto& row : rows)
    for (double& v : row) v = rng.normal();
  return Panel::from_rows(rows);
}

}  // namespace

TEST_CASE("panel rejects malformed input") {
  CHECK_THROWS_AS(Panel({1.0, 2.0, 3.0}, 2, {"a", "b"}), ValidationError);
  CHECK_THROWS_AS(Panel({1.0}, 1, {"a"}), ValidationError);
  CHECK_THROWS_AS(Panel({}, 2, {}), ValidationError);
  CHECK_THROWS_AS(Panel::from_rows({{1.0, NAN}}), ValidationError);
  CHECK_THROWS_AS(Panel::from_rows({{1.0, INFINITY}}), ValidationError);
  CHECK_THROWS_AS(Panel::from_rows({{1.0, 2.0}, {1.0}}), ValidationError);
}

TEST_CASE("time parity split") {
  const auto panel = Panel::from_rows({{0, 1, 2, 3, 4}, {10, 11, 12, 13, 14}});
  const auto even = panel.time_parity(0);
  const auto odd = panel.time_parity(1);
  CHECK(even.length() == 3);
  CHECK(odd.length() == 2);
  CHECK(even.at(1, 2) == 14.0);
  CHECK(odd.at(0, 1) == 3.0);
}

TEST_CASE("empirical margins examples") {
  const auto ranks = empirical_margins(Panel::from_rows({{10, 20, 30}, {30, 10, 20}, {5, 5, 1}}));
  CHECK(ranks.normalized_row(0) == std::vector<double>{1.0 / 3, 2.0 / 3, 1.0});
  CHECK(ranks.normalized_row(1) == std::vector<double>{1.0, 1.0 / 3, 2.0 / 3});
  CHECK(ranks.normalized_row(2) == std::vector<double>{2.5 / 3, 2.5 / 3, 1.0 / 3});
}

TEST_CASE("rank rows of tie-free data are permutations with row sum (T+1)/2") {
  const auto panel = random_panel(5, 101, 3);
  const auto ranks = empirical_margins(panel);
  for (std::size_t i = 0; i < panel.series_count(); ++i) {
    auto raw = std::vector<double>(ranks.raw(i).begin(), ranks.raw(i).end());
    std::sort(raw.begin(), raw.end());
    for (std::size_t t = 0; t < raw.size(); ++t) CHECK(raw[t] == static_cast<double>(t + 1));
    const auto row = ranks.normalized_row(i);
    CHECK(std::accumulate(row.begin(), row.end(), 0.0) == doctest::Approx(51.0).epsilon(1e-15));
  }
}

TEST_CASE("average ranks agree with the counting oracle, ties included") {
  Rng rng(11);
  std::vector<double> x(300);
  for (double& v : x) v = std::round(rng.normal() * 3.0);  // heavy ties
  CHECK(average_ranks(x) == oracle::counting_ranks(x));
}

TEST_CASE("ranks are invariant under increasing maps and mirrored under decreasing maps") {
  const auto panel = random_panel(1, 200, 5);
  std::vector<double> cube, neg, expo;
  for (double v : panel.series(0)) {
    cube.push_back(v * v * v);
    neg.push_back(-v);
    expo.push_back(std::exp(v));
  }
  const auto base = average_ranks(panel.series(0));
  CHECK(average_ranks(cube) == base);
  CHECK(average_ranks(expo) == base);
  const auto mirrored = average_ranks(neg);
  for (std::size_t t = 0; t < base.size(); ++t) CHECK(mirrored[t] == 201.0 - base[t]);
}

TEST_CASE("shared grid") {
  SUBCASE("range [0, 10], 100 bins") {
    const auto g = shared_grid(Panel::from_rows({{0, 5}, {10, 3}}), 100);
    CHECK(g.origin == 0.0);
    CHECK(g.bandwidth == doctest::Approx(0.1));
    CHECK(g.bin_count == 100);
  }
  SUBCASE("range [-3, 7], 50 bins") {
    const auto g = shared_grid(Panel::from_rows({{-3, 0}, {7, 1}}), 50);
    CHECK(g.origin == -3.0);
    CHECK(g.bandwidth == doctest::Approx(0.2));
  }
  SUBCASE("constant panel") {
    const auto panel = Panel::from_rows({{0, 0, 0}, {0, 0, 0}});
    const auto g = shared_grid(panel, 10);
    CHECK(g.origin == 0.0);
    CHECK(g.bandwidth == 1.0);
    const auto d = histogram_density(panel.series(0), g);
    CHECK(d.masses[0] == 1.0);
    CHECK(std::count(d.masses.begin(), d.masses.end(), 0.0) == 9);
  }
  CHECK_THROWS_AS(shared_grid(Panel::from_rows({{0, 1}}), 0), ValidationError);
}

TEST_CASE("histogram bin edges") {
  const Grid grid{0.0, 0.1, 2};
  CHECK(histogram_density(std::vector<double>{0.05, 0.15}, grid).masses == std::vector<double>{0.5, 0.5});
  CHECK(histogram_density(std::vector<double>{0.1, 0.2}, grid).masses == std::vector<double>{0.0, 1.0});
  CHECK(histogram_density(std::vector<double>{0.0, 0.0, 0.0}, grid).masses == std::vector<double>{1.0, 0.0});
}

TEST_CASE("histogram rejects values outside the grid and names the series") {
  const Grid grid{0.0, 0.1, 2};
  try {
    histogram_density(std::vector<double>{0.05, 0.5}, grid, "series 'abc'");
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("abc") != std::string::npos);
    CHECK(std::string(e.what()).find("0.5") != std::string::npos);
  }
  CHECK_THROWS_AS(histogram_density(std::vector<double>{-0.01}, grid), ValidationError);
}

TEST_CASE("histogram masses sum to one for arbitrary panels") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto panel = random_panel(4, 97, seed);
    const auto repr = build_representation(panel, 1 + seed * 7);
    for (const auto& d : repr.densities) {
      CHECK(std::accumulate(d.masses.begin(), d.masses.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(std::all_of(d.masses.begin(), d.masses.end(), [](double m) { return m >= 0.0; }));
    }
  }
}

TEST_CASE("build_representation") {
  SUBCASE("single series") {
    const auto repr = build_representation(Panel::from_rows({{3, 1, 2}}));
    CHECK(repr.series_count() == 1);
    CHECK(repr.densities.size() == 1);
  }
  SUBCASE("identical series give identical rows") {
    const auto repr = build_representation(Panel::from_rows({{3, 1, 2, 8}, {3, 1, 2, 8}}));
    CHECK(std::ranges::equal(repr.ranks.raw(0), repr.ranks.raw(1)));
    CHECK(repr.densities[0] == repr.densities[1]);
  }
  SUBCASE("deterministic and independent of thread count") {
    const auto panel = random_panel(30, 400, 9);
    CHECK(build_representation(panel, 100, 1) == build_representation(panel, 100, 4));
  }
  SUBCASE("preset A panel") {
    const auto data = generate(preset("A"), 1);
    const auto repr = build_representation(data.panel, 100);
    CHECK(repr.series_count() == 200);
    for (std::size_t i = 0; i < 200; ++i) {
      auto raw = std::vector<double>(repr.ranks.raw(i).begin(), repr.ranks.raw(i).end());
      std::sort(raw.begin(), raw.end());
      bool permutation = true;
      for (std::size_t t = 0; t < raw.size(); ++t) permutation = permutation && raw[t] == t + 1.0;
      CHECK(permutation);
      const auto& m = repr.densities[i].masses;
      CHECK(std::accumulate(m.begin(), m.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}
