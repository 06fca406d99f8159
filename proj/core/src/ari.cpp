#include <map>
#include <numeric>
#include <utility>

#include "gnpr/cluster.hpp"
#include "gnpr/error.hpp"

namespace gnpr {

namespace {

__extension__ typedef __int128 Wide;

Wide pairs(Wide count) { return count * (count - 1) / 2; }

Wide wide_gcd(Wide a, Wide b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    const Wide r = a % b;
    a = b;
    b = r;
  }
  return a;
}

}  // namespace

double ari(const Partition& p, const Partition& q) {
  if (p.size() != q.size())
    throw ValidationError("partitions have different sizes: " + std::to_string(p.size()) +
                          " vs " + std::to_string(q.size()));
  const std::size_t n = p.size();
  std::map<std::pair<int, int>, Wide> table;
  std::map<int, Wide> rows, cols;
  for (std::size_t i = 0; i < n; ++i) {
    ++table[{p.labels[i], q.labels[i]}];
    ++rows[p.labels[i]];
    ++cols[q.labels[i]];
  }
  Wide index = 0, row_sum = 0, col_sum = 0;
  for (const auto& [cell, count] : table) index += pairs(count);
  for (const auto& [label, count] : rows) row_sum += pairs(count);
  for (const auto& [label, count] : cols) col_sum += pairs(count);
  const Wide total = pairs(static_cast<Wide>(n));

  // (index - E) / (M - E) with E = row_sum col_sum / total and
  // M = (row_sum + col_sum) / 2, scaled by 2 total to stay in integers.
  Wide numerator = 2 * (index * total - row_sum * col_sum);
  Wide denominator = (row_sum + col_sum) * total - 2 * row_sum * col_sum;
  // Both partitions all-singletons or both one cluster (or N < 2).
  if (denominator == 0) return canonical(p.labels) == canonical(q.labels) ? 1.0 : 0.0;
  const Wide g = wide_gcd(numerator, denominator);
  numerator /= g;
  denominator /= g;
  return static_cast<double>(numerator) / static_cast<double>(denominator);
}

}  // namespace gnpr
