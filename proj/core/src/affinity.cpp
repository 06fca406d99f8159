#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "gnpr/cluster.hpp"
#include "gnpr/error.hpp"

namespace gnpr {

namespace {

double median(std::vector<double> values) {
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
  const double upper = values[mid];
  if (values.size() % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

// numpy's legacy RandomState normal: MT19937 seeded by init_genrand, 53-bit
// doubles from two 32-bit draws, Marsaglia polar pairs.
class LegacyGauss {
 public:
  explicit LegacyGauss(std::uint32_t seed) : mt_(seed) {}

  double operator()() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double x1, x2, r2;
    do {
      x1 = 2.0 * uniform() - 1.0;
      x2 = 2.0 * uniform() - 1.0;
      r2 = x1 * x1 + x2 * x2;
    } while (r2 >= 1.0 || r2 == 0.0);
    const double f = std::sqrt(-2.0 * std::log(r2) / r2);
    spare_ = f * x1;
    has_spare_ = true;
    return f * x2;
  }

 private:
  double uniform() {
    const auto a = static_cast<std::uint32_t>(mt_()) >> 5;
    const auto b = static_cast<std::uint32_t>(mt_()) >> 6;
    return (a * 67108864.0 + b) / 9007199254740992.0;
  }

  std::mt19937 mt_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace

AffinityResult affinity_propagation(const DistanceMatrix& d, const AffinityOptions& options) {
  d.validate();
  if (!(options.damping >= 0.5 && options.damping < 1.0))
    throw ValidationError("damping must lie in [0.5, 1)");
  if (options.max_iter < 1 || options.convergence_iter < 1)
    throw ValidationError("max_iter and convergence_iter must be at least 1");
  const std::size_t n = d.size();
  if (n == 0) throw ValidationError("cannot cluster an empty distance matrix");

  AffinityResult out;
  if (n == 1) {
    out.partition = canonical({0});
    out.exemplars = {0};
    out.converged = true;
    out.preference = options.preference.value_or(0.0);
    return out;
  }

  std::vector<double> s(n * n);
  std::vector<double> off_diagonal;
  off_diagonal.reserve(n * (n - 1));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      s[i * n + k] = -d(i, k) * d(i, k);
      if (i != k) off_diagonal.push_back(s[i * n + k]);
    }
  out.preference = options.preference ? *options.preference : median(std::move(off_diagonal));
  for (std::size_t i = 0; i < n; ++i) s[i * n + i] = out.preference;

  // Duplicate points make the messages oscillate between equivalent
  // exemplars; a fixed, relative-epsilon jitter breaks the ties. Same stream
  // and scale as scikit-learn with random_state=0, so results line up.
  LegacyGauss jitter(0);
  for (double& v : s)
    v += (std::numeric_limits<double>::epsilon() * v + 100.0 * std::numeric_limits<double>::min()) *
         jitter();

  const double lambda = options.damping;
  std::vector<double> r(n * n, 0.0), a(n * n, 0.0), column(n);
  std::vector<bool> exemplar(n, false), previous(n, false);
  std::size_t stable = 0;

  for (std::size_t iter = 0; iter < options.max_iter; ++iter) {
    out.iterations = iter + 1;

    // responsibilities
    for (std::size_t i = 0; i < n; ++i) {
      double first = -std::numeric_limits<double>::infinity();
      double second = first;
      std::size_t arg = 0;
      for (std::size_t k = 0; k < n; ++k) {
        const double v = a[i * n + k] + s[i * n + k];
        if (v > first) {
          second = first;
          first = v;
          arg = k;
        } else if (v > second) {
          second = v;
        }
      }
      for (std::size_t k = 0; k < n; ++k) {
        const double fresh = s[i * n + k] - (k == arg ? second : first);
        double& cell = r[i * n + k];
        cell = lambda * cell + (1.0 - lambda) * fresh;
        out.max_abs_message = std::max(out.max_abs_message, std::abs(cell));
      }
    }

    // availabilities
    for (std::size_t k = 0; k < n; ++k) {
      double sum = r[k * n + k];
      for (std::size_t i = 0; i < n; ++i)
        if (i != k) sum += std::max(0.0, r[i * n + k]);
      column[k] = sum;
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < n; ++k) {
        const double fresh = i == k ? column[k] - r[k * n + k]
                                    : std::min(0.0, column[k] - std::max(0.0, r[i * n + k]));
        double& cell = a[i * n + k];
        cell = lambda * cell + (1.0 - lambda) * fresh;
        out.max_abs_message = std::max(out.max_abs_message, std::abs(cell));
      }
    }

    bool any = false;
    for (std::size_t k = 0; k < n; ++k) {
      exemplar[k] = a[k * n + k] + r[k * n + k] > 0.0;
      any = any || exemplar[k];
    }
    stable = (iter > 0 && exemplar == previous) ? stable + 1 : 1;
    // one extra iteration before the first check, as in scikit-learn
    previous = exemplar;
    if (any && iter >= options.convergence_iter && stable >= options.convergence_iter) {
      out.converged = true;
      break;
    }
  }

  std::vector<std::size_t> centers;
  for (std::size_t k = 0; k < n; ++k)
    if (exemplar[k]) centers.push_back(k);

  if (centers.empty()) {
    out.partition = canonical(std::vector<int>(n, 0));
    out.converged = false;
    return out;
  }

  auto assign = [&](const std::vector<std::size_t>& ex) {
    std::vector<int> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t best = 0;
      for (std::size_t c = 1; c < ex.size(); ++c)
        if (s[i * n + ex[c]] > s[i * n + ex[best]]) best = c;
      labels[i] = static_cast<int>(best);
    }
    for (std::size_t c = 0; c < ex.size(); ++c) labels[ex[c]] = static_cast<int>(c);
    return labels;
  };

  // Re-centre each cluster on the member with the largest total similarity to
  // the others, then assign once more.
  auto labels = assign(centers);
  for (std::size_t c = 0; c < centers.size(); ++c) {
    double best_total = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
      if (labels[j] != static_cast<int>(c)) continue;
      double total = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        if (labels[i] == static_cast<int>(c)) total += s[i * n + j];
      if (total > best_total) {
        best_total = total;
        centers[c] = j;
      }
    }
  }
  labels = assign(centers);

  out.exemplars = centers;
  out.partition = canonical(labels);
  return out;
}

}  // namespace gnpr
