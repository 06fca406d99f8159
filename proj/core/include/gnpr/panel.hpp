#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace gnpr {

/// N series of T observations each, stored row-major (one row per series).
class Panel {
 public:
  Panel() = default;

  /// Throws ValidationError unless values.size() == ids.size() * T, T >= 2,
  /// N >= 1 and every entry is finite.
  Panel(std::vector<double> values, std::size_t length,
        std::vector<std::string> series_ids);

  /// Builds a panel with ids "s0", "s1", ...
  static Panel from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t series_count() const { return ids_.size(); }
  std::size_t length() const { return length_; }

  std::span<const double> series(std::size_t i) const {
    return {values_.data() + i * length_, length_};
  }
  double at(std::size_t i, std::size_t t) const { return values_[i * length_ + t]; }

  const std::vector<std::string>& series_ids() const { return ids_; }
  const std::vector<double>& values() const { return values_; }

  /// Sub-panel keeping time indices t with t % 2 == parity (0-based).
  Panel time_parity(std::size_t parity) const;

 private:
  std::vector<double> values_;
  std::size_t length_ = 0;
  std::vector<std::string> ids_;
};

}  // namespace gnpr
