#include "gnpr/panel.hpp"

#include <cmath>

#include "gnpr/error.hpp"

namespace gnpr {

Panel::Panel(std::vector<double> values, std::size_t length,
             std::vector<std::string> series_ids)
    : values_(std::move(values)), length_(length), ids_(std::move(series_ids)) {
  if (ids_.empty()) throw ValidationError("panel must contain at least one series");
  if (length_ < 2) throw ValidationError("panel series need at least 2 observations");
  if (values_.size() != ids_.size() * length_)
    throw ValidationError("panel is not rectangular");
  for (std::size_t k = 0; k < values_.size(); ++k) {
    if (!std::isfinite(values_[k]))
      throw ValidationError("non-finite value in series '" + ids_[k / length_] +
                            "' at t=" + std::to_string(k % length_));
  }
}

Panel Panel::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) throw ValidationError("panel must contain at least one series");
  const std::size_t length = rows.front().size();
  std::vector<double> values;
  values.reserve(rows.size() * length);
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != length) throw ValidationError("panel is not rectangular");
    values.insert(values.end(), rows[i].begin(), rows[i].end());
    ids.push_back("s" + std::to_string(i));
  }
  return Panel(std::move(values), length, std::move(ids));
}

Panel Panel::time_parity(std::size_t parity) const {
  const std::size_t half = parity == 0 ? (length_ + 1) / 2 : length_ / 2;
  std::vector<double> out;
  out.reserve(series_count() * half);
  for (std::size_t i = 0; i < series_count(); ++i)
    for (std::size_t t = parity; t < length_; t += 2) out.push_back(at(i, t));
  return Panel(std::move(out), half, ids_);
}

}  // namespace gnpr
