#pragma once

#include <span>
#include <vector>

#include "bore/pls_classifier.hpp"

namespace bore {

/// Finite scalar observations y_1..y_t with a sorted copy for CDF queries.
class ObservationSet {
 public:
  ObservationSet() = default;
  explicit ObservationSet(std::vector<double> ys);

  void push_back(double y);

  [[nodiscard]] std::size_t size() const noexcept { return ys_.size(); }
  [[nodiscard]] bool empty() const noexcept { return ys_.empty(); }
  [[nodiscard]] const std::vector<double>& values() const noexcept { return ys_; }
  [[nodiscard]] const std::vector<double>& sorted() const noexcept { return sorted_; }

 private:
  std::vector<double> ys_;
  std::vector<double> sorted_;
};

/// Fraction of observations <= s.
[[nodiscard]] double empirical_cdf(const ObservationSet& obs, double s);

/// Nearest-rank inclusive quantile: smallest observed s with empirical_cdf(s) >= gamma.
[[nodiscard]] double quantile(const ObservationSet& obs, double gamma);

/// z_i = 1[y_i <= tau]
[[nodiscard]] Labels labels(const ObservationSet& obs, double tau);

}  // namespace bore
