#include "bore/labeling.hpp"

#include <algorithm>
#include <cmath>

#include "bore/errors.hpp"

namespace bore {

namespace {
void check_finite(double y) {
  if (!std::isfinite(y)) throw InvalidInput("observations must be finite");
}
}  // namespace

ObservationSet::ObservationSet(std::vector<double> ys) : ys_(std::move(ys)) {
  for (double y : ys_) check_finite(y);
  sorted_ = ys_;
  std::sort(sorted_.begin(), sorted_.end());
}

void ObservationSet::push_back(double y) {
  check_finite(y);
  ys_.push_back(y);
  sorted_.insert(std::upper_bound(sorted_.begin(), sorted_.end(), y), y);
}

double empirical_cdf(const ObservationSet& obs, double s) {
  if (obs.empty()) throw InvalidInput("empirical CDF of an empty observation set");
  const auto& v = obs.sorted();
  const auto count = std::upper_bound(v.begin(), v.end(), s) - v.begin();
  return static_cast<double>(count) / static_cast<double>(v.size());
}

double quantile(const ObservationSet& obs, double gamma) {
  if (obs.empty()) throw InvalidInput("quantile of an empty observation set");
  if (!(gamma > 0.0 && gamma < 1.0)) throw InvalidInput("quantile level gamma must lie in (0, 1)");
  const auto& v = obs.sorted();
  const double t = static_cast<double>(v.size());
  // Smallest rank k with k / t >= gamma, compared directly to avoid ceil() roundoff.
  std::size_t k = 1;
  while (k < v.size() && static_cast<double>(k) / t < gamma) ++k;
  return v[k - 1];
}

Labels labels(const ObservationSet& obs, double tau) {
  Labels z;
  z.reserve(obs.size());
  for (double y : obs.values()) z.push_back(y <= tau ? 1 : 0);
  return z;
}

}  // namespace bore
