#include "bore/search_space.hpp"

#include <sstream>

#include "bore/errors.hpp"

namespace bore {

SearchSpace SearchSpace::finite(PointList points) {
  if (points.empty()) throw InvalidInput("finite search space needs at least one point");
  const int d = static_cast<int>(points.front().size());
  if (d < 1) throw InvalidInput("search space points must have dimension >= 1");
  for (const auto& p : points) {
    if (p.size() != d) throw InvalidInput("search space points have inconsistent dimensions");
    if (!p.allFinite()) throw InvalidInput("search space points must be finite");
  }
  return SearchSpace(Finite{std::move(points)}, d);
}

SearchSpace SearchSpace::box(Eigen::VectorXd lower, Eigen::VectorXd upper) {
  if (lower.size() < 1 || lower.size() != upper.size()) throw InvalidInput("box bounds must have equal, positive size");
  if (!lower.allFinite() || !upper.allFinite()) throw InvalidInput("box bounds must be finite");
  if ((lower.array() >= upper.array()).any()) throw InvalidInput("box lower bound must be below the upper bound");
  const int d = static_cast<int>(lower.size());
  return SearchSpace(Box{std::move(lower), std::move(upper)}, d);
}

const PointList& SearchSpace::points() const {
  if (const auto* f = std::get_if<Finite>(&mode_)) return f->points;
  throw InvalidInput("box search space has no candidate list");
}

std::size_t SearchSpace::size() const { return points().size(); }

const Eigen::VectorXd& SearchSpace::lower() const {
  if (const auto* b = std::get_if<Box>(&mode_)) return b->lower;
  throw InvalidInput("finite search space has no bounds");
}

const Eigen::VectorXd& SearchSpace::upper() const {
  if (const auto* b = std::get_if<Box>(&mode_)) return b->upper;
  throw InvalidInput("finite search space has no bounds");
}

Point SearchSpace::project(const Point& x) const {
  if (x.size() != dim_) throw InvalidInput("point dimension does not match search space");
  if (const auto* b = std::get_if<Box>(&mode_)) return x.cwiseMax(b->lower).cwiseMin(b->upper);
  return x;
}

bool SearchSpace::contains(const Point& x) const {
  if (x.size() != dim_) return false;
  if (const auto* b = std::get_if<Box>(&mode_))
    return (x.array() >= b->lower.array()).all() && (x.array() <= b->upper.array()).all();
  return index_of(x) >= 0;
}

long SearchSpace::index_of(const Point& x) const {
  const auto* f = std::get_if<Finite>(&mode_);
  if (f == nullptr || x.size() != dim_) return -1;
  for (std::size_t i = 0; i < f->points.size(); ++i)
    if (f->points[i] == x) return static_cast<long>(i);
  return -1;
}

Point SearchSpace::sample_uniform(Rng& rng) const {
  if (const auto* f = std::get_if<Finite>(&mode_)) {
    const auto i = static_cast<std::size_t>(uniform01(rng) * static_cast<double>(f->points.size()));
    return f->points[std::min(i, f->points.size() - 1)];
  }
  const auto& b = std::get<Box>(mode_);
  Point x(dim_);
  for (int k = 0; k < dim_; ++k) x(k) = b.lower(k) + uniform01(rng) * (b.upper(k) - b.lower(k));
  return x;
}

namespace {
constexpr int kPrimes[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53,
                           59, 61, 67, 71, 73, 79, 83, 89, 97, 101, 103, 107, 109, 113};

double radical_inverse(long index, int base) {
  double result = 0.0;
  double f = 1.0 / base;
  while (index > 0) {
    result += f * static_cast<double>(index % base);
    index /= base;
    f /= base;
  }
  return result;
}
}  // namespace

PointList halton(int n, int dim, int skip) {
  if (dim < 1 || dim > static_cast<int>(std::size(kPrimes))) {
    std::ostringstream msg;
    msg << "Halton sequence supports dimensions 1.." << std::size(kPrimes) << ", got " << dim;
    throw InvalidInput(msg.str());
  }
  if (n < 0 || skip < 0) throw InvalidInput("Halton count and skip must be non-negative");
  PointList out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) {
    Point p(dim);
    for (int k = 0; k < dim; ++k) p(k) = radical_inverse(static_cast<long>(i) + skip, kPrimes[k]);
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace bore
