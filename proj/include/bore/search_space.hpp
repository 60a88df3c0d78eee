#pragma once

#include <variant>

#include <Eigen/Dense>

#include "bore/kernels.hpp"
#include "bore/random.hpp"

namespace bore {

/// Either a finite candidate set or an axis-aligned box.
class SearchSpace {
 public:
  struct Finite {
    PointList points;
  };
  struct Box {
    Eigen::VectorXd lower;
    Eigen::VectorXd upper;
  };

  [[nodiscard]] static SearchSpace finite(PointList points);
  [[nodiscard]] static SearchSpace box(Eigen::VectorXd lower, Eigen::VectorXd upper);

  [[nodiscard]] bool is_finite() const noexcept { return std::holds_alternative<Finite>(mode_); }
  [[nodiscard]] int dim() const noexcept { return dim_; }

  /// Candidate points; throws InvalidInput in box mode.
  [[nodiscard]] const PointList& points() const;
  [[nodiscard]] std::size_t size() const;
  [[nodiscard]] const Eigen::VectorXd& lower() const;
  [[nodiscard]] const Eigen::VectorXd& upper() const;

  /// Box: clamp into bounds. Finite: identity.
  [[nodiscard]] Point project(const Point& x) const;
  [[nodiscard]] bool contains(const Point& x) const;
  /// Finite: index of an exactly matching candidate, or -1.
  [[nodiscard]] long index_of(const Point& x) const;

  /// Uniform draw: a random candidate, or a uniform point in the box.
  [[nodiscard]] Point sample_uniform(Rng& rng) const;

 private:
  explicit SearchSpace(std::variant<Finite, Box> mode, int dim) : mode_(std::move(mode)), dim_(dim) {}

  std::variant<Finite, Box> mode_;
  int dim_;
};

/// First n points of the Halton sequence in [0,1)^dim (index offset `skip`).
[[nodiscard]] PointList halton(int n, int dim, int skip = 1);

}  // namespace bore
