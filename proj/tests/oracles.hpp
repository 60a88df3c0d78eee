#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "bore/kernels.hpp"
#include "bore/random.hpp"

// Independent reference computations used by the unit and acceptance tests.
namespace oracle {

inline bore::Point random_point(bore::Rng& rng, int d, double lo = 0.0, double hi = 1.0) {
  bore::Point p(d);
  for (int k = 0; k < d; ++k) p(k) = lo + (hi - lo) * bore::uniform01(rng);
  return p;
}

// Dense (K + lambda I) built entry by entry with a closed-form SE kernel.
inline double se(const bore::Point& a, const bore::Point& b, double ls) {
  return std::exp(-0.5 * (a - b).squaredNorm() / (ls * ls));
}

struct DensePosterior {
  Eigen::MatrixXd a;
  Eigen::VectorXd weights;
  std::vector<bore::Point> inputs;
  double ls;
  double lambda;

  DensePosterior(const std::vector<bore::Point>& x, const Eigen::VectorXd& z, double ls_, double lambda_)
      : inputs(x), ls(ls_), lambda(lambda_) {
    const auto n = static_cast<Eigen::Index>(x.size());
    a.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) a(i, j) = se(x[i], x[j], ls) + (i == j ? lambda : 0.0);
    weights = a.fullPivLu().solve(z);
  }

  Eigen::VectorXd k(const bore::Point& q) const {
    Eigen::VectorXd v(inputs.size());
    for (std::size_t i = 0; i < inputs.size(); ++i) v(i) = se(q, inputs[i], ls);
    return v;
  }

  double mean(const bore::Point& q) const { return inputs.empty() ? 0.0 : k(q).dot(weights); }

  double variance(const bore::Point& q) const {
    if (inputs.empty()) return 1.0;
    const Eigen::VectorXd v = k(q);
    return 1.0 - v.dot(a.fullPivLu().solve(v));
  }

  // log det (I + K / lambda) from eigenvalues.
  double log_det_ratio() const {
    if (inputs.empty()) return 0.0;
    Eigen::MatrixXd kk = a;
    kk.diagonal().array() -= lambda;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(kk);
    return (1.0 + eig.eigenvalues().array().max(0.0) / lambda).log().sum();
  }
};

inline Eigen::VectorXd central_difference(const std::function<double(const bore::Point&)>& f, const bore::Point& x,
                                          double h = 1e-5) {
  Eigen::VectorXd g(x.size());
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    bore::Point xp = x, xm = x;
    xp(j) += h;
    xm(j) -= h;
    g(j) = (f(xp) - f(xm)) / (2.0 * h);
  }
  return g;
}

// max_j |a_j - b_j| / max(floor, |b_j|)
inline double relative_error(const Eigen::VectorXd& a, const Eigen::VectorXd& b, double floor = 1e-3) {
  double worst = 0.0;
  for (Eigen::Index j = 0; j < a.size(); ++j)
    worst = std::max(worst, std::abs(a(j) - b(j)) / std::max(floor, std::abs(b(j))));
  return worst;
}

// Exhaustive scan; strict improvement only, so ties keep the first index.
inline std::size_t scan_argmax(const std::vector<double>& s) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < s.size(); ++i)
    if (s[i] > s[best]) best = i;
  return best;
}

inline double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI); }
inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

}  // namespace oracle
