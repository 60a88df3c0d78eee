#include "bore/linalg.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "bore/errors.hpp"

namespace bore {

double condition_estimate(const Eigen::MatrixXd& a) {
  if (a.rows() == 0) return 1.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(a, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (lo <= 0.0) return std::numeric_limits<double>::infinity();
  return hi / lo;
}

Eigen::MatrixXd cholesky_lower(const Eigen::MatrixXd& a, bool allow_jitter) {
  Eigen::LLT<Eigen::MatrixXd> llt(a);
  if (llt.info() == Eigen::Success) return llt.matrixL();
  if (allow_jitter) {
    Eigen::MatrixXd jittered = a;
    jittered.diagonal().array() += gram_jitter(a);
    llt.compute(jittered);
    if (llt.info() == Eigen::Success) return llt.matrixL();
  }
  std::ostringstream msg;
  msg << "Cholesky factorisation failed (n = " << a.rows() << ", condition estimate " << condition_estimate(a) << ")";
  throw NumericalError(msg.str());
}

RegularisedGram::RegularisedGram(Kernel kernel, double lambda) : kernel_(std::move(kernel)), lambda_(lambda) {
  if (!(lambda_ > 0.0) || !std::isfinite(lambda_)) throw InvalidInput("regulariser lambda must be positive");
}

RegularisedGram::RegularisedGram(Kernel kernel, double lambda, const PointList& inputs)
    : RegularisedGram(std::move(kernel), lambda) {
  for (const auto& x : inputs) {
    if (x.size() != kernel_.dim()) throw InvalidInput("input dimension does not match kernel");
  }
  inputs_ = inputs;
  refactor();
}

void RegularisedGram::reserve(std::size_t n) {
  if (static_cast<std::size_t>(chol_.rows()) >= n) return;
  const std::size_t cap = std::max<std::size_t>(n, 2 * static_cast<std::size_t>(chol_.rows()) + 8);
  Eigen::MatrixXd grown = Eigen::MatrixXd::Zero(cap, cap);
  const auto t = static_cast<Eigen::Index>(std::min<std::size_t>(size(), chol_.rows()));
  grown.topLeftCorner(t, t) = chol_.topLeftCorner(t, t);
  chol_ = std::move(grown);
}

void RegularisedGram::refactor() {
  Eigen::MatrixXd a = build_gram(kernel_, inputs_).entries;
  a.diagonal().array() += lambda_;
  const Eigen::MatrixXd l = cholesky_lower(a);
  chol_ = Eigen::MatrixXd::Zero(0, 0);
  reserve(inputs_.size());
  const auto n = static_cast<Eigen::Index>(inputs_.size());
  chol_.topLeftCorner(n, n) = l;
  appends_since_refactor_ = 0;
}

void RegularisedGram::append(const Point& x) {
  if (x.size() != kernel_.dim()) throw InvalidInput("input dimension does not match kernel");
  const auto t = static_cast<Eigen::Index>(size());
  const Eigen::VectorXd l = t > 0 ? forward(kernel_column(x)) : Eigen::VectorXd();
  const double d2 = kernel_.diag() + lambda_ - (t > 0 ? l.squaredNorm() : 0.0);
  inputs_.push_back(x);
  if (++appends_since_refactor_ >= kRefactorInterval || !(d2 > 0.0)) {
    refactor();
    return;
  }
  reserve(inputs_.size());
  if (t > 0) chol_.row(t).head(t) = l.transpose();
  chol_(t, t) = std::sqrt(d2);
}

RegularisedGram RegularisedGram::extended(const Point& x) const {
  RegularisedGram next = *this;
  next.append(x);
  return next;
}

Eigen::VectorXd RegularisedGram::forward(const Eigen::VectorXd& b) const {
  if (static_cast<std::size_t>(b.size()) != size()) throw InvalidInput("forward: size mismatch");
  if (size() == 0) return Eigen::VectorXd(0);
  return chol().triangularView<Eigen::Lower>().solve(b);
}

Eigen::VectorXd RegularisedGram::solve(const Eigen::VectorXd& b) const {
  if (size() == 0) return Eigen::VectorXd(0);
  const Eigen::VectorXd w = forward(b);
  return chol().transpose().triangularView<Eigen::Upper>().solve(w);
}

double RegularisedGram::log_det_ratio() const {
  if (size() == 0) return 0.0;
  return 2.0 * chol().diagonal().array().log().sum() - static_cast<double>(size()) * std::log(lambda_);
}

}  // namespace bore
