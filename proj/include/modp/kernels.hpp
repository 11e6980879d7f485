#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "modp/parallel.hpp"

namespace modp {

// Weighted sums of f over the sample points inside an open ball.
// The parallel version sums fixed blocks and then adds the block totals in
// order, so its result does not depend on the thread count.

inline constexpr std::size_t kBlock = 4096;

template <class F>
double ball_sum_serial(const Eigen::MatrixXd& pts, const Eigen::VectorXd& w,
                       const Eigen::VectorXd& c, double r, F&& f) {
  const double r2 = r * r;
  double s = 0.0;
  for (Eigen::Index j = 0; j < pts.cols(); ++j) {
    const double d2 = (pts.col(j) - c).squaredNorm();
    if (d2 < r2) s += w[j] * f(j);
  }
  return s;
}

template <class F>
double ball_sum(const Eigen::MatrixXd& pts, const Eigen::VectorXd& w, const Eigen::VectorXd& c,
                double r, F&& f) {
  const std::size_t n = static_cast<std::size_t>(pts.cols());
  const std::size_t nb = (n + kBlock - 1) / kBlock;
  if (nb <= 1) return ball_sum_serial(pts, w, c, r, f);
  const double r2 = r * r;
  std::vector<double> part(nb, 0.0);
#pragma omp parallel for schedule(static) num_threads(thread_budget())
  for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(nb); ++b) {
    const std::size_t lo = static_cast<std::size_t>(b) * kBlock;
    const std::size_t hi = std::min(n, lo + kBlock);
    double s = 0.0;
    for (std::size_t j = lo; j < hi; ++j) {
      const double d2 = (pts.col(j) - c).squaredNorm();
      if (d2 < r2) s += w[j] * f(static_cast<Eigen::Index>(j));
    }
    part[b] = s;
  }
  double s = 0.0;
  for (double v : part) s += v;
  return s;
}

}  // namespace modp
