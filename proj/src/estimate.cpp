#include "mrn/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/distributions/students_t.hpp>

namespace mrn {

void ReplicaEstimate::add(double x) {
  ++n_;
  const double delta = x - mean_;
  mean_ += delta / static_cast<double>(n_);
  m2_ += delta * (x - mean_);
}

void ReplicaEstimate::merge(const ReplicaEstimate& other) {
  if (other.n_ == 0) return;
  if (n_ == 0) {
    *this = other;
    return;
  }
  const double na = static_cast<double>(n_);
  const double nb = static_cast<double>(other.n_);
  const double n = na + nb;
  const double delta = other.mean_ - mean_;
  mean_ += delta * nb / n;
  m2_ += other.m2_ + delta * delta * na * nb / n;
  n_ += other.n_;
}

double ReplicaEstimate::variance() const { return n_ < 2 ? 0.0 : std::max(0.0, m2_) / static_cast<double>(n_ - 1); }

double ReplicaEstimate::ci_halfwidth() const {
  if (n_ < 2) return std::numeric_limits<double>::infinity();
  return student_t_975(n_ - 1) * std::sqrt(variance() / static_cast<double>(n_));
}

double student_t_975(std::size_t dof) {
  boost::math::students_t dist(static_cast<double>(dof));
  return boost::math::quantile(dist, 0.975);
}

}  // namespace mrn
