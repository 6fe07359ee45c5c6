#pragma once

#include <cstddef>

namespace mrn {

/// Running mean / variance of a scalar over independent replicas, with a
/// 95% Student-t confidence interval. merge() is associative and
/// commutative, so partial estimates from parallel workers combine freely.
class ReplicaEstimate {
 public:
  void add(double x);
  void merge(const ReplicaEstimate& other);

  std::size_t n() const { return n_; }
  double mean() const { return mean_; }
  double m2() const { return m2_; }
  /// Unbiased sample variance; 0 for n < 2.
  double variance() const;
  /// Half-width of the 95% confidence interval; infinite for n < 2.
  double ci_halfwidth() const;
  double ci_low() const { return mean_ - ci_halfwidth(); }
  double ci_high() const { return mean_ + ci_halfwidth(); }

 private:
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

/// Two-sided 95% quantile of Student's t with `dof` degrees of freedom.
double student_t_975(std::size_t dof);

}  // namespace mrn
