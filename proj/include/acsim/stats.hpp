#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>

#include <boost/math/distributions/students_t.hpp>

#include "acsim/relstate.hpp"

namespace acsim {

// Student-t inverse CDF; the critical point for confidence intervals.
inline double t_quantile(long df, double p) {
  if (df < 1) throw ConfigError("t_quantile: df must be >= 1");
  if (!(p > 0.0 && p < 1.0)) throw ConfigError("t_quantile: p outside (0,1)");
  boost::math::students_t_distribution<double> dist(static_cast<double>(df));
  return boost::math::quantile(dist, p);
}

// Welford streaming moments.
class Welford {
 public:
  void add(double x) {
    ++n_;
    double d = x - mean_;
    mean_ += d / static_cast<double>(n_);
    m2_ += d * (x - mean_);
    if (x < min_) min_ = x;
    if (x > max_) max_ = x;
  }

  std::size_t count() const { return n_; }
  double mean() const { return mean_; }
  double variance() const {  // sample variance
    return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0;
  }
  double min() const { return n_ ? min_ : 0.0; }
  double max() const { return n_ ? max_ : 0.0; }

 private:
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
  double min_ = std::numeric_limits<double>::infinity();
  double max_ = -std::numeric_limits<double>::infinity();
};

// One-sided sign test: probability of at least `positives` successes in
// `trials` fair coin flips (ties must be excluded by the caller).
inline double sign_test_p(std::size_t positives, std::size_t trials) {
  if (positives > trials) throw ConfigError("sign_test_p: positives > trials");
  double log_half = std::log(0.5);
  double p = 0.0;
  for (std::size_t k = positives; k <= trials; ++k) {
    double log_choose = std::lgamma(static_cast<double>(trials) + 1) -
                        std::lgamma(static_cast<double>(k) + 1) -
                        std::lgamma(static_cast<double>(trials - k) + 1);
    p += std::exp(log_choose + static_cast<double>(trials) * log_half);
  }
  return p < 1.0 ? p : 1.0;
}

}  // namespace acsim
