#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

#include "onegrab/errors.hpp"

namespace onegrab {

inline constexpr double kNegInfinity = -std::numeric_limits<double>::infinity();

// ln Gamma(x) for x > 0. Wraps the reentrant libm entry point where available
// so concurrent callers never touch the signgam global.
inline double log_gamma(double x) {
#if defined(__GLIBC__) || defined(__APPLE__)
  int sign = 0;
  return ::lgamma_r(x, &sign);
#else
  return std::lgamma(x);
#endif
}

// ln n!
inline double log_factorial(std::int64_t n) {
  return log_gamma(static_cast<double>(n) + 1.0);
}

// ln C(n, k). Throws DomainError unless 0 <= k <= n.
inline double log_choose(std::int64_t n, std::int64_t k) {
  if (n < 0 || k < 0 || k > n) {
    throw DomainError("log_choose: need 0 <= k <= n");
  }
  if (k == 0 || k == n) return 0.0;
  return log_factorial(n) - log_factorial(k) - log_factorial(n - k);
}

// Streaming log-sum-exp. Terms are accumulated against the running maximum so
// sums like C(10000, r) never leave the representable range.
class LogSumAccumulator {
 public:
  void add(double log_term) {
    if (log_term == kNegInfinity) return;
    if (log_term <= max_term_) {
      sum_ += std::exp(log_term - max_term_);
    } else {
      sum_ = sum_ * std::exp(max_term_ - log_term) + 1.0;
      max_term_ = log_term;
    }
  }

  bool empty() const { return max_term_ == kNegInfinity; }

  double value() const {
    if (empty()) return kNegInfinity;
    return max_term_ + std::log(sum_);
  }

 private:
  double max_term_ = kNegInfinity;
  double sum_ = 0.0;
};

}  // namespace onegrab
