#pragma once

#include <cstddef>
#include <span>

namespace findplan {

double mean(std::span<const double> xs);
/// Standard error of the mean (sample standard deviation / sqrt(n)); 0 for n < 2.
double standard_error(std::span<const double> xs);

/// P(X >= successes) for X ~ Binomial(trials, 1/2): the one-sided sign-test
/// p-value. Returns 1 when trials is 0.
double sign_test_p(std::size_t successes, std::size_t trials);

struct SignTest {
  std::size_t wins = 0;    ///< pairs where a < b
  std::size_t losses = 0;  ///< pairs where a > b
  std::size_t ties = 0;
  double p_value = 1.0;    ///< one-sided, H1: a tends to be smaller
};

/// Paired one-sided sign test of "a smaller than b"; ties are dropped.
SignTest sign_test_less(std::span<const double> a, std::span<const double> b);

}  // namespace findplan
