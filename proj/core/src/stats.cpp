#include "findplan/stats.hpp"

#include <cmath>

#include "findplan/error.hpp"

namespace findplan {

double mean(std::span<const double> xs) {
  if (xs.empty()) return 0.0;
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

double standard_error(std::span<const double> xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  const double n = static_cast<double>(xs.size());
  return std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
}

double sign_test_p(std::size_t successes, std::size_t trials) {
  if (successes > trials) throw DomainError("more successes than trials");
  if (trials == 0) return 1.0;
  const double n = static_cast<double>(trials);
  double p = 0.0;
  for (std::size_t k = successes; k <= trials; ++k) {
    const double kk = static_cast<double>(k);
    const double log_term = std::lgamma(n + 1) - std::lgamma(kk + 1) - std::lgamma(n - kk + 1) - n * std::log(2.0);
    p += std::exp(log_term);
  }
  return p > 1.0 ? 1.0 : p;
}

SignTest sign_test_less(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DomainError("paired samples differ in size");
  SignTest t;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] < b[i]) {
      ++t.wins;
    } else if (a[i] > b[i]) {
      ++t.losses;
    } else {
      ++t.ties;
    }
  }
  t.p_value = sign_test_p(t.wins, t.wins + t.losses);
  return t;
}

}  // namespace findplan
