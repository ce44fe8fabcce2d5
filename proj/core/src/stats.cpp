#include "qgs/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "qgs/error.hpp"

namespace qgs {

namespace {

constexpr double kEpsilon = 1e-16;
constexpr int kMaxIterations = 1'000'000;

// P(a, x) by its power series; valid and fast for x < a + 1.
double lower_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  for (int n = 1; n < kMaxIterations; ++n) {
    term *= x / (a + n);
    sum += term;
    if (std::abs(term) < std::abs(sum) * kEpsilon) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Q(a, x) by the modified Lentz continued fraction; x >= a + 1.
double upper_fraction(double a, double x) {
  constexpr double tiny = std::numeric_limits<double>::min() / kEpsilon;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxIterations; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEpsilon) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double gamma_q(double a, double x) {
  if (!(a > 0.0) || x < 0.0 || std::isnan(x))
    throw Error(ErrorKind::Domain, "gamma_q requires a > 0 and x >= 0");
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  if (x < a + 1.0) return std::clamp(1.0 - lower_series(a, x), 0.0, 1.0);
  return std::clamp(upper_fraction(a, x), 0.0, 1.0);
}

double chi_square_p_value(double chi2, double dof) {
  if (!(dof > 0.0)) throw Error(ErrorKind::DegenerateTest, "chi-square needs at least one degree of freedom");
  if (chi2 < 0.0) throw Error(ErrorKind::Domain, "negative chi-square statistic");
  return gamma_q(dof / 2.0, chi2 / 2.0);
}

ChiSquare chi_square_uniform(std::span<const std::uint64_t> observed, double cells) {
  if (cells < 2.0) throw Error(ErrorKind::DegenerateTest, "uniformity test needs at least two cells");
  if (static_cast<double>(observed.size()) > cells)
    throw Error(ErrorKind::Domain, "more observed cells than categories");
  const auto total = std::accumulate(observed.begin(), observed.end(), std::uint64_t{0});
  if (total == 0) throw Error(ErrorKind::DegenerateTest, "no observations");

  ChiSquare result;
  result.expected = static_cast<double>(total) / cells;
  const double e = result.expected;
  double chi2 = 0.0;
  for (auto o : observed) {
    const double diff = static_cast<double>(o) - e;
    chi2 += diff * diff / e;
  }
  // each unobserved cell contributes (0 - E)^2 / E = E
  chi2 += (cells - static_cast<double>(observed.size())) * e;
  result.chi2 = chi2;
  result.dof = cells - 1.0;
  result.p_value = chi_square_p_value(chi2, result.dof);
  return result;
}

}  // namespace qgs
