#pragma once

#include <cstdint>
#include <span>

namespace qgs {

/// Regularized upper incomplete gamma Q(a, x) = Gamma(a, x) / Gamma(a), a > 0, x >= 0.
/// Series for x < a + 1, Lentz continued fraction otherwise.
double gamma_q(double a, double x);

/// Chi-square survival function P(X > chi2) for `dof` degrees of freedom.
double chi_square_p_value(double chi2, double dof);

struct ChiSquare {
  double chi2 = 0.0;
  double dof = 0.0;
  double p_value = 1.0;
  double expected = 0.0;  // per-cell expected count
};

/// Goodness of fit against the uniform distribution over `cells` categories.
/// `observed` lists the nonzero cells; the remaining cells - observed.size()
/// cells count as zero.
ChiSquare chi_square_uniform(std::span<const std::uint64_t> observed, double cells);

}  // namespace qgs
