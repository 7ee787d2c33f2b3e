#pragma once

#include <span>
#include <vector>

namespace setpart {

/// Standard normal CDF via erfc; absolute error well under 1e-10.
double normal_cdf(double x);

/// Standard normal density.
double normal_pdf(double x);

/// Inverse standard normal CDF (Wichura's AS 241, double precision).
/// Domain (0, 1) exclusive.
double normal_quantile(double p);

/// Regularized lower/upper incomplete gamma, relative error ~1e-14 for
/// the a, x ranges used here (series for x < a+1, continued fraction
/// otherwise).
double regularized_gamma_p(double a, double x);
double regularized_gamma_q(double a, double x);

/// Exact Kolmogorov-Smirnov sup-distance between the empirical CDF of the
/// values and the standard normal CDF. Throws on empty input.
double ks_normal(std::span<const double> values);

struct ChiSquareResult {
    double statistic = 0.0;
    long long dof = 0;
    double p_value = 1.0;
};

/// Pearson goodness-of-fit of observed counts against the uniform
/// distribution over the cells. Demands expected count >= 5 per cell.
ChiSquareResult chi_square_uniform(std::span<const long long> counts, long long total);

} // namespace setpart
