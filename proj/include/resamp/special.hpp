#pragma once

namespace resamp::special {

double normal_pdf(double x);
double normal_cdf(double x);

/// Inverse of normal_cdf; accurate to a few ulps after Halley refinement.
double normal_quantile(double p);

double t_pdf(double x, double df);
double t_cdf(double x, double df);
double t_quantile(double p, double df);

/// CDF of the gamma distribution with the given shape and scale.
double gamma_cdf(double x, double shape, double scale);

/// Regularized lower incomplete gamma P(a, x).
double reg_inc_gamma(double a, double x);

/// Regularized incomplete beta I_x(a, b).
double reg_inc_beta(double a, double b, double x);

}  // namespace resamp::special
