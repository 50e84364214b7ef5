#include "resamp/analytic.hpp"

#include <cmath>

#include "resamp/errors.hpp"
#include "resamp/special.hpp"

namespace resamp {

namespace {

double upper_t(double alpha_two_sided, double df) {
  return special::t_quantile(1.0 - alpha_two_sided / 2.0, df);
}

}  // namespace

IntervalEstimate student_t_interval(double xbar, double s, Eigen::Index n,
                                    double confidence) {
  if (n < 2) throw InvalidInput("student_t_interval: need n >= 2");
  if (s < 0.0) throw InvalidInput("student_t_interval: s must be >= 0");
  const double a = 1.0 - confidence;
  const double t = upper_t(a, static_cast<double>(n - 1));
  const double half = t * s / std::sqrt(static_cast<double>(n));
  IntervalEstimate iv;
  iv.lower = xbar - half;
  iv.upper = xbar + half;
  iv.method = "t";
  iv.confidence = confidence;
  return iv;
}

JohnsonT1 johnson_t1(double t, double kappa) {
  JohnsonT1 out;
  if (kappa == 0.0) {
    out.value = t;
    return out;
  }
  // d/dt [t + kappa (2t^2 + 1)] = 1 + 4 kappa t vanishes at t* = -1/(4 kappa).
  const double stationary = -1.0 / (4.0 * kappa);
  const bool beyond = kappa > 0.0 ? t < stationary : t > stationary;
  const double tt = beyond ? stationary : t;
  out.value = tt + kappa * (2.0 * tt * tt + 1.0);
  out.flattened = beyond;
  return out;
}

IntervalEstimate skew_adjusted_t_interval(double xbar, double s, Eigen::Index n,
                                          double gamma_hat, double confidence) {
  if (n < 2) throw InvalidInput("skew_adjusted_t_interval: need n >= 2");
  const double a = 1.0 - confidence;
  const double nn = static_cast<double>(n);
  const double t = upper_t(a, nn - 1.0);
  const double kappa = gamma_hat / (6.0 * std::sqrt(nn));
  const double scale = s / std::sqrt(nn);
  const double shift = kappa * (1.0 + 2.0 * t * t);
  IntervalEstimate iv;
  iv.lower = xbar + (shift - t) * scale;
  iv.upper = xbar + (shift + t) * scale;
  iv.method = "t-skew";
  iv.confidence = confidence;
  return iv;
}

double edgeworth_cdf(EdgeworthKind kind, double x, double gamma, double n) {
  if (!(n >= 1.0)) throw InvalidInput("edgeworth_cdf: need n >= 1");
  const double kappa = gamma / (6.0 * std::sqrt(n));
  double p;
  if (kind == EdgeworthKind::Mean) {
    p = special::normal_cdf(x) - kappa * (x * x - 1.0) * special::normal_pdf(x);
  } else {
    p = special::normal_cdf(x) + kappa * (2.0 * x * x + 1.0) * special::normal_pdf(x);
  }
  return std::fmin(1.0, std::fmax(0.0, p));
}

long required_n_for_t(double gamma, double alpha, double rel_err) {
  if (gamma < 0.0) throw InvalidInput("required_n_for_t: gamma must be >= 0");
  if (!(alpha > 0.0 && alpha < 0.5))
    throw InvalidInput("required_n_for_t: alpha must be in (0, 0.5)");
  if (!(rel_err > 0.0)) throw InvalidInput("required_n_for_t: rel_err must be > 0");
  if (gamma == 0.0) return 0;
  const double z = special::normal_quantile(1.0 - alpha);
  const double bound = gamma / 6.0 * (1.0 / (rel_err * alpha)) *
                       (2.0 * z * z + 1.0) * special::normal_pdf(z);
  return std::lround(bound * bound);
}

long required_r_quantile(double p, double rel_err, double confidence) {
  if (!(p > 0.0 && p < 1.0)) throw InvalidInput("required_r_quantile: p in (0, 1)");
  if (!(rel_err > 0.0)) throw InvalidInput("required_r_quantile: rel_err > 0");
  const double z = special::normal_quantile(0.5 + confidence / 2.0);
  const double bound = z * z * p * (1.0 - p) / ((p * rel_err) * (p * rel_err));
  return static_cast<long>(std::ceil(bound));
}

long required_r_se(double alpha, double confidence) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidInput("required_r_se: alpha in (0, 1)");
  // Perturb the one-sided tail alpha/2 by +10% and ask when the Monte Carlo
  // noise of s_B (SD ~ 1/sqrt(2r)) stays below the induced multiplier shift.
  // The -10% side allows a slightly smaller r and is discarded.
  const double z_half = special::normal_quantile(1.0 - alpha / 2.0);
  const double z_up = special::normal_quantile(1.0 - 1.1 * alpha / 2.0);
  const double zc = special::normal_quantile(0.5 + confidence / 2.0);
  const double threshold = std::fabs(z_up / z_half - 1.0);
  const double bound = zc * zc / (2.0 * threshold * threshold);
  return static_cast<long>(std::ceil(bound));
}

NarrownessRow narrowness_table(Eigen::Index n, double alpha) {
  if (n < 2) throw InvalidInput("narrowness_table: need n >= 2");
  const double nn = static_cast<double>(n);
  const double z = special::normal_quantile(1.0 - alpha / 2.0);
  const double t = upper_t(alpha, nn - 1.0);
  NarrownessRow row;
  row.shrink = std::sqrt((nn - 1.0) / nn);
  row.z_over_t = z / t;
  row.one_sided_size = 1.0 - special::t_cdf(z * row.shrink, nn - 1.0);
  row.alpha_prime_half = expanded_alpha_half(n, alpha);
  return row;
}

double expanded_alpha_half(Eigen::Index n, double alpha) {
  if (n < 2) throw InvalidInput("expanded_alpha_half: need n >= 2");
  const double nn = static_cast<double>(n);
  const double t = upper_t(alpha, nn - 1.0);
  return special::normal_cdf(-std::sqrt(nn / (nn - 1.0)) * t);
}

IntervalEstimate percentile_cf_endpoints(double xbar, double s, Eigen::Index n,
                                         double gamma_hat, double confidence) {
  if (n < 2) throw InvalidInput("percentile_cf_endpoints: need n >= 2");
  const double a = 1.0 - confidence;
  const double nn = static_cast<double>(n);
  const double z = special::normal_quantile(1.0 - a / 2.0);
  const double kappa = gamma_hat / (6.0 * std::sqrt(nn));
  const double scale = s / std::sqrt(nn);
  const double shift = kappa * (z * z - 1.0);
  IntervalEstimate iv;
  iv.lower = xbar + (shift - z) * scale;
  iv.upper = xbar + (shift + z) * scale;
  iv.method = "percentile-cf";
  iv.confidence = confidence;
  return iv;
}

}  // namespace resamp
