#pragma once

#include "resamp/bootstrap.hpp"

namespace resamp {

/// xbar +/- t_{a/2,n-1} s/sqrt(n).
IntervalEstimate student_t_interval(double xbar, double s, Eigen::Index n,
                                    double confidence);

struct JohnsonT1 {
  double value = 0.0;
  /// Set when t lies beyond the stationary point of t + kappa(2t^2+1);
  /// the value is then held flat at the extremum.
  bool flattened = false;
};

/// Skewness-corrected t statistic t1 = t + kappa (2t^2 + 1), flattened
/// past its stationary point so the map stays monotone.
JohnsonT1 johnson_t1(double t, double kappa);

/// xbar + (s/sqrt(n)) (kappa (1 + 2 t^2) +/- t) with kappa = gamma/(6 sqrt(n)):
/// both endpoints shift toward the long tail by the same amount.
IntervalEstimate skew_adjusted_t_interval(double xbar, double s, Eigen::Index n,
                                          double gamma_hat, double confidence);

enum class EdgeworthKind { Mean, TStat };

/// First-order Edgeworth CDF approximation:
///   mean:  Phi(x) - kappa (x^2 - 1) phi(x)
///   t:     Phi(x) + kappa (2x^2 + 1) phi(x)
/// with kappa = gamma/(6 sqrt(n)), clamped to [0, 1].
double edgeworth_cdf(EdgeworthKind kind, double x, double gamma, double n);

/// Sample size needed before the one-sided t rejection error drops to
/// rel_err of the nominal one-sided level alpha.
long required_n_for_t(double gamma, double alpha, double rel_err = 0.1);

/// Resamples needed to keep the Monte Carlo error of the estimated quantile
/// tail below rel_err of p, with the given confidence.
long required_r_quantile(double p, double rel_err, double confidence);

/// Resamples needed so that noise in s_B moves the effective one-sided
/// level by less than 10% of alpha/2 (the binding, upper-perturbation side).
long required_r_se(double alpha, double confidence);

struct NarrownessRow {
  double shrink = 0.0;           // sqrt((n-1)/n)
  double z_over_t = 0.0;         // z_{a/2} / t_{a/2,n-1}
  double one_sided_size = 0.0;   // P(T_{n-1} > z_{a/2} sqrt((n-1)/n))
  double alpha_prime_half = 0.0; // adjusted percentile tail
};

NarrownessRow narrowness_table(Eigen::Index n, double alpha = 0.05);

/// Adjusted tail alpha'/2 = Phi(-sqrt(n/(n-1)) t_{a/2,n-1}) used by the
/// expanded percentile interval.
double expanded_alpha_half(Eigen::Index n, double alpha);

/// Large-sample location of percentile-interval endpoints,
/// xbar + (s/sqrt(n)) (kappa (z^2 - 1) +/- z); a diagnostic, not an interval
/// recommendation.
IntervalEstimate percentile_cf_endpoints(double xbar, double s, Eigen::Index n,
                                         double gamma_hat, double confidence);

}  // namespace resamp
