#pragma once

#include <optional>
#include <string>
#include <utility>

#include "resamp/quantile.hpp"
#include "resamp/random.hpp"
#include "resamp/samplers.hpp"
#include "resamp/statistics.hpp"

namespace resamp {

/// The r replicate statistics plus everything needed to reproduce them.
/// Replicates are ordered by stream index; replicate i was computed from
/// resample(s) drawn on stream seed.stream() + i. Undefined replicates
/// (e.g. a zero-denominator ratio) are excluded and counted.
struct BootstrapDistribution {
  Vector replicates;
  double observed = 0.0;
  StatisticSpec statistic;
  SamplerSpec sampler;
  RandomSource seed;
  std::vector<Eigen::Index> sample_sizes;
  long requested_r = 0;
  long undefined_count = 0;
};

struct BootstrapSummary {
  double observed = 0.0;
  double se = 0.0;
  double mean = 0.0;
  double bias = 0.0;  // mean - observed, exactly
};

struct IntervalEstimate {
  double lower = 0.0;
  double upper = 0.0;
  std::string method;
  double confidence = 0.95;
  std::optional<std::pair<double, double>> endpoint_mc_se;
};

BootstrapDistribution run_bootstrap(const VectorRef& data, const StatisticSpec& statistic,
                                    long r, const SamplerSpec& sampler, RandomSource seed,
                                    int threads = 1);

/// Two-sample case: each replicate independently resamples both groups at
/// their own sizes, conditioning on (n1, n2).
BootstrapDistribution run_bootstrap(const TwoSample& data, const StatisticSpec& statistic,
                                    long r, const SamplerSpec& sampler, RandomSource seed,
                                    int threads = 1);

BootstrapSummary summarize(const BootstrapDistribution& bd);

IntervalEstimate percentile_interval(const BootstrapDistribution& bd, double confidence);

/// Percentile interval at the widened tail alpha'/2 = Phi(-sqrt(n/(n-1)) t_{a/2,n-1}),
/// which undoes the small-sample narrowness of the plain percentile interval.
IntervalEstimate expanded_percentile_interval(const BootstrapDistribution& bd,
                                              double confidence, Eigen::Index n);

/// Percentile interval mirrored about the observed statistic.
IntervalEstimate reverse_percentile_interval(const BootstrapDistribution& bd,
                                             double confidence);

/// observed +/- t_{a/2,df} * s_B. df <= 0 uses the normal multiplier.
IntervalEstimate t_with_bootstrap_se(const BootstrapDistribution& bd, double confidence,
                                     double df);
IntervalEstimate t_with_bootstrap_se(double observed, double se_boot, double confidence,
                                     double df);

/// How the bootstrap-t gets its standard errors: a closed formula (mean and
/// mean-difference only) or a second-level bootstrap of size r2 per replicate.
struct SeProvider {
  enum class Kind { Formula, Iterated };
  Kind kind = Kind::Formula;
  long r2 = 50;
};

/// Bootstrap-t machinery: the replicate t* = (theta* - theta) / S* values
/// plus the observed statistic and its standard error.
struct BootstrapTDistribution {
  Vector tstar;       // ordered by stream
  double observed = 0.0;
  double se = 0.0;    // S-hat for the observed statistic
  long requested_r = 0;
  long undefined_count = 0;  // excluded replicates (S* = 0 or undefined value)
  RandomSource seed;
};

BootstrapTDistribution run_bootstrap_t(const VectorRef& data, const StatisticSpec& statistic,
                                       const SeProvider& se_provider, long r,
                                       RandomSource seed, int threads = 1);
BootstrapTDistribution run_bootstrap_t(const TwoSample& data, const StatisticSpec& statistic,
                                       const SeProvider& se_provider, long r,
                                       RandomSource seed, int threads = 1);

/// (theta - q_{1-a/2} S, theta - q_{a/2} S): upper t* quantile sets the
/// lower endpoint and vice versa.
IntervalEstimate bootstrap_t_interval(const BootstrapTDistribution& td, double confidence);

/// Lower/upper P-values G(t), 1 - G(t) of t = (theta - theta0)/S within the
/// t* distribution, with the (x+1)/(r+1) tail rule.
struct BootstrapTPValue {
  double lower = 0.0;
  double upper = 0.0;
  double two_sided = 0.0;
};
BootstrapTPValue bootstrap_t_pvalue(const BootstrapTDistribution& td, double theta0);

// Monte Carlo error calculators.
double mc_se_proportion(double p_hat, long r);
double mc_se_mean(double s_boot, long r);

/// Bootstraps the bootstrap: resamples the replicate vector outer_r times
/// and returns the SD of the recomputed quantile, one value per requested p.
std::vector<double> mc_se_quantiles(const VectorRef& replicates,
                                    const std::vector<double>& ps, long outer_r,
                                    RandomSource seed);

/// Exponential-tilting weights w_i proportional to exp(tau x_i), normalized
/// to sum 1, with tau solving sum(w_i x_i) = mu0.
Vector tilting_weights(const VectorRef& data, double mu0);

/// Diagnostic only: 2 theta - mean(theta*). Never applied automatically.
double bias_adjusted_estimate(const BootstrapSummary& s);

}  // namespace resamp
