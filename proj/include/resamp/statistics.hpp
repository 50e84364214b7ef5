#pragma once

#include <Eigen/Core>
#include <optional>
#include <string>
#include <vector>

namespace resamp {

using Vector = Eigen::VectorXd;
using VectorRef = Eigen::Ref<const Eigen::VectorXd>;

/// Two independent groups of observations (group sizes may differ).
/// For paired statistics (correlation, slope) group1/group2 are the
/// x/y columns and must have equal length.
struct TwoSample {
  Vector group1;
  Vector group2;
};

enum class StatKind {
  Mean,
  TrimmedMean,
  Median,
  VarianceUnbiased,  // s^2, divisor n-1
  VariancePlugin,    // sigma-hat^2, divisor n
  Sd,                // sqrt of s^2
  Skewness,
  Max,
  MeanDifference,  // mean(group1) - mean(group2)
  TPooled,         // oriented like MeanDifference
  TWelch,
  TPuc,
  RelativeRisk,     // mean(group1) / mean(group2)
  LogRelativeRisk,
  Correlation,  // paired
  OlsSlope,     // paired
  RSquared      // paired, simple regression, unadjusted
};

struct StatisticSpec {
  StatKind kind = StatKind::Mean;
  double trim = 0.25;  // trimmed-mean fraction per tail, in [0, 0.5)
};

bool is_two_sample(StatKind kind);
bool is_paired(StatKind kind);

/// True when the statistic depends on the data only through the empirical
/// distribution (doubling every observation leaves it unchanged).
bool is_functional(StatKind kind);

std::string stat_name(StatKind kind);
std::optional<StatisticSpec> parse_stat(const std::string& name);
std::vector<std::string> known_stat_names();

// Basic one-sample summaries.
double mean(const VectorRef& x);
double variance_unbiased(const VectorRef& x);  // s^2
double variance_plugin(const VectorRef& x);    // sigma-hat^2
double sd(const VectorRef& x);
double trimmed_mean(const VectorRef& x, double trim);
double median(const VectorRef& x);

/// gamma-hat = (1/n) sum((x_i - xbar)^3) / s^3.
double skewness_estimate(const VectorRef& x);

double correlation(const VectorRef& x, const VectorRef& y);

enum class TVariant { Pooled, Welch, Puc };

struct TResult {
  double t;
  double df;
};

/// Two-sample t statistic oriented as (mean2 - mean1) / SE, the reporting
/// convention; the Puc variant takes its SE solely from group 1.
TResult two_sample_t(const TwoSample& ts, TVariant variant);

double evaluate(const StatisticSpec& spec, const VectorRef& x);
double evaluate_weighted(const StatisticSpec& spec, const VectorRef& x,
                         const VectorRef& w);
double evaluate(const StatisticSpec& spec, const TwoSample& ts);
double evaluate_weighted(const StatisticSpec& spec, const TwoSample& ts,
                         const VectorRef& w1, const VectorRef& w2);

}  // namespace resamp
