#include "resamp/statistics.hpp"

#include <algorithm>
#include <cmath>

#include "resamp/errors.hpp"

namespace resamp {

namespace {

void require_nonempty(const VectorRef& x, const char* who) {
  if (x.size() == 0) throw InvalidInput(std::string(who) + ": empty sample");
}

double ols_slope_impl(const VectorRef& x, const VectorRef& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw InvalidInput("ols-slope: need paired samples of equal length >= 2");
  const double xb = x.mean();
  const double yb = y.mean();
  const double sxx = (x.array() - xb).square().sum();
  if (sxx == 0.0) throw Degenerate("ols-slope: x has zero variance");
  return (x.array() - xb).cwiseProduct(y.array() - yb).sum() / sxx;
}

double r_squared_impl(const VectorRef& x, const VectorRef& y) {
  const double slope = ols_slope_impl(x, y);
  const double xb = x.mean();
  const double yb = y.mean();
  const double sst = (y.array() - yb).square().sum();
  if (sst == 0.0) throw Degenerate("r-squared: y has zero variance");
  const auto fitted = yb + slope * (x.array() - xb);
  const double sse = (y.array() - fitted).square().sum();
  return 1.0 - sse / sst;
}

double relative_risk_impl(const VectorRef& g1, const VectorRef& g2, bool log_scale) {
  const double p1 = g1.mean();
  const double p2 = g2.mean();
  if (p2 == 0.0) throw RatioUndefined("relative-risk: denominator rate is zero");
  const double rr = p1 / p2;
  if (log_scale) {
    if (rr <= 0.0) throw RatioUndefined("log-relative-risk: nonpositive ratio");
    return std::log(rr);
  }
  return rr;
}

}  // namespace

bool is_two_sample(StatKind kind) {
  switch (kind) {
    case StatKind::MeanDifference:
    case StatKind::TPooled:
    case StatKind::TWelch:
    case StatKind::TPuc:
    case StatKind::RelativeRisk:
    case StatKind::LogRelativeRisk:
    case StatKind::Correlation:
    case StatKind::OlsSlope:
    case StatKind::RSquared:
      return true;
    default:
      return false;
  }
}

bool is_paired(StatKind kind) {
  return kind == StatKind::Correlation || kind == StatKind::OlsSlope ||
         kind == StatKind::RSquared;
}

bool is_functional(StatKind kind) {
  switch (kind) {
    case StatKind::VarianceUnbiased:
    case StatKind::Sd:
    case StatKind::Skewness:
    case StatKind::TPooled:
    case StatKind::TWelch:
    case StatKind::TPuc:
      return false;
    default:
      return true;
  }
}

std::string stat_name(StatKind kind) {
  switch (kind) {
    case StatKind::Mean: return "mean";
    case StatKind::TrimmedMean: return "trimmed-mean";
    case StatKind::Median: return "median";
    case StatKind::VarianceUnbiased: return "variance";
    case StatKind::VariancePlugin: return "variance-plugin";
    case StatKind::Sd: return "sd";
    case StatKind::Skewness: return "skewness";
    case StatKind::Max: return "max";
    case StatKind::MeanDifference: return "mean-diff";
    case StatKind::TPooled: return "t-pooled";
    case StatKind::TWelch: return "t-welch";
    case StatKind::TPuc: return "t-puc";
    case StatKind::RelativeRisk: return "relative-risk";
    case StatKind::LogRelativeRisk: return "log-relative-risk";
    case StatKind::Correlation: return "correlation";
    case StatKind::OlsSlope: return "ols-slope";
    case StatKind::RSquared: return "r-squared";
  }
  return "?";
}

std::optional<StatisticSpec> parse_stat(const std::string& name) {
  StatisticSpec spec;
  std::string base = name;
  const auto colon = name.find(':');
  if (colon != std::string::npos) {
    base = name.substr(0, colon);
    try {
      spec.trim = std::stod(name.substr(colon + 1));
    } catch (...) {
      return std::nullopt;
    }
  }
  if (base == "mean") spec.kind = StatKind::Mean;
  else if (base == "trimmed-mean") spec.kind = StatKind::TrimmedMean;
  else if (base == "median") spec.kind = StatKind::Median;
  else if (base == "variance" || base == "s2") spec.kind = StatKind::VarianceUnbiased;
  else if (base == "variance-plugin") spec.kind = StatKind::VariancePlugin;
  else if (base == "sd") spec.kind = StatKind::Sd;
  else if (base == "skewness") spec.kind = StatKind::Skewness;
  else if (base == "max") spec.kind = StatKind::Max;
  else if (base == "mean-diff" || base == "mean-difference") spec.kind = StatKind::MeanDifference;
  else if (base == "t-pooled") spec.kind = StatKind::TPooled;
  else if (base == "t-welch") spec.kind = StatKind::TWelch;
  else if (base == "t-puc") spec.kind = StatKind::TPuc;
  else if (base == "relative-risk") spec.kind = StatKind::RelativeRisk;
  else if (base == "log-relative-risk") spec.kind = StatKind::LogRelativeRisk;
  else if (base == "correlation") spec.kind = StatKind::Correlation;
  else if (base == "ols-slope") spec.kind = StatKind::OlsSlope;
  else if (base == "r-squared") spec.kind = StatKind::RSquared;
  else return std::nullopt;
  return spec;
}

std::vector<std::string> known_stat_names() {
  return {"mean",          "trimmed-mean", "median",        "variance",
          "variance-plugin", "sd",         "skewness",      "max",
          "mean-diff",     "t-pooled",     "t-welch",       "t-puc",
          "relative-risk", "log-relative-risk", "correlation", "ols-slope",
          "r-squared"};
}

double mean(const VectorRef& x) {
  require_nonempty(x, "mean");
  return x.mean();
}

double variance_unbiased(const VectorRef& x) {
  if (x.size() < 2) throw InvalidInput("variance: need n >= 2");
  const double m = x.mean();
  return (x.array() - m).square().sum() / static_cast<double>(x.size() - 1);
}

double variance_plugin(const VectorRef& x) {
  require_nonempty(x, "variance-plugin");
  const double m = x.mean();
  return (x.array() - m).square().sum() / static_cast<double>(x.size());
}

double sd(const VectorRef& x) { return std::sqrt(variance_unbiased(x)); }

double trimmed_mean(const VectorRef& x, double trim) {
  require_nonempty(x, "trimmed-mean");
  if (trim < 0.0 || trim >= 0.5) throw InvalidInput("trimmed-mean: trim must be in [0, 0.5)");
  const Eigen::Index n = x.size();
  const auto k = static_cast<Eigen::Index>(std::floor(trim * static_cast<double>(n)));
  if (n - 2 * k < 1) throw InvalidInput("trimmed-mean: trim leaves no observations");
  std::vector<double> sorted(x.data(), x.data() + n);
  std::sort(sorted.begin(), sorted.end());
  double acc = 0.0;
  for (Eigen::Index i = k; i < n - k; ++i) acc += sorted[i];
  return acc / static_cast<double>(n - 2 * k);
}

double median(const VectorRef& x) {
  require_nonempty(x, "median");
  std::vector<double> sorted(x.data(), x.data() + x.size());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  if (n % 2 == 1) return sorted[n / 2];
  return 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
}

double skewness_estimate(const VectorRef& x) {
  if (x.size() < 2) throw InvalidInput("skewness: need n >= 2");
  const double m = x.mean();
  const double s = sd(x);
  if (s == 0.0) throw Degenerate("skewness: sample has zero variance");
  const double m3 = (x.array() - m).cube().sum() / static_cast<double>(x.size());
  return m3 / (s * s * s);
}

double correlation(const VectorRef& x, const VectorRef& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw InvalidInput("correlation: need equal lengths >= 2");
  const double xb = x.mean();
  const double yb = y.mean();
  const double sxx = (x.array() - xb).square().sum();
  const double syy = (y.array() - yb).square().sum();
  if (sxx == 0.0 || syy == 0.0) throw Degenerate("correlation: zero variance");
  const double sxy = (x.array() - xb).cwiseProduct(y.array() - yb).sum();
  return sxy / std::sqrt(sxx * syy);
}

TResult two_sample_t(const TwoSample& ts, TVariant variant) {
  const Eigen::Index n1 = ts.group1.size();
  const Eigen::Index n2 = ts.group2.size();
  if (n1 < 2 || n2 < 2) throw InvalidInput("two_sample_t: each group needs n >= 2");
  const double d = ts.group2.mean() - ts.group1.mean();
  const double v1 = variance_unbiased(ts.group1);
  const double v2 = variance_unbiased(ts.group2);
  switch (variant) {
    case TVariant::Pooled: {
      const double vp = ((n1 - 1) * v1 + (n2 - 1) * v2) / static_cast<double>(n1 + n2 - 2);
      if (vp == 0.0) throw Degenerate("two_sample_t: zero pooled variance");
      const double se = std::sqrt(vp * (1.0 / n1 + 1.0 / n2));
      return {d / se, static_cast<double>(n1 + n2 - 2)};
    }
    case TVariant::Welch: {
      const double a = v1 / static_cast<double>(n1);
      const double b = v2 / static_cast<double>(n2);
      if (a + b == 0.0) throw Degenerate("two_sample_t: zero variance");
      const double df = (a + b) * (a + b) / (a * a / (n1 - 1) + b * b / (n2 - 1));
      return {d / std::sqrt(a + b), df};
    }
    case TVariant::Puc: {
      if (v1 == 0.0) throw Degenerate("two_sample_t: group-1 variance is zero");
      const double se = std::sqrt(v1) * std::sqrt(1.0 / n1 + 1.0 / n2);
      return {d / se, static_cast<double>(n1 - 1)};
    }
  }
  throw InvalidInput("two_sample_t: unknown variant");
}

double evaluate(const StatisticSpec& spec, const VectorRef& x) {
  switch (spec.kind) {
    case StatKind::Mean: return mean(x);
    case StatKind::TrimmedMean: return trimmed_mean(x, spec.trim);
    case StatKind::Median: return median(x);
    case StatKind::VarianceUnbiased: return variance_unbiased(x);
    case StatKind::VariancePlugin: return variance_plugin(x);
    case StatKind::Sd: return sd(x);
    case StatKind::Skewness: return skewness_estimate(x);
    case StatKind::Max:
      require_nonempty(x, "max");
      return x.maxCoeff();
    default:
      throw InvalidInput("statistic '" + stat_name(spec.kind) +
                         "' needs two samples");
  }
}

double evaluate_weighted(const StatisticSpec& spec, const VectorRef& x,
                         const VectorRef& w) {
  require_nonempty(x, "evaluate_weighted");
  if (w.size() != x.size()) throw InvalidInput("weights length mismatch");
  if ((w.array() < 0.0).any()) throw InvalidInput("weights must be nonnegative");
  const double total = w.sum();
  if (total <= 0.0) throw Degenerate("weights sum to zero");
  const double wm = x.cwiseProduct(w).sum() / total;
  switch (spec.kind) {
    case StatKind::Mean:
      return wm;
    case StatKind::VariancePlugin:
      return (x.array() - wm).square().matrix().cwiseProduct(w).sum() / total;
    case StatKind::VarianceUnbiased: {
      const double n = static_cast<double>(x.size());
      return evaluate_weighted({StatKind::VariancePlugin}, x, w) * n / (n - 1.0);
    }
    case StatKind::Sd:
      return std::sqrt(evaluate_weighted({StatKind::VarianceUnbiased}, x, w));
    default:
      throw InvalidInput("statistic '" + stat_name(spec.kind) +
                         "' does not support weights");
  }
}

double evaluate(const StatisticSpec& spec, const TwoSample& ts) {
  const Vector& g1 = ts.group1;
  const Vector& g2 = ts.group2;
  if (g1.size() == 0 || g2.size() == 0) throw InvalidInput("empty group");
  switch (spec.kind) {
    case StatKind::MeanDifference: return g1.mean() - g2.mean();
    // Permutation testing compares these against MeanDifference on the same
    // stream, so they carry the same (group1 - group2) orientation; the
    // reporting convention lives in two_sample_t.
    case StatKind::TPooled: return -two_sample_t(ts, TVariant::Pooled).t;
    case StatKind::TWelch: return -two_sample_t(ts, TVariant::Welch).t;
    case StatKind::TPuc: return -two_sample_t(ts, TVariant::Puc).t;
    case StatKind::RelativeRisk: return relative_risk_impl(g1, g2, false);
    case StatKind::LogRelativeRisk: return relative_risk_impl(g1, g2, true);
    case StatKind::Correlation: return correlation(g1, g2);
    case StatKind::OlsSlope: return ols_slope_impl(g1, g2);
    case StatKind::RSquared: return r_squared_impl(g1, g2);
    // One-sample statistics on a TwoSample read group 1; permutation tests
    // use this to show that "either group mean alone" is an equivalent
    // two-sample comparator.
    default: return evaluate(spec, g1);
  }
}

double evaluate_weighted(const StatisticSpec& spec, const TwoSample& ts,
                         const VectorRef& w1, const VectorRef& w2) {
  switch (spec.kind) {
    case StatKind::MeanDifference:
      return evaluate_weighted({StatKind::Mean}, ts.group1, w1) -
             evaluate_weighted({StatKind::Mean}, ts.group2, w2);
    case StatKind::RelativeRisk:
    case StatKind::LogRelativeRisk: {
      const double p1 = evaluate_weighted({StatKind::Mean}, ts.group1, w1);
      const double p2 = evaluate_weighted({StatKind::Mean}, ts.group2, w2);
      if (p2 == 0.0) throw RatioUndefined("relative-risk: denominator rate is zero");
      const double rr = p1 / p2;
      if (spec.kind == StatKind::RelativeRisk) return rr;
      if (rr <= 0.0) throw RatioUndefined("log-relative-risk: nonpositive ratio");
      return std::log(rr);
    }
    default:
      throw InvalidInput("statistic '" + stat_name(spec.kind) +
                         "' does not support weights");
  }
}

}  // namespace resamp
