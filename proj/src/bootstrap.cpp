#include "resamp/bootstrap.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "resamp/errors.hpp"
#include "resamp/parallel.hpp"
#include "resamp/special.hpp"

namespace resamp {

namespace {

constexpr double kUndefinedFractionLimit = 0.01;

double tail_alpha(double confidence) {
  if (!(confidence > 0.0 && confidence < 1.0))
    throw InvalidInput("confidence must be in (0, 1)");
  return 1.0 - confidence;
}

Vector sorted_copy(const Vector& v) {
  std::vector<double> tmp(v.data(), v.data() + v.size());
  std::sort(tmp.begin(), tmp.end());
  return Eigen::Map<const Vector>(tmp.data(), static_cast<Eigen::Index>(tmp.size()));
}

// Collects per-replicate values, dropping non-finite/undefined ones with a
// tally; errors out when more than 1% of replicates are lost.
struct ReplicateCollector {
  explicit ReplicateCollector(long r) : values(r), defined(static_cast<std::size_t>(r), 0) {}

  Vector values;
  std::vector<char> defined;

  void set(long i, double v) {
    if (std::isfinite(v)) {
      values[i] = v;
      defined[static_cast<std::size_t>(i)] = 1;
    }
  }

  std::pair<Vector, long> take(long r, const char* who) {
    long kept = 0;
    for (long i = 0; i < r; ++i)
      if (defined[static_cast<std::size_t>(i)]) ++kept;
    const long dropped = r - kept;
    if (dropped > static_cast<long>(kUndefinedFractionLimit * static_cast<double>(r)))
      throw Degenerate(std::string(who) + ": more than 1% of replicates are undefined (" +
                       std::to_string(dropped) + " of " + std::to_string(r) + ")");
    Vector out(kept);
    long k = 0;
    for (long i = 0; i < r; ++i)
      if (defined[static_cast<std::size_t>(i)]) out[k++] = values[i];
    return {std::move(out), dropped};
  }
};

}  // namespace

BootstrapDistribution run_bootstrap(const VectorRef& data, const StatisticSpec& statistic,
                                    long r, const SamplerSpec& sampler, RandomSource seed,
                                    int threads) {
  if (r < 1) throw InvalidInput("run_bootstrap: need r >= 1");
  if (data.size() == 0) throw InvalidInput("run_bootstrap: empty data");
  if (is_two_sample(statistic.kind))
    throw InvalidInput("run_bootstrap: statistic '" + stat_name(statistic.kind) +
                       "' needs a two-sample input");

  BootstrapDistribution bd;
  bd.statistic = statistic;
  bd.sampler = sampler;
  bd.seed = seed;
  bd.sample_sizes = {data.size()};
  bd.requested_r = r;
  bd.observed = evaluate(statistic, data);

  const Vector owned = data;  // stable copy shared across threads
  ReplicateCollector collector(r);
  parallel_for(0, r, threads, [&](long i) {
    Rng rng(seed.offset(static_cast<std::uint64_t>(i)));
    double value;
    try {
      if (sampler.variant == SamplerSpec::Variant::PoissonWeights) {
        const Vector w = poisson_weights(owned.size(), rng);
        value = evaluate_weighted(statistic, owned, w);
      } else {
        value = evaluate(statistic, draw(sampler, owned, rng, i));
      }
    } catch (const Degenerate&) {
      return;  // undefined replicate, tallied by the collector
    }
    collector.set(i, value);
  });
  auto [values, dropped] = collector.take(r, "run_bootstrap");
  bd.replicates = std::move(values);
  bd.undefined_count = dropped;
  return bd;
}

BootstrapDistribution run_bootstrap(const TwoSample& data, const StatisticSpec& statistic,
                                    long r, const SamplerSpec& sampler, RandomSource seed,
                                    int threads) {
  if (r < 1) throw InvalidInput("run_bootstrap: need r >= 1");
  if (data.group1.size() == 0 || data.group2.size() == 0)
    throw InvalidInput("run_bootstrap: empty group");

  BootstrapDistribution bd;
  bd.statistic = statistic;
  bd.sampler = sampler;
  bd.seed = seed;
  bd.sample_sizes = {data.group1.size(), data.group2.size()};
  bd.requested_r = r;
  bd.observed = evaluate(statistic, data);

  const TwoSample owned = data;
  ReplicateCollector collector(r);
  parallel_for(0, r, threads, [&](long i) {
    Rng rng(seed.offset(static_cast<std::uint64_t>(i)));
    double value;
    try {
      if (sampler.variant == SamplerSpec::Variant::PoissonWeights) {
        const Vector w1 = poisson_weights(owned.group1.size(), rng);
        const Vector w2 = poisson_weights(owned.group2.size(), rng);
        value = evaluate_weighted(statistic, owned, w1, w2);
      } else {
        TwoSample res;
        res.group1 = draw(sampler, owned.group1, rng, i);
        res.group2 = draw(sampler, owned.group2, rng, i);
        value = evaluate(statistic, res);
      }
    } catch (const Degenerate&) {
      return;
    }
    collector.set(i, value);
  });
  auto [values, dropped] = collector.take(r, "run_bootstrap");
  bd.replicates = std::move(values);
  bd.undefined_count = dropped;
  return bd;
}

BootstrapSummary summarize(const BootstrapDistribution& bd) {
  const Eigen::Index r = bd.replicates.size();
  if (r < 2) throw InvalidInput("summarize: need at least 2 replicates");
  BootstrapSummary s;
  s.observed = bd.observed;
  s.mean = bd.replicates.mean();
  s.se = std::sqrt((bd.replicates.array() - s.mean).square().sum() /
                   static_cast<double>(r - 1));
  s.bias = s.mean - s.observed;
  return s;
}

IntervalEstimate percentile_interval(const BootstrapDistribution& bd, double confidence) {
  if (bd.replicates.size() < 2) throw InvalidInput("percentile_interval: need r >= 2");
  const double a = tail_alpha(confidence);
  const Vector sorted = sorted_copy(bd.replicates);
  IntervalEstimate iv;
  iv.lower = quantile_interp_sorted(sorted, a / 2.0);
  iv.upper = quantile_interp_sorted(sorted, 1.0 - a / 2.0);
  iv.method = "percentile";
  iv.confidence = confidence;
  return iv;
}

IntervalEstimate expanded_percentile_interval(const BootstrapDistribution& bd,
                                              double confidence, Eigen::Index n) {
  if (n < 2) throw InvalidInput("expanded_percentile_interval: need n >= 2");
  const double a = tail_alpha(confidence);
  const double nn = static_cast<double>(n);
  const double t = special::t_quantile(1.0 - a / 2.0, nn - 1.0);
  const double adj = special::normal_cdf(-std::sqrt(nn / (nn - 1.0)) * t);
  const Vector sorted = sorted_copy(bd.replicates);
  IntervalEstimate iv;
  iv.lower = quantile_interp_sorted(sorted, adj);
  iv.upper = quantile_interp_sorted(sorted, 1.0 - adj);
  iv.method = "expanded";
  iv.confidence = confidence;
  return iv;
}

IntervalEstimate reverse_percentile_interval(const BootstrapDistribution& bd,
                                             double confidence) {
  const IntervalEstimate perc = percentile_interval(bd, confidence);
  IntervalEstimate iv;
  iv.lower = 2.0 * bd.observed - perc.upper;
  iv.upper = 2.0 * bd.observed - perc.lower;
  iv.method = "reverse";
  iv.confidence = confidence;
  return iv;
}

IntervalEstimate t_with_bootstrap_se(double observed, double se_boot, double confidence,
                                     double df) {
  const double a = tail_alpha(confidence);
  const double mult = df > 0.0 ? special::t_quantile(1.0 - a / 2.0, df)
                               : special::normal_quantile(1.0 - a / 2.0);
  IntervalEstimate iv;
  iv.lower = observed - mult * se_boot;
  iv.upper = observed + mult * se_boot;
  iv.method = "t-bootse";
  iv.confidence = confidence;
  return iv;
}

IntervalEstimate t_with_bootstrap_se(const BootstrapDistribution& bd, double confidence,
                                     double df) {
  const BootstrapSummary s = summarize(bd);
  return t_with_bootstrap_se(s.observed, s.se, confidence, df);
}

namespace {

// Formula standard error S-hat used by the bootstrap-t: s/sqrt(n) for the
// mean, Welch form for the difference of means.
double formula_se(const StatisticSpec& statistic, const VectorRef& data) {
  if (statistic.kind != StatKind::Mean)
    throw InvalidInput("bootstrap-t formula SE supports only the mean; use iterated");
  if (data.size() < 2) throw InvalidInput("bootstrap-t: need n >= 2");
  return sd(data) / std::sqrt(static_cast<double>(data.size()));
}

double formula_se(const StatisticSpec& statistic, const TwoSample& data) {
  if (statistic.kind != StatKind::MeanDifference)
    throw InvalidInput(
        "bootstrap-t formula SE supports only mean-diff for two samples; use iterated");
  if (data.group1.size() < 2 || data.group2.size() < 2)
    throw InvalidInput("bootstrap-t: need n >= 2 in each group");
  return std::sqrt(variance_unbiased(data.group1) / static_cast<double>(data.group1.size()) +
                   variance_unbiased(data.group2) / static_cast<double>(data.group2.size()));
}

double bootstrap_se_of(const VectorRef& sample, const StatisticSpec& statistic, long r2,
                       Rng& rng) {
  Vector reps(r2);
  for (long j = 0; j < r2; ++j)
    reps[j] = evaluate(statistic, draw_with_replacement(sample, sample.size(), rng));
  const double m = reps.mean();
  return std::sqrt((reps.array() - m).square().sum() / static_cast<double>(r2 - 1));
}

double bootstrap_se_of(const TwoSample& sample, const StatisticSpec& statistic, long r2,
                       Rng& rng) {
  Vector reps(r2);
  for (long j = 0; j < r2; ++j) {
    TwoSample res;
    res.group1 = draw_with_replacement(sample.group1, sample.group1.size(), rng);
    res.group2 = draw_with_replacement(sample.group2, sample.group2.size(), rng);
    reps[j] = evaluate(statistic, res);
  }
  const double m = reps.mean();
  return std::sqrt((reps.array() - m).square().sum() / static_cast<double>(r2 - 1));
}

template <typename Data>
BootstrapTDistribution run_bootstrap_t_impl(const Data& data, const StatisticSpec& statistic,
                                            const SeProvider& se_provider, long r,
                                            RandomSource seed, int threads) {
  if (r < 2) throw InvalidInput("run_bootstrap_t: need r >= 2");
  if (se_provider.kind == SeProvider::Kind::Iterated && se_provider.r2 < 25)
    throw InvalidInput("run_bootstrap_t: iterated provider needs r2 >= 25");

  BootstrapTDistribution td;
  td.observed = evaluate(statistic, data);
  td.requested_r = r;
  td.seed = seed;

  const Data owned = data;
  ReplicateCollector tstar(r);
  ReplicateCollector theta(r);
  parallel_for(0, r, threads, [&](long i) {
    Rng rng(seed.offset(static_cast<std::uint64_t>(i)));
    try {
      Data res;
      if constexpr (std::is_same_v<Data, TwoSample>) {
        res.group1 = draw_with_replacement(owned.group1, owned.group1.size(), rng);
        res.group2 = draw_with_replacement(owned.group2, owned.group2.size(), rng);
      } else {
        res = draw_with_replacement(owned, owned.size(), rng);
      }
      const double theta_star = evaluate(statistic, res);
      double se_star;
      if (se_provider.kind == SeProvider::Kind::Formula) {
        se_star = formula_se(statistic, res);
      } else {
        // Second-level resamples continue on the replicate's own stream.
        se_star = bootstrap_se_of(res, statistic, se_provider.r2, rng);
      }
      if (se_star > 0.0) {
        tstar.set(i, (theta_star - td.observed) / se_star);
        theta.set(i, theta_star);
      }
    } catch (const Degenerate&) {
    }
  });
  auto [tvalues, dropped] = tstar.take(r, "run_bootstrap_t");
  td.tstar = std::move(tvalues);
  td.undefined_count = dropped;

  if (se_provider.kind == SeProvider::Kind::Formula) {
    td.se = formula_se(statistic, data);
  } else {
    // S-hat for the observed statistic is the first-level bootstrap SE,
    // so the iterated scheme costs exactly r * (1 + r2) resamples.
    auto [theta_values, theta_dropped] = theta.take(r, "run_bootstrap_t");
    (void)theta_dropped;
    if (theta_values.size() < 2) throw Degenerate("run_bootstrap_t: too few replicates");
    const double m = theta_values.mean();
    td.se = std::sqrt((theta_values.array() - m).square().sum() /
                      static_cast<double>(theta_values.size() - 1));
  }
  if (!(td.se > 0.0)) throw Degenerate("run_bootstrap_t: zero standard error");
  return td;
}

}  // namespace

BootstrapTDistribution run_bootstrap_t(const VectorRef& data, const StatisticSpec& statistic,
                                       const SeProvider& se_provider, long r,
                                       RandomSource seed, int threads) {
  const Vector owned = data;
  return run_bootstrap_t_impl<Vector>(owned, statistic, se_provider, r, seed, threads);
}

BootstrapTDistribution run_bootstrap_t(const TwoSample& data, const StatisticSpec& statistic,
                                       const SeProvider& se_provider, long r,
                                       RandomSource seed, int threads) {
  return run_bootstrap_t_impl<TwoSample>(data, statistic, se_provider, r, seed, threads);
}

IntervalEstimate bootstrap_t_interval(const BootstrapTDistribution& td, double confidence) {
  if (td.tstar.size() < 2) throw InvalidInput("bootstrap_t_interval: need r >= 2");
  const double a = tail_alpha(confidence);
  const Vector sorted = sorted_copy(td.tstar);
  IntervalEstimate iv;
  iv.lower = td.observed - quantile_interp_sorted(sorted, 1.0 - a / 2.0) * td.se;
  iv.upper = td.observed - quantile_interp_sorted(sorted, a / 2.0) * td.se;
  iv.method = "boot-t";
  iv.confidence = confidence;
  return iv;
}

BootstrapTPValue bootstrap_t_pvalue(const BootstrapTDistribution& td, double theta0) {
  const Eigen::Index r = td.tstar.size();
  if (r < 2) throw InvalidInput("bootstrap_t_pvalue: need r >= 2");
  const double t = (td.observed - theta0) / td.se;
  long below_eq = 0, above_eq = 0;
  for (Eigen::Index i = 0; i < r; ++i) {
    if (td.tstar[i] <= t) ++below_eq;
    if (td.tstar[i] >= t) ++above_eq;
  }
  BootstrapTPValue p;
  p.lower = static_cast<double>(below_eq + 1) / static_cast<double>(r + 1);
  p.upper = static_cast<double>(above_eq + 1) / static_cast<double>(r + 1);
  p.two_sided = std::fmin(1.0, 2.0 * std::fmin(p.lower, p.upper));
  return p;
}

double mc_se_proportion(double p_hat, long r) {
  if (r < 2) throw InvalidInput("mc_se_proportion: need r >= 2");
  return std::sqrt(p_hat * (1.0 - p_hat) / static_cast<double>(r));
}

double mc_se_mean(double s_boot, long r) {
  if (r < 2) throw InvalidInput("mc_se_mean: need r >= 2");
  return s_boot / std::sqrt(static_cast<double>(r));
}

std::vector<double> mc_se_quantiles(const VectorRef& replicates,
                                    const std::vector<double>& ps, long outer_r,
                                    RandomSource seed) {
  const Eigen::Index r = replicates.size();
  if (r < 2) throw InvalidInput("mc_se_quantiles: need r >= 2");
  if (outer_r < 100) throw InvalidInput("mc_se_quantiles: need outer_r >= 100");
  Eigen::MatrixXd qs(outer_r, static_cast<Eigen::Index>(ps.size()));
  Rng rng(seed);
  std::vector<double> buf(static_cast<std::size_t>(r));
  for (long b = 0; b < outer_r; ++b) {
    for (Eigen::Index i = 0; i < r; ++i)
      buf[static_cast<std::size_t>(i)] =
          replicates[static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(r)))];
    std::sort(buf.begin(), buf.end());
    const Eigen::Map<const Vector> sorted(buf.data(), r);
    for (std::size_t k = 0; k < ps.size(); ++k)
      qs(b, static_cast<Eigen::Index>(k)) = quantile_interp_sorted(sorted, ps[k]);
  }
  std::vector<double> out(ps.size());
  for (std::size_t k = 0; k < ps.size(); ++k) {
    const auto col = qs.col(static_cast<Eigen::Index>(k));
    const double m = col.mean();
    out[k] = std::sqrt((col.array() - m).square().sum() / static_cast<double>(outer_r - 1));
  }
  return out;
}

Vector tilting_weights(const VectorRef& data, double mu0) {
  const Eigen::Index n = data.size();
  if (n == 0) throw InvalidInput("tilting_weights: empty data");
  const double lo = data.minCoeff();
  const double hi = data.maxCoeff();
  if (!(mu0 > lo && mu0 < hi))
    throw InvalidInput("tilting_weights: mu0 must lie strictly inside the data range");

  // Weighted mean under w_i = c exp(tau x_i) is strictly increasing in tau;
  // center x at mu0 for numerical stability, then bisect.
  const Vector centered = data.array() - mu0;
  auto weighted_mean = [&](double tau) {
    const double shift = (centered.array() * tau).maxCoeff();
    const Vector w = ((centered.array() * tau) - shift).exp();
    return centered.cwiseProduct(w).sum() / w.sum();
  };

  double tlo = -1.0, thi = 1.0;
  while (weighted_mean(tlo) > 0.0) tlo *= 2.0;
  while (weighted_mean(thi) < 0.0) thi *= 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (tlo + thi);
    const double f = weighted_mean(mid);
    if (f > 0.0) thi = mid; else tlo = mid;
    if (thi - tlo < 1e-15 * (1.0 + std::fabs(tlo))) break;
  }
  const double tau = 0.5 * (tlo + thi);
  const double shift = (centered.array() * tau).maxCoeff();
  Vector w = ((centered.array() * tau) - shift).exp();
  w /= w.sum();
  return w;
}

double bias_adjusted_estimate(const BootstrapSummary& s) {
  return 2.0 * s.observed - s.mean;
}

}  // namespace resamp
