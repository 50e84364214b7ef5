#include "resamp/coverage.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "resamp/analytic.hpp"
#include "resamp/errors.hpp"
#include "resamp/parallel.hpp"
#include "resamp/special.hpp"

namespace resamp {

double PopulationSpec::true_mean() const {
  switch (family) {
    case Family::Normal: return mu;
    case Family::Exponential: return mean;
    case Family::Gamma: return shape * scale;
  }
  return 0.0;
}

double PopulationSpec::true_sd() const {
  switch (family) {
    case Family::Normal: return sigma;
    case Family::Exponential: return mean;
    case Family::Gamma: return std::sqrt(shape) * scale;
  }
  return 0.0;
}

std::string PopulationSpec::name() const {
  switch (family) {
    case Family::Normal: return "normal";
    case Family::Exponential: return "exponential";
    case Family::Gamma: return "gamma";
  }
  return "?";
}

std::string method_name(CoverageMethod m) {
  switch (m) {
    case CoverageMethod::T: return "t";
    case CoverageMethod::TSkew: return "tSkew";
    case CoverageMethod::TBoot: return "tBoot";
    case CoverageMethod::Perc: return "perc";
    case CoverageMethod::Expanded: return "expanded";
    case CoverageMethod::Reverse: return "reverse";
    case CoverageMethod::BootT: return "bootT";
  }
  return "?";
}

std::optional<CoverageMethod> parse_method(const std::string& name) {
  for (const auto m : all_methods())
    if (method_name(m) == name) return m;
  return std::nullopt;
}

std::vector<CoverageMethod> all_methods() {
  return {CoverageMethod::T,        CoverageMethod::TSkew,  CoverageMethod::TBoot,
          CoverageMethod::Perc,     CoverageMethod::Expanded,
          CoverageMethod::Reverse,  CoverageMethod::BootT};
}

ConditionalMiss conditional_miss(double xbar, double lower, double upper,
                                 const PopulationSpec& pop, Eigen::Index n, VrMode mode) {
  const double mu = pop.true_mean();
  ConditionalMiss out;
  if (mode == VrMode::Translation) {
    // Interval offsets from xbar depend only on the residual vector, which
    // is independent of Xbar for normal samples.
    const double sigma = pop.true_sd();
    const double root_n = std::sqrt(static_cast<double>(n));
    const double u = upper - xbar;
    const double l = lower - xbar;
    out.right_p = special::normal_cdf(-u * root_n / sigma);
    out.left_p = 1.0 - special::normal_cdf(-l * root_n / sigma);
    return out;
  }
  // Scale mode: endpoint multipliers of xbar depend only on the scale-free
  // vector (X_i / Xbar); Xbar is gamma(n * shape, scale / n).
  if (lower <= 0.0 || upper <= 0.0 || xbar <= 0.0) {
    out.fell_back = true;
    out.right_p = upper < mu ? 1.0 : 0.0;
    out.left_p = lower > mu ? 1.0 : 0.0;
    return out;
  }
  const double shape = pop.family == PopulationSpec::Family::Gamma ? pop.shape : 1.0;
  const double scale = pop.family == PopulationSpec::Family::Gamma
                           ? pop.scale
                           : pop.mean;
  const double a = static_cast<double>(n) * shape;
  const double s = scale / static_cast<double>(n);
  const double m_upper = upper / xbar;
  const double m_lower = lower / xbar;
  out.right_p = special::gamma_cdf(mu / m_upper, a, s);
  out.left_p = 1.0 - special::gamma_cdf(mu / m_lower, a, s);
  return out;
}

CoverageReport run_coverage(const CoverageConfig& config, RandomSource seed) {
  if (config.nsim < 100) throw InvalidInput("run_coverage: need nsim >= 100");
  if (config.r < 2) throw InvalidInput("run_coverage: need r >= 2");
  if (config.n < 2) throw InvalidInput("run_coverage: need n >= 2");
  if (config.methods.empty()) throw InvalidInput("run_coverage: no methods requested");
  if (config.vr && config.statistic.kind != StatKind::Mean)
    throw InvalidInput(
        "run_coverage: conditioning variance reduction is only derived for the mean");

  const Eigen::Index n = config.n;
  const long r = config.r;
  const long nsim = config.nsim;
  const double nn = static_cast<double>(n);
  const double root_n = std::sqrt(nn);
  const double alpha = 1.0 - config.confidence;
  const double t_mult = special::t_quantile(1.0 - alpha / 2.0, nn - 1.0);
  const double adj_tail = expanded_alpha_half(n, alpha);
  const VrMode mode = config.population.family == PopulationSpec::Family::Normal
                          ? VrMode::Translation
                          : VrMode::Scale;
  const double mu = config.population.true_mean();

  const std::vector<CoverageMethod> methods(config.methods.begin(), config.methods.end());
  const std::size_t nm = methods.size();
  const bool needs_resamples =
      config.methods.count(CoverageMethod::Perc) || config.methods.count(CoverageMethod::Expanded) ||
      config.methods.count(CoverageMethod::Reverse) || config.methods.count(CoverageMethod::TBoot) ||
      config.methods.count(CoverageMethod::BootT);
  const bool needs_bs = config.methods.count(CoverageMethod::BootT) != 0;

  // Per-sim conditional (or indicator) miss probabilities, per method.
  Eigen::MatrixXd left(nsim, static_cast<Eigen::Index>(nm));
  Eigen::MatrixXd right(nsim, static_cast<Eigen::Index>(nm));
  std::vector<long> fallbacks(static_cast<std::size_t>(nsim), 0);

  parallel_for(0, nsim, config.threads, [&](long sim) {
    Rng sample_rng(seed.offset(2 * static_cast<std::uint64_t>(sim)));
    Rng boot_rng(seed.offset(2 * static_cast<std::uint64_t>(sim) + 1));

    Vector x(n);
    switch (config.population.family) {
      case PopulationSpec::Family::Normal:
        for (Eigen::Index i = 0; i < n; ++i)
          x[i] = sample_rng.normal(config.population.mu, config.population.sigma);
        break;
      case PopulationSpec::Family::Exponential:
        for (Eigen::Index i = 0; i < n; ++i)
          x[i] = sample_rng.exponential(config.population.mean);
        break;
      case PopulationSpec::Family::Gamma:
        for (Eigen::Index i = 0; i < n; ++i)
          x[i] = sample_rng.gamma(config.population.shape, config.population.scale);
        break;
    }

    const double xbar = x.mean();
    const double s = sd(x);

    // Shared resampling pass: replicate means, and replicate SDs for bootT.
    std::vector<double> bmeans;
    std::vector<double> tstars;
    double s_boot = 0.0;
    if (needs_resamples) {
      bmeans.resize(static_cast<std::size_t>(r));
      if (needs_bs) tstars.resize(static_cast<std::size_t>(r));
      double acc = 0.0, accsq = 0.0;
      for (long b = 0; b < r; ++b) {
        double sum = 0.0, sumsq = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
          const double v = x[static_cast<Eigen::Index>(
              boot_rng.below(static_cast<std::uint64_t>(n)))];
          sum += v;
          sumsq += v * v;
        }
        const double bm = sum / nn;
        bmeans[static_cast<std::size_t>(b)] = bm;
        acc += bm;
        accsq += bm * bm;
        if (needs_bs) {
          const double var = std::max(0.0, (sumsq - nn * bm * bm) / (nn - 1.0));
          const double se_star = std::sqrt(var / nn);
          tstars[static_cast<std::size_t>(b)] =
              se_star > 0.0 ? (bm - xbar) / se_star
                            : std::numeric_limits<double>::infinity();
        }
      }
      const double bmean = acc / static_cast<double>(r);
      s_boot = std::sqrt(std::max(0.0, (accsq - static_cast<double>(r) * bmean * bmean) /
                                           static_cast<double>(r - 1)));
      std::sort(bmeans.begin(), bmeans.end());
      if (needs_bs) std::sort(tstars.begin(), tstars.end());
    }

    const Eigen::Map<const Vector> sorted_means(
        bmeans.empty() ? nullptr : bmeans.data(), static_cast<Eigen::Index>(bmeans.size()));
    const Eigen::Map<const Vector> sorted_t(
        tstars.empty() ? nullptr : tstars.data(), static_cast<Eigen::Index>(tstars.size()));

    for (std::size_t k = 0; k < nm; ++k) {
      double lo = 0.0, hi = 0.0;
      switch (methods[k]) {
        case CoverageMethod::T: {
          const double half = t_mult * s / root_n;
          lo = xbar - half;
          hi = xbar + half;
          break;
        }
        case CoverageMethod::TSkew: {
          const double g = skewness_estimate(x);
          const auto iv = skew_adjusted_t_interval(xbar, s, n, g, config.confidence);
          lo = iv.lower;
          hi = iv.upper;
          break;
        }
        case CoverageMethod::TBoot: {
          const double half = t_mult * s_boot;
          lo = xbar - half;
          hi = xbar + half;
          break;
        }
        case CoverageMethod::Perc:
          lo = quantile_interp_sorted(sorted_means, alpha / 2.0);
          hi = quantile_interp_sorted(sorted_means, 1.0 - alpha / 2.0);
          break;
        case CoverageMethod::Expanded:
          lo = quantile_interp_sorted(sorted_means, adj_tail);
          hi = quantile_interp_sorted(sorted_means, 1.0 - adj_tail);
          break;
        case CoverageMethod::Reverse:
          lo = 2.0 * xbar - quantile_interp_sorted(sorted_means, 1.0 - alpha / 2.0);
          hi = 2.0 * xbar - quantile_interp_sorted(sorted_means, alpha / 2.0);
          break;
        case CoverageMethod::BootT: {
          const double se_hat = s / root_n;
          lo = xbar - quantile_interp_sorted(sorted_t, 1.0 - alpha / 2.0) * se_hat;
          hi = xbar - quantile_interp_sorted(sorted_t, alpha / 2.0) * se_hat;
          break;
        }
      }
      if (config.vr) {
        const ConditionalMiss cm = conditional_miss(xbar, lo, hi, config.population, n, mode);
        left(sim, static_cast<Eigen::Index>(k)) = cm.left_p;
        right(sim, static_cast<Eigen::Index>(k)) = cm.right_p;
        if (cm.fell_back) ++fallbacks[static_cast<std::size_t>(sim)];
      } else {
        left(sim, static_cast<Eigen::Index>(k)) = lo > mu ? 1.0 : 0.0;
        right(sim, static_cast<Eigen::Index>(k)) = hi < mu ? 1.0 : 0.0;
      }
    }
  });

  CoverageReport report;
  report.population = config.population;
  report.n = n;
  report.nsim = nsim;
  report.r = r;
  report.confidence = config.confidence;
  report.vr = config.vr;
  report.seed = seed;
  for (const long f : fallbacks) report.indicator_fallbacks += f;

  const double ns = static_cast<double>(nsim);
  for (std::size_t k = 0; k < nm; ++k) {
    const auto lcol = left.col(static_cast<Eigen::Index>(k));
    const auto rcol = right.col(static_cast<Eigen::Index>(k));
    MethodMiss mm;
    mm.left_miss = lcol.mean();
    mm.right_miss = rcol.mean();
    mm.left_se = std::sqrt((lcol.array() - mm.left_miss).square().sum() / (ns - 1.0) / ns);
    mm.right_se = std::sqrt((rcol.array() - mm.right_miss).square().sum() / (ns - 1.0) / ns);
    report.methods[methods[k]] = mm;
  }
  return report;
}

}  // namespace resamp
