#include "resamp/samplers.hpp"

#include <cmath>
#include <numeric>
#include <vector>

#include "resamp/errors.hpp"

namespace resamp {

Vector draw_with_replacement(const VectorRef& data, Eigen::Index n_out, Rng& rng) {
  const Eigen::Index n = data.size();
  if (n == 0) throw InvalidInput("draw_with_replacement: empty data");
  if (n_out < 1) throw InvalidInput("draw_with_replacement: n_out must be >= 1");
  Vector out(n_out);
  for (Eigen::Index i = 0; i < n_out; ++i)
    out[i] = data[static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(n)))];
  return out;
}

std::pair<Vector, Vector> draw_permutation_split(const VectorRef& pooled,
                                                 Eigen::Index n1, Rng& rng) {
  const Eigen::Index n = pooled.size();
  if (n1 < 1 || n1 >= n)
    throw InvalidInput("draw_permutation_split: need 1 <= n1 < pooled size");
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), Eigen::Index{0});
  for (Eigen::Index i = 0; i < n1; ++i) {
    const auto j = i + static_cast<Eigen::Index>(
                           rng.below(static_cast<std::uint64_t>(n - i)));
    std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
  }
  Vector g1(n1), g2(n - n1);
  for (Eigen::Index i = 0; i < n1; ++i) g1[i] = pooled[idx[static_cast<std::size_t>(i)]];
  for (Eigen::Index i = n1; i < n; ++i) g2[i - n1] = pooled[idx[static_cast<std::size_t>(i)]];
  return {std::move(g1), std::move(g2)};
}

Vector draw_bootknife(const VectorRef& data, Rng& rng, SamplerSpec::Omit omit,
                      long resample_index) {
  const Eigen::Index n = data.size();
  if (n < 2) throw InvalidInput("draw_bootknife: need n >= 2");
  Eigen::Index skip;
  if (omit == SamplerSpec::Omit::Cyclic) {
    skip = static_cast<Eigen::Index>(((resample_index % n) + n) % n);
  } else {
    skip = static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(n)));
  }
  Vector out(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    auto j = static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(n - 1)));
    if (j >= skip) ++j;
    out[i] = data[j];
  }
  return out;
}

Vector draw_smoothed(const VectorRef& data, double h, bool log_scale, Rng& rng) {
  const Eigen::Index n = data.size();
  if (n == 0) throw InvalidInput("draw_smoothed: empty data");
  if (h < 0.0) throw InvalidInput("draw_smoothed: bandwidth must be >= 0");
  if (log_scale && (data.array() <= 0.0).any())
    throw InvalidInput("draw_smoothed: log scale requires positive data");
  Vector out(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double v = data[static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(n)))];
    if (h == 0.0) {
      out[i] = v;
    } else if (log_scale) {
      out[i] = std::exp(std::log(v) + h * rng.normal());
    } else {
      out[i] = v + h * rng.normal();
    }
  }
  return out;
}

double finite_population_up_fraction(Eigen::Index n, long N) {
  const auto nn = static_cast<double>(n);
  const long c_down = N / n;
  const long c_up = c_down + (N % n == 0 ? 0 : 1);
  if (c_up == c_down || c_down < 1) return 1.0;
  // Variance factor of the resample mean, relative to sigma-hat^2/n, when
  // sampling n without replacement from c copies of each point.
  const auto factor = [nn](double c) { return nn * (c - 1.0) / (c * nn - 1.0); };
  const double target = (nn / (nn - 1.0)) * (1.0 - nn / static_cast<double>(N));
  const double lo = factor(static_cast<double>(c_down));
  const double hi = factor(static_cast<double>(c_up));
  if (hi <= lo) return 1.0;
  const double pi = (target - lo) / (hi - lo);
  return std::fmin(std::fmax(pi, 0.0), 1.0);
}

Vector draw_finite_population(const VectorRef& data, long N,
                              SamplerSpec::Rounding rounding, Rng& rng) {
  const Eigen::Index n = data.size();
  if (n == 0) throw InvalidInput("draw_finite_population: empty data");
  if (N < n) throw InvalidInput("draw_finite_population: need N >= n");
  long copies;
  switch (rounding) {
    case SamplerSpec::Rounding::Up:
      copies = (N + n - 1) / n;
      break;
    case SamplerSpec::Rounding::Down:
      copies = N / n;
      break;
    case SamplerSpec::Rounding::Randomized: {
      const long c_down = N / n;
      const long c_up = c_down + (N % n == 0 ? 0 : 1);
      const double pi = finite_population_up_fraction(n, N);
      copies = (rng.u01() < pi) ? c_up : c_down;
      break;
    }
    default:
      copies = (N + n - 1) / n;
  }
  if (copies < 1) copies = 1;
  const Eigen::Index m = n * static_cast<Eigen::Index>(copies);
  std::vector<Eigen::Index> pool(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) pool[static_cast<std::size_t>(i)] = i % n;
  Vector out(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto j = i + static_cast<Eigen::Index>(
                           rng.below(static_cast<std::uint64_t>(m - i)));
    std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
    out[i] = data[pool[static_cast<std::size_t>(i)]];
  }
  return out;
}

Vector draw_parametric(const ParametricModel& model, Eigen::Index n, Rng& rng) {
  if (n < 1) throw InvalidInput("draw_parametric: need n >= 1");
  Vector out(n);
  switch (model.family) {
    case ParametricModel::Family::Normal:
      if (!(model.sigma > 0.0)) throw InvalidInput("normal model: sigma must be > 0");
      for (Eigen::Index i = 0; i < n; ++i) out[i] = rng.normal(model.mu, model.sigma);
      return out;
    case ParametricModel::Family::Exponential:
      if (!(model.mean > 0.0)) throw InvalidInput("exponential model: mean must be > 0");
      for (Eigen::Index i = 0; i < n; ++i) out[i] = rng.exponential(model.mean);
      return out;
    case ParametricModel::Family::Gamma:
      if (!(model.shape > 0.0) || !(model.scale > 0.0))
        throw InvalidInput("gamma model: shape and scale must be > 0");
      for (Eigen::Index i = 0; i < n; ++i) out[i] = rng.gamma(model.shape, model.scale);
      return out;
    case ParametricModel::Family::Binomial:
      if (model.m < 0 || model.p < 0.0 || model.p > 1.0)
        throw InvalidInput("binomial model: need m >= 0 and p in [0, 1]");
      for (Eigen::Index i = 0; i < n; ++i)
        out[i] = static_cast<double>(rng.binomial(model.m, model.p));
      return out;
  }
  throw InvalidInput("draw_parametric: unknown family");
}

Vector poisson_weights(Eigen::Index n, Rng& rng) {
  if (n < 1) throw InvalidInput("poisson_weights: need n >= 1");
  Vector w(n);
  for (Eigen::Index i = 0; i < n; ++i) w[i] = static_cast<double>(rng.poisson1());
  return w;
}

double default_bandwidth(const VectorRef& data) {
  return sd(data) / std::sqrt(static_cast<double>(data.size()));
}

Vector draw(const SamplerSpec& spec, const VectorRef& data, Rng& rng,
            long resample_index) {
  const Eigen::Index n = data.size();
  const Eigen::Index n_out = spec.n_out.value_or(n);
  switch (spec.variant) {
    case SamplerSpec::Variant::WithReplacement:
      return draw_with_replacement(data, n_out, rng);
    case SamplerSpec::Variant::Reduced:
      if (n < 2) throw InvalidInput("reduced sampler: need n >= 2");
      return draw_with_replacement(data, spec.n_out.value_or(n - 1), rng);
    case SamplerSpec::Variant::Bootknife:
      return draw_bootknife(data, rng, spec.omit, resample_index);
    case SamplerSpec::Variant::Smoothed: {
      const double h = spec.bandwidth < 0.0 ? default_bandwidth(data) : spec.bandwidth;
      return draw_smoothed(data, h, spec.log_scale, rng);
    }
    case SamplerSpec::Variant::FinitePopulation:
      return draw_finite_population(data, spec.population_size, spec.rounding, rng);
    case SamplerSpec::Variant::Parametric:
      if (!spec.model) throw InvalidInput("parametric sampler: no model given");
      return draw_parametric(*spec.model, n_out, rng);
    case SamplerSpec::Variant::PoissonWeights:
      throw InvalidInput("poisson-weights resampling is driven by run_bootstrap");
  }
  throw InvalidInput("unknown sampler variant");
}

std::string sampler_name(const SamplerSpec& spec) {
  switch (spec.variant) {
    case SamplerSpec::Variant::WithReplacement: return "with-replacement";
    case SamplerSpec::Variant::Reduced: return "reduced";
    case SamplerSpec::Variant::Bootknife: return "bootknife";
    case SamplerSpec::Variant::Smoothed: return "smoothed";
    case SamplerSpec::Variant::FinitePopulation: return "finite-population";
    case SamplerSpec::Variant::Parametric: return "parametric";
    case SamplerSpec::Variant::PoissonWeights: return "poisson-weights";
  }
  return "?";
}

}  // namespace resamp
