#pragma once

#include <optional>
#include <string>
#include <utility>

#include "resamp/random.hpp"
#include "resamp/statistics.hpp"

namespace resamp {

/// Parametric model for draw_parametric / the parametric bootstrap.
struct ParametricModel {
  enum class Family { Normal, Exponential, Gamma, Binomial };
  Family family = Family::Normal;
  double mu = 0.0, sigma = 1.0;   // normal
  double mean = 1.0;              // exponential
  double shape = 1.0, scale = 1.0;  // gamma
  long m = 1;                     // binomial trials
  double p = 0.5;                 // binomial success probability
};

struct SamplerSpec {
  enum class Variant {
    WithReplacement,
    Reduced,            // draw n-1 instead of n
    Bootknife,
    Smoothed,
    FinitePopulation,
    Parametric,
    PoissonWeights
  };
  enum class Rounding { Up, Down, Randomized };
  enum class Omit { Cyclic, Random };

  Variant variant = Variant::WithReplacement;
  std::optional<Eigen::Index> n_out;  // what-if resample size override
  double bandwidth = -1.0;            // smoothed; < 0 means default s/sqrt(n)
  bool log_scale = false;             // smoothed on log scale
  long population_size = 0;           // finite population N
  Rounding rounding = Rounding::Up;
  Omit omit = Omit::Cyclic;
  std::optional<ParametricModel> model;
};

Vector draw_with_replacement(const VectorRef& data, Eigen::Index n_out, Rng& rng);

/// Splits the pooled sample into (n1, rest) without replacement; the two
/// outputs always recombine to the pooled multiset.
std::pair<Vector, Vector> draw_permutation_split(const VectorRef& pooled,
                                                 Eigen::Index n1, Rng& rng);

/// Omit one observation (cyclically by resample index, or at random), then
/// draw n with replacement from the n-1 kept.
Vector draw_bootknife(const VectorRef& data, Rng& rng, SamplerSpec::Omit omit,
                      long resample_index);

/// Resample plus normal(0, h) kernel noise; with log_scale the perturbation
/// happens on the log scale and is exponentiated back.
Vector draw_smoothed(const VectorRef& data, double h, bool log_scale, Rng& rng);

/// Replicate each observation into a pseudo-population of about N items
/// (per the rounding mode), then draw n without replacement from it.
Vector draw_finite_population(const VectorRef& data, long N,
                              SamplerSpec::Rounding rounding, Rng& rng);

Vector draw_parametric(const ParametricModel& model, Eigen::Index n, Rng& rng);

/// n independent Poisson(1) multiplicities for weighted resampling.
Vector poisson_weights(Eigen::Index n, Rng& rng);

/// Default smoothing bandwidth s/sqrt(n).
double default_bandwidth(const VectorRef& data);

/// Fraction of resamples that use the rounded-up copy count in randomized
/// finite-population sampling, chosen so the resample-mean variance matches
/// the usual (1 - n/N) correction on s^2/n.
double finite_population_up_fraction(Eigen::Index n, long N);

/// Draws one resample per `spec` (PoissonWeights is handled by the
/// bootstrap driver, not here).
Vector draw(const SamplerSpec& spec, const VectorRef& data, Rng& rng,
            long resample_index);

std::string sampler_name(const SamplerSpec& spec);

}  // namespace resamp
