#pragma once

#include "resamp/random.hpp"
#include "resamp/statistics.hpp"

namespace resamp {

/// Tail counts and P-values of a permutation test. Sampled runs use the
/// (x+1)/(r+1) rule with ties counted in both tails; exhaustive runs report
/// exact tail fractions over all distinct partitions, with r set to the
/// partition count. Two-sided is twice the smaller tail, capped at 1.
struct PermutationResult {
  double observed = 0.0;
  Vector replicates;
  long count_ge = 0;
  long count_le = 0;
  double p_lower = 0.0;
  double p_upper = 0.0;
  double p_two_sided = 0.0;
  bool exhaustive = false;
  long r = 0;
};

enum class PermMode { Auto, Sampled, Exhaustive };

/// Number of partitions C(n, n1), saturating at a large sentinel.
double partition_count(Eigen::Index n, Eigen::Index n1);

/// Labels permuted over the pooled data; auto mode enumerates all C(n, n1)
/// partitions when they fit the budget (1e6) and samples otherwise.
PermutationResult two_sample_permutation(const TwoSample& ts, const StatisticSpec& statistic,
                                         long r, RandomSource seed,
                                         PermMode mode = PermMode::Auto, int threads = 1);

/// Independence test: y permuted against fixed x. Auto mode enumerates all
/// n! orderings when that fits the budget.
PermutationResult independence_permutation(const VectorRef& x, const VectorRef& y,
                                           const StatisticSpec& statistic, long r,
                                           RandomSource seed, PermMode mode = PermMode::Auto,
                                           int threads = 1);

struct FisherResult {
  double p_lower = 0.0;
  double p_upper = 0.0;
  double p_two_sided = 0.0;
};

/// Fisher's exact test on the 2x2 table [[a, b], [c, d]] via hypergeometric
/// tails; exact-fraction arithmetic for small tables so it matches the
/// exhaustive binary permutation test bit for bit.
FisherResult fisher_exact(long a, long b, long c, long d);

}  // namespace resamp
