#include "resamp/permtest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "resamp/errors.hpp"
#include "resamp/parallel.hpp"

namespace resamp {

namespace {

constexpr double kExhaustiveBudget = 1e6;

void finish_sampled(PermutationResult& res) {
  const double denom = static_cast<double>(res.r + 1);
  res.p_upper = static_cast<double>(res.count_ge + 1) / denom;
  res.p_lower = static_cast<double>(res.count_le + 1) / denom;
  res.p_two_sided = std::fmin(1.0, 2.0 * std::fmin(res.p_lower, res.p_upper));
}

void finish_exhaustive(PermutationResult& res) {
  const double denom = static_cast<double>(res.r);
  res.p_upper = static_cast<double>(res.count_ge) / denom;
  res.p_lower = static_cast<double>(res.count_le) / denom;
  res.p_two_sided = std::fmin(1.0, 2.0 * std::fmin(res.p_lower, res.p_upper));
}

void count_tails(PermutationResult& res) {
  res.count_ge = 0;
  res.count_le = 0;
  for (Eigen::Index i = 0; i < res.replicates.size(); ++i) {
    if (res.replicates[i] >= res.observed) ++res.count_ge;
    if (res.replicates[i] <= res.observed) ++res.count_le;
  }
}

// Gathers pooled values at the given indices, in index order, so equal index
// sets produce bit-identical statistics (ties are detected exactly).
Vector gather(const Vector& pooled, const std::vector<Eigen::Index>& idx,
              std::size_t begin, std::size_t end) {
  Vector out(static_cast<Eigen::Index>(end - begin));
  for (std::size_t k = begin; k < end; ++k)
    out[static_cast<Eigen::Index>(k - begin)] = pooled[idx[k]];
  return out;
}

}  // namespace

double partition_count(Eigen::Index n, Eigen::Index n1) {
  double c = 1.0;
  const Eigen::Index k = std::min(n1, n - n1);
  for (Eigen::Index i = 1; i <= k; ++i) {
    c *= static_cast<double>(n - k + i) / static_cast<double>(i);
    if (c > 1e18) return 1e18;
  }
  return std::round(c);
}

PermutationResult two_sample_permutation(const TwoSample& ts, const StatisticSpec& statistic,
                                         long r, RandomSource seed, PermMode mode,
                                         int threads) {
  const Eigen::Index n1 = ts.group1.size();
  const Eigen::Index n2 = ts.group2.size();
  if (n1 < 1 || n2 < 1) throw InvalidInput("two_sample_permutation: empty group");
  if (is_paired(statistic.kind))
    throw InvalidInput("two_sample_permutation: '" + stat_name(statistic.kind) +
                       "' is a paired statistic; use the independence test");
  const Eigen::Index n = n1 + n2;

  Vector pooled(n);
  pooled.head(n1) = ts.group1;
  pooled.tail(n2) = ts.group2;

  PermutationResult res;
  res.observed = evaluate(statistic, ts);

  const double partitions = partition_count(n, n1);
  bool exhaustive = false;
  if (mode == PermMode::Exhaustive) {
    if (partitions > kExhaustiveBudget)
      throw InvalidInput("two_sample_permutation: exhaustive needs C(n, n1) <= 1e6, have " +
                         std::to_string(static_cast<long long>(partitions)));
    exhaustive = true;
  } else if (mode == PermMode::Auto) {
    exhaustive = partitions <= kExhaustiveBudget;
  }

  if (exhaustive) {
    const auto m = static_cast<long>(partitions);
    res.exhaustive = true;
    res.r = m;
    res.replicates.resize(m);
    // Walk all n-choose-n1 index subsets in lexicographic order.
    std::vector<Eigen::Index> comb(static_cast<std::size_t>(n1));
    std::iota(comb.begin(), comb.end(), Eigen::Index{0});
    std::vector<char> in_first(static_cast<std::size_t>(n));
    for (long t = 0;; ++t) {
      std::fill(in_first.begin(), in_first.end(), 0);
      for (const auto i : comb) in_first[static_cast<std::size_t>(i)] = 1;
      TwoSample split;
      split.group1.resize(n1);
      split.group2.resize(n2);
      Eigen::Index a = 0, b = 0;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (in_first[static_cast<std::size_t>(i)]) split.group1[a++] = pooled[i];
        else split.group2[b++] = pooled[i];
      }
      res.replicates[t] = evaluate(statistic, split);
      // Advance the combination.
      Eigen::Index j = n1 - 1;
      while (j >= 0 && comb[static_cast<std::size_t>(j)] == n - n1 + j) --j;
      if (j < 0) break;
      ++comb[static_cast<std::size_t>(j)];
      for (Eigen::Index k = j + 1; k < n1; ++k)
        comb[static_cast<std::size_t>(k)] = comb[static_cast<std::size_t>(k - 1)] + 1;
    }
    count_tails(res);
    finish_exhaustive(res);
    return res;
  }

  if (r < 1) throw InvalidInput("two_sample_permutation: need r >= 1");
  res.exhaustive = false;
  res.r = r;
  res.replicates.resize(r);
  const Vector pooled_owned = pooled;
  parallel_for(0, r, threads, [&](long i) {
    Rng rng(seed.offset(static_cast<std::uint64_t>(i)));
    std::vector<Eigen::Index> idx(static_cast<std::size_t>(n));
    std::iota(idx.begin(), idx.end(), Eigen::Index{0});
    for (Eigen::Index k = 0; k < n1; ++k) {
      const auto j = k + static_cast<Eigen::Index>(
                             rng.below(static_cast<std::uint64_t>(n - k)));
      std::swap(idx[static_cast<std::size_t>(k)], idx[static_cast<std::size_t>(j)]);
    }
    std::sort(idx.begin(), idx.begin() + n1);
    std::sort(idx.begin() + n1, idx.end());
    TwoSample split;
    split.group1 = gather(pooled_owned, idx, 0, static_cast<std::size_t>(n1));
    split.group2 = gather(pooled_owned, idx, static_cast<std::size_t>(n1),
                          static_cast<std::size_t>(n));
    res.replicates[i] = evaluate(statistic, split);
  });
  count_tails(res);
  finish_sampled(res);
  return res;
}

PermutationResult independence_permutation(const VectorRef& x, const VectorRef& y,
                                           const StatisticSpec& statistic, long r,
                                           RandomSource seed, PermMode mode, int threads) {
  const Eigen::Index n = x.size();
  if (n != y.size() || n < 3)
    throw InvalidInput("independence_permutation: need equal lengths >= 3");
  if (!is_paired(statistic.kind))
    throw InvalidInput("independence_permutation: statistic must be correlation or ols-slope");

  TwoSample observed_pair;
  observed_pair.group1 = x;
  observed_pair.group2 = y;
  PermutationResult res;
  res.observed = evaluate(statistic, observed_pair);

  double total = 1.0;
  for (Eigen::Index i = 2; i <= n && total <= kExhaustiveBudget; ++i)
    total *= static_cast<double>(i);
  bool exhaustive = false;
  if (mode == PermMode::Exhaustive) {
    if (total > kExhaustiveBudget)
      throw InvalidInput("independence_permutation: exhaustive needs n! <= 1e6");
    exhaustive = true;
  } else if (mode == PermMode::Auto) {
    exhaustive = total <= kExhaustiveBudget;
  }

  const Vector x_owned = x;
  const Vector y_owned = y;

  if (exhaustive) {
    std::vector<Eigen::Index> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), Eigen::Index{0});
    std::vector<double> reps;
    reps.reserve(static_cast<std::size_t>(total));
    TwoSample pair;
    pair.group1 = x_owned;
    pair.group2.resize(n);
    do {
      for (Eigen::Index i = 0; i < n; ++i)
        pair.group2[i] = y_owned[perm[static_cast<std::size_t>(i)]];
      reps.push_back(evaluate(statistic, pair));
    } while (std::next_permutation(perm.begin(), perm.end()));
    res.exhaustive = true;
    res.r = static_cast<long>(reps.size());
    res.replicates = Eigen::Map<const Vector>(reps.data(), static_cast<Eigen::Index>(reps.size()));
    count_tails(res);
    finish_exhaustive(res);
    return res;
  }

  if (r < 1) throw InvalidInput("independence_permutation: need r >= 1");
  res.exhaustive = false;
  res.r = r;
  res.replicates.resize(r);
  parallel_for(0, r, threads, [&](long i) {
    Rng rng(seed.offset(static_cast<std::uint64_t>(i)));
    TwoSample pair;
    pair.group1 = x_owned;
    pair.group2 = y_owned;
    for (Eigen::Index k = n - 1; k > 0; --k) {
      const auto j = static_cast<Eigen::Index>(
          rng.below(static_cast<std::uint64_t>(k + 1)));
      std::swap(pair.group2[k], pair.group2[j]);
    }
    res.replicates[i] = evaluate(statistic, pair);
  });
  count_tails(res);
  finish_sampled(res);
  return res;
}

namespace {

// C(n, k) exactly in double (safe through n = 60).
double choose_exact(long n, long k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double c = 1.0;
  for (long i = 1; i <= k; ++i) c = c * static_cast<double>(n - k + i) / static_cast<double>(i);
  return std::round(c);
}

double log_choose(long n, long k) {
  return std::lgamma(static_cast<double>(n + 1)) - std::lgamma(static_cast<double>(k + 1)) -
         std::lgamma(static_cast<double>(n - k + 1));
}

}  // namespace

FisherResult fisher_exact(long a, long b, long c, long d) {
  if (a < 0 || b < 0 || c < 0 || d < 0)
    throw InvalidInput("fisher_exact: counts must be nonnegative");
  const long n = a + b + c + d;
  const long row1 = a + b;
  const long col1 = a + c;
  if (row1 == 0 || c + d == 0 || col1 == 0 || b + d == 0)
    throw Degenerate("fisher_exact: zero margin");

  const long kmin = std::max(0L, row1 + col1 - n);
  const long kmax = std::min(row1, col1);
  FisherResult out;
  if (n <= 60) {
    // Counting arithmetic; identical to enumerating binary partitions.
    const double denom = choose_exact(n, row1);
    double ge = 0.0, le = 0.0;
    for (long k = kmin; k <= kmax; ++k) {
      const double ways = choose_exact(col1, k) * choose_exact(n - col1, row1 - k);
      if (k >= a) ge += ways;
      if (k <= a) le += ways;
    }
    out.p_upper = ge / denom;
    out.p_lower = le / denom;
  } else {
    const double logdenom = log_choose(n, row1);
    double ge = 0.0, le = 0.0;
    for (long k = kmin; k <= kmax; ++k) {
      const double p = std::exp(log_choose(col1, k) + log_choose(n - col1, row1 - k) - logdenom);
      if (k >= a) ge += p;
      if (k <= a) le += p;
    }
    out.p_upper = std::fmin(ge, 1.0);
    out.p_lower = std::fmin(le, 1.0);
  }
  out.p_two_sided = std::fmin(1.0, 2.0 * std::fmin(out.p_lower, out.p_upper));
  return out;
}

}  // namespace resamp
