#include "resamp/regression.hpp"

#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "resamp/errors.hpp"
#include "resamp/parallel.hpp"

namespace resamp {

namespace {

constexpr double kUndefinedFractionLimit = 0.01;

LinearFit fit_ols_qr(const Matrix& X, const VectorRef& y, bool check_rank) {
  const Eigen::Index n = X.rows();
  const Eigen::Index p = X.cols();
  if (y.size() != n) throw InvalidInput("fit_ols: X and y sizes disagree");
  if (n <= p) throw InvalidInput("fit_ols: need n > p");

  Eigen::ColPivHouseholderQR<Matrix> qr(X);
  qr.setThreshold(1e-10);
  if (check_rank && qr.rank() < p)
    throw Degenerate("fit_ols: design matrix is rank deficient");

  LinearFit fit;
  fit.n = n;
  fit.p = p;
  fit.coefficients = qr.solve(y);
  fit.fitted = X * fit.coefficients;
  fit.residuals = y - fit.fitted;
  const double sse = fit.residuals.squaredNorm();
  fit.residual_sd = std::sqrt(sse / static_cast<double>(n - p));
  const double yb = y.mean();
  const double sst = (y.array() - yb).square().sum();
  fit.r_squared = sst > 0.0 ? 1.0 - sse / sst : 1.0;
  if (p == 2) {
    const auto xcol = X.col(1);
    const double xb = xcol.mean();
    const double sxx = (xcol.array() - xb).square().sum();
    fit.slope_se = sxx > 0.0 ? fit.residual_sd / std::sqrt(sxx) : 0.0;
  }
  return fit;
}

double fit_statistic(const LinearFit& fit, const RegressionStat& stat) {
  if (stat.kind == RegressionStat::Kind::RSquared) return fit.r_squared;
  if (stat.index < 0 || stat.index >= fit.coefficients.size())
    throw InvalidInput("regression statistic: coefficient index out of range");
  return fit.coefficients[stat.index];
}

// Residual donor pools for the nearby scheme: for each observation, the
// residuals of the k observations with closest fitted values.
std::vector<std::vector<double>> nearby_pools(const LinearFit& fit, Eigen::Index k) {
  const Eigen::Index n = fit.n;
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return fit.fitted[a] < fit.fitted[b];
  });
  std::vector<Eigen::Index> pos(static_cast<std::size_t>(n));
  for (Eigen::Index rank = 0; rank < n; ++rank)
    pos[static_cast<std::size_t>(order[static_cast<std::size_t>(rank)])] = rank;

  const Eigen::Index w = std::min(k, n);
  std::vector<std::vector<double>> pools(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index rank = pos[static_cast<std::size_t>(i)];
    Eigen::Index lo = std::max<Eigen::Index>(0, rank - w / 2);
    Eigen::Index hi = lo + w;
    if (hi > n) {
      hi = n;
      lo = n - w;
    }
    auto& pool = pools[static_cast<std::size_t>(i)];
    pool.reserve(static_cast<std::size_t>(w));
    for (Eigen::Index j = lo; j < hi; ++j)
      pool.push_back(fit.residuals[order[static_cast<std::size_t>(j)]]);
  }
  return pools;
}

}  // namespace

LinearFit fit_ols(const Matrix& X, const VectorRef& y) { return fit_ols_qr(X, y, true); }

Matrix build_design(const Matrix& predictors) {
  Matrix X(predictors.rows(), predictors.cols() + 1);
  X.col(0).setOnes();
  X.rightCols(predictors.cols()) = predictors;
  return X;
}

BootstrapDistribution bootstrap_regression(const Matrix& X, const VectorRef& y,
                                           const RegressionScheme& scheme,
                                           const RegressionStat& statistic, long r,
                                           RandomSource seed, int threads) {
  if (r < 1) throw InvalidInput("bootstrap_regression: need r >= 1");
  const LinearFit base = fit_ols(X, y);
  if (scheme.kind == RegressionScheme::Kind::ConditionalBernoulli) {
    const Vector& probs =
        scheme.probabilities.size() > 0 ? scheme.probabilities : base.fitted;
    if (probs.size() != X.rows())
      throw InvalidInput("bootstrap_regression: probability vector length mismatch");
    if ((probs.array() < 0.0).any() || (probs.array() > 1.0).any())
      throw InvalidInput("bootstrap_regression: probabilities must be in [0, 1]");
  }
  if (scheme.kind == RegressionScheme::Kind::ResidualsNearby && scheme.window < 2)
    throw InvalidInput("bootstrap_regression: nearby window must be >= 2");

  BootstrapDistribution bd;
  bd.observed = fit_statistic(base, statistic);
  bd.seed = seed;
  bd.requested_r = r;
  bd.sample_sizes = {X.rows()};

  const Eigen::Index n = X.rows();
  const Eigen::Index p = X.cols();
  const Matrix X_owned = X;
  const Vector y_owned = y;
  const std::vector<std::vector<double>> pools =
      scheme.kind == RegressionScheme::Kind::ResidualsNearby
          ? nearby_pools(base, scheme.window)
          : std::vector<std::vector<double>>{};

  Vector values(r);
  std::vector<char> defined(static_cast<std::size_t>(r), 0);
  parallel_for(0, r, threads, [&](long i) {
    Rng rng(seed.offset(static_cast<std::uint64_t>(i)));
    try {
      LinearFit refit;
      switch (scheme.kind) {
        case RegressionScheme::Kind::Observations: {
          Matrix Xb(n, p);
          Vector yb(n);
          for (Eigen::Index row = 0; row < n; ++row) {
            const auto j = static_cast<Eigen::Index>(
                rng.below(static_cast<std::uint64_t>(n)));
            Xb.row(row) = X_owned.row(j);
            yb[row] = y_owned[j];
          }
          refit = fit_ols_qr(Xb, yb, true);
          break;
        }
        case RegressionScheme::Kind::Residuals: {
          Vector yb(n);
          for (Eigen::Index row = 0; row < n; ++row) {
            const auto j = static_cast<Eigen::Index>(
                rng.below(static_cast<std::uint64_t>(n)));
            yb[row] = base.fitted[row] + base.residuals[j];
          }
          refit = fit_ols_qr(X_owned, yb, false);
          break;
        }
        case RegressionScheme::Kind::ConditionalBernoulli: {
          const Vector& probs =
              scheme.probabilities.size() > 0 ? scheme.probabilities : base.fitted;
          Vector yb(n);
          for (Eigen::Index row = 0; row < n; ++row)
            yb[row] = rng.u01() < probs[row] ? 1.0 : 0.0;
          refit = fit_ols_qr(X_owned, yb, false);
          break;
        }
        case RegressionScheme::Kind::ResidualsNearby: {
          Vector yb(n);
          for (Eigen::Index row = 0; row < n; ++row) {
            const auto& pool = pools[static_cast<std::size_t>(row)];
            const auto j = static_cast<std::size_t>(
                rng.below(static_cast<std::uint64_t>(pool.size())));
            yb[row] = base.fitted[row] + pool[j];
          }
          refit = fit_ols_qr(X_owned, yb, false);
          break;
        }
      }
      const double v = fit_statistic(refit, statistic);
      if (std::isfinite(v)) {
        values[i] = v;
        defined[static_cast<std::size_t>(i)] = 1;
      }
    } catch (const Degenerate&) {
      // rank-deficient resampled design: excluded with a tally
    }
  });

  long kept = 0;
  for (long i = 0; i < r; ++i)
    if (defined[static_cast<std::size_t>(i)]) ++kept;
  const long dropped = r - kept;
  if (dropped > static_cast<long>(kUndefinedFractionLimit * static_cast<double>(r)))
    throw Degenerate("bootstrap_regression: more than 1% of replicates dropped (" +
                     std::to_string(dropped) + " of " + std::to_string(r) + ")");
  bd.replicates.resize(kept);
  long k = 0;
  for (long i = 0; i < r; ++i)
    if (defined[static_cast<std::size_t>(i)]) bd.replicates[k++] = values[i];
  bd.undefined_count = dropped;
  return bd;
}

FitBand emit_fit_band(const VectorRef& x, const VectorRef& y,
                      const RegressionScheme& scheme, long r, const Vector& grid,
                      RandomSource seed, int threads) {
  if (grid.size() == 0) throw InvalidInput("emit_fit_band: empty grid");
  if (r < 1) throw InvalidInput("emit_fit_band: need r >= 1");
  Matrix pred(x.size(), 1);
  pred.col(0) = x;
  const Matrix X = build_design(pred);
  const LinearFit base = fit_ols(X, y);

  const Eigen::Index n = x.size();
  const Vector x_owned = x;
  const Vector y_owned = y;
  const std::vector<std::vector<double>> pools =
      scheme.kind == RegressionScheme::Kind::ResidualsNearby
          ? nearby_pools(base, scheme.window)
          : std::vector<std::vector<double>>{};

  FitBand band;
  band.grid = grid;
  band.predictions.resize(r, grid.size());
  parallel_for(0, r, threads, [&](long i) {
    Rng rng(seed.offset(static_cast<std::uint64_t>(i)));
    double b0 = 0.0, b1 = 0.0;
    for (;;) {
      Vector xs(n), ys(n);
      switch (scheme.kind) {
        case RegressionScheme::Kind::Observations:
          for (Eigen::Index row = 0; row < n; ++row) {
            const auto j = static_cast<Eigen::Index>(
                rng.below(static_cast<std::uint64_t>(n)));
            xs[row] = x_owned[j];
            ys[row] = y_owned[j];
          }
          break;
        case RegressionScheme::Kind::ResidualsNearby:
          xs = x_owned;
          for (Eigen::Index row = 0; row < n; ++row) {
            const auto& pool = pools[static_cast<std::size_t>(row)];
            const auto j = static_cast<std::size_t>(
                rng.below(static_cast<std::uint64_t>(pool.size())));
            ys[row] = base.fitted[row] + pool[j];
          }
          break;
        default:
          xs = x_owned;
          for (Eigen::Index row = 0; row < n; ++row) {
            const auto j = static_cast<Eigen::Index>(
                rng.below(static_cast<std::uint64_t>(n)));
            ys[row] = base.fitted[row] + base.residuals[j];
          }
          break;
      }
      const double xb = xs.mean();
      const double sxx = (xs.array() - xb).square().sum();
      if (sxx <= 0.0) continue;  // degenerate resample of x; redraw
      const double sxy = (xs.array() - xb).cwiseProduct(ys.array() - ys.mean()).sum();
      b1 = sxy / sxx;
      b0 = ys.mean() - b1 * xb;
      break;
    }
    for (Eigen::Index g = 0; g < grid.size(); ++g)
      band.predictions(i, g) = b0 + b1 * band.grid[g];
  });
  return band;
}

}  // namespace resamp
