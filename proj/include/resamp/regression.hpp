#pragma once

#include <Eigen/Core>

#include "resamp/bootstrap.hpp"
#include "resamp/random.hpp"

namespace resamp {

using Matrix = Eigen::MatrixXd;

struct LinearFit {
  Vector coefficients;  // in design-column order
  Vector fitted;
  Vector residuals;
  double r_squared = 0.0;
  double residual_sd = 0.0;  // s_r = sqrt(sum e^2 / (n - p))
  Eigen::Index n = 0;
  Eigen::Index p = 0;
  double slope_se = 0.0;  // simple regression only (p == 2), else 0
};

/// Least squares on the full design matrix X (include the intercept column
/// yourself; build_design does). Rank deficiency raises Degenerate.
LinearFit fit_ols(const Matrix& X, const VectorRef& y);

/// [1, x1, ..., xk] design from predictor columns.
Matrix build_design(const Matrix& predictors);

struct RegressionStat {
  enum class Kind { Coefficient, RSquared };
  Kind kind = Kind::Coefficient;
  Eigen::Index index = 1;  // coefficient position; 1 = slope in simple regression
};

struct RegressionScheme {
  enum class Kind { Observations, Residuals, ConditionalBernoulli, ResidualsNearby };
  Kind kind = Kind::Residuals;
  Vector probabilities;     // conditional-bernoulli: P(Y = 1) per row
  Eigen::Index window = 20; // residuals-nearby: k nearest fitted values
};

/// Bootstraps a regression functional. Residual-flavored schemes keep X
/// fixed; the observations scheme resamples rows jointly and drops (with a
/// tally) replicates whose resampled design loses rank.
BootstrapDistribution bootstrap_regression(const Matrix& X, const VectorRef& y,
                                           const RegressionScheme& scheme,
                                           const RegressionStat& statistic, long r,
                                           RandomSource seed, int threads = 1);

/// Replicate regression-line predictions on a grid (simple regression only):
/// one row per (grid point, replicate). For plotting fit bands.
struct FitBand {
  Vector grid;
  Matrix predictions;  // r rows, grid.size() columns
};

FitBand emit_fit_band(const VectorRef& x, const VectorRef& y,
                      const RegressionScheme& scheme, long r, const Vector& grid,
                      RandomSource seed, int threads = 1);

}  // namespace resamp
