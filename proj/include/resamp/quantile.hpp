#pragma once

#include <Eigen/Core>

namespace resamp {

/// Interpolated order-statistic quantile with plotting position k/(r+1)
/// (the "type 6" rule): h = p(r+1), linear interpolation between the
/// bracketing order statistics, clamped to the extremes when h leaves
/// [1, r]. Every interval construction in this library uses this one rule.
double quantile_interp_sorted(const Eigen::Ref<const Eigen::VectorXd>& sorted, double p);

/// Same, for unsorted input (copies and sorts).
double quantile_interp(const Eigen::Ref<const Eigen::VectorXd>& values, double p);

}  // namespace resamp
