#include "resamp/quantile.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "resamp/errors.hpp"

namespace resamp {

double quantile_interp_sorted(const Eigen::Ref<const Eigen::VectorXd>& sorted, double p) {
  const Eigen::Index r = sorted.size();
  if (r == 0) throw InvalidInput("quantile: empty input");
  if (!(p > 0.0 && p < 1.0)) throw InvalidInput("quantile: p must be in (0, 1)");
  const double h = p * static_cast<double>(r + 1);
  if (h <= 1.0) return sorted[0];
  if (h >= static_cast<double>(r)) return sorted[r - 1];
  const auto k = static_cast<Eigen::Index>(std::floor(h));
  const double g = h - static_cast<double>(k);
  return sorted[k - 1] + g * (sorted[k] - sorted[k - 1]);
}

double quantile_interp(const Eigen::Ref<const Eigen::VectorXd>& values, double p) {
  std::vector<double> sorted(values.data(), values.data() + values.size());
  std::sort(sorted.begin(), sorted.end());
  return quantile_interp_sorted(
      Eigen::Map<const Eigen::VectorXd>(sorted.data(), static_cast<Eigen::Index>(sorted.size())), p);
}

}  // namespace resamp
