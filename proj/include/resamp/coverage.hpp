#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "resamp/bootstrap.hpp"
#include "resamp/random.hpp"

namespace resamp {

struct PopulationSpec {
  enum class Family { Normal, Exponential, Gamma };
  Family family = Family::Normal;
  double mu = 0.0, sigma = 1.0;      // normal
  double mean = 1.0;                 // exponential
  double shape = 1.0, scale = 1.0;   // gamma

  double true_mean() const;
  double true_sd() const;
  std::string name() const;
};

enum class CoverageMethod { T, TSkew, TBoot, Perc, Expanded, Reverse, BootT };

std::string method_name(CoverageMethod m);
std::optional<CoverageMethod> parse_method(const std::string& name);
std::vector<CoverageMethod> all_methods();

struct MethodMiss {
  double left_miss = 0.0;   // interval entirely above the true mean
  double right_miss = 0.0;  // interval entirely below the true mean
  double left_se = 0.0;     // Monte Carlo SE of the estimate
  double right_se = 0.0;
};

struct CoverageReport {
  std::map<CoverageMethod, MethodMiss> methods;
  PopulationSpec population;
  Eigen::Index n = 0;
  long nsim = 0;
  long r = 0;
  double confidence = 0.95;
  bool vr = false;
  RandomSource seed;
  long indicator_fallbacks = 0;  // scale-mode samples scored by indicator
};

/// Exact conditional miss probabilities for one simulated sample, given its
/// interval. Translation mode (normal populations) conditions on the
/// residual vector; scale mode (gamma/exponential) on the shape vector,
/// falling back to the indicator when an endpoint is nonpositive.
struct ConditionalMiss {
  double left_p = 0.0;
  double right_p = 0.0;
  bool fell_back = false;
};

enum class VrMode { Translation, Scale };

ConditionalMiss conditional_miss(double xbar, double lower, double upper,
                                 const PopulationSpec& pop, Eigen::Index n, VrMode mode);

struct CoverageConfig {
  PopulationSpec population;
  Eigen::Index n = 20;
  std::set<CoverageMethod> methods;
  long nsim = 2000;
  long r = 1000;
  double confidence = 0.95;
  bool vr = true;
  StatisticSpec statistic;  // only the mean has conditioning rules
  int threads = 1;
};

/// The interval-accuracy study: one simulated sample per stream pair, all
/// methods computed from shared resampling streams, misses averaged as
/// indicators or (with vr) as conditional probabilities.
CoverageReport run_coverage(const CoverageConfig& config, RandomSource seed);

}  // namespace resamp
