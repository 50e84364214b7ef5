#pragma once

#include <stdexcept>
#include <string>

namespace resamp {

/// Bad inputs: violated preconditions, unparsable data, out-of-range knobs.
/// The CLI maps these to exit code 1.
class InvalidInput : public std::runtime_error {
 public:
  explicit InvalidInput(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical degeneracy discovered while computing: zero variance, singular
/// designs, too many undefined replicates. The CLI maps these to exit code 2.
class Degenerate : public std::runtime_error {
 public:
  explicit Degenerate(const std::string& what) : std::runtime_error(what) {}
};

/// A ratio statistic hit a zero denominator. Thrown per evaluation;
/// bootstrap loops catch it and count the replicate as undefined.
class RatioUndefined : public Degenerate {
 public:
  explicit RatioUndefined(const std::string& what) : Degenerate(what) {}
};

}  // namespace resamp
