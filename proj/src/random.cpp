#include "resamp/random.hpp"

#include <cmath>
#include <stdexcept>

#include "resamp/special.hpp"

namespace resamp {

namespace detail {

std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr,
                                           std::array<std::uint32_t, 2> key) {
  constexpr std::uint64_t kMul0 = 0xD2511F53ull;
  constexpr std::uint64_t kMul1 = 0xCD9E8D57ull;
  constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    const std::uint64_t p0 = kMul0 * ctr[0];
    const std::uint64_t p1 = kMul1 * ctr[2];
    ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0],
           static_cast<std::uint32_t>(p1),
           static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1],
           static_cast<std::uint32_t>(p0)};
  }
  return ctr;
}

}  // namespace detail

Rng::Rng(RandomSource src)
    : key_{static_cast<std::uint32_t>(src.seed()),
           static_cast<std::uint32_t>(src.seed() >> 32)},
      stream_(src.stream()) {}

void Rng::refill() {
  const std::array<std::uint32_t, 4> ctr = {
      static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
      static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)};
  buf_ = detail::philox4x32_10(ctr, key_);
  ++block_;
  avail_ = 4;
}

std::uint64_t Rng::next_u64() {
  if (avail_ < 2) refill();
  const std::uint64_t lo = buf_[4 - avail_];
  const std::uint64_t hi = buf_[5 - avail_];
  avail_ -= 2;
  return (hi << 32) | lo;
}

double Rng::u01() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::u01_open() {
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

std::uint64_t Rng::below(std::uint64_t n) {
  const unsigned __int128 m = static_cast<unsigned __int128>(next_u64()) * n;
  return static_cast<std::uint64_t>(m >> 64);
}

double Rng::normal() { return special::normal_quantile(u01_open()); }

double Rng::exponential(double mean) { return -mean * std::log(u01_open()); }

double Rng::gamma(double shape, double scale) {
  if (!(shape > 0.0) || !(scale > 0.0))
    throw std::invalid_argument("gamma: shape and scale must be positive");
  if (shape < 1.0) {
    // Boost a shape < 1 draw: G(a) = G(a+1) * U^{1/a}.
    const double u = u01_open();
    return gamma(shape + 1.0, scale) * std::pow(u, 1.0 / shape);
  }
  // Marsaglia-Tsang squeeze method.
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = u01_open();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v * scale;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v * scale;
  }
}

long Rng::binomial(long m, double p) {
  if (m < 0 || p < 0.0 || p > 1.0)
    throw std::invalid_argument("binomial: need m >= 0 and p in [0, 1]");
  if (m == 0 || p == 0.0) return 0;
  if (p == 1.0) return m;
  if (p > 0.5) return m - binomial(m, 1.0 - p);
  // CDF inversion; the walk is O(m p) in expectation.
  const double u = u01_open();
  const double q = 1.0 - p;
  double pmf = std::exp(static_cast<double>(m) * std::log(q));
  if (pmf <= 0.0) {
    // Underflow for very large m: fall back to a normal approximation,
    // clamped to the support.
    const double mean = static_cast<double>(m) * p;
    const double sd = std::sqrt(mean * q);
    const double x = std::floor(mean + sd * special::normal_quantile(u) + 0.5);
    return static_cast<long>(std::fmin(std::fmax(x, 0.0), static_cast<double>(m)));
  }
  double cdf = pmf;
  long k = 0;
  while (u > cdf && k < m) {
    pmf *= (static_cast<double>(m - k) / static_cast<double>(k + 1)) * (p / q);
    cdf += pmf;
    ++k;
  }
  return k;
}

long Rng::poisson1() {
  constexpr double kExpNeg1 = 0.36787944117144233;
  long k = 0;
  double prod = u01();
  while (prod > kExpNeg1) {
    prod *= u01();
    ++k;
  }
  return k;
}

}  // namespace resamp
