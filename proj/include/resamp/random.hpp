#pragma once

#include <array>
#include <cstdint>

namespace resamp {

/// Identifies one reproducible random stream: a (seed, stream) pair.
///
/// The same (seed, stream) always yields the same value sequence, and
/// distinct stream indices yield statistically independent sequences.
/// Streams are cheap to address, so each unit of parallel work (a
/// resample, a simulated sample) owns its own stream and results do not
/// depend on thread scheduling.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed = 0, std::uint64_t stream = 0)
      : seed_(seed), stream_(stream) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  /// Same seed, absolute stream index.
  RandomSource at(std::uint64_t stream) const { return RandomSource(seed_, stream); }

  /// Same seed, stream shifted by `delta`.
  RandomSource offset(std::uint64_t delta) const {
    return RandomSource(seed_, stream_ + delta);
  }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
};

namespace detail {

/// One Philox-4x32 block: 10 rounds over a 128-bit counter with a 64-bit key.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr,
                                           std::array<std::uint32_t, 2> key);

}  // namespace detail

/// Counter-based generator bound to one RandomSource.
///
/// The key is the seed, the high counter words are the stream index, and
/// the low words count blocks, so values are a pure function of
/// (seed, stream, position). Consumption is sequential within a stream.
class Rng {
 public:
  explicit Rng(RandomSource src);

  std::uint64_t next_u64();

  /// Uniform on [0, 1) with 53 random bits.
  double u01();

  /// Uniform on the open interval (0, 1); safe for quantile transforms.
  double u01_open();

  /// Uniform integer in {0, ..., n-1} via 128-bit multiply.
  std::uint64_t below(std::uint64_t n);

  double normal();                            // standard normal, inverse CDF
  double normal(double mu, double sigma) { return mu + sigma * normal(); }
  double exponential(double mean);
  double gamma(double shape, double scale);
  long binomial(long m, double p);
  long poisson1();                            // Poisson with mean 1

 private:
  void refill();

  std::array<std::uint32_t, 2> key_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buf_{};
  int avail_ = 0;  // unread 32-bit words in buf_
};

}  // namespace resamp
