#pragma once

#include <array>
#include <cstdint>

namespace sspanel::rng {

/// Philox4x32-10 keyed counter block cipher (the Random123 generator,
/// also the default counter RNG in NumPy). Maps a 128-bit counter and a
/// 64-bit key to 128 pseudo-random bits. Pure function: no state.
std::array<std::uint32_t, 4> philox4x32_10(const std::array<std::uint32_t, 4>& counter,
                                           const std::array<std::uint32_t, 2>& key);

/// Variate tags partition a stream into independent substreams for the
/// different quantities drawn per observation. Stable constants: changing
/// them changes every simulated data set.
enum Tag : std::uint32_t {
  kTagRegressor0 = 0,   // regressor components use tags 0..15
  kTagAlpha = 16,       // fixed-effect (noise) draw
  kTagU0 = 17,          // period-0 error
  kTagU1 = 18,          // period-1 error
  kTagBootstrapIdx = 24,  // bootstrap resample indices (stream = replicate)
  kTagTrialSimSeed = 25,  // per-trial derived simulation seed (stream = trial)
  kTagTrialTestSeed = 26, // per-trial derived test seed (stream = trial)
  kTagSearchDir = 28,     // random-search direction draws
};

/// One deterministic substream of 64-bit outputs, identified by
/// (seed, stream id, variate tag). Substreams never overlap: the Philox
/// counter is (stream lo, stream hi, tag, block index) under key = seed.
/// Copyable, cheap, and usable concurrently from distinct instances.
class Stream {
 public:
  Stream(std::uint64_t seed, std::uint64_t stream_id, std::uint32_t tag)
      : key_{static_cast<std::uint32_t>(seed & 0xffffffffu),
             static_cast<std::uint32_t>(seed >> 32)},
        base_{static_cast<std::uint32_t>(stream_id & 0xffffffffu),
              static_cast<std::uint32_t>(stream_id >> 32), tag, 0},
        block_(0), have_(0) {}

  /// Next 64 pseudo-random bits.
  std::uint64_t next_u64();

  /// Uniform on [0, 1) with 53-bit resolution.
  double next_uniform01();

  /// Uniform on (0, 1), never exactly 0 or 1; safe through inverse cdfs.
  double next_uniform_open01();

  /// Uniform on [-1, 1).
  double next_uniform_sym();

  /// Standard normal draw via the inverse-cdf method (one u64 consumed),
  /// so each draw costs exactly one substream step regardless of value.
  double next_normal();

  /// Uniform integer on {0, ..., n-1} by 64-bit rejection sampling
  /// (unbiased; identical results on any platform).
  std::uint64_t next_below(std::uint64_t n);

 private:
  void refill();
  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 4> base_;  // counter template; [3] is block index
  std::uint32_t block_;
  int have_;                           // 64-bit words left in buffer
  std::array<std::uint64_t, 2> buf_{};
};

/// Derives a fresh 64-bit seed from (seed, stream, tag); used to give
/// nested components (per-trial simulations, bootstrap layers) their own
/// independent key.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream_id, std::uint32_t tag);

}  // namespace sspanel::rng
