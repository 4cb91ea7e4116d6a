#include "sspanel/rng.hpp"

#include <cmath>

#include "sspanel/errors.hpp"
#include "sspanel/normal.hpp"

namespace sspanel::rng {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;  // golden-ratio key schedule
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;  // sqrt(3)-1 key schedule

inline void philox_round(std::array<std::uint32_t, 4>& x,
                         const std::array<std::uint32_t, 2>& k) {
  const std::uint64_t p0 = static_cast<std::uint64_t>(kPhiloxM0) * x[0];
  const std::uint64_t p1 = static_cast<std::uint64_t>(kPhiloxM1) * x[2];
  const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
  const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
  const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
  const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
  x = {hi1 ^ x[1] ^ k[0], lo1, hi0 ^ x[3] ^ k[1], lo0};
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32_10(const std::array<std::uint32_t, 4>& counter,
                                           const std::array<std::uint32_t, 2>& key) {
  std::array<std::uint32_t, 4> x = counter;
  std::array<std::uint32_t, 2> k = key;
  philox_round(x, k);
  for (int r = 1; r < 10; ++r) {
    k[0] += kPhiloxW0;
    k[1] += kPhiloxW1;
    philox_round(x, k);
  }
  return x;
}

void Stream::refill() {
  std::array<std::uint32_t, 4> ctr = base_;
  ctr[3] = block_;
  ++block_;
  const std::array<std::uint32_t, 4> out = philox4x32_10(ctr, key_);
  buf_[0] = (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
  buf_[1] = (static_cast<std::uint64_t>(out[3]) << 32) | out[2];
  have_ = 2;
}

std::uint64_t Stream::next_u64() {
  if (have_ == 0) refill();
  const std::uint64_t v = buf_[2 - have_];
  --have_;
  return v;
}

double Stream::next_uniform01() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Stream::next_uniform_open01() {
  return (static_cast<double>(next_u64() >> 12) + 0.5) * 0x1.0p-52;
}

double Stream::next_uniform_sym() { return 2.0 * next_uniform01() - 1.0; }

double Stream::next_normal() {
  // Inverse-cdf method: exactly one substream step per draw, so the
  // stream position never depends on the values drawn.
  return norm_quantile(next_uniform_open01());
}

std::uint64_t Stream::next_below(std::uint64_t n) {
  if (n == 0) throw InternalError("next_below: n must be positive");
  // Rejection below the largest multiple of n not exceeding 2^64 - 1
  // removes modulo bias exactly.
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
  for (;;) {
    const std::uint64_t v = next_u64();
    if (v < limit) return v % n;
  }
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream_id, std::uint32_t tag) {
  Stream s(seed, stream_id, tag);
  return s.next_u64();
}

}  // namespace sspanel::rng
