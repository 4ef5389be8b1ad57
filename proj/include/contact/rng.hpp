#ifndef CONTACT_RNG_HPP
#define CONTACT_RNG_HPP

#include <array>
#include <cmath>
#include <cstdint>

namespace contact {

// Philox4x32-10 counter-based generator (Salmon et al., SC 2011).
// A draw is a pure function of (key, counter); independent streams are
// obtained by fixing the high counter words, so parallel replicas never
// share state and results do not depend on scheduling.
inline constexpr char kRngAlgorithm[] = "philox4x32-10";

namespace detail {

inline void philox_round(std::array<std::uint32_t, 4>& ctr,
                         std::array<std::uint32_t, 2>& key) {
  constexpr std::uint32_t kMulA = 0xD2511F53u;
  constexpr std::uint32_t kMulB = 0xCD9E8D57u;
  constexpr std::uint32_t kWeylA = 0x9E3779B9u;
  constexpr std::uint32_t kWeylB = 0xBB67AE85u;
  const std::uint64_t p0 = static_cast<std::uint64_t>(kMulA) * ctr[0];
  const std::uint64_t p1 = static_cast<std::uint64_t>(kMulB) * ctr[2];
  const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
  const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
  const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
  const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
  ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  key[0] += kWeylA;
  key[1] += kWeylB;
}

}  // namespace detail

inline std::array<std::uint32_t, 4> philox4x32(std::uint64_t key,
                                               std::uint64_t ctr_hi,
                                               std::uint64_t ctr_lo) {
  std::array<std::uint32_t, 4> c = {
      static_cast<std::uint32_t>(ctr_lo), static_cast<std::uint32_t>(ctr_lo >> 32),
      static_cast<std::uint32_t>(ctr_hi), static_cast<std::uint32_t>(ctr_hi >> 32)};
  std::array<std::uint32_t, 2> k = {static_cast<std::uint32_t>(key),
                                    static_cast<std::uint32_t>(key >> 32)};
  for (int r = 0; r < 10; ++r) detail::philox_round(c, k);
  return c;
}

/// One logical random stream: (seed, stream id) fully determine the sequence.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream)
      : key_(seed), stream_(stream) {}

  std::uint32_t next_u32() {
    if (pos_ == 4) refill();
    return buf_[pos_++];
  }

  std::uint64_t next_u64() {
    const std::uint64_t lo = next_u32();
    const std::uint64_t hi = next_u32();
    return (hi << 32) | lo;
  }

  /// Uniform on (0,1); never returns 0 or 1, safe for log().
  double next_unit() {
    const std::uint64_t b = next_u64() >> 11;  // 53 bits
    return (static_cast<double>(b) + 0.5) * 0x1p-53;
  }

  double next_exp(double rate) { return -std::log(next_unit()) / rate; }

  /// Standard normal via Box-Muller (one value per call, second discarded).
  double next_normal() {
    const double u = next_unit();
    const double v = next_unit();
    return std::sqrt(-2.0 * std::log(u)) * std::cos(6.283185307179586 * v);
  }

  std::uint64_t seed() const { return key_; }
  std::uint64_t stream() const { return stream_; }

 private:
  void refill() {
    buf_ = philox4x32(key_, stream_, block_++);
    pos_ = 0;
  }

  std::uint64_t key_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buf_{};
  int pos_ = 4;
};

// Disjoint stream ids from a small tag hierarchy: 8-bit purpose, 32-bit
// replica, 24-bit sub-index. No hashing, so no collisions.
enum class StreamPurpose : std::uint8_t {
  kEventLog = 1,
  kFlightPlan = 2,
  kPatchNegative = 3,
  kPatchPositive = 4,
  kPatchPlan = 5,
  kPatchNegative2 = 6,
  kPatchPositive2 = 7,
  kSynthetic = 8,
  kAux = 9,
};

inline std::uint64_t stream_id(StreamPurpose purpose, std::uint64_t replica = 0,
                               std::uint64_t sub = 0) {
  return (static_cast<std::uint64_t>(purpose) << 56) |
         ((replica & 0xFFFFFFFFull) << 24) | (sub & 0xFFFFFFull);
}

}  // namespace contact

#endif  // CONTACT_RNG_HPP
