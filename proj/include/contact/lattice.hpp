#ifndef CONTACT_LATTICE_HPP
#define CONTACT_LATTICE_HPP

#include <cassert>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

namespace contact {

// Sentinels for extremal site positions when a population is empty.
inline constexpr std::int32_t kNoSiteLow = std::numeric_limits<std::int32_t>::min();
inline constexpr std::int32_t kNoSiteHigh = std::numeric_limits<std::int32_t>::max();

/// Inclusive lattice interval [lo, hi].
struct SiteInterval {
  std::int32_t lo = 0;
  std::int32_t hi = -1;

  std::int64_t size() const { return static_cast<std::int64_t>(hi) - lo + 1; }
  bool contains(std::int32_t x) const { return x >= lo && x <= hi; }
  bool valid() const { return lo <= hi; }
};

struct TimeInterval {
  double lo = 0.0;
  double hi = 0.0;

  double length() const { return hi - lo; }
  bool contains(double t) const { return t >= lo && t <= hi; }
  bool valid() const { return lo <= hi; }
};

struct SpaceTimePoint {
  std::int32_t site = 0;
  double time = 0.0;
};

/// Fixed-window bitset keyed by absolute lattice coordinates.
class SiteBits {
 public:
  SiteBits() = default;
  explicit SiteBits(SiteInterval w) { reset(w); }

  void reset(SiteInterval w) {
    lo_ = w.lo;
    n_ = w.size();
    words_.assign(static_cast<std::size_t>((n_ + 63) / 64), 0);
  }

  void clear() { std::fill(words_.begin(), words_.end(), 0); }

  bool test(std::int32_t x) const {
    const std::int64_t i = static_cast<std::int64_t>(x) - lo_;
    if (i < 0 || i >= n_) return false;
    return (words_[static_cast<std::size_t>(i >> 6)] >> (i & 63)) & 1u;
  }

  void set(std::int32_t x) {
    const std::int64_t i = static_cast<std::int64_t>(x) - lo_;
    assert(i >= 0 && i < n_);
    words_[static_cast<std::size_t>(i >> 6)] |= (1ull << (i & 63));
  }

  void unset(std::int32_t x) {
    const std::int64_t i = static_cast<std::int64_t>(x) - lo_;
    assert(i >= 0 && i < n_);
    words_[static_cast<std::size_t>(i >> 6)] &= ~(1ull << (i & 63));
  }

  /// Smallest set site >= from, or kNoSiteHigh.
  std::int32_t next_set(std::int32_t from) const {
    std::int64_t i = static_cast<std::int64_t>(from) - lo_;
    if (i < 0) i = 0;
    while (i < n_) {
      std::uint64_t w = words_[static_cast<std::size_t>(i >> 6)] >> (i & 63);
      if (w != 0) {
        const std::int64_t j = i + __builtin_ctzll(w);
        return j < n_ ? static_cast<std::int32_t>(j + lo_) : kNoSiteHigh;
      }
      i = (i | 63) + 1;
    }
    return kNoSiteHigh;
  }

  /// Largest set site <= from, or kNoSiteLow.
  std::int32_t prev_set(std::int32_t from) const {
    std::int64_t i = static_cast<std::int64_t>(from) - lo_;
    if (i >= n_) i = n_ - 1;
    while (i >= 0) {
      std::uint64_t w = words_[static_cast<std::size_t>(i >> 6)]
                        << (63 - (i & 63));
      if (w != 0) {
        return static_cast<std::int32_t>(i - __builtin_clzll(w) + lo_);
      }
      i = (i & ~std::int64_t{63}) - 1;
    }
    return kNoSiteLow;
  }

  bool any() const {
    for (auto w : words_)
      if (w) return true;
    return false;
  }

  std::vector<std::int32_t> to_sites() const {
    std::vector<std::int32_t> out;
    for (std::int32_t x = next_set(lo_idx()); x != kNoSiteHigh; ) {
      out.push_back(x);
      if (x == lo_idx() + n_ - 1) break;
      x = next_set(x + 1);
    }
    return out;
  }

  std::int32_t lo_idx() const { return lo_; }
  std::int64_t width() const { return n_; }

  const std::vector<std::uint64_t>& words() const { return words_; }
  std::vector<std::uint64_t>& words() { return words_; }

 private:
  std::int32_t lo_ = 0;
  std::int64_t n_ = 0;
  std::vector<std::uint64_t> words_;
};

inline void require(bool cond, const char* what) {
  if (!cond) throw std::invalid_argument(what);
}

}  // namespace contact

#endif  // CONTACT_LATTICE_HPP
