#pragma once

#include <array>
#include <cstdint>

namespace hopdim {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
///
/// The output block is a pure function of a 128-bit counter and a 64-bit
/// key, so any position of any stream can be produced without touching the
/// others.
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter block(Counter counter, Key key) noexcept;
};

/// A sequential view of one Philox substream.
///
/// The key is the master seed; counter words 2..3 hold the substream id and
/// words 0..1 the block index inside the substream. Monte-Carlo sample i
/// always reads substream i, which makes estimates independent of how the
/// sample range is split across chunks or threads.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t stream_id) noexcept;

  std::uint32_t next_u32() noexcept {
    if (pos_ == 4) refill();
    return buf_[pos_++];
  }

  std::uint64_t next_u64() noexcept {
    const std::uint64_t hi = next_u32();
    return (hi << 32) | next_u32();
  }

  /// Uniform integer in [0, bound), bound >= 1. Lemire's multiply-shift
  /// with rejection, so the result is exactly uniform.
  std::uint32_t uniform_below(std::uint32_t bound) noexcept {
    std::uint64_t m = std::uint64_t{next_u32()} * bound;
    auto low = static_cast<std::uint32_t>(m);
    if (low < bound) {
      const std::uint32_t threshold = static_cast<std::uint32_t>(-bound) % bound;
      while (low < threshold) {
        m = std::uint64_t{next_u32()} * bound;
        low = static_cast<std::uint32_t>(m);
      }
    }
    return static_cast<std::uint32_t>(m >> 32);
  }

  /// Uniform integer in [0, bound) for 64-bit bounds.
  std::uint64_t uniform_below64(std::uint64_t bound) noexcept {
    if (bound <= 0xFFFFFFFFull) return uniform_below(static_cast<std::uint32_t>(bound));
    return uniform_below64_wide(bound);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  std::uint64_t stream_id() const noexcept { return stream_id_; }

 private:
  void refill() noexcept;
  std::uint64_t uniform_below64_wide(std::uint64_t bound) noexcept;

  Philox4x32::Key key_;
  std::uint64_t stream_id_;
  std::uint64_t block_ = 0;
  Philox4x32::Counter buf_{};
  int pos_ = 4;
};

/// SplitMix64 finalizer; used to derive independent master seeds from a
/// (seed, tag) pair, e.g. one per search candidate.
std::uint64_t mix64(std::uint64_t x) noexcept;
std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t tag) noexcept;

}  // namespace hopdim
