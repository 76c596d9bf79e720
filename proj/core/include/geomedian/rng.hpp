#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace geomedian::rng {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
///
/// The 128-bit counter is split in two halves: words 2..3 hold a fixed stream
/// id, words 0..1 count 128-bit blocks within that stream. Every (key, stream)
/// pair therefore names an independent sequence of 2^64 blocks, and the output
/// depends only on integer arithmetic, so it is identical on every platform.
class Philox4x32 {
 public:
  using result_type = std::uint32_t;

  Philox4x32(std::uint64_t key, std::uint64_t stream) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept;

  /// Skip `count` 32-bit outputs.
  void discard(std::uint64_t count) noexcept;

  /// Raw block function, exposed for known-answer tests.
  static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> counter,
                                            std::array<std::uint32_t, 2> key) noexcept;

 private:
  void refill() noexcept;

  std::array<std::uint32_t, 2> key_{};
  std::array<std::uint32_t, 4> counter_{};
  std::array<std::uint32_t, 4> buffer_{};
  unsigned index_ = 4;
};

/// Tags that keep the random streams of different consumers disjoint even when
/// they share a master seed.
enum class Family : std::uint32_t {
  BootstrapMedian = 1,
  BootstrapMean = 2,
  SampleRow = 3,
  GmomPermutation = 4,
  Replication = 5,
  Synthetic = 6,
};

/// SplitMix64 finalizer; a bijective 64-bit mixer.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Generator for item `index` of `family` under `seed`:
///   key    = mix64(seed ^ mix64(family))
///   stream = index
/// This is the only place where streams are derived.
Philox4x32 substream(std::uint64_t seed, Family family, std::uint64_t index) noexcept;

/// A derived 64-bit seed for nesting (e.g. replication r of a scenario).
std::uint64_t derive_seed(std::uint64_t seed, Family family, std::uint64_t index) noexcept;

/// Uniform double in [0, 1) with 53 random bits.
double uniform01(Philox4x32& engine) noexcept;

/// Random signs drawn one engine bit at a time (LSB first).
class RademacherSource {
 public:
  explicit RademacherSource(Philox4x32 engine) noexcept : engine_(engine) {}

  /// +1.0 or -1.0, each with probability 1/2.
  double operator()() noexcept {
    if (bits_left_ == 0) {
      bits_ = engine_();
      bits_left_ = 32;
    }
    const double sign = (bits_ & 1u) ? 1.0 : -1.0;
    bits_ >>= 1;
    --bits_left_;
    return sign;
  }

 private:
  Philox4x32 engine_;
  std::uint32_t bits_ = 0;
  unsigned bits_left_ = 0;
};

}  // namespace geomedian::rng
