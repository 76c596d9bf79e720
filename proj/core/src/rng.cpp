#include "geomedian/rng.hpp"

namespace geomedian::rng {
namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& lo, std::uint32_t& hi) {
  const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
  lo = static_cast<std::uint32_t>(product);
  hi = static_cast<std::uint32_t>(product >> 32);
}

}  // namespace

std::array<std::uint32_t, 4> Philox4x32::block(std::array<std::uint32_t, 4> ctr,
                                               std::array<std::uint32_t, 2> key) noexcept {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    std::uint32_t lo0, hi0, lo1, hi1;
    mulhilo(kMul0, ctr[0], lo0, hi0);
    mulhilo(kMul1, ctr[2], lo1, hi1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
  return ctr;
}

Philox4x32::Philox4x32(std::uint64_t key, std::uint64_t stream) noexcept
    : key_{static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32)},
      counter_{0u, 0u, static_cast<std::uint32_t>(stream),
               static_cast<std::uint32_t>(stream >> 32)} {}

void Philox4x32::refill() noexcept {
  buffer_ = block(counter_, key_);
  if (++counter_[0] == 0) ++counter_[1];
  index_ = 0;
}

Philox4x32::result_type Philox4x32::operator()() noexcept {
  if (index_ == 4) refill();
  return buffer_[index_++];
}

void Philox4x32::discard(std::uint64_t count) noexcept {
  while (count > 0 && index_ < 4) {
    ++index_;
    --count;
  }
  const std::uint64_t blocks = count / 4;
  const std::uint64_t position =
      (static_cast<std::uint64_t>(counter_[1]) << 32 | counter_[0]) + blocks;
  counter_[0] = static_cast<std::uint32_t>(position);
  counter_[1] = static_cast<std::uint32_t>(position >> 32);
  for (std::uint64_t i = 0; i < count % 4; ++i) (*this)();
}

std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

Philox4x32 substream(std::uint64_t seed, Family family, std::uint64_t index) noexcept {
  const std::uint64_t key = mix64(seed ^ mix64(static_cast<std::uint64_t>(family)));
  return Philox4x32(key, index);
}

std::uint64_t derive_seed(std::uint64_t seed, Family family, std::uint64_t index) noexcept {
  auto engine = substream(seed, family, index);
  const std::uint64_t lo = engine();
  const std::uint64_t hi = engine();
  return hi << 32 | lo;
}

double uniform01(Philox4x32& engine) noexcept {
  const std::uint64_t a = engine() >> 5;
  const std::uint64_t b = engine() >> 6;
  return static_cast<double>(a * 67108864ull + b) * 0x1.0p-53;
}

}  // namespace geomedian::rng
