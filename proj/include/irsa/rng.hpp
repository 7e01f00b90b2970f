#pragma once

#include <cstdint>
#include <limits>

namespace irsa {

/// Purpose tags that keep the random streams used by different parts of a
/// simulation disjoint. A stream is identified by (master seed, tag, index).
enum class StreamTag : std::uint64_t {
  codebook = 0x636f6465626f6f6bULL,
  graph = 0x6772617068000000ULL,
  activation = 0x6163746976617465ULL,
  assignment = 0x61737369676e0000ULL,
  slot_trial = 0x736c6f7474726961ULL,
  generic = 0x67656e6572696300ULL,
};

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept
{
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Hashes a stream key into a 64-bit seed.
constexpr std::uint64_t stream_key(std::uint64_t master, StreamTag tag, std::uint64_t index) noexcept
{
  std::uint64_t h = splitmix64(master);
  h = splitmix64(h ^ static_cast<std::uint64_t>(tag));
  h = splitmix64(h ^ splitmix64(index + 0x632be59bd9b4e019ULL));
  return h;
}

/// xoshiro256** engine keyed by (master seed, tag, index). Satisfies
/// UniformRandomBitGenerator, and the helpers below avoid the
/// implementation-defined std distributions so draws are bit-identical
/// across standard libraries.
class Stream
{
public:
  using result_type = std::uint64_t;

  explicit Stream(std::uint64_t seed) noexcept
  {
    std::uint64_t x = seed;
    for (auto& s : state_) {
      x += 0x9e3779b97f4a7c15ULL;
      s = splitmix64(x);
    }
  }

  Stream(std::uint64_t master, StreamTag tag, std::uint64_t index) noexcept
    : Stream(stream_key(master, tag, index))
  {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept
  {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) noexcept { return uniform() < p; }

  /// Uniform integer in [0, bound). bound must be positive.
  std::uint64_t below(std::uint64_t bound) noexcept
  {
    // Lemire's multiply-shift with rejection.
    unsigned __int128 m = static_cast<unsigned __int128>((*this)()) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        m = static_cast<unsigned __int128>((*this)()) * bound;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept { return (x << k) | (x >> (64 - k)); }

  std::uint64_t state_[4]{};
};

}  // namespace irsa
