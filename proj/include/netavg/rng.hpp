#pragma once

#include <cmath>
#include <cstdint>

// Counter-free pseudo-random streams. A stream is fully determined by
// (seed, stream_id); independent simulation strands get distinct stream ids
// so results do not depend on scheduling or on how many workers run.

namespace netavg {

// Used only to expand seeds into xoshiro state.
struct SplitMix64 {
  std::uint64_t state;

  explicit SplitMix64(std::uint64_t s) : state(s) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
};

// xoshiro256++ with Box-Muller gaussians. gaussian() always consumes exactly
// two raw words and uniform_below() exactly one, so the draw schedule of a
// simulation is a static function of its control flow.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed, std::uint64_t stream_id = 0)
      : seed_(seed), stream_id_(stream_id) {
    SplitMix64 sm(seed ^ (0x9e3779b97f4a7c15ull * (stream_id + 1)));
    for (auto& w : s_) w = sm.next();
    if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;
  }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // [0, 1), 53 random bits.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // (0, 1], safe as a log argument.
  double uniform01_open() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  // Uniform in [0, bound). Fixed-rate: one word per call.
  std::uint32_t uniform_below(std::uint32_t bound) {
    const std::uint64_t x = next_u64();
    return static_cast<std::uint32_t>(
        (static_cast<unsigned __int128>(x) * bound) >> 64);
  }

  // Standard normal via Box-Muller, two words per call, no caching.
  double gaussian() {
    const double u1 = uniform01_open();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    return r * std::cos(6.283185307179586 * u2);
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t s_[4];
  std::uint64_t seed_;
  std::uint64_t stream_id_;
};

}  // namespace netavg
