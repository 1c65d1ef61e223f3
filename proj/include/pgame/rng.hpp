#pragma once

#include <cstdint>

namespace pgame
{
  // Generated games must be bit-identical across platforms and library
  // versions, so the generator does not touch <random> distributions.
  // splitmix64 stream with unbiased bounded draws, pinned here.

  constexpr std::uint64_t splitmix64_mix(std::uint64_t z)
  {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  class SplitMix64
  {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next()
    {
      state_ += 0x9e3779b97f4a7c15ull;
      return splitmix64_mix(state_);
    }

    /// Uniform draw from {0, .., bound-1}, bound >= 1. Lemire rejection on
    /// the upper 32 bits of the stream; exact, no modulo bias.
    std::uint32_t below(std::uint32_t bound)
    {
      for (;;)
        {
          std::uint32_t x = static_cast<std::uint32_t>(next() >> 32);
          std::uint64_t m = std::uint64_t(x) * bound;
          if (static_cast<std::uint32_t>(m) >= bound ||
              static_cast<std::uint32_t>(m) >= (-bound) % bound)
            return static_cast<std::uint32_t>(m >> 32);
        }
    }

  private:
    std::uint64_t state_;
  };

  /// Independent stream for instance `index` of a seeded batch. Mixing is
  /// order-free: instance j can be regenerated without drawing 0..j-1.
  inline std::uint64_t sub_seed(std::uint64_t seed, std::uint64_t index)
  {
    return splitmix64_mix(splitmix64_mix(seed) ^
                          splitmix64_mix(index + 0x243f6a8885a308d3ull));
  }
}
