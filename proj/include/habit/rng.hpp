#pragma once

#include <cstdint>

namespace habit {

/// Deterministic 64-bit generator (splitmix64: Steele, Lea & Flood's
/// SplittableRandom finalizer). Chosen over std::mt19937 because its output
/// — including the bounded draw below — is pinned by this header on every
/// platform, which keeps seeded simulation reports byte-reproducible.
class SplitMix64 {
public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Unbiased draw from [0, bound) via Lemire's multiply-shift rejection.
  std::uint64_t next_below(std::uint64_t bound) {
    unsigned __int128 m = static_cast<unsigned __int128>(next()) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
      std::uint64_t threshold = -bound % bound;
      while (low < threshold) {
        m = static_cast<unsigned __int128>(next()) * bound;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  /// In-place Fisher-Yates shuffle.
  template <typename T>
  void shuffle(T& container) {
    for (std::size_t i = container.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(next_below(i));
      using std::swap;
      swap(container[i - 1], container[j]);
    }
  }

private:
  std::uint64_t state_;
};

}  // namespace habit
