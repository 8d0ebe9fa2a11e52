#pragma once

#include <cstdint>
#include <cmath>

namespace anabp {

// Counter-based pseudo-random stream (splitmix64 core). Draws depend only on
// (key, counter), so substreams derived from the same root seed are
// reproducible across platforms and independent of scheduling order.
class Rng {
public:
  explicit Rng(std::uint64_t key) : key_(key) {}

  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Derives an independent stream key; chain to split per (cell, trial, ...).
  static std::uint64_t derive(std::uint64_t key, std::uint64_t stream) {
    return mix(key ^ mix(stream + 0x637261666662616cULL));
  }

  Rng substream(std::uint64_t stream) const { return Rng(derive(key_, stream)); }

  std::uint64_t next_u64() { return mix(key_ + (++ctr_) * 0x9e3779b97f4a7c15ULL); }

  // Uniform in (0, 1); never returns 0 so log() below is safe.
  double uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1p-53;
  }

  // Standard normal via Box-Muller; implementation-defined library
  // distributions are avoided for cross-platform reproducibility.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  // Uniform integer in [0, bound) by rejection; bound must be > 0.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = bound * (UINT64_MAX / bound);
    std::uint64_t v;
    do {
      v = next_u64();
    } while (v >= limit);
    return v % bound;
  }

private:
  std::uint64_t key_;
  std::uint64_t ctr_ = 0;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace anabp
