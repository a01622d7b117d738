#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace ggmdl {

// splitmix64 finalizer; the building block for substream seed derivation.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Stream-splitting rule: every independent consumer of randomness derives its
// own engine seed as derive_seed(base, tag0, tag1, ...) where the tags name
// the consumer. Conventions used throughout this library:
//   structure draws:  derive_seed(seed, kind_id, p)
//   data sampling:    derive_seed(seed, 0x5A11)
//   benchmark trial:  derive_seed(seed, kind_id, p, n, trial, purpose)
// Identical (base, tags...) always yields the same engine seed on every
// platform; distinct tag tuples yield decorrelated streams.
inline std::uint64_t derive_seed(std::uint64_t base) { return mix64(base); }

template <class... Tags>
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t tag, Tags... rest) {
  return derive_seed(mix64(base ^ mix64(tag)), rest...);
}

// Deterministic portable generator: mt19937_64 has a standard-mandated output
// sequence, and all real-valued draws below are built from its raw 64-bit
// words only (std::normal_distribution etc. are implementation-defined, so
// they are not used anywhere).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next_u64() { return eng_(); }

  // [0, 1)
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  // (0, 1]; safe as a log() argument
  double uniform_pos() {
    return static_cast<double>((eng_() >> 11) + 1) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // [0, n)
  std::uint64_t below(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(eng_()) * n) >> 64);
  }

  // standard normal via Box-Muller on the engine's uniforms
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = uniform_pos();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

 private:
  std::mt19937_64 eng_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace ggmdl
