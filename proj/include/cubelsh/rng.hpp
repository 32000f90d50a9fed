#pragma once

#include <cstdint>
#include <cmath>
#include <numbers>

namespace cubelsh {

/// Final avalanche of the splitmix64 generator (Steele, Lea, Flood).
inline constexpr std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return z;
}

/// Counter-seeded random stream.
///
/// The pair (seed, stream) fully determines the sequence, so callers that
/// run many independent trials can give trial i the stream index i and get
/// results that do not depend on how trials are scheduled across threads.
/// Gaussians come from a hand-rolled Box-Muller so that equal seeds give
/// bit-equal sequences on any platform with IEEE doubles.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed, std::uint64_t stream = 0)
      : state_(mix64(mix64(seed ^ 0x9E3779B97F4A7C15ULL) +
                     0xD1B54A32D192ED03ULL * (stream + 1)) ^
               mix64(stream + 0x8BB84B93962EACC9ULL)) {}

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix64(state_);
  }

  /// Uniform double in [0, 1), 53 random bits.
  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform double in (0, 1]; never zero, safe to pass through log().
  double uniform01_open_low() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  /// Standard normal deviate.
  double gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = uniform01_open_low();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double phi = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(phi);
    has_spare_ = true;
    return r * std::cos(phi);
  }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    // Multiply-shift rejection-free mapping; bias is negligible for the
    // modest n used here (n << 2^64).
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace cubelsh
