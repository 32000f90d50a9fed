#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace cubelsh {

/// How a rotation was built and how it is stored.
///  - HaarQR: full square orthogonal matrix, Haar-distributed.
///  - GramSchmidtRows: the first rows of such a matrix (a partial frame),
///    enough to evaluate a few rotated coordinates cheaply.
///  - PseudoStructured: rounds of random sign flips followed by normalized
///    fast Hadamard transforms; O(d log d) to apply, power-of-two dims.
enum class RotationKind { HaarQR, GramSchmidtRows, PseudoStructured };

/// An orthogonal map R^in_dim -> R^out_dim (out_dim <= in_dim; equality for
/// the square kinds). Deterministic given (kind, dims, rounds, seed).
class Rotation {
 public:
  RotationKind kind() const { return kind_; }
  int in_dim() const { return in_dim_; }
  int out_dim() const { return out_dim_; }
  int rounds() const { return rounds_; }  // 0 for the dense kinds
  std::uint64_t seed() const { return seed_; }

  /// Dense kinds: the orthonormal row basis (out_dim rows of length
  /// in_dim). Structured kind: one +-1 sign diagonal per round.
  const std::vector<std::vector<double>>& rows() const { return rows_; }

  /// y = R x. Requires x.size() == in_dim().
  std::vector<double> apply(const std::vector<double>& x) const;

  /// x = R^T y, the adjoint map; for a square rotation this is the exact
  /// inverse. Requires y.size() == out_dim().
  std::vector<double> apply_transpose(const std::vector<double>& y) const;

  friend Rotation haar_rotation(int dim, std::uint64_t seed);
  friend Rotation partial_haar_rotation(int dim, int out_dim,
                                        std::uint64_t seed);
  friend Rotation pseudo_rotation(int dim, int rounds, std::uint64_t seed);

 private:
  Rotation(RotationKind kind, int in_dim, int out_dim, int rounds,
           std::uint64_t seed, std::vector<std::vector<double>> rows)
      : kind_(kind),
        in_dim_(in_dim),
        out_dim_(out_dim),
        rounds_(rounds),
        seed_(seed),
        rows_(std::move(rows)) {}

  RotationKind kind_;
  int in_dim_;
  int out_dim_;
  int rounds_;
  std::uint64_t seed_;
  std::vector<std::vector<double>> rows_;
};

/// Haar-distributed square rotation: Gram-Schmidt applied to a matrix of
/// independent Gaussians (row i drawn from its own counter-derived
/// stream, so the construction nests: the first r rows never depend on
/// how many rows follow them).
Rotation haar_rotation(int dim, std::uint64_t seed);

/// The first out_dim rows of haar_rotation(dim, seed), built without
/// paying for the remaining rows.
Rotation partial_haar_rotation(int dim, int out_dim, std::uint64_t seed);

/// Structured pseudo-rotation: `rounds` repetitions of a fresh random sign
/// diagonal followed by a normalized fast Hadamard transform. dim must be
/// a power of two, rounds >= 1. Exactly orthogonal (up to rounding); not
/// Haar-distributed, but a cheap stand-in for it.
Rotation pseudo_rotation(int dim, int rounds, std::uint64_t seed);

/// Double-pass modified Gram-Schmidt on the given rows. Returns an
/// orthonormal family spanning the same flag of subspaces. Throws
/// std::runtime_error if some row's residual norm falls below 1e-12
/// (rank-deficient input).
std::vector<std::vector<double>> gram_schmidt_rows(
    std::vector<std::vector<double>> rows);

/// A packed bit string of hash output. Bits are stored little-endian
/// within and across 64-bit words; unused high bits of the last word are
/// always zero, so == and hashing can work word-wise.
struct HashCode {
  std::vector<std::uint64_t> words;
  int bits = 0;

  void resize(int nbits) {
    bits = nbits;
    words.assign((static_cast<std::size_t>(nbits) + 63) / 64, 0);
  }
  void set_bit(int i) {
    words[static_cast<std::size_t>(i) / 64] |= std::uint64_t{1} << (i % 64);
  }
  bool bit(int i) const {
    return (words[static_cast<std::size_t>(i) / 64] >> (i % 64)) & 1u;
  }
  friend bool operator==(const HashCode& a, const HashCode& b) {
    return a.bits == b.bits && a.words == b.words;
  }
};

/// Sign pattern of x against a family of hyperplane normals: bit j is 1
/// when dot(x, normals[j]) >= 0 (ties count as the positive side).
/// Throws std::domain_error for an all-zero input vector.
HashCode hyperplane_hash(const std::vector<double>& x,
                         const std::vector<std::vector<double>>& normals);

/// Orthant pattern of the first dprime rotated coordinates: bit j is 1
/// when (R x)_j >= 0. Requires 1 <= dprime <= rotation.out_dim(); throws
/// std::domain_error otherwise or for an all-zero input.
HashCode hypercube_hash(const std::vector<double>& x,
                        const Rotation& rotation, int dprime);

}  // namespace cubelsh

template <>
struct std::hash<cubelsh::HashCode> {
  std::size_t operator()(const cubelsh::HashCode& code) const noexcept {
    // splitmix64-style fold over the words.
    std::uint64_t h = 0x9E3779B97F4A7C15ull ^ static_cast<std::uint64_t>(code.bits);
    for (const std::uint64_t w : code.words) {
      std::uint64_t x = w + 0x9E3779B97F4A7C15ull + h;
      x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
      x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
      h = x ^ (x >> 31);
    }
    return static_cast<std::size_t>(h);
  }
};
