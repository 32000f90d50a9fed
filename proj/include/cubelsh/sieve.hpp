#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cubelsh/asymptotics.hpp"

namespace cubelsh {

/// Full-rank integer lattice given by a square basis matrix whose
/// *columns* are the basis vectors. Entries are bounded by |e| < 2^30 so
/// that inner products of reduced vectors stay well inside 128-bit
/// integer range; nonsingularity is certified exactly (fraction-free
/// Bareiss elimination over arbitrary-precision integers) at
/// construction time.
class LatticeBasis {
 public:
  /// Build from basis columns. Throws std::invalid_argument when the
  /// matrix is empty, not square, has an entry with |e| >= 2^30, or is
  /// singular.
  explicit LatticeBasis(std::vector<std::vector<long long>> columns);

  /// Parse a plain-text matrix, one row per line, entries separated by
  /// whitespace; blank lines are ignored. The rows are rows of the
  /// matrix, so column j of the parsed matrix is basis vector j. Throws
  /// std::invalid_argument on ragged rows, non-integer tokens, or any
  /// condition the column constructor rejects.
  static LatticeBasis from_text(const std::string& text);

  /// The standard integer lattice Z^d.
  static LatticeBasis identity(int d);

  /// Diagonal basis diag(entries); each entry must be nonzero.
  static LatticeBasis diagonal(const std::vector<long long>& entries);

  /// Seeded random basis with entries uniform in
  /// [-2^(bits-1), 2^(bits-1) - 1], redrawn wholesale until nonsingular
  /// (bounded retries). Requires 1 <= bits <= 30. Deterministic in
  /// (d, seed, bits).
  static LatticeBasis random_basis(int d, std::uint64_t seed, int bits);

  int dim() const { return static_cast<int>(cols_.size()); }
  const std::vector<long long>& column(int j) const { return cols_.at(static_cast<std::size_t>(j)); }
  const std::vector<std::vector<long long>>& columns() const { return cols_; }

  /// Exact integer product B * coeffs (the lattice point with those
  /// coordinates in this basis). coeffs.size() must equal dim().
  std::vector<long long> multiply(const std::vector<long long>& coeffs) const;

 private:
  std::vector<std::vector<long long>> cols_;
};

/// A lattice point carried together with its integer coordinates in the
/// originating basis, so that "point == basis.multiply(coefficients)"
/// can be re-checked exactly at any moment.
struct LatticeVector {
  std::vector<long long> coefficients;
  std::vector<long long> point;
};

/// Discrete-Gaussian-flavored sampler: coefficient j is round(g * sigma)
/// for a fresh standard gaussian g, and the returned point is the exact
/// integer combination of the basis columns. Redraws an all-zero
/// coefficient vector a bounded number of times and then throws
/// std::runtime_error (reachable only for sigma far below 1).
/// Deterministic in (basis, seed, sigma).
LatticeVector sample_lattice_vector(const LatticeBasis& basis, std::uint64_t seed,
                                    double sigma = 1.5);

/// Candidate-set strategy used when reducing a fresh sample against the
/// list: Linear scans the whole list, the other two only scan hash
/// buckets (both the sample's bucket and its sign-flipped bucket, since
/// a reduction partner may sit near -v) of angular filters built at
/// near angle pi/3.
enum class SieveBackend { Linear, HyperplaneLSH, HypercubeLSH };

struct SieveConfig {
  SieveBackend backend = SieveBackend::Linear;
  long long max_samples = 20000;  ///< hard cap on drawn samples
  int stall_window = 400;  ///< stop after this many samples without a shorter vector
  double sigma = 1.5;      ///< coefficient spread of the sampler
  std::uint64_t seed = 0;
};

struct SieveResult {
  std::vector<long long> shortest;      ///< shortest list vector found
  std::vector<long long> coefficients;  ///< its coordinates in the basis
  double norm = 0.0;                    ///< Euclidean norm of `shortest`
  long long samples = 0;                ///< vectors drawn from the sampler
  long long reductions = 0;             ///< accepted replacements v -> v -+ w
  long long collisions = 0;             ///< samples that reduced to zero or a duplicate
  long long comparisons = 0;            ///< exact pairwise distance evaluations
  long long list_size_peak = 0;
  std::vector<LatticeVector> final_list;  ///< the list at termination
};

/// List sieve: repeatedly sample a lattice vector, reduce it against the
/// stored list to a fixpoint (replace v by v - w or v + w whenever that
/// is strictly shorter than v), insert it, and evict any stored vector
/// the newcomer strictly shortens -- evicted vectors re-enter the same
/// reduce-then-insert pipeline. Every stored pair the candidate filter
/// examined therefore satisfies ||x +- y|| >= max(||x||, ||y||) (all
/// pairs under the Linear backend), which is what keeps the list size at
/// the (4/3)^(d/2) scale instead of growing with the sample budget.
/// Samples that cancel to zero or duplicate a stored vector count as
/// collisions. All norm and dot-product decisions are made on exact
/// integers (128-bit accumulation); floating point appears only in the
/// reported norms and in the hash filters.
///
/// The LSH backends retune and rebuild their tables (with fresh hash
/// seeds) every time the list grows by 25%, and insert incrementally in
/// between. Terminates at max_samples or once the best norm has been
/// stable for stall_window consecutive samples. Requires dim <= 48.
SieveResult nv_sieve(const LatticeBasis& basis, const SieveConfig& config);

/// Exact shortest nonzero lattice vector, with witness coordinates.
struct ShortestVector {
  std::vector<long long> coefficients;
  std::vector<long long> point;
  double norm = 0.0;
};

/// Exhaustive shortest-vector search for dim <= 12 (throws
/// std::invalid_argument above that). Enumerates every coefficient
/// vector whose Gram-Schmidt projection profile fits inside a ball of
/// radius R = min column norm -- a valid search bound, since that column
/// is itself a nonzero lattice vector. The per-level pruning bound is
/// evaluated in long double with a (1 + 1e-9) slack factor so rounding
/// can only widen the search, and every surviving leaf is re-scored with
/// exact 128-bit integer arithmetic before it can become the answer.
/// Throws std::runtime_error if the node budget is exhausted (wildly
/// skewed bases) or the Gram-Schmidt profile degenerates numerically.
ShortestVector enumeration_oracle(const LatticeBasis& basis);

/// Asymptotic cost profile of the sieve when the list-vs-sample
/// reductions are filtered by a given hash family in the large-d limit:
/// list size 2^(c_n d + o(d)), time 2^((c_n + c_t) d + o(d)).
struct SieveExponents {
  HashModel model = HashModel::Hyperplane;
  double c_n = 0.0;           ///< list exponent, always (1/2) log2(4/3)
  double c_t = 0.0;           ///< per-vector filter-time exponent
  Angle theta2_opt{0.0};      ///< far angle realizing the cost balance
  double time_exponent = 0.0; ///< c_n + c_t
  /// For Hypercube: the optimal hash length per dimension,
  /// c_t / log2(pi/sqrt(3)). For Hyperplane it carries the analogous
  /// hash-count ratio c_t / log2(3/2).
  double dprime_ratio = 0.0;
};

/// Solve the sieve cost balance
///   -c_n = max over theta2 of { log2 sin(theta2) - c_t / rho(pi/3, theta2) }
/// for c_t by outer bisection, with an inner golden-section maximization
/// of the profile over theta2 in [pi/3, pi/2] (outside that window the
/// profile is dominated: rho is only defined for theta2 >= theta1 and
/// the hypercube base vanishes past pi/2, where the filter cost is not
/// balanced by any list saving). The hypercube far base at exactly pi/2
/// is its left limit 1/pi, matching rho(). Throws std::invalid_argument
/// for the Square model and std::runtime_error when the outer residual
/// stays above 1e-9 after 200 bisection steps.
SieveExponents sieve_exponents(HashModel model);

}  // namespace cubelsh
