#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "cubelsh/asymptotics.hpp"
#include "cubelsh/rotations.hpp"

namespace cubelsh {

/// Hard cap on the concatenated code length of one table, in bits.
inline constexpr int kMaxCodeBits = 4096;

/// A dataset is a list of unit vectors; the stable id of a point is its
/// position in the list. build() verifies unit norms to 1e-9.
using Dataset = std::vector<std::vector<double>>;

/// Parameters of a multi-table index. Each of the t tables keys its
/// buckets by the concatenation of k independently seeded hashes; a
/// hypercube hash contributes dprime sign bits (one seeded rotation), a
/// hyperplane hash a single sign bit (dprime is forced to 1).
struct IndexParams {
  int d = 0;
  int dprime = 1;
  int k = 1;
  int t = 1;
  HashModel family = HashModel::Hypercube;
  RotationKind rotation_kind = RotationKind::HaarQR;
  std::uint64_t seed = 0;
};

/// Result of one query: the examined candidate union and the best match.
/// best_angle is +infinity when no candidate was found.
struct QueryReport {
  long long candidates_examined = 0;
  std::optional<int> best_id;
  double best_angle = std::numeric_limits<double>::infinity();
  int tables_hit = 0;
  bool found = false;
};

/// Aggregate result of a planted-neighbor recall experiment.
struct RecallSummary {
  int queries = 0;
  int found_count = 0;
  double recall = 0.0;
  double mean_candidates = 0.0;
};

/// Picks (k, t) for n points so that far points (angle theta2) collide
/// with probability about 1/n per table and a theta1-near neighbor is
/// missed by all tables with probability at most delta:
///   k = max(1, round(ln n / (-ln p2))),  t = ceil(p1^(-k) ln(1/delta)),
/// where p1, p2 are the per-hash collision bases at theta1, theta2 —
/// (1 - theta/pi) for a hyperplane bit, base(theta)^dprime for a
/// hypercube hash (at exactly theta2 = pi/2 the left-limit base 1/pi is
/// used, matching the sensitivity analysis). k is clamped so the code
/// length stays within kMaxCodeBits.
///
/// Throws std::invalid_argument for n < 2 or theta1 >= theta2,
/// std::domain_error when p2 is degenerate (0 or 1, including the
/// hypercube family past pi/2) or the implied table count is not
/// representable.
IndexParams tune_params(long long n, Angle theta1, Angle theta2,
                        HashModel family, int d, int dprime,
                        double delta = 0.1);

/// Immutable multi-table index. Hash functions are seeded per
/// (table, hash) slot from the master seed, so a table's functions do
/// not depend on how many tables follow it (recall is exactly monotone
/// in t at fixed seed). After construction the index is read-only and
/// safe for concurrent queries.
class LshIndex {
 public:
  /// Copies the dataset and builds all t tables. Throws
  /// std::invalid_argument on an empty dataset, a dimension mismatch, a
  /// non-unit vector (norm off by more than 1e-9), or parameters that
  /// violate their invariants.
  LshIndex(Dataset dataset, const IndexParams& params);

  const IndexParams& params() const { return params_; }
  int size() const { return static_cast<int>(data_.size()); }

  /// Examines the union of q's buckets over all tables, verifying every
  /// candidate by its exact angle to q. Deduplicates ids across tables
  /// (candidates_examined counts distinct points); ties in angle go to
  /// the lowest id; found means best_angle <= theta1 + 1e-9. q must be
  /// unit length in the index dimension.
  QueryReport query(const std::vector<double>& q, Angle theta1) const;

  /// The concatenated code a vector hashes to in one table.
  HashCode table_code(const std::vector<double>& x, int table) const;

  /// Ids stored under one code of one table (empty if the bucket does
  /// not exist). Ids are listed in increasing order.
  std::vector<int> bucket_ids(int table, const HashCode& code) const;

  /// Number of distinct occupied codes in one table.
  int bucket_count(int table) const;

  /// Total ids stored in one table (the buckets partition the dataset,
  /// so this equals size()).
  long long table_entry_count(int table) const;

  /// Seed of the j-th hash slot of one table, as derived from the master
  /// seed; exposed so tests can rebuild the hash function independently.
  std::uint64_t hash_seed(int table, int j) const;

 private:
  struct Table {
    std::vector<std::uint64_t> keys;  ///< distinct codes, sorted, words each
    std::vector<int> offsets;         ///< keys.size()/words + 1 entries
    std::vector<int> ids;             ///< grouped by code, increasing inside
  };

  int code_words() const;
  int code_bits() const;
  void fill_code_words(const std::vector<double>& x, int table,
                       std::uint64_t* out) const;
  /// Index into keys (in units of words) or -1 if the code is absent.
  long long find_key(const Table& tab, const std::uint64_t* code) const;

  Dataset data_;
  IndexParams params_;
  /// Hash inputs per table: rotations for the hypercube family (k per
  /// table), raw normal vectors for the hyperplane family.
  std::vector<std::vector<Rotation>> rotations_;
  std::vector<std::vector<std::vector<double>>> normals_;
  std::vector<Table> tables_;
};

/// Draws n uniform directions, replaces point i (i < num_queries) by a
/// vector at exact angle theta1 from query i, builds the index with
/// `params`, and queries every planted query. All randomness derives
/// from params.seed through reserved streams, so the experiment is
/// reproducible and independent of t (larger t only appends tables).
RecallSummary recall_experiment(long long n, int d, Angle theta1,
                                int num_queries, const IndexParams& params);

}  // namespace cubelsh
