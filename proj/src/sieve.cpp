#include "cubelsh/sieve.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "cubelsh/index.hpp"
#include "cubelsh/rng.hpp"
#include "cubelsh/rotations.hpp"

namespace cubelsh {
namespace {

using boost::multiprecision::cpp_int;

constexpr long long kEntryBound = 1LL << 30;

/// Fraction-free Bareiss elimination over exact integers; the final
/// pivot is the determinant up to row-swap sign, so the zero test is a
/// certified singularity verdict.
bool nonsingular(const std::vector<std::vector<long long>>& cols) {
  const int d = static_cast<int>(cols.size());
  std::vector<std::vector<cpp_int>> m(d, std::vector<cpp_int>(d));
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) m[i][j] = cols[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
  }
  cpp_int prev = 1;
  for (int k = 0; k < d; ++k) {
    int pivot = -1;
    for (int i = k; i < d; ++i) {
      if (m[i][k] != 0) {
        pivot = i;
        break;
      }
    }
    if (pivot < 0) return false;
    if (pivot != k) std::swap(m[pivot], m[k]);
    for (int i = k + 1; i < d; ++i) {
      for (int j = k + 1; j < d; ++j) {
        m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
      }
    }
    prev = m[k][k];
  }
  return m[d - 1][d - 1] != 0;
}

__int128 norm2_of(const std::vector<long long>& v) {
  __int128 s = 0;
  for (const long long e : v) s += static_cast<__int128>(e) * e;
  return s;
}

__int128 dot_of(const std::vector<long long>& a, const std::vector<long long>& b) {
  __int128 s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += static_cast<__int128>(a[i]) * b[i];
  return s;
}

/// Sign-normalized copy (first nonzero entry positive), so v and -v
/// collide in the duplicate set.
std::vector<long long> canonical_sign(std::vector<long long> v) {
  for (const long long e : v) {
    if (e > 0) return v;
    if (e < 0) {
      for (long long& x : v) x = -x;
      return v;
    }
  }
  return v;
}

struct PointHash {
  std::size_t operator()(const std::vector<long long>& v) const noexcept {
    std::uint64_t h = 0x9E3779B97F4A7C15ull ^ static_cast<std::uint64_t>(v.size());
    for (const long long e : v) {
      h = mix64(h + static_cast<std::uint64_t>(e) * 0xD1B54A32D192ED03ull);
    }
    return static_cast<std::size_t>(h);
  }
};

/// Dynamic angular filter over the sieve list: t tables of k-fold hashes
/// tuned for near angle pi/3 against far angle pi/2 with per-pass recall
/// 0.5 (a missed partner gets retried on later passes, and every rebuild
/// redraws the hash seeds). Rebuilds retune (k, t) to the current list
/// size; between rebuilds new vectors are inserted into the existing
/// tables.
class BucketIndex {
 public:
  BucketIndex(HashModel family, int d, std::uint64_t seed)
      : family_(family), d_(d), seed_(seed) {}

  bool built() const { return t_ > 0; }
  long long built_size() const { return built_size_; }

  void rebuild(const std::vector<int>& ids,
               const std::vector<const std::vector<double>*>& units) {
    ++epoch_;
    int dprime = 1;
    if (family_ == HashModel::Hypercube) {
      // Optimal hash bits per dimension from the asymptotic cost balance.
      static const double ratio = sieve_exponents(HashModel::Hypercube).dprime_ratio;
      dprime = std::clamp(static_cast<int>(std::llround(ratio * d_)), 1, d_);
    }
    const long long n = static_cast<long long>(units.size());
    const IndexParams tuned = tune_params(std::max<long long>(n, 2), Angle(kPi / 3.0),
                                          Angle(kPi / 2.0), family_, d_, dprime, 0.5);
    k_ = tuned.k;
    dprime_ = tuned.dprime;
    t_ = std::min(tuned.t, 512);
    code_bits_ = family_ == HashModel::Hypercube ? k_ * dprime_ : k_;
    rotations_.assign(static_cast<std::size_t>(t_), {});
    normals_.assign(static_cast<std::size_t>(t_), {});
    tables_.assign(static_cast<std::size_t>(t_), {});
    for (int tau = 0; tau < t_; ++tau) {
      for (int j = 0; j < k_; ++j) {
        const std::uint64_t slot = (static_cast<std::uint64_t>(epoch_) << 32) +
                                   static_cast<std::uint64_t>(tau) * static_cast<std::uint64_t>(k_) +
                                   static_cast<std::uint64_t>(j);
        const std::uint64_t slot_seed = RandomStream(seed_, slot).next_u64();
        if (family_ == HashModel::Hypercube) {
          rotations_[static_cast<std::size_t>(tau)].push_back(
              partial_haar_rotation(d_, dprime_, slot_seed));
        } else {
          RandomStream rng(slot_seed, 0);
          std::vector<double> normal(static_cast<std::size_t>(d_));
          for (double& x : normal) x = rng.gaussian();
          normals_[static_cast<std::size_t>(tau)].push_back(std::move(normal));
        }
      }
    }
    built_size_ = n;
    for (long long i = 0; i < n; ++i) {
      insert(ids[static_cast<std::size_t>(i)], *units[static_cast<std::size_t>(i)]);
    }
  }

  void insert(int id, const std::vector<double>& unit) {
    for (int tau = 0; tau < t_; ++tau) {
      tables_[static_cast<std::size_t>(tau)][code(tau, unit)].push_back(id);
    }
  }

  /// Ids sharing a bucket with `unit` or with its antipode, deduplicated
  /// through `stamp` (must be sized to the current list).
  void collect(const std::vector<double>& unit, std::vector<char>& stamp,
               std::vector<int>& out) const {
    out.clear();
    for (int tau = 0; tau < t_; ++tau) {
      const HashCode own = code(tau, unit);
      take(tau, own, stamp, out);
      take(tau, complement(own), stamp, out);
    }
  }

 private:
  HashCode code(int tau, const std::vector<double>& unit) const {
    if (family_ == HashModel::Hypercube) {
      HashCode out;
      out.resize(code_bits_);
      const auto& rots = rotations_[static_cast<std::size_t>(tau)];
      for (int j = 0; j < k_; ++j) {
        const HashCode piece = hypercube_hash(unit, rots[static_cast<std::size_t>(j)], dprime_);
        for (int b = 0; b < dprime_; ++b) {
          if (piece.bit(b)) out.set_bit(j * dprime_ + b);
        }
      }
      return out;
    }
    return hyperplane_hash(unit, normals_[static_cast<std::size_t>(tau)]);
  }

  /// Antipodal bucket: both hash families flip every bit under x -> -x.
  static HashCode complement(HashCode c) {
    for (std::uint64_t& w : c.words) w = ~w;
    const int rem = c.bits % 64;
    if (rem != 0) c.words.back() &= (std::uint64_t{1} << rem) - 1;
    return c;
  }

  void take(int tau, const HashCode& key, std::vector<char>& stamp,
            std::vector<int>& out) const {
    const auto& table = tables_[static_cast<std::size_t>(tau)];
    const auto it = table.find(key);
    if (it == table.end()) return;
    for (const int id : it->second) {
      if (!stamp[static_cast<std::size_t>(id)]) {
        stamp[static_cast<std::size_t>(id)] = 1;
        out.push_back(id);
      }
    }
  }

  HashModel family_;
  int d_;
  std::uint64_t seed_;
  int k_ = 0;
  int dprime_ = 1;
  int t_ = 0;
  int code_bits_ = 0;
  long long built_size_ = 0;
  int epoch_ = 0;
  std::vector<std::vector<Rotation>> rotations_;
  std::vector<std::vector<std::vector<double>>> normals_;
  std::vector<std::unordered_map<HashCode, std::vector<int>>> tables_;
};

}  // namespace

LatticeBasis::LatticeBasis(std::vector<std::vector<long long>> columns)
    : cols_(std::move(columns)) {
  const std::size_t d = cols_.size();
  if (d == 0) throw std::invalid_argument("lattice basis: empty matrix");
  for (const auto& col : cols_) {
    if (col.size() != d) throw std::invalid_argument("lattice basis: matrix must be square");
    for (const long long e : col) {
      if (e <= -kEntryBound || e >= kEntryBound) {
        throw std::invalid_argument("lattice basis: entries must satisfy |e| < 2^30");
      }
    }
  }
  if (!nonsingular(cols_)) throw std::invalid_argument("lattice basis: singular matrix");
}

LatticeBasis LatticeBasis::from_text(const std::string& text) {
  std::vector<std::vector<long long>> rows;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    std::istringstream fields(line);
    std::vector<long long> row;
    std::string token;
    while (fields >> token) {
      std::size_t used = 0;
      long long value = 0;
      try {
        value = std::stoll(token, &used);
      } catch (const std::exception&) {
        throw std::invalid_argument("lattice basis: non-integer token '" + token + "'");
      }
      if (used != token.size()) {
        throw std::invalid_argument("lattice basis: non-integer token '" + token + "'");
      }
      row.push_back(value);
    }
    if (!row.empty()) rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::invalid_argument("lattice basis: no rows");
  const std::size_t d = rows.size();
  for (const auto& row : rows) {
    if (row.size() != d) throw std::invalid_argument("lattice basis: ragged rows");
  }
  // Rows of the text are matrix rows; basis vectors are the columns.
  std::vector<std::vector<long long>> cols(d, std::vector<long long>(d));
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) cols[j][i] = rows[i][j];
  }
  return LatticeBasis(std::move(cols));
}

LatticeBasis LatticeBasis::identity(int d) {
  if (d < 1) throw std::invalid_argument("lattice basis: dimension must be positive");
  std::vector<std::vector<long long>> cols(static_cast<std::size_t>(d),
                                           std::vector<long long>(static_cast<std::size_t>(d), 0));
  for (int j = 0; j < d; ++j) cols[static_cast<std::size_t>(j)][static_cast<std::size_t>(j)] = 1;
  return LatticeBasis(std::move(cols));
}

LatticeBasis LatticeBasis::diagonal(const std::vector<long long>& entries) {
  const std::size_t d = entries.size();
  std::vector<std::vector<long long>> cols(d, std::vector<long long>(d, 0));
  for (std::size_t j = 0; j < d; ++j) cols[j][j] = entries[j];
  return LatticeBasis(std::move(cols));
}

LatticeBasis LatticeBasis::random_basis(int d, std::uint64_t seed, int bits) {
  if (d < 1) throw std::invalid_argument("lattice basis: dimension must be positive");
  if (bits < 1 || bits > 30) throw std::invalid_argument("lattice basis: bits must be in [1, 30]");
  RandomStream rng(seed, 0);
  const long long half = 1LL << (bits - 1);
  for (int attempt = 0; attempt < 64; ++attempt) {
    std::vector<std::vector<long long>> cols(
        static_cast<std::size_t>(d), std::vector<long long>(static_cast<std::size_t>(d)));
    for (auto& col : cols) {
      for (long long& e : col) {
        e = static_cast<long long>(rng.below(std::uint64_t{1} << bits)) - half;
      }
    }
    if (nonsingular(cols)) return LatticeBasis(std::move(cols));
  }
  throw std::runtime_error("lattice basis: kept drawing singular matrices");
}

std::vector<long long> LatticeBasis::multiply(const std::vector<long long>& coeffs) const {
  const std::size_t d = cols_.size();
  if (coeffs.size() != d) {
    throw std::invalid_argument("lattice basis: coefficient count must match the dimension");
  }
  std::vector<long long> point(d, 0);
  for (std::size_t i = 0; i < d; ++i) {
    __int128 acc = 0;
    for (std::size_t j = 0; j < d; ++j) {
      acc += static_cast<__int128>(coeffs[j]) * cols_[j][i];
    }
    if (acc > (static_cast<__int128>(1) << 62) || acc < -(static_cast<__int128>(1) << 62)) {
      throw std::overflow_error("lattice basis: combination exceeds 62-bit coordinates");
    }
    point[i] = static_cast<long long>(acc);
  }
  return point;
}

LatticeVector sample_lattice_vector(const LatticeBasis& basis, std::uint64_t seed,
                                    double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("sample_lattice_vector: sigma must be positive");
  const int d = basis.dim();
  RandomStream rng(seed, 0);
  for (int attempt = 0; attempt < 256; ++attempt) {
    std::vector<long long> coeffs(static_cast<std::size_t>(d));
    bool nonzero = false;
    for (long long& c : coeffs) {
      c = std::llround(rng.gaussian() * sigma);
      nonzero = nonzero || c != 0;
    }
    if (!nonzero) continue;
    std::vector<long long> point = basis.multiply(coeffs);
    return LatticeVector{std::move(coeffs), std::move(point)};
  }
  throw std::runtime_error("sample_lattice_vector: only zero vectors drawn (sigma too small)");
}

SieveResult nv_sieve(const LatticeBasis& basis, const SieveConfig& config) {
  const int d = basis.dim();
  if (d > 48) throw std::invalid_argument("nv_sieve: dimension capped at 48");
  if (config.max_samples < 1) throw std::invalid_argument("nv_sieve: max_samples must be positive");
  if (config.stall_window < 1) throw std::invalid_argument("nv_sieve: stall_window must be positive");
  if (!(config.sigma > 0.0)) throw std::invalid_argument("nv_sieve: sigma must be positive");

  // Append-only slot storage with tombstones, so hash buckets can keep
  // referring to stable slot ids between rebuilds.
  struct Entry {
    std::vector<long long> point;
    std::vector<long long> coeffs;
    __int128 n2 = 0;
    std::vector<double> unit;
    bool alive = false;
  };

  const auto unit_of = [d](const std::vector<long long>& v, __int128 n2) {
    std::vector<double> unit(static_cast<std::size_t>(d));
    const double inv = 1.0 / std::sqrt(static_cast<double>(static_cast<long double>(n2)));
    for (int i = 0; i < d; ++i) {
      unit[static_cast<std::size_t>(i)] = static_cast<double>(v[static_cast<std::size_t>(i)]) * inv;
    }
    return unit;
  };

  std::vector<Entry> slots;
  long long live = 0;
  std::unordered_set<std::vector<long long>, PointHash> seen;
  const bool use_lsh = config.backend != SieveBackend::Linear;
  BucketIndex buckets(
      config.backend == SieveBackend::HyperplaneLSH ? HashModel::Hyperplane : HashModel::Hypercube,
      d, RandomStream(config.seed, ~std::uint64_t{0}).next_u64());

  SieveResult result;
  __int128 best_n2 = 0;
  bool have_best = false;
  std::vector<long long> best_point;
  std::vector<long long> best_coeffs;
  int stall = 0;
  std::vector<char> stamp;
  std::vector<int> cands;
  // Vectors evicted from the list rejoin the pipeline through this stack.
  std::vector<std::pair<std::vector<long long>, std::vector<long long>>> pending;

  // Live candidate slots for the current direction: bucket contents under
  // the LSH backends (once built), the whole list otherwise.
  const auto gather = [&](const std::vector<double>& unit) {
    cands.clear();
    if (use_lsh && buckets.built()) {
      stamp.assign(slots.size(), 0);
      buckets.collect(unit, stamp, cands);
      std::erase_if(cands, [&](int id) { return !slots[static_cast<std::size_t>(id)].alive; });
    } else {
      for (std::size_t i = 0; i < slots.size(); ++i) {
        if (slots[i].alive) cands.push_back(static_cast<int>(i));
      }
    }
  };

  // Reduce one incoming vector to a fixpoint, insert it, then evict any
  // stored vector the newcomer strictly shortens (those re-enter through
  // `pending`, keeping the list pairwise reduced without ever reducing
  // two stored vectors against each other directly).
  const auto process = [&](std::vector<long long> v, std::vector<long long> cv,
                           bool is_sample) {
    __int128 vn2 = norm2_of(v);
    bool changed = true;
    while (changed && vn2 > 0) {
      changed = false;
      gather(unit_of(v, vn2));
      for (const int id : cands) {
        const Entry& w = slots[static_cast<std::size_t>(id)];
        ++result.comparisons;
        const __int128 dp = dot_of(v, w.point);
        const __int128 diff_n2 = vn2 + w.n2 - 2 * dp;
        const __int128 sum_n2 = vn2 + w.n2 + 2 * dp;
        const bool subtract = diff_n2 <= sum_n2;
        const __int128 cand_n2 = subtract ? diff_n2 : sum_n2;
        if (cand_n2 < vn2) {
          for (int r = 0; r < d; ++r) {
            const std::size_t ri = static_cast<std::size_t>(r);
            v[ri] = subtract ? v[ri] - w.point[ri] : v[ri] + w.point[ri];
          }
          for (std::size_t ri = 0; ri < cv.size(); ++ri) {
            cv[ri] = subtract ? cv[ri] - w.coeffs[ri] : cv[ri] + w.coeffs[ri];
          }
          vn2 = cand_n2;
          ++result.reductions;
          changed = true;
          break;  // direction moved; recompute the candidate set
        }
      }
    }

    if (vn2 == 0) {
      if (is_sample) ++result.collisions;
      return;
    }
    if (!seen.insert(canonical_sign(v)).second) {
      if (is_sample) ++result.collisions;
      return;
    }

    // Evict stored vectors the newcomer strictly shortens; they rejoin as
    // pending work and will be re-reduced against the updated list.
    gather(unit_of(v, vn2));
    for (const int id : cands) {
      Entry& w = slots[static_cast<std::size_t>(id)];
      ++result.comparisons;
      const __int128 dp = dot_of(w.point, v);
      const __int128 diff_n2 = w.n2 + vn2 - 2 * dp;
      const __int128 sum_n2 = w.n2 + vn2 + 2 * dp;
      if (diff_n2 < w.n2 || sum_n2 < w.n2) {
        w.alive = false;
        --live;
        seen.erase(canonical_sign(w.point));
        pending.emplace_back(std::move(w.point), std::move(w.coeffs));
        w.point.clear();
        w.coeffs.clear();
      }
    }

    Entry entry{std::move(v), std::move(cv), vn2, {}, true};
    entry.unit = unit_of(entry.point, entry.n2);
    const int id = static_cast<int>(slots.size());
    slots.push_back(std::move(entry));
    ++live;
    result.list_size_peak = std::max(result.list_size_peak, live);
    if (!have_best || slots[static_cast<std::size_t>(id)].n2 < best_n2) {
      best_n2 = slots[static_cast<std::size_t>(id)].n2;
      best_point = slots[static_cast<std::size_t>(id)].point;
      best_coeffs = slots[static_cast<std::size_t>(id)].coeffs;
      have_best = true;
      stall = 0;
    }

    if (use_lsh) {
      const bool due = buckets.built() ? live * 4 >= buckets.built_size() * 5 : live >= 8;
      if (due) {
        std::vector<int> ids;
        std::vector<const std::vector<double>*> units;
        ids.reserve(static_cast<std::size_t>(live));
        units.reserve(static_cast<std::size_t>(live));
        for (std::size_t i = 0; i < slots.size(); ++i) {
          if (slots[i].alive) {
            ids.push_back(static_cast<int>(i));
            units.push_back(&slots[i].unit);
          }
        }
        buckets.rebuild(ids, units);
      } else if (buckets.built()) {
        buckets.insert(id, slots[static_cast<std::size_t>(id)].unit);
      }
    }
  };

  for (long long trial = 0; trial < config.max_samples; ++trial) {
    if (have_best && stall >= config.stall_window) break;
    ++stall;
    ++result.samples;
    const std::uint64_t sample_seed =
        RandomStream(config.seed, static_cast<std::uint64_t>(trial)).next_u64();
    LatticeVector sampled = sample_lattice_vector(basis, sample_seed, config.sigma);
    process(std::move(sampled.point), std::move(sampled.coefficients), true);
    while (!pending.empty()) {
      auto [pv, pc] = std::move(pending.back());
      pending.pop_back();
      process(std::move(pv), std::move(pc), false);
    }
  }

  result.shortest = best_point;
  result.coefficients = best_coeffs;
  result.norm = std::sqrt(static_cast<double>(static_cast<long double>(best_n2)));
  for (const Entry& e : slots) {
    if (e.alive) result.final_list.push_back(LatticeVector{e.coeffs, e.point});
  }
  return result;
}

ShortestVector enumeration_oracle(const LatticeBasis& basis) {
  const int d = basis.dim();
  if (d > 12) throw std::invalid_argument("enumeration_oracle: dimension capped at 12");
  const std::size_t du = static_cast<std::size_t>(d);

  // The shortest column is a nonzero lattice vector, so its norm is a
  // valid search radius and a valid starting incumbent.
  int init = 0;
  __int128 best_n2 = norm2_of(basis.column(0));
  for (int j = 1; j < d; ++j) {
    const __int128 n2 = norm2_of(basis.column(j));
    if (n2 < best_n2) {
      best_n2 = n2;
      init = j;
    }
  }
  ShortestVector best;
  best.coefficients.assign(du, 0);
  best.coefficients[static_cast<std::size_t>(init)] = 1;
  best.point = basis.column(init);

  // Gram-Schmidt profile of the columns in long double.
  std::vector<std::vector<long double>> bstar(du, std::vector<long double>(du));
  std::vector<std::vector<long double>> mu(du, std::vector<long double>(du, 0.0L));
  std::vector<long double> bstar2(du);
  for (std::size_t j = 0; j < du; ++j) {
    const auto& col = basis.column(static_cast<int>(j));
    for (std::size_t r = 0; r < du; ++r) bstar[j][r] = static_cast<long double>(col[r]);
    for (std::size_t i = 0; i < j; ++i) {
      long double num = 0.0L;
      for (std::size_t r = 0; r < du; ++r) num += static_cast<long double>(col[r]) * bstar[i][r];
      mu[j][i] = num / bstar2[i];
      for (std::size_t r = 0; r < du; ++r) bstar[j][r] -= mu[j][i] * bstar[i][r];
    }
    long double s = 0.0L;
    for (std::size_t r = 0; r < du; ++r) s += bstar[j][r] * bstar[j][r];
    bstar2[j] = s;
    if (!(s > 0.0L)) throw std::runtime_error("enumeration_oracle: degenerate Gram-Schmidt profile");
  }

  // Projected enumeration with a conservative pruning bound: the slack
  // factor means rounding can only admit extra nodes, and only exact
  // integer norms update the incumbent.
  constexpr long double kSlack = 1.0L + 1e-9L;
  long double bound2 = static_cast<long double>(best_n2) * kSlack;
  std::vector<long long> c(du, 0);
  long long nodes = 0;
  constexpr long long kNodeBudget = 400000000;

  const auto score_leaf = [&]() {
    std::vector<long long> point(du, 0);
    for (std::size_t r = 0; r < du; ++r) {
      __int128 acc = 0;
      for (std::size_t j = 0; j < du; ++j) {
        acc += static_cast<__int128>(c[j]) * basis.column(static_cast<int>(j))[r];
      }
      point[r] = static_cast<long long>(acc);
    }
    const __int128 n2 = norm2_of(point);
    if (n2 > 0 && n2 < best_n2) {
      best_n2 = n2;
      best.point = std::move(point);
      best.coefficients = c;
      bound2 = static_cast<long double>(n2) * kSlack;
    }
  };

  const std::function<void(int, long double)> descend = [&](int level, long double partial2) {
    if (++nodes > kNodeBudget) {
      throw std::runtime_error("enumeration_oracle: node budget exhausted (basis too skewed)");
    }
    if (level < 0) {
      score_leaf();
      return;
    }
    const std::size_t lu = static_cast<std::size_t>(level);
    long double y = 0.0L;
    for (std::size_t l = lu + 1; l < du; ++l) y += mu[l][lu] * static_cast<long double>(c[l]);
    const long long center = llroundl(-y);
    // The projected offset |c_i + y| grows monotonically as c_i walks away
    // from the rounded center, so once both directions overflow the bound
    // no farther value can fit.
    for (long long radius = 0;; ++radius) {
      bool alive = false;
      const int sides = radius == 0 ? 1 : 2;
      for (int side = 0; side < sides; ++side) {
        const long long ci = side == 0 ? center + radius : center - radius;
        const long double off = static_cast<long double>(ci) + y;
        const long double next2 = partial2 + off * off * bstar2[lu];
        if (next2 <= bound2) {
          alive = true;
          c[lu] = ci;
          descend(level - 1, next2);
        }
      }
      if (!alive) break;
    }
    c[lu] = 0;
  };
  descend(d - 1, 0.0L);

  best.norm = std::sqrt(static_cast<double>(static_cast<long double>(best_n2)));
  return best;
}

SieveExponents sieve_exponents(HashModel model) {
  if (model == HashModel::Square) {
    throw std::invalid_argument("sieve_exponents: the two-dimensional model has no large-d profile");
  }
  const double c_n = 0.5 * std::log2(4.0 / 3.0);

  // Value and argmax over theta2 of log2(sin t) - c_t/rho(pi/3, t):
  // coarse grid, then golden-section refinement of the bracketing cell.
  const auto profile_max = [model](double ct) {
    const auto f = [model, ct](double t) {
      return std::log2(std::sin(t)) - ct / rho(Angle(kPi / 3.0), Angle(t), model).rho;
    };
    const double lo0 = kPi / 3.0 + 1e-12;
    const double hi0 = kPi / 2.0;
    constexpr int kGrid = 64;
    int best_i = 0;
    double best_v = -std::numeric_limits<double>::infinity();
    for (int i = 0; i <= kGrid; ++i) {
      const double x = lo0 + (hi0 - lo0) * i / kGrid;
      const double v = f(x);
      if (v > best_v) {
        best_v = v;
        best_i = i;
      }
    }
    double a = lo0 + (hi0 - lo0) * std::max(0, best_i - 1) / kGrid;
    double b = lo0 + (hi0 - lo0) * std::min(kGrid, best_i + 1) / kGrid;
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - gr * (b - a);
    double x2 = a + gr * (b - a);
    double f1 = f(x1);
    double f2 = f(x2);
    while (b - a > 1e-13) {
      if (f1 < f2) {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + gr * (b - a);
        f2 = f(x2);
      } else {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - gr * (b - a);
        f1 = f(x1);
      }
    }
    const double x = 0.5 * (a + b);
    return std::pair<double, double>(f(x), x);
  };

  // The balance residual F(c_t) = max profile + c_n decreases strictly in
  // c_t (1/rho > 0 throughout), so bisection is exact.
  double lo = 1e-9;
  double hi = 0.4;
  double residual = std::numeric_limits<double>::infinity();
  double ct = 0.0;
  double theta2 = 0.0;
  for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
    ct = 0.5 * (lo + hi);
    const auto [value, arg] = profile_max(ct);
    residual = value + c_n;
    theta2 = arg;
    if (residual > 0.0) {
      lo = ct;
    } else {
      hi = ct;
    }
  }
  if (!(std::abs(residual) <= 1e-9)) {
    throw std::runtime_error("sieve_exponents: cost balance did not converge");
  }

  SieveExponents out;
  out.model = model;
  out.c_n = c_n;
  out.c_t = ct;
  out.theta2_opt = Angle(theta2);
  out.time_exponent = c_n + ct;
  out.dprime_ratio = model == HashModel::Hypercube
                         ? ct / std::log2(kPi / std::sqrt(3.0))
                         : ct / std::log2(1.5);
  return out;
}

}  // namespace cubelsh
