#include "cubelsh/index.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "cubelsh/rng.hpp"

namespace cubelsh {
namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void check_unit(const std::vector<double>& v, const char* what) {
  const double norm = std::sqrt(dot(v, v));
  if (std::abs(norm - 1.0) > 1e-9) {
    throw std::invalid_argument(std::string(what) +
                                ": vector is not unit length");
  }
}

/// Per-hash collision base at one angle, following the same left-limit
/// convention as the sensitivity analysis: the hypercube base vanishes
/// on [pi/2, pi], so exactly pi/2 reads as the limit from below, 1/pi.
double per_hash_base(Angle theta, HashModel family, int dprime) {
  if (family == HashModel::Hyperplane) {
    return hyperplane_collision(theta, 1);
  }
  if (theta.radians > kPi / 2.0) {
    throw std::domain_error(
        "tune_params: hypercube base is identically zero past pi/2");
  }
  const double base = (theta.radians == kPi / 2.0)
                          ? 1.0 / kPi
                          : hypercube_collision_base(theta).base;
  return std::pow(base, dprime);
}

}  // namespace

IndexParams tune_params(long long n, Angle theta1, Angle theta2,
                        HashModel family, int d, int dprime, double delta) {
  if (n < 2) throw std::invalid_argument("tune_params: need n >= 2");
  if (!(theta1.radians < theta2.radians)) {
    throw std::invalid_argument("tune_params: need theta1 < theta2");
  }
  if (d < 1) throw std::invalid_argument("tune_params: need d >= 1");
  if (family == HashModel::Square) {
    throw std::invalid_argument("tune_params: family must be a hash family");
  }
  if (family == HashModel::Hypercube && (dprime < 1 || dprime > d)) {
    throw std::invalid_argument("tune_params: need 1 <= dprime <= d");
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("tune_params: need 0 < delta < 1");
  }
  const int bits_per_hash = (family == HashModel::Hypercube) ? dprime : 1;
  const double p1 = per_hash_base(theta1, family, bits_per_hash);
  const double p2 = per_hash_base(theta2, family, bits_per_hash);
  if (!(p2 > 0.0) || !(p2 < 1.0)) {
    throw std::domain_error("tune_params: far collision base is degenerate");
  }
  if (!(p1 > 0.0) || p1 <= p2) {
    throw std::domain_error("tune_params: near collision base is degenerate");
  }

  long long k = std::llround(std::log(static_cast<double>(n)) / -std::log(p2));
  k = std::max<long long>(1, k);
  k = std::min<long long>(k, kMaxCodeBits / bits_per_hash);

  const double tables =
      std::ceil(std::exp(-static_cast<double>(k) * std::log(p1)) *
                std::log(1.0 / delta));
  if (!(tables < 2147483647.0)) {
    throw std::domain_error(
        "tune_params: required table count is not representable");
  }

  IndexParams params;
  params.d = d;
  params.dprime = bits_per_hash;
  params.k = static_cast<int>(k);
  params.t = std::max(1, static_cast<int>(tables));
  params.family = family;
  return params;
}

LshIndex::LshIndex(Dataset dataset, const IndexParams& params)
    : data_(std::move(dataset)), params_(params) {
  if (data_.empty()) {
    throw std::invalid_argument("LshIndex: dataset is empty");
  }
  if (params_.d < 1 || params_.dprime < 1 || params_.dprime > params_.d ||
      params_.k < 1 || params_.t < 1) {
    throw std::invalid_argument("LshIndex: parameters violate invariants");
  }
  if (params_.family == HashModel::Square) {
    throw std::invalid_argument("LshIndex: family must be a hash family");
  }
  if (params_.family == HashModel::Hyperplane && params_.dprime != 1) {
    throw std::invalid_argument("LshIndex: hyperplane hashes are single bits");
  }
  if (code_bits() > kMaxCodeBits) {
    throw std::invalid_argument("LshIndex: code length exceeds kMaxCodeBits");
  }
  if (params_.family == HashModel::Hypercube &&
      params_.rotation_kind == RotationKind::PseudoStructured &&
      !is_power_of_two(params_.d)) {
    throw std::invalid_argument(
        "LshIndex: structured rotations need a power-of-two dimension");
  }
  for (const std::vector<double>& v : data_) {
    if (static_cast<int>(v.size()) != params_.d) {
      throw std::invalid_argument("LshIndex: dataset dimension mismatch");
    }
    check_unit(v, "LshIndex");
  }

  // One seeded hash function per (table, slot): stream tau*k + j of the
  // master seed, so slots never depend on the total table count.
  const int n = size();
  if (params_.family == HashModel::Hypercube) {
    rotations_.resize(static_cast<std::size_t>(params_.t));
  } else {
    normals_.resize(static_cast<std::size_t>(params_.t));
  }
  for (int tau = 0; tau < params_.t; ++tau) {
    for (int j = 0; j < params_.k; ++j) {
      const std::uint64_t slot_seed = hash_seed(tau, j);
      if (params_.family == HashModel::Hypercube) {
        if (params_.rotation_kind == RotationKind::PseudoStructured) {
          rotations_[tau].push_back(pseudo_rotation(params_.d, 3, slot_seed));
        } else {
          rotations_[tau].push_back(
              partial_haar_rotation(params_.d, params_.dprime, slot_seed));
        }
      } else {
        RandomStream rng(slot_seed, 0);
        std::vector<double> normal(static_cast<std::size_t>(params_.d));
        for (double& x : normal) x = rng.gaussian();
        normals_[tau].push_back(std::move(normal));
      }
    }
  }

  const int words = code_words();
  tables_.resize(static_cast<std::size_t>(params_.t));
  std::vector<std::uint64_t> codes;
  std::vector<int> order(static_cast<std::size_t>(n));
  for (int tau = 0; tau < params_.t; ++tau) {
    codes.assign(static_cast<std::size_t>(n) * words, 0);
    for (int i = 0; i < n; ++i) {
      fill_code_words(data_[static_cast<std::size_t>(i)], tau,
                      codes.data() + static_cast<std::size_t>(i) * words);
    }
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      const std::uint64_t* ca = codes.data() + static_cast<std::size_t>(a) * words;
      const std::uint64_t* cb = codes.data() + static_cast<std::size_t>(b) * words;
      for (int w = 0; w < words; ++w) {
        if (ca[w] != cb[w]) return ca[w] < cb[w];
      }
      return a < b;  // group order stable in id
    });
    Table& tab = tables_[static_cast<std::size_t>(tau)];
    tab.ids.reserve(static_cast<std::size_t>(n));
    for (int pos = 0; pos < n; ++pos) {
      const int id = order[static_cast<std::size_t>(pos)];
      const std::uint64_t* code =
          codes.data() + static_cast<std::size_t>(id) * words;
      const bool new_key =
          tab.ids.empty() ||
          !std::equal(code, code + words, tab.keys.end() - words);
      if (new_key) {
        tab.offsets.push_back(static_cast<int>(tab.ids.size()));
        tab.keys.insert(tab.keys.end(), code, code + words);
      }
      tab.ids.push_back(id);
    }
    tab.offsets.push_back(static_cast<int>(tab.ids.size()));
  }
}

int LshIndex::code_bits() const {
  return params_.k *
         ((params_.family == HashModel::Hypercube) ? params_.dprime : 1);
}

int LshIndex::code_words() const { return (code_bits() + 63) / 64; }

std::uint64_t LshIndex::hash_seed(int table, int j) const {
  if (table < 0 || table >= params_.t || j < 0 || j >= params_.k) {
    throw std::out_of_range("LshIndex: hash slot out of range");
  }
  RandomStream rng(params_.seed,
                   static_cast<std::uint64_t>(table) *
                           static_cast<std::uint64_t>(params_.k) +
                       static_cast<std::uint64_t>(j));
  return rng.next_u64();
}

void LshIndex::fill_code_words(const std::vector<double>& x, int table,
                               std::uint64_t* out) const {
  const int words = code_words();
  std::fill(out, out + words, 0);
  const int bits_per_hash =
      (params_.family == HashModel::Hypercube) ? params_.dprime : 1;
  for (int j = 0; j < params_.k; ++j) {
    if (params_.family == HashModel::Hypercube) {
      const std::vector<double> rotated =
          rotations_[static_cast<std::size_t>(table)]
                    [static_cast<std::size_t>(j)]
                        .apply(x);
      for (int b = 0; b < bits_per_hash; ++b) {
        if (rotated[static_cast<std::size_t>(b)] >= 0.0) {
          const int bit = j * bits_per_hash + b;
          out[bit >> 6] |= std::uint64_t{1} << (bit & 63);
        }
      }
    } else {
      if (dot(normals_[static_cast<std::size_t>(table)]
                      [static_cast<std::size_t>(j)],
              x) >= 0.0) {
        out[j >> 6] |= std::uint64_t{1} << (j & 63);
      }
    }
  }
}

HashCode LshIndex::table_code(const std::vector<double>& x, int table) const {
  if (table < 0 || table >= params_.t) {
    throw std::out_of_range("LshIndex: table out of range");
  }
  if (static_cast<int>(x.size()) != params_.d) {
    throw std::invalid_argument("LshIndex: vector dimension mismatch");
  }
  std::vector<std::uint64_t> words(static_cast<std::size_t>(code_words()), 0);
  fill_code_words(x, table, words.data());
  HashCode code;
  code.words = std::move(words);
  code.bits = code_bits();
  return code;
}

long long LshIndex::find_key(const Table& tab, const std::uint64_t* code) const {
  const int words = code_words();
  const long long keys = static_cast<long long>(tab.keys.size()) / words;
  long long lo = 0, hi = keys;
  while (lo < hi) {
    const long long mid = lo + (hi - lo) / 2;
    const std::uint64_t* key = tab.keys.data() + mid * words;
    int cmp = 0;
    for (int w = 0; w < words; ++w) {
      if (key[w] != code[w]) {
        cmp = key[w] < code[w] ? -1 : 1;
        break;
      }
    }
    if (cmp < 0) {
      lo = mid + 1;
    } else if (cmp > 0) {
      hi = mid;
    } else {
      return mid;
    }
  }
  return -1;
}

std::vector<int> LshIndex::bucket_ids(int table, const HashCode& code) const {
  if (table < 0 || table >= params_.t) {
    throw std::out_of_range("LshIndex: table out of range");
  }
  if (code.bits != code_bits()) {
    throw std::invalid_argument("LshIndex: code length mismatch");
  }
  const Table& tab = tables_[static_cast<std::size_t>(table)];
  const long long key = find_key(tab, code.words.data());
  if (key < 0) return {};
  std::vector<int> ids(
      tab.ids.begin() + tab.offsets[static_cast<std::size_t>(key)],
      tab.ids.begin() + tab.offsets[static_cast<std::size_t>(key) + 1]);
  std::sort(ids.begin(), ids.end());
  return ids;
}

int LshIndex::bucket_count(int table) const {
  if (table < 0 || table >= params_.t) {
    throw std::out_of_range("LshIndex: table out of range");
  }
  return static_cast<int>(tables_[static_cast<std::size_t>(table)].offsets.size()) - 1;
}

long long LshIndex::table_entry_count(int table) const {
  if (table < 0 || table >= params_.t) {
    throw std::out_of_range("LshIndex: table out of range");
  }
  return static_cast<long long>(
      tables_[static_cast<std::size_t>(table)].ids.size());
}

QueryReport LshIndex::query(const std::vector<double>& q, Angle theta1) const {
  if (static_cast<int>(q.size()) != params_.d) {
    throw std::invalid_argument("LshIndex: query dimension mismatch");
  }
  check_unit(q, "LshIndex::query");

  QueryReport report;
  report.best_angle = std::numeric_limits<double>::infinity();
  const int words = code_words();
  std::vector<std::uint64_t> code(static_cast<std::size_t>(words), 0);
  std::vector<char> seen(data_.size(), 0);
  for (int tau = 0; tau < params_.t; ++tau) {
    fill_code_words(q, tau, code.data());
    const Table& tab = tables_[static_cast<std::size_t>(tau)];
    const long long key = find_key(tab, code.data());
    if (key < 0) continue;
    ++report.tables_hit;
    const int begin = tab.offsets[static_cast<std::size_t>(key)];
    const int end = tab.offsets[static_cast<std::size_t>(key) + 1];
    for (int pos = begin; pos < end; ++pos) {
      const int id = tab.ids[static_cast<std::size_t>(pos)];
      if (seen[static_cast<std::size_t>(id)]) continue;
      seen[static_cast<std::size_t>(id)] = 1;
      ++report.candidates_examined;
      const double c = std::clamp(
          dot(q, data_[static_cast<std::size_t>(id)]), -1.0, 1.0);
      const double angle = std::acos(c);
      if (angle < report.best_angle ||
          (angle == report.best_angle && report.best_id &&
           id < *report.best_id)) {
        report.best_angle = angle;
        report.best_id = id;
      }
    }
  }
  report.found =
      report.best_id.has_value() && report.best_angle <= theta1.radians + 1e-9;
  return report;
}

RecallSummary recall_experiment(long long n, int d, Angle theta1,
                                int num_queries, const IndexParams& params) {
  if (n < 1 || num_queries < 1) {
    throw std::invalid_argument(
        "recall_experiment: need n >= 1 and num_queries >= 1");
  }
  if (num_queries > n) {
    throw std::invalid_argument(
        "recall_experiment: more planted queries than points");
  }
  if (d != params.d) {
    throw std::invalid_argument("recall_experiment: dimension mismatch");
  }

  // Reserved streams of the master seed, far above any table slot index.
  RandomStream derive_data(params.seed, ~std::uint64_t{1});
  RandomStream derive_query(params.seed, ~std::uint64_t{2});
  const std::uint64_t data_master = derive_data.next_u64();
  const std::uint64_t query_master = derive_query.next_u64();

  const auto unit_vector = [d](std::uint64_t master, std::uint64_t stream) {
    std::vector<double> v(static_cast<std::size_t>(d));
    RandomStream rng(master, stream);
    double norm_sq = 0.0;
    do {
      for (double& x : v) x = rng.gaussian();
      norm_sq = dot(v, v);
    } while (norm_sq == 0.0);
    const double inv = 1.0 / std::sqrt(norm_sq);
    for (double& x : v) x *= inv;
    return v;
  };

  Dataset data(static_cast<std::size_t>(n));
  for (long long i = 0; i < n; ++i) {
    data[static_cast<std::size_t>(i)] =
        unit_vector(data_master, static_cast<std::uint64_t>(i));
  }

  std::vector<std::vector<double>> queries(
      static_cast<std::size_t>(num_queries));
  const double cos_t = std::cos(theta1.radians);
  const double sin_t = std::sin(theta1.radians);
  for (int i = 0; i < num_queries; ++i) {
    std::vector<double> q =
        unit_vector(query_master, static_cast<std::uint64_t>(i));
    // Plant point i at exact angle theta1 from query i.
    RandomStream rng(query_master,
                     (std::uint64_t{1} << 40) + static_cast<std::uint64_t>(i));
    std::vector<double> w(static_cast<std::size_t>(d));
    double norm_sq = 0.0;
    do {
      for (double& x : w) x = rng.gaussian();
      const double proj = dot(w, q);
      for (int c = 0; c < d; ++c) w[static_cast<std::size_t>(c)] -= proj * q[static_cast<std::size_t>(c)];
      norm_sq = dot(w, w);
    } while (norm_sq == 0.0);
    const double inv = 1.0 / std::sqrt(norm_sq);
    std::vector<double>& planted = data[static_cast<std::size_t>(i)];
    for (int c = 0; c < d; ++c) {
      planted[static_cast<std::size_t>(c)] =
          cos_t * q[static_cast<std::size_t>(c)] +
          sin_t * w[static_cast<std::size_t>(c)] * inv;
    }
    queries[static_cast<std::size_t>(i)] = std::move(q);
  }

  const LshIndex index(std::move(data), params);
  RecallSummary summary;
  summary.queries = num_queries;
  double candidates = 0.0;
  for (int i = 0; i < num_queries; ++i) {
    const QueryReport report =
        index.query(queries[static_cast<std::size_t>(i)], theta1);
    if (report.found) ++summary.found_count;
    candidates += static_cast<double>(report.candidates_examined);
  }
  summary.recall =
      static_cast<double>(summary.found_count) / summary.queries;
  summary.mean_candidates = candidates / summary.queries;
  return summary;
}

}  // namespace cubelsh
