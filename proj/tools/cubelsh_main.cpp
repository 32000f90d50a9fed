#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "cubelsh/asymptotics.hpp"
#include "cubelsh/index.hpp"
#include "cubelsh/io.hpp"
#include "cubelsh/largedev.hpp"
#include "cubelsh/montecarlo.hpp"
#include "cubelsh/rng.hpp"
#include "cubelsh/sieve.hpp"

using json = nlohmann::ordered_json;
using namespace cubelsh;

namespace {

constexpr std::uint64_t kDefaultSeed = 0x5EEDCAFEULL;

/// Salts that keep CLI-level randomness on streams disjoint from the
/// per-seed streams the library reserves internally.
constexpr std::uint64_t kBenchDataSalt = 0xA0761D6478BD642FULL;
constexpr std::uint64_t kBenchQuerySalt = 0xE7037ED1A0B428DBULL;
constexpr std::uint64_t kSieveRunSalt = 0x8EBC6AF09C88C6E3ULL;

/// Bad command-line input detected after CLI11 parsing; exits with 1.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GlobalOpts {
  std::uint64_t seed = kDefaultSeed;
  std::string out_path;
  std::string format = "csv";
  int threads = 1;
  CLI::Option* format_opt = nullptr;
};

/// One table cell in both presentations: CSV text and JSON value.
struct Cell {
  std::string text;
  json value;
};

Cell real_cell(double x) { return {format_real(x), x}; }
Cell int_cell(long long v) { return {std::to_string(v), v}; }
Cell text_cell(const std::string& s) { return {s, s}; }
Cell empty_cell() { return {"", nullptr}; }

Cell ints_cell(const std::vector<long long>& v) {
  std::string text;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) text += ' ';
    text += std::to_string(v[i]);
  }
  return {text, json(v)};
}

struct Table {
  std::vector<std::string> columns;
  std::vector<std::string> notes;
  std::vector<std::vector<Cell>> rows;
};

std::string render_csv(const Table& t,
                       const std::vector<Cell>& extra_row) {
  std::string out;
  for (const auto& note : t.notes) out += "# " + note + "\n";
  out += csv_row(t.columns);
  auto append = [&out](const std::vector<Cell>& row) {
    std::vector<std::string> fields;
    fields.reserve(row.size());
    for (const auto& cell : row) fields.push_back(cell.text);
    out += csv_row(fields);
  };
  for (const auto& row : t.rows) append(row);
  if (!extra_row.empty()) append(extra_row);
  return out;
}

std::string render_json(const Table& t,
                        const std::vector<std::pair<std::string, json>>& extras) {
  json doc;
  if (!t.notes.empty()) doc["notes"] = t.notes;
  json rows = json::array();
  for (const auto& row : t.rows) {
    json obj;
    for (std::size_t i = 0; i < row.size(); ++i) {
      obj[t.columns[i]] = row[i].value;
    }
    rows.push_back(std::move(obj));
  }
  doc["rows"] = std::move(rows);
  for (const auto& [key, value] : extras) doc[key] = value;
  return doc.dump(2) + "\n";
}

/// Writes the fully rendered output in one stream operation.
void write_output(const std::string& text, const GlobalOpts& g) {
  if (g.out_path.empty()) {
    std::cout << text << std::flush;
    return;
  }
  std::ofstream out(g.out_path);
  if (!out) throw std::runtime_error(g.out_path + ": cannot open for writing");
  out << text;
  out.flush();
  if (!out) throw std::runtime_error(g.out_path + ": write failed");
}

void emit_table(const Table& t, const GlobalOpts& g,
                const std::vector<std::pair<std::string, json>>& json_extras = {},
                const std::vector<Cell>& csv_extra_row = {}) {
  if (g.format == "json") {
    write_output(render_json(t, json_extras), g);
  } else {
    write_output(render_csv(t, csv_extra_row), g);
  }
}

double parse_real(const std::string& s, const char* what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (s.empty() || used != s.size()) {
    throw UsageError(std::string(what) + ": bad number '" + s + "'");
  }
  return v;
}

/// Expands "MIN:MAX:COUNT" into COUNT evenly spaced points, inclusive of
/// both ends; COUNT = 1 yields just MIN.
std::vector<double> expand_grid(const std::string& spec) {
  std::vector<std::string> parts;
  std::stringstream stream(spec);
  std::string part;
  while (std::getline(stream, part, ':')) parts.push_back(part);
  if (parts.size() != 3) {
    throw UsageError("--grid expects MIN:MAX:COUNT, got '" + spec + "'");
  }
  const double lo = parse_real(parts[0], "--grid MIN");
  const double hi = parse_real(parts[1], "--grid MAX");
  const double count_raw = parse_real(parts[2], "--grid COUNT");
  const long long count = static_cast<long long>(count_raw);
  if (!(count >= 1 && static_cast<double>(count) == count_raw)) {
    throw UsageError("--grid COUNT must be a positive integer");
  }
  if (!(hi >= lo)) throw UsageError("--grid needs MAX >= MIN");
  if (count > 2000000) throw UsageError("--grid COUNT is implausibly large");
  if (count == 1) return {lo};
  std::vector<double> points(static_cast<std::size_t>(count));
  for (long long i = 0; i < count; ++i) {
    points[static_cast<std::size_t>(i)] =
        lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
  }
  return points;
}

std::vector<double> collect_points(const std::string& grid_spec,
                                   const std::vector<double>& singles,
                                   const char* flag_name) {
  std::vector<double> points;
  if (!grid_spec.empty()) points = expand_grid(grid_spec);
  points.insert(points.end(), singles.begin(), singles.end());
  if (points.empty()) {
    throw UsageError(std::string("no evaluation points: pass --grid and/or ") +
                     flag_name);
  }
  return points;
}

const char* branch_name(BaseBranch b) {
  switch (b) {
    case BaseBranch::Beta0: return "Beta0";
    case BaseBranch::Beta1: return "Beta1";
    case BaseBranch::ClosedForm: return "ClosedForm";
    case BaseBranch::Zero: return "Zero";
  }
  return "?";
}

const char* model_name(HashModel m) {
  switch (m) {
    case HashModel::Hyperplane: return "hyperplane";
    case HashModel::Hypercube: return "hypercube";
    case HashModel::Square: return "square";
  }
  return "?";
}

HashModel parse_family(const std::string& s) {
  return s == "plane" ? HashModel::Hyperplane : HashModel::Hypercube;
}

// ---------------------------------------------------------------- curves

struct CurvesOpts {
  std::string grid;
  std::vector<double> thetas;
};

int cmd_curves(const CurvesOpts& opts, const GlobalOpts& g) {
  const auto points = collect_points(opts.grid, opts.thetas, "--theta");
  for (double t : points) {
    if (!(t >= 0.0 && t <= kPi)) {
      throw UsageError("theta " + format_real(t) + " must lie in [0, pi]");
    }
  }
  Table table;
  table.columns = {"theta", "hyperplane_base", "hypercube_base", "branch",
                   "beta"};
  for (double t : points) {
    const Angle a(t);
    const CollisionAsymptote cube = hypercube_collision_base(a);
    table.rows.push_back({real_cell(t), real_cell(hyperplane_collision(a, 1)),
                          real_cell(cube.base), text_cell(branch_name(cube.branch)),
                          cube.beta ? real_cell(cube.beta->beta) : empty_cell()});
  }
  emit_table(table, g);
  return 0;
}

// ------------------------------------------------------------------- rho

struct RhoOpts {
  std::string grid;
  std::vector<double> cs;
};

int cmd_rho(const RhoOpts& opts, const GlobalOpts& g) {
  const auto points = collect_points(opts.grid, opts.cs, "--c");
  for (double c : points) {
    if (!(c > 1.0)) {
      throw UsageError("approximation factor c = " + format_real(c) +
                       " must exceed 1");
    }
  }
  Table table;
  table.columns = {"c", "rho_hyperplane", "rho_hypercube", "ratio"};
  table.notes = {"cross-polytope reference: rho decays as O(1/c^2) for large c; "
                 "cited for comparison, not computed here"};
  for (double c : points) {
    const double plane = rho_random(c, HashModel::Hyperplane).rho;
    const double cube = rho_random(c, HashModel::Hypercube).rho;
    table.rows.push_back({real_cell(c), real_cell(plane), real_cell(cube),
                          real_cell(plane / cube)});
  }
  emit_table(table, g);
  return 0;
}

// -------------------------------------------------------------- estimate

struct EstimateOpts {
  std::vector<int> ds;
  int dprime = 0;  ///< 0 means "match d" (full hashing)
  std::vector<double> thetas;
  long long trials = 100000;
  bool fit = false;
  std::string sampler = "plane-marginal";
};

SamplerKind parse_sampler(const std::string& s) {
  if (s == "plane-marginal") return SamplerKind::PlaneMarginal;
  if (s == "haar-dense") return SamplerKind::HaarDense;
  return SamplerKind::PseudoStructured;
}

int cmd_estimate(const EstimateOpts& opts, const GlobalOpts& g) {
  if (opts.ds.empty()) throw UsageError("pass at least one --d");
  if (opts.thetas.empty()) throw UsageError("pass at least one --theta");
  if (opts.fit) {
    const std::set<int> distinct(opts.ds.begin(), opts.ds.end());
    if (distinct.size() < 2 || opts.thetas.size() != 1) {
      throw UsageError("--fit needs at least two distinct --d values and "
                       "exactly one --theta");
    }
  }
  const SamplerKind sampler = parse_sampler(opts.sampler);
  Table table;
  table.columns = {"theta", "d", "dprime", "trials", "successes", "p_hat",
                   "stderr"};
  std::vector<std::pair<int, CollisionEstimate>> fit_points;
  for (int d : opts.ds) {
    const int dprime = opts.dprime > 0 ? opts.dprime : d;
    for (double t : opts.thetas) {
      const CollisionEstimate est = estimate_collision(
          d, dprime, Angle(t), opts.trials, g.seed, sampler, g.threads);
      table.rows.push_back({real_cell(t), int_cell(d), int_cell(dprime),
                            int_cell(est.trials), int_cell(est.successes),
                            real_cell(est.p_hat), real_cell(est.std_error)});
      fit_points.emplace_back(d, est);
    }
  }
  std::vector<std::pair<std::string, json>> json_extras;
  std::vector<Cell> fit_row;
  if (opts.fit) {
    const CurveFit fit = fit_exponential(fit_points);
    const double base = std::exp(fit.c1);
    fit_row = {text_cell("fit"), real_cell(fit.c1), real_cell(fit.c2),
               real_cell(base), empty_cell(), empty_cell(), empty_cell()};
    json_extras.emplace_back(
        "fit", json{{"c1", fit.c1},
                    {"c2", fit.c2},
                    {"base", base},
                    {"rms_residual", fit.rms_residual},
                    {"points_used", fit.points_used}});
  }
  emit_table(table, g, json_extras, fit_row);
  return 0;
}

// ------------------------------------------------------------------ tune

struct TuneOpts {
  long long n = 0;
  int d = 0;
  int dprime = 1;
  std::string family = "cube";
  double theta1 = kPi / 3.0;
  double theta2 = kPi / 2.0;
  double delta = 0.1;
};

int cmd_tune(const TuneOpts& opts, const GlobalOpts& g) {
  const HashModel family = parse_family(opts.family);
  const IndexParams params =
      tune_params(opts.n, Angle(opts.theta1), Angle(opts.theta2), family,
                  opts.d, opts.dprime, opts.delta);
  Table table;
  table.columns = {"family", "d", "dprime", "k", "t", "code_bits"};
  table.rows.push_back(
      {text_cell(model_name(family)), int_cell(params.d),
       int_cell(params.dprime), int_cell(params.k), int_cell(params.t),
       int_cell(static_cast<long long>(params.k) * params.dprime)});
  emit_table(table, g);
  return 0;
}

// ----------------------------------------------------------------- bench

struct BenchOpts {
  std::string data_path;
  long long synthetic_n = 0;
  int synthetic_d = 0;
  int queries = 100;
  double theta1 = kPi / 3.0;
  double theta2 = kPi / 2.0;
  double delta = 0.1;
  std::string family = "cube";
  int dprime = 0;  ///< 0 picks the benchmark default (8 for cube, 1 for plane)
  int k = 0;
  int t = 0;
  bool auto_tune = false;
};

std::vector<double> unit_from(RandomStream& rng, int d) {
  std::vector<double> v(static_cast<std::size_t>(d));
  while (true) {
    double norm2 = 0.0;
    for (double& x : v) {
      x = rng.gaussian();
      norm2 += x * x;
    }
    if (norm2 > 1e-24) {
      const double inv = 1.0 / std::sqrt(norm2);
      for (double& x : v) x *= inv;
      return v;
    }
  }
}

int cmd_bench(const BenchOpts& opts, const GlobalOpts& g) {
  if (g.format_opt->count() > 0 && g.format == "csv") {
    throw UsageError("bench emits a JSON report; --format csv is unavailable");
  }
  const bool synthetic = opts.synthetic_n > 0 || opts.synthetic_d > 0;
  if (synthetic && !opts.data_path.empty()) {
    throw UsageError("pass either --data or --synthetic-n/--synthetic-d, not both");
  }
  if (!synthetic && opts.data_path.empty()) {
    throw UsageError("pass --data FILE or --synthetic-n N --synthetic-d D");
  }
  const bool explicit_kt = opts.k > 0 || opts.t > 0;
  if (explicit_kt && (opts.k <= 0 || opts.t <= 0)) {
    throw UsageError("--k and --t must be given together");
  }
  if (explicit_kt && opts.auto_tune) {
    throw UsageError("--auto-tune conflicts with explicit --k/--t");
  }
  if (!(opts.theta1 >= 0.0 && opts.theta1 <= kPi)) {
    throw UsageError("--theta1 must lie in [0, pi]");
  }

  Dataset data;
  std::vector<std::vector<double>> queries;
  int d = 0;
  int skipped_zero = 0;
  if (synthetic) {
    if (opts.synthetic_n < 1 || opts.synthetic_d < 2) {
      throw UsageError("synthetic datasets need --synthetic-n >= 1 and "
                       "--synthetic-d >= 2");
    }
    const long long n = opts.synthetic_n;
    d = opts.synthetic_d;
    if (opts.queries > n) {
      throw UsageError("--queries cannot exceed the synthetic dataset size");
    }
    data.resize(static_cast<std::size_t>(n));
    const std::uint64_t data_seed = mix64(g.seed ^ kBenchDataSalt);
    for (long long i = 0; i < n; ++i) {
      RandomStream rng(data_seed, static_cast<std::uint64_t>(i));
      data[static_cast<std::size_t>(i)] = unit_from(rng, d);
    }
    // Plant: query i sits outside the dataset; point i is rewritten to lie
    // at exactly theta1 from it.
    const std::uint64_t query_seed = mix64(g.seed ^ kBenchQuerySalt);
    queries.resize(static_cast<std::size_t>(opts.queries));
    for (int i = 0; i < opts.queries; ++i) {
      RandomStream rng(query_seed, static_cast<std::uint64_t>(i));
      const std::vector<double> q = unit_from(rng, d);
      std::vector<double> w;
      while (true) {
        w = unit_from(rng, d);
        double dot = 0.0;
        for (int j = 0; j < d; ++j) dot += w[static_cast<std::size_t>(j)] * q[static_cast<std::size_t>(j)];
        double norm2 = 0.0;
        for (int j = 0; j < d; ++j) {
          w[static_cast<std::size_t>(j)] -= dot * q[static_cast<std::size_t>(j)];
          norm2 += w[static_cast<std::size_t>(j)] * w[static_cast<std::size_t>(j)];
        }
        if (norm2 > 1e-12) {
          const double inv = 1.0 / std::sqrt(norm2);
          for (double& x : w) x *= inv;
          break;
        }
      }
      std::vector<double>& planted = data[static_cast<std::size_t>(i)];
      for (int j = 0; j < d; ++j) {
        planted[static_cast<std::size_t>(j)] =
            std::cos(opts.theta1) * q[static_cast<std::size_t>(j)] +
            std::sin(opts.theta1) * w[static_cast<std::size_t>(j)];
      }
      queries[static_cast<std::size_t>(i)] = q;
    }
  } else {
    LoadedDataset loaded = load_dataset(opts.data_path);
    if (loaded.skipped_zero > 0) {
      std::cerr << "warning: skipped " << loaded.skipped_zero
                << " zero vector(s) in " << opts.data_path << "\n";
    }
    data = std::move(loaded.vectors);
    d = loaded.dimension;
    skipped_zero = loaded.skipped_zero;
    if (data.empty()) throw std::runtime_error(opts.data_path + ": no usable vectors");
    const std::size_t q_count =
        std::min<std::size_t>(static_cast<std::size_t>(opts.queries), data.size());
    queries.assign(data.begin(), data.begin() + static_cast<std::ptrdiff_t>(q_count));
  }

  const HashModel family = parse_family(opts.family);
  const int dprime = family == HashModel::Hyperplane
                         ? 1
                         : (opts.dprime > 0 ? opts.dprime : std::min(8, d));
  IndexParams params;
  const bool used_auto = !explicit_kt;
  if (used_auto) {
    params = tune_params(std::max<long long>(static_cast<long long>(data.size()), 2),
                         Angle(opts.theta1), Angle(opts.theta2), family, d,
                         dprime, opts.delta);
  } else {
    params.d = d;
    params.dprime = dprime;
    params.k = opts.k;
    params.t = opts.t;
    params.family = family;
  }
  params.seed = g.seed;

  const auto t0 = std::chrono::steady_clock::now();
  const LshIndex index(data, params);
  const auto t1 = std::chrono::steady_clock::now();
  long long candidates = 0;
  int found = 0;
  for (const auto& q : queries) {
    const QueryReport report = index.query(q, Angle(opts.theta1));
    candidates += report.candidates_examined;
    found += report.found ? 1 : 0;
  }
  const auto t2 = std::chrono::steady_clock::now();
  const double n_queries = static_cast<double>(queries.size());
  const auto seconds = [](auto from, auto to) {
    return std::chrono::duration<double>(to - from).count();
  };

  json doc;
  doc["source"] = synthetic ? std::string("synthetic") : opts.data_path;
  doc["n"] = data.size();
  doc["d"] = d;
  doc["family"] = model_name(family);
  doc["dprime"] = params.dprime;
  doc["k"] = params.k;
  doc["t"] = params.t;
  doc["auto_tuned"] = used_auto;
  doc["theta1"] = opts.theta1;
  doc["queries"] = queries.size();
  doc["recall"] = queries.empty() ? 1.0 : static_cast<double>(found) / n_queries;
  doc["mean_candidates"] =
      queries.empty() ? 0.0 : static_cast<double>(candidates) / n_queries;
  doc["build_seconds"] = seconds(t0, t1);
  doc["query_seconds"] = seconds(t1, t2);
  doc["seed"] = g.seed;
  if (!synthetic) doc["skipped_zero"] = skipped_zero;
  write_output(doc.dump(2) + "\n", g);
  return 0;
}

// ------------------------------------------------------------- ld-verify

struct LdVerifyOpts {
  std::string grid;
  std::vector<double> thetas;
};

int cmd_ld_verify(const LdVerifyOpts& opts, const GlobalOpts& g) {
  const auto points = collect_points(opts.grid, opts.thetas, "--theta");
  for (double t : points) {
    if (!(t > 0.0 && t < kPi / 2.0)) {
      throw UsageError("theta " + format_real(t) +
                       " must lie strictly inside (0, pi/2)");
    }
  }
  constexpr double kGapTolerance = 1e-5;
  Table table;
  table.columns = {"theta", "base_closed", "base_via_ld", "rate_plus",
                   "rate_minus", "rate_numeric", "max_abs_gap"};
  double worst = 0.0;
  for (double t : points) {
    const Angle a(t);
    const double closed = hypercube_collision_base(a).base;
    const double via_ld = collision_base_via_ld(a);
    const double plus = rate_plus_closed(a).value;
    const double minus = rate_minus_closed(a).value;
    const double numeric = rate_numeric({std::cos(t), 1.0, 1.0}).value;
    const double gap = std::max(std::abs(closed - via_ld),
                                std::abs(numeric - std::max(plus, minus)));
    worst = std::max(worst, gap);
    table.rows.push_back({real_cell(t), real_cell(closed), real_cell(via_ld),
                          real_cell(plus), real_cell(minus), real_cell(numeric),
                          real_cell(gap)});
  }
  emit_table(table, g);
  if (worst > kGapTolerance) {
    std::cerr << "verification failed: largest closed-form/numeric gap "
              << format_real(worst) << " exceeds " << format_real(kGapTolerance)
              << "\n";
    return 2;
  }
  return 0;
}

// ------------------------------------------------------------- exponents

struct ExponentsOpts {
  std::string model = "both";
};

int cmd_exponents(const ExponentsOpts& opts, const GlobalOpts& g) {
  std::vector<HashModel> models;
  if (opts.model == "cube" || opts.model == "both") {
    models.push_back(HashModel::Hypercube);
  }
  if (opts.model == "plane" || opts.model == "both") {
    models.push_back(HashModel::Hyperplane);
  }
  Table table;
  table.columns = {"model", "c_n", "c_t", "theta2_opt", "theta2_over_pi",
                   "time_exponent", "dprime_ratio"};
  for (HashModel m : models) {
    const SieveExponents e = sieve_exponents(m);
    table.rows.push_back(
        {text_cell(model_name(m)), real_cell(e.c_n), real_cell(e.c_t),
         real_cell(e.theta2_opt.radians),
         real_cell(e.theta2_opt.radians / kPi), real_cell(e.time_exponent),
         real_cell(e.dprime_ratio)});
  }
  emit_table(table, g);
  return 0;
}

// ----------------------------------------------------------------- sieve

struct SieveOpts {
  std::string basis_path;
  int identity_d = 0;
  int random_d = 0;
  int bits = 5;
  std::string backend = "linear";
  long long max_samples = 20000;
  int stall = 400;
  double sigma = 1.5;
  bool check_oracle = false;
};

SieveBackend parse_backend(const std::string& s) {
  if (s == "plane") return SieveBackend::HyperplaneLSH;
  if (s == "cube") return SieveBackend::HypercubeLSH;
  return SieveBackend::Linear;
}

const char* backend_name(SieveBackend b) {
  switch (b) {
    case SieveBackend::Linear: return "linear";
    case SieveBackend::HyperplaneLSH: return "hyperplane";
    case SieveBackend::HypercubeLSH: return "hypercube";
  }
  return "?";
}

int cmd_sieve(const SieveOpts& opts, const GlobalOpts& g) {
  const int sources = (!opts.basis_path.empty() ? 1 : 0) +
                      (opts.identity_d > 0 ? 1 : 0) + (opts.random_d > 0 ? 1 : 0);
  if (sources != 1) {
    throw UsageError("pass exactly one of --basis FILE, --identity D, "
                     "--random D");
  }
  LatticeBasis basis = [&] {
    if (!opts.basis_path.empty()) {
      std::ifstream in(opts.basis_path);
      if (!in) throw std::runtime_error(opts.basis_path + ": cannot open");
      std::stringstream text;
      text << in.rdbuf();
      return LatticeBasis::from_text(text.str());
    }
    if (opts.identity_d > 0) return LatticeBasis::identity(opts.identity_d);
    return LatticeBasis::random_basis(opts.random_d, g.seed, opts.bits);
  }();

  SieveConfig config;
  config.backend = parse_backend(opts.backend);
  config.max_samples = opts.max_samples;
  config.stall_window = opts.stall;
  config.sigma = opts.sigma;
  config.seed = mix64(g.seed ^ kSieveRunSalt);
  const SieveResult result = nv_sieve(basis, config);

  bool oracle_checked = false;
  double oracle_norm = 0.0;
  if (opts.check_oracle) {
    const ShortestVector exact = enumeration_oracle(basis);
    oracle_checked = true;
    oracle_norm = exact.norm;
  }

  Table table;
  table.columns = {"d", "backend", "norm", "oracle_norm", "samples",
                   "reductions", "collisions", "comparisons",
                   "list_size_peak", "shortest", "coefficients"};
  table.rows.push_back(
      {int_cell(basis.dim()), text_cell(backend_name(config.backend)),
       real_cell(result.norm),
       oracle_checked ? real_cell(oracle_norm) : empty_cell(),
       int_cell(result.samples), int_cell(result.reductions),
       int_cell(result.collisions), int_cell(result.comparisons),
       int_cell(result.list_size_peak), ints_cell(result.shortest),
       ints_cell(result.coefficients)});
  emit_table(table, g);

  if (oracle_checked && result.norm > oracle_norm + 1e-9) {
    std::cerr << "verification failed: sieve norm " << format_real(result.norm)
              << " exceeds the exhaustive optimum " << format_real(oracle_norm)
              << "\n";
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Angular locality-sensitive hashing toolkit: collision curves and "
      "query exponents,\nMonte Carlo collision estimates, index tuning and "
      "benchmarks, rate-function\ncross-checks, and lattice sieving.\n\n"
      "The master seed defaults to 0x5EEDCAFE; every run is deterministic "
      "in its full\ncommand line (bench timing fields excepted). Exit codes: "
      "0 success, 1 usage or\nI/O error, 2 verification failure.",
      "cubelsh"};
  app.require_subcommand(1);

  GlobalOpts g;
  app.add_option("--seed", g.seed,
                 "master RNG seed (default 0x5EEDCAFE); accepts 0x-prefixed hex");
  app.add_option("--out", g.out_path, "write output to this file instead of stdout");
  g.format_opt =
      app.add_option("--format", g.format,
                     "table output format: csv or json (default csv); bench "
                     "always emits json")
          ->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--threads", g.threads,
                 "worker threads for Monte Carlo estimates (default 1)")
      ->check(CLI::Range(1, 64));

  CurvesOpts curves_opts;
  CLI::App* curves = app.add_subcommand(
      "curves", "emit per-dimension collision bases over a theta grid");
  curves->add_option("--grid", curves_opts.grid,
                     "theta grid MIN:MAX:COUNT, radians within [0, pi]");
  curves->add_option("--theta", curves_opts.thetas,
                     "extra theta values (repeatable, comma-splittable)")
      ->delimiter(',');

  RhoOpts rho_opts;
  CLI::App* rho_cmd = app.add_subcommand(
      "rho", "emit random-setting query exponents over a grid of "
             "approximation factors c > 1");
  rho_cmd->add_option("--grid", rho_opts.grid, "c grid MIN:MAX:COUNT, each > 1");
  rho_cmd->add_option("--c", rho_opts.cs,
                      "extra c values (repeatable, comma-splittable)")
      ->delimiter(',');

  EstimateOpts est_opts;
  CLI::App* estimate = app.add_subcommand(
      "estimate", "Monte Carlo collision probabilities for rotated-orthant "
                  "hashes");
  estimate->add_option("--d", est_opts.ds, "ambient dimension(s), repeatable")
      ->delimiter(',')
      ->check(CLI::Range(2, 4096));
  estimate->add_option("--dprime", est_opts.dprime,
                       "hashed coordinates; 0 (default) matches d")
      ->check(CLI::Range(0, 4096));
  estimate->add_option("--theta", est_opts.thetas,
                       "pair angle(s) in radians, repeatable")
      ->delimiter(',');
  estimate->add_option("--trials", est_opts.trials, "trials per estimate")
      ->check(CLI::Range(1LL, 2000000000LL));
  estimate->add_flag("--fit", est_opts.fit,
                     "append an exponential fit ln p = c2 + c1 d (needs >= 2 "
                     "distinct d, exactly one theta)");
  estimate->add_option("--sampler", est_opts.sampler,
                       "rotation sampler (default plane-marginal)")
      ->check(CLI::IsMember({"plane-marginal", "haar-dense",
                             "pseudo-structured"}));

  TuneOpts tune_opts;
  CLI::App* tune = app.add_subcommand(
      "tune", "pick (k, t) for a target dataset size and angle pair");
  tune->add_option("--n", tune_opts.n, "dataset size")->required()
      ->check(CLI::Range(2LL, 1000000000000LL));
  tune->add_option("--d", tune_opts.d, "ambient dimension")->required()
      ->check(CLI::Range(1, 4096));
  tune->add_option("--dprime", tune_opts.dprime,
                   "hashed coordinates per hypercube hash (default 1)")
      ->check(CLI::Range(1, 4096));
  tune->add_option("--family", tune_opts.family, "hash family (default cube)")
      ->check(CLI::IsMember({"plane", "cube"}));
  tune->add_option("--theta1", tune_opts.theta1,
                   "near angle in radians (default pi/3)");
  tune->add_option("--theta2", tune_opts.theta2,
                   "far angle in radians (default pi/2)");
  tune->add_option("--delta", tune_opts.delta,
                   "acceptable miss probability (default 0.1)")
      ->check(CLI::Range(1e-9, 0.999999));

  BenchOpts bench_opts;
  CLI::App* bench = app.add_subcommand(
      "bench", "build an index and measure recall, candidates, and wall time "
               "(JSON report)");
  bench->add_option("--data", bench_opts.data_path,
                    "dataset file (.fvecs binary or .csv rows); the first "
                    "--queries vectors are queried against the full index");
  bench->add_option("--synthetic-n", bench_opts.synthetic_n,
                    "synthetic dataset size (with --synthetic-d)")
      ->check(CLI::Range(1LL, 100000000LL));
  bench->add_option("--synthetic-d", bench_opts.synthetic_d,
                    "synthetic dimension; queries get a partner planted at "
                    "exactly theta1")
      ->check(CLI::Range(2, 4096));
  bench->add_option("--queries", bench_opts.queries, "query count (default 100)")
      ->check(CLI::Range(1, 1000000));
  bench->add_option("--theta1", bench_opts.theta1,
                    "near-neighbor angle in radians (default pi/3)");
  bench->add_option("--theta2", bench_opts.theta2,
                    "far angle for auto-tuning (default pi/2)");
  bench->add_option("--delta", bench_opts.delta,
                    "auto-tune miss probability (default 0.1)")
      ->check(CLI::Range(1e-9, 0.999999));
  bench->add_option("--family", bench_opts.family, "hash family (default cube)")
      ->check(CLI::IsMember({"plane", "cube"}));
  bench->add_option("--dprime", bench_opts.dprime,
                    "hashed coordinates per hypercube hash; 0 (default) "
                    "picks min(8, d)")
      ->check(CLI::Range(0, 4096));
  bench->add_option("--k", bench_opts.k, "hashes per table (with --t)")
      ->check(CLI::Range(1, 4096));
  bench->add_option("--t", bench_opts.t, "table count (with --k)")
      ->check(CLI::Range(1, 1000000));
  bench->add_flag("--auto-tune", bench_opts.auto_tune,
                  "derive (k, t) from the dataset size and angles (default "
                  "when --k/--t are absent)");

  LdVerifyOpts ld_opts;
  CLI::App* ld_verify = app.add_subcommand(
      "ld-verify", "cross-check the collision base against the "
                   "large-deviations rate pipeline; exits 2 when any gap "
                   "exceeds 1e-5");
  ld_verify->add_option("--grid", ld_opts.grid,
                        "theta grid MIN:MAX:COUNT, radians strictly inside "
                        "(0, pi/2)");
  ld_verify->add_option("--theta", ld_opts.thetas,
                        "extra theta values (repeatable)")
      ->delimiter(',');

  ExponentsOpts exp_opts;
  CLI::App* exponents = app.add_subcommand(
      "exponents", "emit sieve cost exponents from the cost-balance "
                   "optimization");
  exponents->add_option("--model", exp_opts.model,
                        "plane, cube, or both (default both)")
      ->check(CLI::IsMember({"plane", "cube", "both"}));

  SieveOpts sieve_opts;
  CLI::App* sieve = app.add_subcommand(
      "sieve", "run the list sieve on a lattice basis and report the "
               "shortest vector found");
  sieve->add_option("--basis", sieve_opts.basis_path,
                    "basis file: one row per line, whitespace-separated "
                    "integers");
  sieve->add_option("--identity", sieve_opts.identity_d,
                    "use the d-dimensional integer lattice")
      ->check(CLI::Range(1, 48));
  sieve->add_option("--random", sieve_opts.random_d,
                    "use a seeded random basis of this dimension")
      ->check(CLI::Range(1, 48));
  sieve->add_option("--bits", sieve_opts.bits,
                    "entry width for --random (default 5)")
      ->check(CLI::Range(1, 30));
  sieve->add_option("--backend", sieve_opts.backend,
                    "candidate filter: linear, plane, or cube (default linear)")
      ->check(CLI::IsMember({"linear", "plane", "cube"}));
  sieve->add_option("--max-samples", sieve_opts.max_samples,
                    "sample budget (default 20000)")
      ->check(CLI::Range(1LL, 100000000LL));
  sieve->add_option("--stall", sieve_opts.stall,
                    "stop after this many samples without improvement "
                    "(default 400)")
      ->check(CLI::Range(1, 10000000));
  sieve->add_option("--sigma", sieve_opts.sigma,
                    "coefficient spread of the sampler (default 1.5)");
  sieve->add_flag("--check-oracle", sieve_opts.check_oracle,
                  "verify against exhaustive enumeration (dim <= 12); exits 2 "
                  "on mismatch");

  for (CLI::App* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (app.got_subcommand(curves)) return cmd_curves(curves_opts, g);
    if (app.got_subcommand(rho_cmd)) return cmd_rho(rho_opts, g);
    if (app.got_subcommand(estimate)) return cmd_estimate(est_opts, g);
    if (app.got_subcommand(tune)) return cmd_tune(tune_opts, g);
    if (app.got_subcommand(bench)) return cmd_bench(bench_opts, g);
    if (app.got_subcommand(ld_verify)) return cmd_ld_verify(ld_opts, g);
    if (app.got_subcommand(exponents)) return cmd_exponents(exp_opts, g);
    if (app.got_subcommand(sieve)) return cmd_sieve(sieve_opts, g);
    std::cerr << "error: no subcommand\n";
    return 1;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
