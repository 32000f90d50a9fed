#include "doctest.h"

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

// End-to-end tests of the cubelsh binary: every invocation goes through
// std::system on the real executable (path injected by the build), so
// argument parsing, exit codes, and the emitted bytes are all exercised.

namespace {

constexpr double kPi = std::numbers::pi;

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::filesystem::path temp_path(const std::string& tag) {
  static int counter = 0;
  return std::filesystem::temp_directory_path() /
         ("cubelsh_cli_" + std::to_string(::getpid()) + "_" +
          std::to_string(counter++) + "_" + tag);
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

RunResult run_cli(const std::string& args) {
  const auto out_file = temp_path("out");
  const auto err_file = temp_path("err");
  const std::string command = std::string(CUBELSH_CLI_PATH) + " " + args +
                              " > " + out_file.string() + " 2> " +
                              err_file.string();
  const int status = std::system(command.c_str());
  RunResult result;
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  result.out = slurp(out_file);
  result.err = slurp(err_file);
  std::filesystem::remove(out_file);
  std::filesystem::remove(err_file);
  return result;
}

struct Csv {
  std::vector<std::string> notes;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream stream(line);
  while (std::getline(stream, field, sep)) fields.push_back(field);
  if (!line.empty() && line.back() == sep) fields.emplace_back();
  return fields;
}

Csv parse_csv(const std::string& text) {
  Csv csv;
  for (const std::string& line : split(text, '\n')) {
    if (line.empty()) continue;
    if (line.rfind("# ", 0) == 0) {
      csv.notes.push_back(line.substr(2));
      continue;
    }
    if (csv.columns.empty()) {
      csv.columns = split(line, ',');
    } else {
      csv.rows.push_back(split(line, ','));
    }
  }
  return csv;
}

int column_of(const Csv& csv, const std::string& name) {
  for (std::size_t i = 0; i < csv.columns.size(); ++i) {
    if (csv.columns[i] == name) return static_cast<int>(i);
  }
  return -1;
}

double cell(const Csv& csv, std::size_t row, const std::string& name) {
  const int col = column_of(csv, name);
  REQUIRE(col >= 0);
  REQUIRE(row < csv.rows.size());
  return std::stod(csv.rows[row][static_cast<std::size_t>(col)]);
}

std::string cell_text(const Csv& csv, std::size_t row, const std::string& name) {
  const int col = column_of(csv, name);
  REQUIRE(col >= 0);
  REQUIRE(row < csv.rows.size());
  return csv.rows[row][static_cast<std::size_t>(col)];
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

void write_fvecs(const std::filesystem::path& path,
                 const std::vector<std::vector<float>>& vectors) {
  std::ofstream out(path, std::ios::binary);
  for (const auto& v : vectors) {
    const std::int32_t dim = static_cast<std::int32_t>(v.size());
    out.write(reinterpret_cast<const char*>(&dim), 4);
    out.write(reinterpret_cast<const char*>(v.data()),
              static_cast<std::streamsize>(4 * v.size()));
  }
}

}  // namespace

TEST_CASE("curves pins the anchor angles and branch labels") {
  std::ostringstream args;
  args << std::setprecision(17) << "curves --theta 0 --theta 0.5 --theta " << kPi / 3 << " --theta "
       << kPi / 2 << " --theta " << kPi;
  const RunResult r = run_cli(args.str());
  REQUIRE(r.exit_code == 0);
  const Csv csv = parse_csv(r.out);
  REQUIRE(csv.columns == std::vector<std::string>{
                             "theta", "hyperplane_base", "hypercube_base",
                             "branch", "beta"});
  REQUIRE(csv.rows.size() == 5);

  CHECK(cell(csv, 0, "hyperplane_base") == doctest::Approx(1.0));
  CHECK(cell(csv, 0, "hypercube_base") == doctest::Approx(1.0));
  CHECK(cell_text(csv, 0, "branch") == "ClosedForm");
  CHECK(cell_text(csv, 0, "beta").empty());

  CHECK(cell_text(csv, 1, "branch") == "Beta0");
  CHECK(cell(csv, 1, "beta") > 1.0);

  CHECK(cell(csv, 2, "hyperplane_base") ==
        doctest::Approx(2.0 / 3.0).epsilon(1e-9));
  CHECK(cell(csv, 2, "hypercube_base") ==
        doctest::Approx(std::sqrt(3.0) / kPi).epsilon(1e-9));

  CHECK(cell(csv, 3, "hyperplane_base") == doctest::Approx(0.5));
  CHECK(cell(csv, 3, "hypercube_base") == 0.0);
  CHECK(cell_text(csv, 3, "branch") == "Zero");

  CHECK(cell(csv, 4, "hyperplane_base") == 0.0);
  CHECK(cell(csv, 4, "hypercube_base") == 0.0);
}

TEST_CASE("rho reports the random-setting exponents and their ratio") {
  std::ostringstream args;
  args << std::setprecision(17) << "rho --c " << std::sqrt(2.0) << " --c 2 --c 100";
  const RunResult r = run_cli(args.str());
  REQUIRE(r.exit_code == 0);
  const Csv csv = parse_csv(r.out);
  REQUIRE(csv.columns == std::vector<std::string>{"c", "rho_hyperplane",
                                                  "rho_hypercube", "ratio"});
  REQUIRE(csv.rows.size() == 3);
  REQUIRE(csv.notes.size() == 1);
  CHECK(csv.notes[0].find("cross-polytope") != std::string::npos);
  CHECK(csv.notes[0].find("O(1/c^2)") != std::string::npos);

  CHECK(cell(csv, 0, "rho_hyperplane") ==
        doctest::Approx(0.584962500721).epsilon(1e-9));
  CHECK(cell(csv, 0, "rho_hypercube") ==
        doctest::Approx(0.520143440715).epsilon(1e-9));
  CHECK(cell(csv, 1, "rho_hyperplane") ==
        doctest::Approx(0.377169809622).epsilon(1e-9));
  // Faithful value of the c = 2 hypercube exponent on this code path; see
  // the acceptance report for the full discussion of its headline pin.
  CHECK(cell(csv, 1, "rho_hypercube") ==
        doctest::Approx(0.278222135747).epsilon(1e-9));
  CHECK(std::abs(cell(csv, 2, "ratio") - std::log2(kPi)) < 1e-2);
}

TEST_CASE("identical command lines produce byte-identical output") {
  const std::string curves = "curves --grid 0:3.141592653589793:50";
  const RunResult a = run_cli(curves);
  const RunResult b = run_cli(curves);
  REQUIRE(a.exit_code == 0);
  CHECK(a.out == b.out);

  const std::string rho = "rho --grid 1.1:4:7 --format json";
  const RunResult c = run_cli(rho);
  const RunResult d = run_cli(rho);
  REQUIRE(c.exit_code == 0);
  CHECK(c.out == d.out);

  const std::string est = "estimate --d 6 --theta 0.9 --trials 20000";
  const RunResult e = run_cli(est);
  const RunResult f = run_cli(est);
  REQUIRE(e.exit_code == 0);
  CHECK(e.out == f.out);

  const RunResult threaded = run_cli(est + " --threads 4");
  CHECK(threaded.out == e.out);
}

TEST_CASE("the seed flag accepts hex and steers the estimates") {
  const RunResult plain = run_cli("estimate --d 4 --theta 0.5 --trials 2000");
  const RunResult hex =
      run_cli("estimate --d 4 --theta 0.5 --trials 2000 --seed 0x5EEDCAFE");
  const RunResult decimal =
      run_cli("estimate --d 4 --theta 0.5 --trials 2000 --seed 1592642302");
  const RunResult other =
      run_cli("estimate --d 4 --theta 0.5 --trials 2000 --seed 7");
  REQUIRE(plain.exit_code == 0);
  CHECK(plain.out == hex.out);
  CHECK(plain.out == decimal.out);
  CHECK(plain.out != other.out);
}

TEST_CASE("estimate matches the small-dimension collision laws") {
  const RunResult full = run_cli("estimate --d 2 --theta 1.0 --trials 100000");
  REQUIRE(full.exit_code == 0);
  const Csv a = parse_csv(full.out);
  REQUIRE(a.rows.size() == 1);
  const double p = cell(a, 0, "p_hat");
  const double se = cell(a, 0, "stderr");
  CHECK(std::abs(p - (1.0 - 2.0 / kPi)) < 3.0 * se);
  CHECK(cell(a, 0, "trials") == 100000);

  const RunResult one_bit =
      run_cli("estimate --d 8 --dprime 1 --theta 0.7 --trials 100000");
  REQUIRE(one_bit.exit_code == 0);
  const Csv b = parse_csv(one_bit.out);
  CHECK(std::abs(cell(b, 0, "p_hat") - (1.0 - 0.7 / kPi)) <
        3.0 * cell(b, 0, "stderr"));

  const RunResult degenerate = run_cli("estimate --d 5 --theta 0 --trials 500");
  REQUIRE(degenerate.exit_code == 0);
  const Csv c = parse_csv(degenerate.out);
  CHECK(cell_text(c, 0, "p_hat") == "1");
  CHECK(cell_text(c, 0, "stderr") == "0");
  CHECK(cell(c, 0, "successes") == 500);
}

TEST_CASE("estimate appends a fit row on request") {
  std::ostringstream args;
  args << std::setprecision(17) << "estimate --d 4,8,12 --theta " << kPi / 3 << " --trials 40000 --fit";
  const RunResult r = run_cli(args.str());
  REQUIRE(r.exit_code == 0);
  const Csv csv = parse_csv(r.out);
  REQUIRE(csv.rows.size() == 4);
  const auto& fit = csv.rows[3];
  REQUIRE(fit.size() == csv.columns.size());
  CHECK(fit[0] == "fit");
  const double c1 = std::stod(fit[1]);
  const double base = std::stod(fit[3]);
  CHECK(c1 < 0.0);
  CHECK(base == doctest::Approx(std::exp(c1)).epsilon(1e-9));
  CHECK(base > 0.4);
  CHECK(base < 0.75);

  // JSON carries the fit as a structured object instead of a row.
  const RunResult j = run_cli(args.str() + " --format json");
  REQUIRE(j.exit_code == 0);
  const auto doc = nlohmann::json::parse(j.out);
  REQUIRE(doc.contains("fit"));
  CHECK(doc["fit"]["base"].get<double>() ==
        doctest::Approx(base).epsilon(1e-9));
  CHECK(doc["rows"].size() == 3);

  const RunResult bad = run_cli("estimate --d 6 --theta 0.5 --fit");
  CHECK(bad.exit_code == 1);
}

TEST_CASE("tune emits the derived table parameters") {
  const RunResult cube = run_cli("tune --n 10000 --d 24 --family cube --dprime 8");
  REQUIRE(cube.exit_code == 0);
  const Csv a = parse_csv(cube.out);
  REQUIRE(a.rows.size() == 1);
  CHECK(cell_text(a, 0, "family") == "hypercube");
  CHECK(cell(a, 0, "dprime") == 8);
  CHECK(cell(a, 0, "k") == 1);
  CHECK(cell(a, 0, "t") == 270);
  CHECK(cell(a, 0, "code_bits") == 8);

  const RunResult plane = run_cli("tune --n 10000 --d 24 --family plane");
  REQUIRE(plane.exit_code == 0);
  const Csv b = parse_csv(plane.out);
  CHECK(cell_text(b, 0, "family") == "hyperplane");
  CHECK(cell(b, 0, "dprime") == 1);
  CHECK(cell(b, 0, "k") == 13);
  CHECK(cell(b, 0, "t") == 449);
  CHECK(cell(b, 0, "code_bits") == 13);

  CHECK(run_cli("tune --n 1 --d 24").exit_code == 1);
  CHECK(run_cli("tune --d 24").exit_code == 1);
}

TEST_CASE("ld-verify passes on an interior grid with tiny gaps") {
  const RunResult r =
      run_cli("ld-verify --grid 0.15:1.45:14 --theta 0.8806892354203566");
  REQUIRE(r.exit_code == 0);
  const Csv csv = parse_csv(r.out);
  REQUIRE(csv.rows.size() == 15);
  for (std::size_t i = 0; i < csv.rows.size(); ++i) {
    CHECK(cell(csv, i, "max_abs_gap") < 1e-7);
    CHECK(cell(csv, i, "base_closed") ==
          doctest::Approx(cell(csv, i, "base_via_ld")).epsilon(1e-9));
    CHECK(cell(csv, i, "rate_plus") >= 0.0);
    CHECK(cell(csv, i, "rate_minus") >= 0.0);
  }
  // The last row sits at the branch point of the two closed rates.
  CHECK(cell(csv, 14, "base_closed") ==
        doctest::Approx(0.648358876726).epsilon(1e-6));

  CHECK(run_cli("ld-verify").exit_code == 1);
  CHECK(run_cli("ld-verify --theta 0").exit_code == 1);
  CHECK(run_cli("ld-verify --theta 1.5707963267948966").exit_code == 1);
}

TEST_CASE("exponents reproduces the cost-balance optimum") {
  const RunResult r = run_cli("exponents");
  REQUIRE(r.exit_code == 0);
  const Csv csv = parse_csv(r.out);
  REQUIRE(csv.rows.size() == 2);
  CHECK(cell_text(csv, 0, "model") == "hypercube");
  CHECK(cell(csv, 0, "c_n") == doctest::Approx(0.207518749639).epsilon(1e-9));
  CHECK(cell(csv, 0, "c_t") == doctest::Approx(0.114642254929).epsilon(1e-9));
  CHECK(cell(csv, 0, "theta2_over_pi") ==
        doctest::Approx(0.457391929650).epsilon(1e-6));
  CHECK(cell(csv, 0, "time_exponent") ==
        doctest::Approx(0.322161004568).epsilon(1e-9));
  CHECK(cell(csv, 0, "dprime_ratio") ==
        doctest::Approx(0.133457822113).epsilon(1e-9));

  CHECK(cell_text(csv, 1, "model") == "hyperplane");
  CHECK(cell(csv, 1, "c_t") == doctest::Approx(0.129042828827).epsilon(1e-9));
  CHECK(cell(csv, 1, "time_exponent") ==
        doctest::Approx(0.336561578467).epsilon(1e-9));

  const RunResult cube_only = run_cli("exponents --model cube");
  const Csv single = parse_csv(cube_only.out);
  REQUIRE(single.rows.size() == 1);
  CHECK(cell_text(single, 0, "model") == "hypercube");
}

TEST_CASE("bench reports high recall on planted synthetic data") {
  const std::string args =
      "bench --synthetic-n 2000 --synthetic-d 24 --queries 50 --family cube";
  const RunResult r = run_cli(args);
  REQUIRE(r.exit_code == 0);
  auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["source"] == "synthetic");
  CHECK(doc["n"] == 2000);
  CHECK(doc["d"] == 24);
  CHECK(doc["family"] == "hypercube");
  CHECK(doc["dprime"] == 8);
  CHECK(doc["auto_tuned"] == true);
  CHECK(doc["queries"] == 50);
  CHECK(doc["recall"].get<double>() >= 0.9);
  CHECK(doc["mean_candidates"].get<double>() > 0.0);
  CHECK(doc["mean_candidates"].get<double>() <= 2000.0);
  CHECK(doc["build_seconds"].get<double>() >= 0.0);
  CHECK(doc["query_seconds"].get<double>() >= 0.0);

  // Everything but the wall-clock fields is deterministic.
  auto again = nlohmann::json::parse(run_cli(args).out);
  for (auto* j : {&doc, &again}) {
    j->erase("build_seconds");
    j->erase("query_seconds");
  }
  CHECK(doc.dump() == again.dump());
}

TEST_CASE("bench reads files, skips zero vectors, and flags malformed input") {
  const auto csv_path = temp_path("vectors.csv");
  write_file(csv_path, "1,0,0\n0,1,0\n0,0,0\n0.6,0.8,0\n");
  const RunResult file_run =
      run_cli("bench --data " + csv_path.string() + " --queries 2 --k 1 --t 2");
  REQUIRE(file_run.exit_code == 0);
  const auto doc = nlohmann::json::parse(file_run.out);
  CHECK(doc["n"] == 3);
  CHECK(doc["d"] == 3);
  CHECK(doc["skipped_zero"] == 1);
  CHECK(doc["recall"].get<double>() == 1.0);
  CHECK(file_run.err.find("warning") != std::string::npos);
  std::filesystem::remove(csv_path);

  const auto one_path = temp_path("one.csv");
  write_file(one_path, "0.8,0.6\n");
  const RunResult one = run_cli("bench --data " + one_path.string());
  REQUIRE(one.exit_code == 0);
  const auto one_doc = nlohmann::json::parse(one.out);
  CHECK(one_doc["n"] == 1);
  CHECK(one_doc["recall"].get<double>() == 1.0);
  std::filesystem::remove(one_path);

  const auto fvecs_path = temp_path("vectors.fvecs");
  write_fvecs(fvecs_path, {{1.f, 0.f, 0.f, 0.f},
                           {0.f, 2.f, 0.f, 0.f},
                           {3.f, 3.f, 3.f, 3.f}});
  const RunResult fv =
      run_cli("bench --data " + fvecs_path.string() + " --queries 3");
  REQUIRE(fv.exit_code == 0);
  const auto fv_doc = nlohmann::json::parse(fv.out);
  CHECK(fv_doc["n"] == 3);
  CHECK(fv_doc["d"] == 4);
  CHECK(fv_doc["recall"].get<double>() == 1.0);
  std::filesystem::remove(fvecs_path);

  const auto ragged_path = temp_path("ragged.csv");
  write_file(ragged_path, "1,0\n0,1,0\n");
  CHECK(run_cli("bench --data " + ragged_path.string()).exit_code == 1);
  std::filesystem::remove(ragged_path);

  const auto truncated_path = temp_path("short.fvecs");
  {
    std::ofstream out(truncated_path, std::ios::binary);
    const std::int32_t dim = 3;
    const float x = 1.0f;
    out.write(reinterpret_cast<const char*>(&dim), 4);
    out.write(reinterpret_cast<const char*>(&x), 4);
  }
  CHECK(run_cli("bench --data " + truncated_path.string()).exit_code == 1);
  std::filesystem::remove(truncated_path);

  const auto mixed_path = temp_path("mixed.fvecs");
  write_fvecs(mixed_path, {{1.f, 0.f}, {1.f, 0.f, 0.f}});
  CHECK(run_cli("bench --data " + mixed_path.string()).exit_code == 1);
  std::filesystem::remove(mixed_path);

  CHECK(run_cli("bench --data /does/not/exist.csv").exit_code == 1);
}

TEST_CASE("hypercube candidates undercut hyperplane at matched code length") {
  const std::string shared =
      "bench --synthetic-n 2000 --synthetic-d 24 --queries 50 --t 100 ";
  const RunResult plane = run_cli(shared + "--family plane --k 8");
  const RunResult cube = run_cli(shared + "--family cube --k 1 --dprime 8");
  REQUIRE(plane.exit_code == 0);
  REQUIRE(cube.exit_code == 0);
  const auto plane_doc = nlohmann::json::parse(plane.out);
  const auto cube_doc = nlohmann::json::parse(cube.out);
  CHECK(plane_doc["k"].get<int>() * plane_doc["dprime"].get<int>() ==
        cube_doc["k"].get<int>() * cube_doc["dprime"].get<int>());
  CHECK(cube_doc["mean_candidates"].get<double>() <
        plane_doc["mean_candidates"].get<double>());
  CHECK(plane_doc["recall"].get<double>() >= 0.9);
  CHECK(cube_doc["recall"].get<double>() >= 0.9);
}

TEST_CASE("sieve finds exact shortest vectors and honors the oracle flag") {
  const RunResult identity =
      run_cli("sieve --identity 10 --backend cube --check-oracle");
  REQUIRE(identity.exit_code == 0);
  const Csv a = parse_csv(identity.out);
  CHECK(cell(a, 0, "norm") == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(cell(a, 0, "oracle_norm") == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(cell(a, 0, "list_size_peak") > 0);

  const RunResult random = run_cli("sieve --random 8 --bits 5 --check-oracle");
  REQUIRE(random.exit_code == 0);
  const Csv b = parse_csv(random.out);
  CHECK(cell(b, 0, "norm") ==
        doctest::Approx(cell(b, 0, "oracle_norm")).epsilon(1e-9));

  // A starved run cannot reach the optimum and must fail verification.
  const RunResult starved =
      run_cli("sieve --random 10 --max-samples 3 --stall 1 --check-oracle");
  CHECK(starved.exit_code == 2);

  const auto basis_path = temp_path("basis.txt");
  write_file(basis_path, "2 1\n0 1\n");
  const RunResult skew =
      run_cli("sieve --basis " + basis_path.string() + " --check-oracle");
  REQUIRE(skew.exit_code == 0);
  const Csv c = parse_csv(skew.out);
  CHECK(cell(c, 0, "norm") == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));
  std::filesystem::remove(basis_path);

  const auto singular_path = temp_path("singular.txt");
  write_file(singular_path, "1 2\n1 2\n");
  CHECK(run_cli("sieve --basis " + singular_path.string()).exit_code == 1);
  std::filesystem::remove(singular_path);

  CHECK(run_cli("sieve --identity 4 --random 4").exit_code == 1);
  CHECK(run_cli("sieve").exit_code == 1);
  CHECK(run_cli("sieve --basis /does/not/exist.txt").exit_code == 1);
}

TEST_CASE("usage errors exit with code one and help with zero") {
  CHECK(run_cli("--help").exit_code == 0);
  CHECK(run_cli("curves --help").exit_code == 0);
  CHECK(run_cli("").exit_code == 1);
  CHECK(run_cli("no-such-command").exit_code == 1);
  CHECK(run_cli("curves --bogus-flag 1").exit_code == 1);
  CHECK(run_cli("curves").exit_code == 1);
  CHECK(run_cli("curves --theta 4.0").exit_code == 1);
  CHECK(run_cli("curves --grid 0:1").exit_code == 1);
  CHECK(run_cli("curves --grid 1:0:5").exit_code == 1);
  CHECK(run_cli("rho --c 1").exit_code == 1);
  CHECK(run_cli("rho --c 0.5").exit_code == 1);
  CHECK(run_cli("bench --synthetic-n 100 --synthetic-d 8 --format csv")
            .exit_code == 1);
  CHECK(run_cli("bench --synthetic-n 10 --synthetic-d 8 --queries 11")
            .exit_code == 1);
  CHECK(run_cli("bench --synthetic-n 10 --synthetic-d 8 --k 2").exit_code == 1);

  const RunResult help = run_cli("--help");
  CHECK(help.out.find("0x5EEDCAFE") != std::string::npos);
}

TEST_CASE("output lands in the file named by --out") {
  const auto out_path = temp_path("table.csv");
  const RunResult direct = run_cli("curves --theta 0.5");
  const RunResult filed =
      run_cli("curves --theta 0.5 --out " + out_path.string());
  REQUIRE(filed.exit_code == 0);
  CHECK(filed.out.empty());
  CHECK(slurp(out_path) == direct.out);
  std::filesystem::remove(out_path);

  CHECK(run_cli("curves --theta 0.5 --out /no/such/dir/file.csv").exit_code ==
        1);
}

TEST_CASE("json format mirrors the csv tables") {
  const RunResult r = run_cli("curves --theta 0 --theta 0.95 --format json");
  REQUIRE(r.exit_code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  REQUIRE(doc["rows"].size() == 2);
  CHECK(doc["rows"][0]["theta"].get<double>() == 0.0);
  CHECK(doc["rows"][0]["hypercube_base"].get<double>() == 1.0);
  CHECK(doc["rows"][0]["branch"] == "ClosedForm");
  CHECK(doc["rows"][0]["beta"].is_null());
  CHECK(doc["rows"][1]["beta"].get<double>() > 1.0);

  const RunResult sieve_json =
      run_cli("sieve --identity 6 --format json --check-oracle");
  REQUIRE(sieve_json.exit_code == 0);
  const auto sieve_doc = nlohmann::json::parse(sieve_json.out);
  const auto& row = sieve_doc["rows"][0];
  CHECK(row["shortest"].is_array());
  CHECK(row["shortest"].size() == 6);
  CHECK(row["norm"].get<double>() == doctest::Approx(1.0));
}
