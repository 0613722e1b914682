#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "qsteg/classical_steg.hpp"
#include "qsteg/cli.hpp"
#include "qsteg/perfect_code.hpp"
#include "qsteg/quantum_steg.hpp"

using namespace qsteg;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = 0;
  std::string out, err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  Run r;
  r.code = run_cli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) parts.push_back(cur);
  return parts;
}

struct Csv {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  double at(std::size_t row, const std::string& col) const {
    for (std::size_t j = 0; j < header.size(); ++j)
      if (header[j] == col) return rows.at(row).at(j);
    throw std::out_of_range("no column " + col);
  }
};

Csv parse_csv(const std::string& text) {
  Csv c;
  auto lines = split(text, '\n');
  REQUIRE_FALSE(lines.empty());
  c.header = split(lines[0], ',');
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    std::vector<double> row;
    for (const auto& f : split(lines[i], ',')) row.push_back(std::stod(f));
    REQUIRE(row.size() == c.header.size());
    c.rows.push_back(row);
  }
  return c;
}

fs::path scratch_dir(const std::string& tag) {
  const auto dir = fs::temp_directory_path() / ("qsteg_cli_" + tag + "_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

bool close(double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(b)); }

}  // namespace

TEST_CASE("syndrome table of the perfect code, byte for byte", "[cli][golden]") {
  const auto r = run({"codes", "syndromes", "--code", "five_qubit", "--max-weight", "1"});
  CHECK(r.code == 0);
  CHECK(r.out ==
        "Error,Syndrome\n"
        "IIIII,0000\nIIIIZ,0001\nIIZII,0010\nIIIXI,0011\n"
        "IXIII,0100\nIIXII,0101\nZIIII,0110\nIIYII,0111\n"
        "XIIII,1000\nIZIII,1001\nIIIIX,1010\nIIIIY,1011\n"
        "IIIZI,1100\nIYIII,1101\nYIIII,1110\nIIIYI,1111\n");
}

TEST_CASE("command examples", "[cli]") {
  const auto curve = run({"steg", "classical", "curve", "--mode", "class3", "--p-grid", "0.4:0.5:0.1"});
  REQUIRE(curve.code == 0);
  const auto csv = parse_csv(curve.out);
  REQUIRE(csv.rows.size() == 2);
  CHECK(csv.at(1, "p") == 0.5);
  CHECK(std::abs(csv.at(1, "n_avg") - 2.0) < 1e-6);

  const auto css = run({"search", "css613"});
  CHECK(css.code == 0);
  CHECK(css.out.find("0 codes found") != std::string::npos);

  CHECK(run({"codes", "validate", "--code", "steane"}).code == 0);
  CHECK(run({"codes", "distance", "--code", "five_qubit"}).out.find('3') != std::string::npos);
  CHECK(run({"steg", "quantum", "diamond", "--p", "0.1", "--dp", "0.01", "--N", "1", "2"}).code == 0);
  CHECK(run({"steg", "perfect", "tables"}).code == 0);
  // The transcribed tables hold one misprint, so the strict check fails.
  CHECK(run({"steg", "perfect", "tables", "--strict"}).code == 2);
}

TEST_CASE("help and usage errors", "[cli]") {
  const auto help = run({"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("codes") != std::string::npos);
  CHECK(help.out.find("figure") != std::string::npos);
  CHECK(run({"steg", "perfect", "simulate", "--help"}).code == 0);

  const auto no_seed = run({"steg", "perfect", "simulate", "--p", "0.1", "--format", "json"});
  CHECK(no_seed.code != 0);
  CHECK(no_seed.err.find("seed") != std::string::npos);
  CHECK(run({"figure", "no-such-figure"}).code != 0);
  CHECK(run({"codes", "validate", "--code", "no_such_code"}).code == 1);
  CHECK(run({"steg", "quantum", "noisy-rate", "--p-grid", "0.2:0.1:0.1", "--dp", "0.01"}).code == 1);
  CHECK_THROWS_AS(emit_figure("no-such-figure"), std::invalid_argument);
}

TEST_CASE("seeded commands are deterministic", "[cli][property]") {
  const std::vector<std::string> sim{"steg", "perfect", "simulate", "--p", "0.1", "--seed", "5", "--format", "json"};
  const auto a = run(sim), b = run(sim);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  const std::vector<std::string> eve{"steg",    "perfect", "eve-check", "--p",      "0.05",
                                     "--trials", "5000",   "--seed",    "11",       "--format", "json"};
  const auto c = run(eve), d = run(eve);
  REQUIRE(c.code == 0);
  CHECK(c.out == d.out);
  CHECK(run({"figure", "class5"}).out == run({"figure", "class5"}).out);
}

TEST_CASE("atomic writes and the output-directory variable", "[cli]") {
  const auto dir = scratch_dir("out");
  const auto target = dir / "a.csv";
  write_file_atomic(target.string(), "first\n");
  write_file_atomic(target.string(), "second\n");
  CHECK(slurp(target) == "second\n");
  std::size_t files = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir)) ++files;
  CHECK(files == 1);  // no temporary left behind
  // Missing parent directories are created.
  write_file_atomic((dir / "sub" / "x.csv").string(), "x");
  CHECK(slurp(dir / "sub" / "x.csv") == "x");

  const auto explicit_out = run({"figure", "perfect-code-rate", "-o", (dir / "p.csv").string()});
  CHECK(explicit_out.code == 0);
  CHECK(slurp(dir / "p.csv") == emit_figure("perfect-code-rate").to_csv());

  ::setenv(output_dir_env, dir.c_str(), 1);
  const auto r = run({"figure", "noiseless-three-bit"});
  ::unsetenv(output_dir_env);
  CHECK(r.code == 0);
  CHECK(r.out.find("noiseless-three-bit.csv") != std::string::npos);
  CHECK(slurp(dir / "noiseless-three-bit.csv") == emit_figure("noiseless-three-bit").to_csv());
  fs::remove_all(dir);
}

TEST_CASE("figure schemas", "[cli]") {
  const std::map<std::string, std::vector<std::string>> required{
      {"noiseless-three-bit", {"p", "n_avg", "entropy"}},
      {"class3", {"p", "n_avg", "entropy"}},
      {"class5", {"p", "n_avg", "entropy"}},
      {"noisy-three-bit", {"p", "dp", "n_avg", "entropy"}},
      {"three-in-n", {"N", "p", "dp", "n_avg", "entropy"}},
      {"m-in-n", {"M", "N", "p", "dp", "n_avg", "entropy"}},
      {"classical-kcr", {"p", "dp", "key_rate", "key_rate_exact"}},
      {"quantum-kcr", {"p", "dp", "key_rate", "key_rate_exact"}},
      {"perfect-code-rate", {"p", "n_avg", "entropy_bound"}}};
  CHECK(figure_names().size() == required.size());
  for (const auto& name : figure_names()) {
    INFO(name);
    REQUIRE(required.count(name) == 1);
    const auto r = run({"figure", name});
    REQUIRE(r.code == 0);
    const auto csv = parse_csv(r.out);
    CHECK_FALSE(csv.rows.empty());
    for (const auto& col : required.at(name)) CHECK(std::count(csv.header.begin(), csv.header.end(), col) == 1);
    const auto json = run({"figure", name, "--format", "json"});
    CHECK(json.code == 0);
    CHECK(json.out.front() == '[');
  }
}

TEST_CASE("a random row of each figure matches the library", "[cli][property]") {
  std::mt19937_64 rng(314);
  auto pick = [&](const Csv& c) { return static_cast<std::size_t>(rng() % c.rows.size()); };

  auto csv = parse_csv(run({"figure", "noiseless-three-bit"}).out);
  auto i = pick(csv);
  CHECK(close(csv.at(i, "n_avg"), three_bit_closed_forms(csv.at(i, "p")).navg_packed));

  csv = parse_csv(run({"figure", "class3"}).out);
  i = pick(csv);
  double p = csv.at(i, "p");
  CHECK(close(csv.at(i, "n_avg"), class_lp_point(repetition_class_spec(3, p), p).n_avg));

  csv = parse_csv(run({"figure", "noisy-three-bit"}).out);
  i = pick(csv);
  CHECK(close(csv.at(i, "n_avg"), noisy_class_point(csv.at(i, "p"), csv.at(i, "dp")).n_avg));

  csv = parse_csv(run({"figure", "three-in-n"}).out);
  i = pick(csv);
  InnerOuterSpec spec;
  spec.N = static_cast<int>(csv.at(i, "N"));
  spec.M = 3;
  spec.p = csv.at(i, "p");
  spec.dp = csv.at(i, "dp");
  CHECK(close(csv.at(i, "n_avg"), inner_outer_point(spec, InnerOuterMode::three_in_N).n_avg));

  csv = parse_csv(run({"figure", "classical-kcr"}).out);
  i = pick(csv);
  CHECK(close(csv.at(i, "key_rate"), classical_key_rate(csv.at(i, "p"), csv.at(i, "dp"))));

  csv = parse_csv(run({"figure", "quantum-kcr"}).out);
  i = pick(csv);
  const auto rep = protocol1_report({ChannelKind::depolarizing, csv.at(i, "p"), csv.at(i, "dp"), 10000}, 0.1);
  CHECK(close(csv.at(i, "key_rate"), rep.noisy_key_rate_closed));
  CHECK(close(csv.at(i, "key_rate_exact"), rep.noisy_key_rate_exact));

  csv = parse_csv(run({"figure", "perfect-code-rate"}).out);
  i = pick(csv);
  p = csv.at(i, "p");
  CHECK(close(csv.at(i, "n_avg"), mixture_rates(p).n_avg));
  CHECK(close(csv.at(i, "entropy_bound"), 5 * binary_entropy(p)));
}

TEST_CASE("the installed binary behaves like the in-process front end", "[cli]") {
  const char* exe = std::getenv("QSTEG_CLI");
  if (!exe) SKIP("QSTEG_CLI is not set");
  const std::string cmd = std::string(exe) + " figure perfect-code-rate";
  FILE* pipe = ::popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[4096];
  while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
  const int status = ::pclose(pipe);
  CHECK(status == 0);
  CHECK(out == run({"figure", "perfect-code-rate"}).out);

  const std::string bad = std::string(exe) + " steg perfect simulate --p 0.1 > /dev/null 2>&1";
  CHECK(std::system(bad.c_str()) != 0);
}
