#include "qsteg/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fmt/format.h>
#include <fstream>
#include <functional>
#include <nlohmann/json.hpp>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "qsteg/classical_steg.hpp"
#include "qsteg/clifford.hpp"
#include "qsteg/codes.hpp"
#include "qsteg/css_search.hpp"
#include "qsteg/perfect_code.hpp"
#include "qsteg/quantum_steg.hpp"

namespace qsteg {

using nlohmann::json;

// ---------------------------------------------------------------- tables

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";  // no "-0"
  return fmt::format("{:.12g}", v);
}

void DataTable::add_row(std::vector<double> row) {
  if (row.size() != columns.size())
    throw std::invalid_argument(fmt::format("DataTable: row has {} values for {} columns", row.size(), columns.size()));
  rows.push_back(std::move(row));
}

std::size_t DataTable::column(const std::string& name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw std::invalid_argument("DataTable: no column '" + name + "'");
  return static_cast<std::size_t>(it - columns.begin());
}

std::string DataTable::to_csv() const {
  std::string s;
  for (std::size_t c = 0; c < columns.size(); ++c) s += (c ? "," : "") + columns[c];
  s += '\n';
  for (const auto& r : rows) {
    for (std::size_t c = 0; c < r.size(); ++c) s += (c ? "," : "") + format_number(r[c]);
    s += '\n';
  }
  return s;
}

std::string DataTable::to_json() const {
  // Numbers go through the same 12-digit rendering as the CSV so both formats
  // carry identical values.
  std::string s = "[\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    s += "  {";
    for (std::size_t c = 0; c < columns.size(); ++c) {
      const double v = rows[i][c];
      s += fmt::format("{}{}: {}", c ? ", " : "", json(columns[c]).dump(),
                       std::isfinite(v) ? format_number(v) : json(format_number(v)).dump());
    }
    s += i + 1 < rows.size() ? "},\n" : "}\n";
  }
  return s + "]\n";
}

namespace {

double snap(double v) { return std::stod(fmt::format("{:.12g}", v)); }

double parse_double(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  double v;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument(what + ": '" + text + "' is not a number");
  }
  if (used != text.size()) throw std::invalid_argument(what + ": '" + text + "' is not a number");
  return v;
}

}  // namespace

std::vector<double> parse_grid(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
  if (parts.size() != 3) throw std::invalid_argument("grid '" + text + "' must have the form start:stop:step");
  const double a = parse_double(parts[0], "grid start"), b = parse_double(parts[1], "grid stop"),
               step = parse_double(parts[2], "grid step");
  if (!(step > 0.0)) throw std::invalid_argument("grid step must be positive");
  if (b < a) throw std::invalid_argument("grid stop must not be below start");
  const auto count = static_cast<std::size_t>(std::floor((b - a) / step + 1e-9)) + 1;
  if (count > 1000000) throw std::invalid_argument("grid has more than 10^6 points");
  std::vector<double> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(snap(a + static_cast<double>(i) * step));
  return out;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) out.push_back(parse_double(item, "list entry"));
  if (out.empty()) throw std::invalid_argument("empty list");
  return out;
}

// ---------------------------------------------------------------- figures

std::vector<std::string> figure_names() {
  return {"noiseless-three-bit", "class3",      "class5",      "noisy-three-bit",  "three-in-n",
          "m-in-n",              "classical-kcr", "quantum-kcr", "perfect-code-rate"};
}

namespace {

const std::vector<double> default_dp_list{0.001, 0.005, 0.01, 0.05, 0.1};

// Syndrome entropy of the [3,1,3] repetition code over a BSC.
double three_bit_syndrome_entropy(double p) {
  const double p0 = repetition3_p0(p), p1 = repetition3_p1(p);
  auto t = [](double x) { return x > 0.0 ? -x * std::log2(x) : 0.0; };
  return t(p0) + 3 * t(p1);
}

DataTable class_curve(int n, const std::vector<double>& grid) {
  DataTable t{{"p", "dp", "n_avg", "key_rate", "entropy"}, {}};
  for (double p : grid) {
    if (p < 0.0 || p > 0.5) continue;
    const auto pt = class_lp_point(repetition_class_spec(n, p), p);
    t.add_row({p, 0.0, pt.n_avg, pt.key_bits / n, pt.entropy});
  }
  return t;
}

}  // namespace

DataTable emit_figure(const std::string& name, const FigureConfig& cfg) {
  const auto p_grid = [&](const std::string& fallback) { return cfg.p_grid ? *cfg.p_grid : parse_grid(fallback); };

  if (name == "noiseless-three-bit") {
    DataTable t{{"p", "n_avg", "entropy", "n_avg_spread", "q00_packed"}, {}};
    for (double p : p_grid("0:0.5:0.01")) {
      if (p < 0.0 || p > 0.5) continue;
      const auto c = three_bit_closed_forms(p);
      t.add_row({p, c.navg_packed, three_bit_syndrome_entropy(p), c.navg_spread, c.q00_packed});
    }
    return t;
  }
  if (name == "class3") return class_curve(3, p_grid("0:0.5:0.01"));
  if (name == "class5") return class_curve(5, p_grid("0:0.5:0.01"));
  if (name == "noisy-three-bit") {
    DataTable t{{"p", "dp", "n_avg", "key_rate", "entropy"}, {}};
    const auto ps = cfg.p_grid ? *cfg.p_grid : std::vector<double>{0.1, 0.01, 0.001, 0.0001};
    const auto dps = cfg.dp_values ? *cfg.dp_values : parse_grid("0:0.2:0.01");
    for (double p : ps)
      for (double dp : dps) {
        if (p < 0.0 || dp < 0.0 || p + dp >= 0.5) continue;
        const auto pt = noisy_class_point(p, dp);
        t.add_row({p, dp, pt.n_avg, pt.key_bits / 3, pt.entropy});
      }
    return t;
  }
  if (name == "three-in-n" || name == "m-in-n") {
    const bool three = name == "three-in-n";
    DataTable t{three ? std::vector<std::string>{"N", "p", "dp", "n_avg", "key_rate", "entropy"}
                      : std::vector<std::string>{"M", "N", "p", "dp", "n_avg", "key_rate", "entropy"},
                {}};
    const auto sizes = cfg.sizes ? *cfg.sizes : three ? std::vector<double>{5, 7, 9, 11, 13, 15}
                                                      : std::vector<double>{3, 5, 7};
    const auto dps = cfg.dp_values ? *cfg.dp_values : std::vector<double>{0.0};
    for (double s : sizes)
      for (double dp : dps)
        for (double p : p_grid("0:0.5:0.01")) {
          if (p < 0.0 || dp < 0.0 || p + dp >= 0.5) continue;
          InnerOuterSpec spec;
          spec.N = three ? static_cast<int>(s) : static_cast<int>(cfg.N);
          spec.M = three ? 3 : static_cast<int>(s);
          spec.p = p;
          spec.dp = dp;
          const auto pt = inner_outer_point(spec, three ? InnerOuterMode::three_in_N : InnerOuterMode::M_in_N);
          const double rate = pt.key_bits / spec.N;
          if (three)
            t.add_row({s, p, dp, pt.n_avg, rate, pt.entropy});
          else
            t.add_row({s, static_cast<double>(spec.N), p, dp, pt.n_avg, rate, pt.entropy});
        }
    return t;
  }
  if (name == "classical-kcr") {
    DataTable t{{"p", "dp", "key_rate", "key_rate_exact"}, {}};
    const auto dps = cfg.dp_values ? *cfg.dp_values : default_dp_list;
    for (double dp : dps)
      for (double p : p_grid("0:0.5:0.01")) {
        if (p < 0.0 || dp < 0.0 || p + dp >= 0.5) continue;
        const long M = classical_stego_flips(cfg.exact_N, p, dp);
        if (M > cfg.exact_N) continue;
        t.add_row({p, dp, classical_key_rate(p, dp),
                   exact_key_bits(cfg.exact_N, M) / static_cast<double>(cfg.exact_N)});
      }
    return t;
  }
  if (name == "quantum-kcr") {
    DataTable t{{"p", "dp", "key_rate", "key_rate_exact"}, {}};
    const auto dps = cfg.dp_values ? *cfg.dp_values : default_dp_list;
    for (double dp : dps)
      for (double p : p_grid("0:0.7:0.01")) {
        if (p < 0.0 || dp < 0.0 || p + dp > 0.75 || 4 * dp >= 3 - 4 * p) continue;
        ChannelSpec spec{ChannelKind::depolarizing, p, dp, cfg.exact_N};
        if (spec.dp / (1 - 4 * p / 3) * 4 / 3 > 1.0) continue;
        const auto r = protocol1_report(spec, cfg.delta);
        t.add_row({p, dp, r.noisy_key_rate_closed, r.noisy_key_rate_exact});
      }
    return t;
  }
  if (name == "perfect-code-rate") {
    DataTable t{{"p", "n_avg", "entropy_bound", "rate", "key_rate_block", "key_rate_naive"}, {}};
    for (double p : p_grid("0:0.5:0.01")) {
      if (p < 0.0 || p > mixture_p_max()) continue;
      const auto r = mixture_rates(p);
      t.add_row({p, r.n_avg, 5 * binary_entropy(p), r.n_avg / 5, r.key_rate_block, r.key_rate_naive});
    }
    return t;
  }
  throw std::invalid_argument("unknown figure '" + name + "' (known: " + fmt::format("{}", fmt::join(figure_names(), ", ")) +
                              ")");
}

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(target.parent_path(), ec);
    if (ec) throw std::runtime_error("cannot create directory " + target.parent_path().string() + ": " + ec.message());
  }
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    f << content;
    f.flush();
    if (!f) throw std::runtime_error("write to " + tmp.string() + " failed");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw std::runtime_error("cannot rename " + tmp.string() + " to " + path + ": " + ec.message());
  }
}

// ---------------------------------------------------------------- commands

namespace {

// Exit status for a completed run whose check did not pass.
constexpr int exit_check_failed = 2;

struct Output {
  std::string path;
  std::string format = "csv";
};

void add_output_options(CLI::App* cmd, Output& o) {
  cmd->add_option("-o,--output", o.path, "Output file (default: stdout, or $" + std::string(output_dir_env) +
                                             "/<command>.<format> when that variable is set)");
  cmd->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
}

// Writes an artifact to its destination; text without a file goes to `out`.
void deliver(const Output& o, const std::string& default_name, const std::string& content, std::ostream& out) {
  std::string path = o.path;
  if (path.empty()) {
    if (const char* dir = std::getenv(output_dir_env); dir && *dir)
      path = (std::filesystem::path(dir) / (default_name + "." + o.format)).string();
  }
  if (path.empty()) {
    out << content;
    return;
  }
  write_file_atomic(path, content);
  out << "wrote " << path << '\n';
}

void deliver_table(const Output& o, const std::string& name, const DataTable& t, std::ostream& out) {
  deliver(o, name, o.format == "json" ? t.to_json() : t.to_csv(), out);
}

void deliver_json(const Output& o, const std::string& name, const json& j, std::ostream& out) {
  if (o.format == "csv") throw std::invalid_argument(name + " produces a JSON document; use --format json");
  deliver(o, name, j.dump(2) + "\n", out);
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

struct CodeSource {
  std::string name;
  std::string file;
};

void add_code_options(CLI::App* cmd, CodeSource& src) {
  auto* g = cmd->add_option_group("code source");
  g->add_option("--code", src.name, "Built-in code: " + fmt::format("{}", fmt::join(builtin_code_names(), ", ")));
  g->add_option("--file", src.file, "Code in the plain-text serialization")->check(CLI::ExistingFile);
  g->require_option(1);
}

StabilizerCode load_code(const CodeSource& src) {
  return src.file.empty() ? builtin_code(src.name) : parse_code(read_file(src.file));
}

void check_probability(double p, const std::string& what, double hi = 1.0) {
  if (!(p >= 0.0 && p <= hi)) throw std::invalid_argument(fmt::format("{} must lie in [0, {}]", what, hi));
}

json rate_json(const RateReport& r) {
  return {{"stego_rate", r.stego_rate}, {"key_rate", r.key_rate}, {"security", r.security}, {"notes", r.notes}};
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Steganographic quantum error-correction toolkit"};
  app.name("qsteg");
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  std::function<int()> action;
  Output o;

  // ---------------- codes
  auto* codes = app.add_subcommand("codes", "Stabilizer code inspection");
  codes->require_subcommand(1);
  CodeSource src;
  std::size_t max_weight = 1;
  std::string letters = "XYZ";
  bool all_errors = false;

  auto* validate = codes->add_subcommand("validate", "Check commutation, independence, -I and logicals");
  add_code_options(validate, src);
  validate->callback([&] {
    action = [&] {
      const auto code = load_code(src);
      const auto rep = validate_code(code);
      out << fmt::format("code {}: n={} k={} generators={} rank={}\n", code.name, code.n, code.k,
                         code.generators.size(), rep.rank);
      for (const auto& f : rep.failures) out << "FAIL " << f << '\n';
      out << (rep.ok ? "valid\n" : "invalid\n");
      return rep.ok ? 0 : exit_check_failed;
    };
  });

  auto* syn = codes->add_subcommand("syndromes", "Syndrome table (first error per syndrome, or every error)");
  add_code_options(syn, src);
  syn->add_option("--max-weight", max_weight, "Largest error weight enumerated")->check(CLI::Range(0, 12));
  syn->add_option("--letters", letters, "Single-qubit letters to use");
  syn->add_flag("--all", all_errors, "List every error as syndrome,error,weight");
  add_output_options(syn, o);
  syn->callback([&] {
    action = [&] {
      const auto table = build_syndrome_table(load_code(src), max_weight, letters);
      deliver(o, "syndromes", all_errors ? table.to_csv() : format_syndrome_table(table), out);
      return 0;
    };
  });

  auto* dist = codes->add_subcommand("distance", "Exhaustive minimum distance (sender-side errors for EA codes)");
  add_code_options(dist, src);
  dist->callback([&] {
    action = [&] {
      const auto code = load_code(src);
      out << fmt::format("distance {}\n", code.bob_qubit ? ea_distance(code) : distance(code));
      return 0;
    };
  });

  auto* synth = codes->add_subcommand("synthesize", "Encoding circuit from the generator matrix");
  add_code_options(synth, src);
  add_output_options(synth, o);
  synth->callback([&] {
    action = [&] {
      const auto code = load_code(src);
      const auto circuit = synthesize_encoder(code);
      deliver(o, "circuit", format_circuit(circuit), out);
      return 0;
    };
  });

  std::string circuit_file;
  bool published = false;
  auto* ver = codes->add_subcommand("verify", "Group and state checks of an encoder");
  add_code_options(ver, src);
  ver->add_option("--circuit", circuit_file, "Circuit file (one gate per line); default: synthesized")
      ->check(CLI::ExistingFile);
  ver->add_flag("--published", published, "Use the transcribed published encoder (five_qubit, six_qubit)");
  ver->callback([&] {
    action = [&] {
      const auto code = load_code(src);
      CliffordCircuit c;
      if (!circuit_file.empty())
        c = parse_circuit(read_file(circuit_file), code.n);
      else if (published)
        c = code.name == "five_qubit"  ? five_qubit_published_encoder()
            : code.name == "six_qubit" ? six_qubit_published_encoder()
                                       : throw std::invalid_argument("no published encoder for " + code.name);
      else
        c = synthesize_encoder(code);
      const auto rep = verify_encoder(code, c);
      out << fmt::format("gates {}\ngroup_check {}\nstate_check {}\n", c.gates.size(), rep.group_ok ? "pass" : "FAIL",
                         rep.state_ok ? "pass" : "FAIL");
      if (!rep.message.empty()) out << rep.message << '\n';
      return rep.ok ? 0 : exit_check_failed;
    };
  });

  // ---------------- search
  auto* search = app.add_subcommand("search", "Exhaustive searches");
  search->require_subcommand(1);
  CssSearchOptions css;
  std::size_t ebit_column = 0;
  bool list_witnesses = false, screen = false;
  auto* css613 = search->add_subcommand("css613", "CSS codes correcting any single-qubit error");
  css613->add_option("--qubits", css.n, "Total qubits, Bob's column included")->check(CLI::Range(2, 8));
  css613->add_option("--logical", css.k, "Encoded qubits")->check(CLI::Range(1, 7));
  css613->add_option("--ebit-column", ebit_column, "One-based column holding Bob's half of one ebit")
      ->check(CLI::PositiveNumber);
  css613->add_flag("--screen", screen, "Screen candidates with the bit-mask test before the full report");
  css613->add_flag("--witnesses", list_witnesses, "Print the generators of every code found");
  css613->callback([&] {
    action = [&] {
      if (ebit_column) css.bob_qubit = ebit_column - 1;
      css.exhaustive_report = !screen;
      const auto res = search_css(css);
      out << summarize(res);
      if (list_witnesses)
        for (const auto& w : res.witnesses) {
          const auto c = w.to_code();
          for (std::size_t i = 0; i < c.generators.size(); ++i)
            out << (i ? " " : "  ") << format_pauli(c.generators[i]);
          out << '\n';
        }
      out << res.witnesses.size() << " codes found\n";
      return 0;
    };
  });

  std::size_t bob = 1;
  auto* ea = search->add_subcommand("ea-reduce", "Hand one qubit of a code to the receiver as half of an ebit");
  add_code_options(ea, src);
  ea->add_option("--bob", bob, "One-based qubit given to Bob")->check(CLI::PositiveNumber);
  ea->callback([&] {
    action = [&] {
      const auto code = reduce_to_ea(load_code(src), bob - 1);
      const auto rep = validate_code(code);
      out << serialize_code(code);
      out << fmt::format("valid {}\nsender-side distance {}\n", rep.ok ? "yes" : "no", ea_distance(code));
      return rep.ok ? 0 : exit_check_failed;
    };
  });

  // ---------------- steg
  auto* steg = app.add_subcommand("steg", "Steganographic rate analysis and protocols");
  steg->require_subcommand(1);
  std::string grid_text, dp_text, cf_grid = "0:0.5:0.01", rates_grid = "0:0.2:0.01";
  double p = 0.1, dp = 0.0, delta = 0.1, epsilon = 0.0;
  long N = 10000, M = 0;
  std::string mode = "class3", tie = "strict", channel = "bsc";
  bool noisy = false;

  auto* classical = steg->add_subcommand("classical", "Classical syndrome-selection steganography");
  classical->require_subcommand(1);
  auto* cf = classical->add_subcommand("closed-forms", "Three-bit closed-form pair distributions");
  cf->add_option("--p-grid", cf_grid, "start:stop:step")->capture_default_str();
  cf->add_flag("--noisy", noisy, "Evaluate the noisy closed forms at --dp");
  cf->add_option("--dp", dp, "Excess flip rate for --noisy");
  add_output_options(cf, o);
  cf->callback([&] {
    action = [&] {
      DataTable t;
      if (!noisy) {
        t.columns = {"p", "q00_spread", "navg_spread", "residual_spread", "q00_packed", "navg_packed", "residual_packed"};
        for (double x : parse_grid(cf_grid)) {
          check_probability(x, "p", 0.5);
          const auto c = three_bit_closed_forms(x);
          t.add_row({x, c.q00_spread, c.navg_spread, three_bit_constraint_residual(c.spread, x), c.q00_packed,
                     c.navg_packed, three_bit_constraint_residual(c.packed, x)});
        }
      } else {
        t.columns = {"p", "dp", "q00_boxed", "q00_from_l0_row", "n_avg_boxed", "n_avg_sum", "failing_rows"};
        for (double x : parse_grid(cf_grid)) {
          if (x == 0.0) continue;  // the printed assignment divides by p
          const auto c = three_bit_noisy_closed_forms(x, dp);
          t.add_row({x, dp, c.q00_boxed, c.q00_from_l0_row, c.n_avg_boxed, c.n_avg_sum,
                     static_cast<double>(c.failing_rows.size())});
        }
      }
      deliver_table(o, "closed_forms", t, out);
      return 0;
    };
  });

  auto* curve = classical->add_subcommand("curve", "LP rate curve");
  curve->add_option("--mode", mode, "Which LP")
      ->check(CLI::IsMember({"class3", "class5", "noisy3", "three-in-n", "m-in-n"}));
  curve->add_option("--p-grid", grid_text, "start:stop:step (p values)");
  curve->add_option("--dp", dp_text, "Comma-separated excess rates (noisy3, three-in-n, m-in-n)");
  curve->add_option("--N", N, "Block length (three-in-n, m-in-n)");
  curve->add_option("--M", M, "Inner length (m-in-n)");
  curve->add_option("--tie-rule", tie, "Decoding ties in the noisy LP")->check(CLI::IsMember({"strict", "half"}));
  add_output_options(curve, o);
  curve->callback([&] {
    action = [&] {
      FigureConfig fc;
      if (!grid_text.empty()) fc.p_grid = parse_grid(grid_text);
      if (!dp_text.empty()) fc.dp_values = parse_list(dp_text);
      DataTable t;
      if (mode == "noisy3") {
        const auto rule = tie == "half" ? TieRule::half_credit : TieRule::strict;
        t.columns = {"p", "dp", "n_avg", "key_rate", "entropy"};
        for (double x : fc.p_grid ? *fc.p_grid : std::vector<double>{0.1, 0.01, 0.001, 0.0001})
          for (double d : fc.dp_values ? *fc.dp_values : parse_grid("0:0.2:0.01")) {
            if (x + d >= 0.5) continue;
            const auto pt = noisy_class_point(x, d, rule);
            t.add_row({x, d, pt.n_avg, pt.key_bits / 3, pt.entropy});
          }
      } else if (mode == "three-in-n") {
        fc.sizes = std::vector<double>{static_cast<double>(curve->count("--N") ? N : 15)};
        t = emit_figure("three-in-n", fc);
      } else if (mode == "m-in-n") {
        fc.N = curve->count("--N") ? N : 17;
        fc.sizes = std::vector<double>{static_cast<double>(M ? M : 3)};
        t = emit_figure("m-in-n", fc);
      } else {
        t = emit_figure(mode, fc);
      }
      deliver_table(o, "curve_" + mode, t, out);
      return 0;
    };
  });

  auto* key = classical->add_subcommand("key", "Key consumption for emulating a noisier BSC");
  key->add_option("--p", p, "Channel flip rate")->required();
  key->add_option("--dp", dp, "Excess flip rate")->required();
  key->add_option("--N", N, "Block length for the exact count");
  add_output_options(key, o);
  key->callback([&] {
    action = [&] {
      const long m = classical_stego_flips(N, p, dp);
      if (m > N) throw std::domain_error("classical key: M exceeds N; increase N or reduce dp");
      DataTable t{{"p", "dp", "N", "M", "key_rate", "key_rate_exact"}, {}};
      t.add_row({p, dp, static_cast<double>(N), static_cast<double>(m), classical_key_rate(p, dp),
                 exact_key_bits(N, m) / static_cast<double>(N)});
      deliver_table(o, "classical_key", t, out);
      return 0;
    };
  });

  auto* quantum = steg->add_subcommand("quantum", "Quantum steganography over Pauli channels");
  quantum->require_subcommand(1);
  std::vector<long> Ns;
  auto* diamond = quantum->add_subcommand("diamond", "Distinguishability of N uses of two channels");
  diamond->add_option("--channel", channel)->check(CLI::IsMember({"bsc", "depolarizing"}));
  diamond->add_option("--p", p, "Rate Eve expects")->required();
  diamond->add_option("--dp", dp, "Excess rate")->required();
  diamond->add_option("--N", Ns, "One or more block lengths")->required()->check(CLI::PositiveNumber);
  add_output_options(diamond, o);
  diamond->callback([&] {
    action = [&] {
      DataTable t{{"N", "p", "dp", "norm", "p_opt"}, {}};
      for (long n : Ns) {
        const auto d = diamond_norm_iid({parse_channel_kind(channel), p, dp, n});
        t.add_row({static_cast<double>(n), p, dp, d.norm, d.p_opt});
      }
      deliver_table(o, "diamond", t, out);
      return 0;
    };
  });

  auto* p1 = quantum->add_subcommand("protocol1", "Twirl-and-swap protocol over a depolarizing channel");
  p1->add_option("--p", p)->required();
  p1->add_option("--dp", dp, "Excess rate for the noisy variant");
  p1->add_option("--N", N);
  p1->add_option("--delta", delta, "Typicality width");
  add_output_options(p1, o);
  p1->callback([&] {
    action = [&] {
      const auto r = protocol1_report({ChannelKind::depolarizing, p, dp, N}, delta);
      json j{{"p", p},
             {"dp", dp},
             {"N", N},
             {"delta", delta},
             {"M", r.M},
             {"key_bits", r.key_bits},
             {"tail_threshold", r.tail_threshold},
             {"tail_ok", r.tail_ok},
             {"noisy_q", r.noisy_q},
             {"noisy_M", r.noisy_M},
             {"noisy_key_rate_exact", r.noisy_key_rate_exact},
             {"noisy_key_rate_closed", r.noisy_key_rate_closed},
             {"rates", rate_json(r.rate)}};
      if (o.format == "csv") {
        DataTable t{{"p", "dp", "rate", "key_rate"}, {}};
        t.add_row({p, dp, r.rate.stego_rate, r.rate.key_rate});
        deliver_table(o, "protocol1", t, out);
      } else {
        deliver_json(o, "protocol1", j, out);
      }
      return 0;
    };
  });

  auto* p2 = quantum->add_subcommand("protocol2", "Typical-set syndrome protocol");
  p2->add_option("--channel", channel)->check(CLI::IsMember({"bsc", "depolarizing"}));
  p2->add_option("--p", p)->required();
  p2->add_option("--N", N);
  p2->add_option("--delta", delta);
  p2->add_option("--epsilon", epsilon, "Typical-set failure probability added to the security bound");
  add_output_options(p2, o);
  p2->callback([&] {
    action = [&] {
      const auto r = protocol2_report({parse_channel_kind(channel), p, 0.0, N}, delta, epsilon);
      if (o.format == "csv") {
        DataTable t{{"p", "N", "delta", "rate", "key_rate", "security", "window_mass"}, {}};
        t.add_row({p, static_cast<double>(N), delta, r.rate.stego_rate, r.rate.key_rate, r.rate.security,
                   r.window_mass});
        deliver_table(o, "protocol2", t, out);
        return 0;
      }
      json j{{"p", p},
             {"N", N},
             {"delta", delta},
             {"stego_bits", r.stego_bits},
             {"log2_C", r.log2_C},
             {"twirl_key_rate", r.twirl_key_rate},
             {"selection_key_rate", r.selection_key_rate},
             {"window_mass", r.window_mass},
             {"zero_rate", r.zero_rate},
             {"rates", rate_json(r.rate)}};
      if (r.partition)
        j["partition"] = {{"weight_lo", r.partition->weight_lo},
                          {"weight_hi", r.partition->weight_hi},
                          {"C", r.partition->C},
                          {"strings", r.partition->strings},
                          {"max_ratio", r.partition->max_ratio},
                          {"set_probs", r.partition->set_probs}};
      deliver_json(o, "protocol2", j, out);
      return 0;
    };
  });

  auto* nr = quantum->add_subcommand("noisy-rate", "Protocol-2 rate when the wire is already noisy");
  nr->add_option("--p-grid", grid_text, "start:stop:step")->required();
  nr->add_option("--dp", dp)->required();
  add_output_options(nr, o);
  nr->callback([&] {
    action = [&] {
      DataTable t{{"p", "dp", "rate", "q_opt", "comparator"}, {}};
      for (double x : parse_grid(grid_text)) {
        if (!(x > 0.0 && x < 0.5)) continue;
        const auto r = protocol2_noisy_rate(x, dp);
        t.add_row({x, dp, r.rate, r.q_opt, r.comparator});
      }
      deliver_table(o, "noisy_rate", t, out);
      return 0;
    };
  });

  auto* perfect = steg->add_subcommand("perfect", "Hiding four qubits in the five-qubit code");
  perfect->require_subcommand(1);
  int encoding = -1;
  bool strict = false;
  auto* tables = perfect->add_subcommand("tables", "Encoding tables with their verification status");
  tables->add_option("--encoding", encoding, "0 = single-error encoding, 1..6 = two-error encodings (default all)")
      ->check(CLI::Range(0, 6));
  tables->add_flag("--strict", strict, "Fail on the first record that does not verify");
  add_output_options(tables, o);
  tables->callback([&] {
    action = [&] {
      EncodingSet set;
      try {
        set = load_encodings(strict);
      } catch (const std::invalid_argument& e) {
        if (!strict) throw;
        err << "check failed: " << e.what() << '\n';
        return 2;
      }
      std::string csv = "encoding_id,syndrome,pre_error,cover_op,encoded_error,printed_encoded\n";
      for (int id = 0; id <= 6; ++id) {
        if (encoding >= 0 && id != encoding) continue;
        for (const auto& r : set.by_id(id).entries)
          csv += fmt::format("{},{},{},{},{},{}\n", id, r.syndrome, format_pauli(r.pre_error),
                             format_pauli(r.cover_op), format_pauli(r.encoded_error), format_pauli(r.printed_encoded));
      }
      for (const auto& i : set.issues)
        err << fmt::format("note: encoding {} syndrome {} (line {}): {}\n", i.encoding, i.syndrome, i.line, i.message);
      deliver(o, "encodings", csv, out);
      return 0;
    };
  });

  auto* rates = perfect->add_subcommand("rates", "Mixture of encodings and rates per block");
  rates->add_option("--p-grid", rates_grid, "start:stop:step")->capture_default_str();
  add_output_options(rates, o);
  rates->callback([&] {
    action = [&] {
      DataTable t{{"p", "Q0", "Q1", "Q2", "n_avg", "key_block", "key_asymptotic", "entropy"}, {}};
      for (double x : parse_grid(rates_grid)) {
        const auto r = mixture_rates(x);
        if (r.beyond_small_p)
          err << fmt::format("note: p={} is beyond the small-p regime; weight >= 3 errors carry {} of the mass\n",
                             format_number(x), format_number(r.mixture.residual));
        t.add_row({x, r.mixture.Q0, r.mixture.Q1, r.mixture.Q2, r.n_avg, r.key_rate_naive, r.key_rate_block,
                   5 * binary_entropy(x)});
      }
      deliver_table(o, "perfect_rates", t, out);
      return 0;
    };
  });

  std::string payload = "0000";
  std::uint64_t seed = 0;
  std::uint64_t trials = 1000000;
  auto* sim = perfect->add_subcommand("simulate", "Density-matrix run of one block");
  sim->add_option("--p", p, "Channel rate used to draw the encoding")->required();
  sim->add_option("--payload", payload, "Four characters from {0,1,+,-}");
  sim->add_option("--seed", seed, "Random seed (required)")->required();
  add_output_options(sim, o);
  sim->callback([&] {
    action = [&] {
      if (o.format == "csv") o.format = "json";
      const auto t = simulate_roundtrip(p, parse_payload(payload), seed);
      json j{{"p", p},
             {"payload", payload},
             {"seed", seed},
             {"encoding", t.encoding},
             {"twirl_key", t.twirl_key},
             {"payload_qubits", t.payload_qubits},
             {"key_bits_selection", t.key_bits_selection},
             {"key_bits_twirl", t.key_bits_twirl},
             {"key_bits_quoted", t.key_bits_paper},
             {"bob_fidelity", t.bob_fidelity},
             {"eve_trace_distance", t.eve_trace_distance},
             {"stego_register_purity_defect", t.stego_register_purity_defect}};
      deliver_json(o, "transcript", j, out);
      return 0;
    };
  });

  auto* eve = perfect->add_subcommand("eve-check", "Monte Carlo check of the wire error statistics");
  eve->add_option("--p", p)->required();
  eve->add_option("--trials", trials)->check(CLI::PositiveNumber);
  eve->add_option("--seed", seed, "Random seed (required)")->required();
  add_output_options(eve, o);
  eve->callback([&] {
    action = [&] {
      if (o.format == "csv") o.format = "json";
      const auto r = eve_channel_check(p, trials, seed);
      json j{{"p", r.p},
             {"trials", r.trials},
             {"seed", r.seed},
             {"class_counts", r.class_counts},
             {"unmodeled", r.unmodeled},
             {"class_sigma", r.class_sigma},
             {"chi_square", r.chi_square},
             {"dof", r.dof},
             {"p_value", r.p_value},
             {"n_avg_estimate", r.n_avg_estimate},
             {"n_avg_expected", r.n_avg_expected}};
      deliver_json(o, "eve_check", j, out);
      return 0;
    };
  });

  // ---------------- figure
  std::string fig;
  FigureConfig fcfg;
  auto* figure = app.add_subcommand("figure", "Data behind a published figure");
  figure->add_option("name", fig, "Figure name")->required()->check(CLI::IsMember(figure_names()));
  figure->add_option("--p-grid", grid_text, "Override the p values (start:stop:step)");
  figure->add_option("--dp", dp_text, "Override the excess rates (comma-separated)");
  figure->add_option("--N", N, "Block length for m-in-n");
  figure->add_option("--exact-N", fcfg.exact_N, "Block length for exact key rates")->check(CLI::PositiveNumber);
  add_output_options(figure, o);
  figure->callback([&] {
    action = [&] {
      if (!grid_text.empty()) fcfg.p_grid = parse_grid(grid_text);
      if (!dp_text.empty()) fcfg.dp_values = parse_list(dp_text);
      if (figure->count("--N")) fcfg.N = N;
      deliver_table(o, fig, emit_figure(fig, fcfg), out);
      return 0;
    };
  });

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }
  try {
    return action ? action() : 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace qsteg
