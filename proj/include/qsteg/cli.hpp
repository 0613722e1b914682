#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace qsteg {

// Column-major-free numeric table: one header row, '.' decimal, 12 significant
// digits when rendered.
struct DataTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  void add_row(std::vector<double> row);
  std::size_t column(const std::string& name) const;  // throws std::invalid_argument
  std::string to_csv() const;
  std::string to_json() const;
};

std::string format_number(double v);

// "start:stop:step", inclusive of stop (within 1e-9 of a step); step > 0.
std::vector<double> parse_grid(const std::string& text);
// Comma-separated list of numbers.
std::vector<double> parse_list(const std::string& text);

struct FigureConfig {
  std::optional<std::vector<double>> p_grid;
  std::optional<std::vector<double>> dp_values;
  std::optional<std::vector<double>> sizes;  // N (three-in-n) or M (m-in-n) values
  long N = 17;                               // block length for m-in-n
  long exact_N = 10000;                      // block length for exact key rates
  double delta = 0.1;                        // typicality width for quantum-kcr
};

std::vector<std::string> figure_names();
// Columns per figure:
//   noiseless-three-bit  p, n_avg, entropy, n_avg_spread, q00_packed
//   class3, class5       p, dp, n_avg, key_rate, entropy
//   noisy-three-bit      p, dp, n_avg, key_rate, entropy
//   three-in-n           N, p, dp, n_avg, key_rate, entropy
//   m-in-n               M, N, p, dp, n_avg, key_rate, entropy
//   classical-kcr        p, dp, key_rate, key_rate_exact
//   quantum-kcr          p, dp, key_rate, key_rate_exact
//   perfect-code-rate    p, n_avg, entropy_bound, rate, key_rate_block, key_rate_naive
// Grid points outside a module's domain are skipped, never clamped.
DataTable emit_figure(const std::string& name, const FigureConfig& config = {});

// Writes to a temporary sibling file and renames it over `path`.
void write_file_atomic(const std::string& path, const std::string& content);

// Name of the environment variable holding the default output directory.
inline constexpr const char* output_dir_env = "QSTEG_OUTPUT_DIR";

// Full command-line front end; returns the process exit status.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qsteg
