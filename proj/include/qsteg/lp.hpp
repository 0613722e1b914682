#pragma once

#include <string>
#include <vector>

namespace qsteg {

// maximize c·x  subject to  A x = b,  x >= 0
struct LinearProgram {
  std::vector<double> objective;
  std::vector<std::vector<double>> eq_matrix;
  std::vector<double> eq_rhs;
  std::vector<std::string> names;

  std::size_t variables() const { return objective.size(); }
  std::size_t constraints() const { return eq_rhs.size(); }
  // Adds a variable with objective coefficient `c` and zero constraint entries;
  // returns its index.
  std::size_t add_variable(const std::string& name, double c);
  // Adds an (initially empty) equality row with right-hand side `rhs`.
  std::size_t add_row(double rhs);
  void set(std::size_t row, std::size_t var, double value);
  // Throws std::invalid_argument on shape mismatch or non-finite data.
  void check() const;
};

enum class LpStatus { optimal, infeasible, unbounded };
std::string to_string(LpStatus s);

struct LpSolution {
  LpStatus status = LpStatus::infeasible;
  std::vector<double> x;
  double objective_value = 0.0;
  std::vector<std::size_t> basis;  // basic variable indices at termination
  std::size_t iterations = 0;
};

inline constexpr double lp_pivot_tol = 1e-10;
inline constexpr double lp_feas_tol = 1e-8;

// Dense two-phase simplex; entering and leaving variables chosen by Bland's
// rule (lowest index), so degenerate problems cannot cycle.
LpSolution solve_max(const LinearProgram& lp);

// Max-norm of A x - b.
double lp_residual(const LinearProgram& lp, const std::vector<double>& x);

std::string lp_to_json(const LinearProgram& lp);
LinearProgram lp_from_json(const std::string& text);

}  // namespace qsteg
