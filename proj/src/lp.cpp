#include "qsteg/lp.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <json.hpp>

namespace qsteg {

std::size_t LinearProgram::add_variable(const std::string& name, double c) {
  objective.push_back(c);
  names.push_back(name);
  for (auto& row : eq_matrix) row.push_back(0.0);
  return objective.size() - 1;
}

std::size_t LinearProgram::add_row(double rhs) {
  eq_matrix.emplace_back(objective.size(), 0.0);
  eq_rhs.push_back(rhs);
  return eq_rhs.size() - 1;
}

void LinearProgram::set(std::size_t row, std::size_t var, double value) {
  eq_matrix.at(row).at(var) = value;
}

void LinearProgram::check() const {
  const std::size_t n = objective.size();
  if (!names.empty() && names.size() != n)
    throw std::invalid_argument("LinearProgram: names/objective length mismatch");
  if (eq_matrix.size() != eq_rhs.size())
    throw std::invalid_argument("LinearProgram: matrix rows do not match rhs length");
  auto finite = [](double v) { return std::isfinite(v); };
  for (double v : objective)
    if (!finite(v)) throw std::invalid_argument("LinearProgram: non-finite objective coefficient");
  for (std::size_t r = 0; r < eq_matrix.size(); ++r) {
    if (eq_matrix[r].size() != n)
      throw std::invalid_argument("LinearProgram: row " + std::to_string(r) +
                                  " has wrong column count");
    for (double v : eq_matrix[r])
      if (!finite(v)) throw std::invalid_argument("LinearProgram: non-finite matrix entry");
    if (!finite(eq_rhs[r])) throw std::invalid_argument("LinearProgram: non-finite rhs");
  }
}

std::string to_string(LpStatus s) {
  switch (s) {
    case LpStatus::optimal: return "optimal";
    case LpStatus::infeasible: return "infeasible";
    case LpStatus::unbounded: return "unbounded";
  }
  return "?";
}

namespace {

struct Tableau {
  std::size_t m = 0, cols = 0;  // cols excludes the rhs column
  std::vector<std::vector<double>> t;  // m rows of cols+1 entries
  std::vector<double> obj;             // reduced costs (cols) and -value at [cols]
  std::vector<std::size_t> basis;
  std::size_t iterations = 0;

  void pivot(std::size_t r, std::size_t c) {
    const double pv = t[r][c];
    for (auto& v : t[r]) v /= pv;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == r || t[i][c] == 0.0) continue;
      const double f = t[i][c];
      for (std::size_t j = 0; j <= cols; ++j) t[i][j] -= f * t[r][j];
    }
    if (obj[c] != 0.0) {
      const double f = obj[c];
      for (std::size_t j = 0; j <= cols; ++j) obj[j] -= f * t[r][j];
    }
    basis[r] = c;
    ++iterations;
  }

  void set_objective(const std::vector<double>& c) {
    obj.assign(cols + 1, 0.0);
    for (std::size_t j = 0; j < c.size(); ++j) obj[j] = c[j];
    for (std::size_t i = 0; i < m; ++i) {
      const double cb = obj[basis[i]];
      if (cb == 0.0) continue;
      for (std::size_t j = 0; j <= cols; ++j) obj[j] -= cb * t[i][j];
    }
  }

  // Returns false if unbounded. `allowed` limits the entering candidates.
  bool optimize(std::size_t allowed) {
    while (true) {
      std::size_t enter = cols;
      for (std::size_t j = 0; j < allowed; ++j)
        if (obj[j] > lp_pivot_tol) {
          enter = j;
          break;
        }
      if (enter == cols) return true;
      std::size_t leave = m;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < m; ++i) {
        if (t[i][enter] <= lp_pivot_tol) continue;
        const double ratio = t[i][cols] / t[i][enter];
        if (ratio < best - 1e-12 ||
            (std::abs(ratio - best) <= 1e-12 && leave < m && basis[i] < basis[leave])) {
          best = ratio;
          leave = i;
        }
      }
      if (leave == m) return false;
      pivot(leave, enter);
    }
  }
};

}  // namespace

LpSolution solve_max(const LinearProgram& lp) {
  lp.check();
  const std::size_t n = lp.variables();
  const std::size_t m = lp.constraints();
  Tableau tab;
  tab.m = m;
  tab.cols = n + m;
  tab.t.assign(m, std::vector<double>(tab.cols + 1, 0.0));
  tab.basis.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double sign = lp.eq_rhs[i] < 0 ? -1.0 : 1.0;
    for (std::size_t j = 0; j < n; ++j) tab.t[i][j] = sign * lp.eq_matrix[i][j];
    tab.t[i][n + i] = 1.0;
    tab.t[i][tab.cols] = sign * lp.eq_rhs[i];
    tab.basis[i] = n + i;
  }

  // Phase 1: maximize -(sum of artificials).
  std::vector<double> c1(tab.cols, 0.0);
  for (std::size_t i = 0; i < m; ++i) c1[n + i] = -1.0;
  tab.set_objective(c1);
  tab.optimize(tab.cols);
  LpSolution sol;
  if (-tab.obj[tab.cols] < -lp_feas_tol) {
    sol.status = LpStatus::infeasible;
    sol.iterations = tab.iterations;
    return sol;
  }
  // Drive artificial variables out of the basis; drop redundant rows.
  for (std::size_t i = 0; i < tab.m;) {
    if (tab.basis[i] < n) {
      ++i;
      continue;
    }
    std::size_t col = n;
    for (std::size_t j = 0; j < n; ++j)
      if (std::abs(tab.t[i][j]) > lp_pivot_tol) {
        col = j;
        break;
      }
    if (col < n) {
      tab.pivot(i, col);
      ++i;
    } else {
      tab.t.erase(tab.t.begin() + static_cast<std::ptrdiff_t>(i));
      tab.basis.erase(tab.basis.begin() + static_cast<std::ptrdiff_t>(i));
      --tab.m;
    }
  }

  // Phase 2 over the original variables only.
  tab.set_objective(lp.objective);
  const bool bounded = tab.optimize(n);
  sol.iterations = tab.iterations;
  sol.basis = tab.basis;
  if (!bounded) {
    sol.status = LpStatus::unbounded;
    return sol;
  }
  sol.status = LpStatus::optimal;
  sol.x.assign(n, 0.0);
  for (std::size_t i = 0; i < tab.m; ++i)
    if (tab.basis[i] < n) sol.x[tab.basis[i]] = tab.t[i][tab.cols];
  for (std::size_t j = 0; j < n; ++j) sol.objective_value += lp.objective[j] * sol.x[j];
  return sol;
}

double lp_residual(const LinearProgram& lp, const std::vector<double>& x) {
  if (x.size() != lp.variables()) throw std::invalid_argument("lp_residual: wrong x length");
  double worst = 0.0;
  for (std::size_t i = 0; i < lp.constraints(); ++i) {
    double s = -lp.eq_rhs[i];
    for (std::size_t j = 0; j < x.size(); ++j) s += lp.eq_matrix[i][j] * x[j];
    worst = std::max(worst, std::abs(s));
  }
  return worst;
}

std::string lp_to_json(const LinearProgram& lp) {
  nlohmann::json j;
  j["names"] = lp.names;
  j["c"] = lp.objective;
  j["A"] = lp.eq_matrix;
  j["b"] = lp.eq_rhs;
  return j.dump(2);
}

LinearProgram lp_from_json(const std::string& text) {
  LinearProgram lp;
  try {
    const auto j = nlohmann::json::parse(text);
    lp.names = j.value("names", std::vector<std::string>{});
    lp.objective = j.at("c").get<std::vector<double>>();
    lp.eq_matrix = j.at("A").get<std::vector<std::vector<double>>>();
    lp.eq_rhs = j.at("b").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("lp_from_json: ") + e.what());
  }
  lp.check();
  return lp;
}

}  // namespace qsteg
