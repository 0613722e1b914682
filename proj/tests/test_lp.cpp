#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "qsteg/lp.hpp"

using namespace qsteg;

namespace {

// Random bounded program: a normalizing row sum(x) = s plus up to three random
// equality rows whose right-hand side comes from a known nonnegative point.
LinearProgram random_program(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> nvar(2, 8), coef(-3, 3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  LinearProgram lp;
  const int n = nvar(rng);
  for (int j = 0; j < n; ++j) lp.add_variable("x" + std::to_string(j), coef(rng));
  std::vector<double> x0(n);
  for (auto& v : x0) v = u(rng) < 0.3 ? 0.0 : u(rng);  // zeros make degenerate vertices likely
  double s = 0;
  for (double v : x0) s += v;
  const auto r0 = lp.add_row(s);
  for (int j = 0; j < n; ++j) lp.set(r0, j, 1.0);
  const int extra = static_cast<int>(rng() % 4);
  for (int i = 0; i < extra && i + 1 < n; ++i) {
    std::vector<double> a(n);
    double rhs = 0;
    for (int j = 0; j < n; ++j) {
      a[j] = coef(rng);
      rhs += a[j] * x0[j];
    }
    const auto r = lp.add_row(rhs);
    for (int j = 0; j < n; ++j) lp.set(r, j, a[j]);
  }
  // Occasionally duplicate a row so the constraint matrix is rank deficient.
  if (rng() % 5 == 0) {
    const auto r = lp.add_row(lp.eq_rhs[0] * 2);
    for (int j = 0; j < n; ++j) lp.set(r, j, 2.0);
  }
  return lp;
}

}  // namespace

TEST_CASE("simplex matches brute-force vertex enumeration", "[lp][oracle]") {
  std::mt19937_64 rng(20240601);
  for (int t = 0; t < 100; ++t) {
    const auto lp = random_program(rng);
    INFO("program " << t << "\n" << lp_to_json(lp));
    const auto sol = solve_max(lp);
    const auto ref = oracle::vertex_enumeration(lp.objective, lp.eq_matrix, lp.eq_rhs);
    REQUIRE(ref.feasible);
    REQUIRE(sol.status == LpStatus::optimal);
    CHECK(std::abs(sol.objective_value - ref.objective) <= 1e-8);
    CHECK(lp_residual(lp, sol.x) <= 1e-8);
    for (double v : sol.x) CHECK(v >= -lp_feas_tol);
  }
}

TEST_CASE("infeasible and unbounded programs are reported", "[lp]") {
  LinearProgram inf;
  inf.add_variable("a", 1);
  inf.add_variable("b", 1);
  auto r = inf.add_row(-1);
  inf.set(r, 0, 1);
  inf.set(r, 1, 1);
  CHECK(solve_max(inf).status == LpStatus::infeasible);

  LinearProgram unb;
  unb.add_variable("a", 1);
  unb.add_variable("b", 0);
  r = unb.add_row(0);
  unb.set(r, 0, 1);
  unb.set(r, 1, -1);
  CHECK(solve_max(unb).status == LpStatus::unbounded);
  CHECK(to_string(LpStatus::unbounded) == "unbounded");
}

TEST_CASE("degenerate program terminates under Bland's rule", "[lp]") {
  // Beale-style cycling example, written with slacks as equalities.
  LinearProgram lp;
  const double c[] = {0.75, -20, 0.5, -6, 0, 0, 0};
  for (int j = 0; j < 7; ++j) lp.add_variable("v" + std::to_string(j), c[j]);
  const double a[3][7] = {{0.25, -8, -1, 9, 1, 0, 0}, {0.5, -12, -0.5, 3, 0, 1, 0}, {0, 0, 1, 0, 0, 0, 1}};
  const double b[3] = {0, 0, 1};
  for (int i = 0; i < 3; ++i) {
    const auto r = lp.add_row(b[i]);
    for (int j = 0; j < 7; ++j) lp.set(r, j, a[i][j]);
  }
  const auto sol = solve_max(lp);
  REQUIRE(sol.status == LpStatus::optimal);
  const auto ref = oracle::vertex_enumeration(lp.objective, lp.eq_matrix, lp.eq_rhs);
  CHECK(std::abs(sol.objective_value - ref.objective) <= 1e-9);
}

TEST_CASE("shape and data checks", "[lp]") {
  LinearProgram lp;
  lp.add_variable("a", 1);
  lp.eq_matrix.push_back({1.0, 2.0});
  lp.eq_rhs.push_back(1.0);
  CHECK_THROWS_AS(lp.check(), std::invalid_argument);
  CHECK_THROWS_AS(solve_max(lp), std::invalid_argument);

  LinearProgram nan;
  nan.add_variable("a", std::nan(""));
  CHECK_THROWS_AS(nan.check(), std::invalid_argument);
}

TEST_CASE("JSON round trip", "[lp]") {
  std::mt19937_64 rng(77);
  for (int t = 0; t < 10; ++t) {
    const auto lp = random_program(rng);
    const auto back = lp_from_json(lp_to_json(lp));
    CHECK(back.objective == lp.objective);
    CHECK(back.eq_matrix == lp.eq_matrix);
    CHECK(back.eq_rhs == lp.eq_rhs);
    CHECK(back.names == lp.names);
  }
  CHECK_THROWS_AS(lp_from_json("{not json"), std::invalid_argument);
}
