#include "qsteg/classical_steg.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

namespace qsteg {

namespace {

void require_rate(double p, const char* who) {
  if (!(p >= 0.0 && p <= 0.5))
    throw std::invalid_argument(std::string(who) + ": p must lie in [0, 1/2]");
}

void require_noisy_rates(double p, double dp, const char* who) {
  if (!(p >= 0.0) || !(dp >= 0.0))
    throw std::invalid_argument(std::string(who) + ": p and dp must be non-negative");
  if (!(p + dp < 0.5))
    throw std::invalid_argument(std::string(who) + ": p + dp must be below 1/2");
}

double xlog2x(double x) { return x > 0.0 ? x * std::log2(x) : 0.0; }

}  // namespace

double repetition3_p0(double p) { return (1 - p) * (1 - p) * (1 - p) + p * p * p; }
double repetition3_p1(double p) { return p * (1 - p); }

ThreeBitClosedForms three_bit_closed_forms(double p) {
  require_rate(p, "three_bit_closed_forms");
  ThreeBitClosedForms out;
  const double pq = p * (1 - p);
  out.q00_spread = 4 * p * p - 4 * p + 1;
  out.navg_spread = 4 * pq;
  out.q00_packed = 6 * p * p - 6 * p + 1;
  out.navg_packed = 6 * pq;

  // Spread: every ordered pair of distinct syndromes equally likely.
  for (int j = 0; j < 4; ++j)
    for (int k = 0; k < 4; ++k) out.spread[j][k] = j == k ? 0.0 : pq / 3;
  out.spread[0][0] = out.q00_spread;

  // Packed: the no-error syndrome always carries one half of the pair.
  for (int j = 1; j < 4; ++j) out.packed[0][j] = out.packed[j][0] = pq;
  out.packed[0][0] = out.q00_packed;
  return out;
}

double three_bit_constraint_residual(const PairMatrix& q, double p) {
  const double target[4] = {repetition3_p0(p), repetition3_p1(p), repetition3_p1(p),
                            repetition3_p1(p)};
  double worst = 0.0, total = 0.0;
  for (int j = 0; j < 4; ++j) {
    double s = 0.0;
    for (int k = 0; k < 4; ++k) {
      s += 0.5 * (q[j][k] + q[k][j]);
      total += q[j][k];
    }
    worst = std::max(worst, std::abs(s - target[j]));
  }
  return std::max(worst, std::abs(total - 1.0));
}

PairMatrix repetition3_conditional(double rate) {
  if (!(rate >= 0.0 && rate <= 1.0))
    throw std::invalid_argument("repetition3_conditional: rate must lie in [0, 1]");
  // Syndrome of a 3-bit flip pattern: 0 for 000/111, else the position of the
  // odd bit out (bit 1 = most significant).
  auto syn = [](int pattern) {
    switch (pattern) {
      case 0b000: case 0b111: return 0;
      case 0b100: case 0b011: return 1;
      case 0b010: case 0b101: return 2;
      default: return 3;
    }
  };
  const int rep[4] = {0b000, 0b100, 0b010, 0b001};
  PairMatrix cond{};
  for (int j = 0; j < 4; ++j)
    for (int e = 0; e < 8; ++e) {
      const int w = std::popcount(static_cast<unsigned>(e));
      const double pr = std::pow(rate, w) * std::pow(1 - rate, 3 - w);
      cond[syn(rep[j] ^ e)][j] += pr;
    }
  return cond;
}

NoisyThreeBit three_bit_noisy_closed_forms(double p, double dp) {
  require_noisy_rates(p, dp, "three_bit_noisy_closed_forms");
  if (p == 0.0)
    throw std::domain_error("three_bit_noisy_closed_forms: the solution divides by p(1-p), so p must be positive");
  NoisyThreeBit r;
  r.p0 = repetition3_p0(p);
  r.p1 = repetition3_p1(p);
  const double p0 = r.p0, p1 = r.p1;
  r.p0_eff = 1 - 3 * p * (1 - p) - 3 * dp * (1 - 2 * p);
  r.p1_eff = p * (1 - p - dp) + dp * (1 - p);
  const double p1e = r.p1_eff;
  r.alpha = 0.5 * (p0 + p1) / p0;
  r.beta = p1 / p0;
  r.gamma = 0.5 * (p0 + p1) * ((2.0 / 5) * p1e / (p0 + p1) + 0.25 * p1e / p1) +
            p1 * (2.0 / 5) * p1e / (p0 + p1);

  const double a = 0.2 * p1e / (p0 + p1);
  const double b = 0.125 * p1e / p1;
  auto& q = r.q;
  q[1][0] = q[1][2] = q[1][3] = q[2][1] = q[3][1] = a;
  q[2][0] = q[2][3] = q[3][0] = q[3][2] = b;
  q[0][1] = q[0][3] = (p1e - r.gamma) / (3 * p1);
  q[0][2] = (2.0 / 3) * (p1e - r.gamma) / (p0 + p1);

  r.q00_boxed = r.p0_eff / p0 - 0.2 * (r.alpha + 4 * r.beta) * (p1e / (p0 + p1)) -
                0.25 * (r.alpha + r.beta) * p1e / p1 -
                (2.0 / 3) * r.alpha * ((p1e - r.gamma) / p1) * (p0 / (p0 + p1));
  q[0][0] = r.q00_boxed;

  r.n_avg_boxed = (2.0 / 3) * (p1e - r.gamma) * (p0 + 2 * p1) / (p1 * (p0 + p1)) +
                  p1e * (p0 + 3 * p1) / (2 * p1 * (p0 + p1));
  for (int j = 0; j < 4; ++j)
    for (int k = 0; k < 4; ++k)
      if (j != k) r.n_avg_sum += q[j][k];

  const PairMatrix cond = repetition3_conditional(p);
  const double target[4] = {r.p0_eff, p1e, p1e, p1e};
  for (int l = 0; l < 4; ++l) {
    double s = 0.0;
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k) s += 0.5 * q[j][k] * (cond[l][j] + cond[l][k]);
    r.row_residuals[l] = target[l] - s;
    if (std::abs(r.row_residuals[l]) > 1e-12) r.failing_rows.push_back(l);
  }
  // Solve the l = 0 row for q00 with every other entry held fixed.
  double rest = 0.0;
  for (int j = 0; j < 4; ++j)
    for (int k = 0; k < 4; ++k)
      if (j != 0 || k != 0) rest += 0.5 * q[j][k] * (cond[0][j] + cond[0][k]);
  r.q00_from_l0_row = (r.p0_eff - rest) / cond[0][0];
  return r;
}

void SyndromeClassSpec::check() const {
  if (sizes.empty()) throw std::invalid_argument("SyndromeClassSpec: no classes");
  if (sizes.size() != probs.size())
    throw std::invalid_argument("SyndromeClassSpec: sizes and probabilities differ in length");
  double mass = 0.0;
  for (std::size_t k = 0; k < sizes.size(); ++k) {
    if (sizes[k] < 1)
      throw std::invalid_argument("SyndromeClassSpec: class " + std::to_string(k) + " is empty");
    if (!(probs[k] >= 0.0 && probs[k] <= 1.0))
      throw std::invalid_argument("SyndromeClassSpec: probability of class " + std::to_string(k) +
                                  " outside [0, 1]");
    mass += sizes[k] * probs[k];
  }
  if (mass > 1.0 + 1e-9)
    throw std::invalid_argument("SyndromeClassSpec: class probabilities exceed total mass 1");
}

double SyndromeClassSpec::unmodeled_mass() const {
  double mass = 0.0;
  for (std::size_t k = 0; k < sizes.size(); ++k) mass += sizes[k] * probs[k];
  return 1.0 - mass;
}

double SyndromeClassSpec::entropy() const {
  double h = 0.0;
  for (std::size_t k = 0; k < sizes.size(); ++k) h -= sizes[k] * xlog2x(probs[k]);
  return h;
}

SyndromeClassSpec repetition_class_spec(int n, double p) {
  if (n < 1 || n % 2 == 0)
    throw std::invalid_argument("repetition_class_spec: length must be odd and positive");
  require_rate(p, "repetition_class_spec");
  SyndromeClassSpec spec;
  for (int k = 0; k <= (n - 1) / 2; ++k) {
    spec.sizes.push_back(static_cast<int>(std::lround(std::exp2(log2_binomial(n, k)))));
    spec.probs.push_back(std::pow(p, k) * std::pow(1 - p, n - k) +
                         std::pow(p, n - k) * std::pow(1 - p, k));
  }
  return spec;
}

std::vector<ClassTuple> class_tuples(const SyndromeClassSpec& spec) {
  spec.check();
  std::vector<ClassTuple> out;
  ClassTuple cur;
  cur.counts.assign(spec.sizes.size(), 0);
  // Odometer over 0 <= j_k <= n_k.
  while (true) {
    const int total = std::accumulate(cur.counts.begin(), cur.counts.end(), 0);
    if (total > 0 && (total & (total - 1)) == 0) {
      cur.total = total;
      out.push_back(cur);
    }
    std::size_t k = 0;
    while (k < cur.counts.size() && cur.counts[k] == spec.sizes[k]) cur.counts[k++] = 0;
    if (k == cur.counts.size()) break;
    ++cur.counts[k];
  }
  std::sort(out.begin(), out.end(), [](const ClassTuple& a, const ClassTuple& b) {
    if (a.total != b.total) return a.total < b.total;
    return a.counts > b.counts;
  });
  return out;
}

std::string tuple_name(const ClassTuple& t) {
  const bool wide = std::any_of(t.counts.begin(), t.counts.end(), [](int c) { return c > 9; });
  std::string s = "Q";
  for (std::size_t k = 0; k < t.counts.size(); ++k) {
    if (wide && k > 0) s += '_';
    s += std::to_string(t.counts[k]);
  }
  return s;
}

double tuple_payload(const ClassTuple& t, PayloadWeighting w) {
  if (t.total < 1) throw std::invalid_argument("tuple_payload: tuple uses no syndrome");
  if (w == PayloadWeighting::floor_log2) return std::floor(std::log2(static_cast<double>(t.total)));
  static const std::map<int, double> table = {{1, 0}, {2, 1}, {4, 2}, {8, 3}, {16, 4}};
  const auto it = table.find(t.total);
  if (it == table.end())
    throw std::invalid_argument("tuple_payload: no fixed payload for " + std::to_string(t.total) +
                                " syndromes");
  return it->second;
}

LinearProgram build_class_lp(const SyndromeClassSpec& spec, PayloadWeighting weighting) {
  const auto tuples = class_tuples(spec);
  LinearProgram lp;
  for (const auto& t : tuples) lp.add_variable(tuple_name(t), tuple_payload(t, weighting));
  const std::size_t m = spec.sizes.size();
  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t row = lp.add_row(spec.probs[k]);
    for (std::size_t v = 0; v < tuples.size(); ++v) {
      const auto& t = tuples[v];
      if (t.counts[k] == 0) continue;
      lp.set(row, v, static_cast<double>(t.counts[k]) / spec.sizes[k] / t.total);
    }
  }
  const double missing = spec.unmodeled_mass();
  if (missing > 1e-12) lp.add_variable("unmodeled", 0.0);
  const std::size_t total = lp.add_row(1.0);
  for (std::size_t v = 0; v < lp.variables(); ++v) lp.set(total, v, 1.0);
  return lp;
}

double p_correct(const PairMatrix& cond, int j, int k, TieRule rule) {
  if (j < 0 || j > 3 || k < 0 || k > 3) throw std::invalid_argument("p_correct: syndrome out of range");
  double s = 0.0;
  for (int l = 0; l < 4; ++l) {
    const double a = cond[l][j], b = cond[l][k];
    if (a > b) s += a;
    else if (b > a) s += b;
    else if (rule == TieRule::half_credit) s += 0.5 * (a + b);
  }
  return 0.5 * s;
}

LinearProgram build_noisy_class_lp(double p, double dp, TieRule rule) {
  require_noisy_rates(p, dp, "build_noisy_class_lp");
  const auto spec = repetition_class_spec(3, p + dp);
  LinearProgram lp = build_class_lp(spec);
  const PairMatrix cond = repetition3_conditional(dp);
  const auto tuples = class_tuples(spec);
  // Two-bit label a is sent as syndrome a; received l decodes to label l.
  double two_bit = 0.0;
  for (int l = 0; l < 4; ++l)
    two_bit += cond[l][0] * (2 - std::popcount(static_cast<unsigned>(l)));
  for (std::size_t v = 0; v < tuples.size(); ++v) {
    const auto& t = tuples[v];
    double c = 0.0;
    if (t.total == 2)
      c = t.counts[0] == 1 ? p_correct(cond, 0, 1, rule) : p_correct(cond, 1, 2, rule);
    else if (t.total == 4)
      c = two_bit;
    lp.objective[v] = c;
  }
  return lp;
}

void InnerOuterSpec::check() const {
  if (M < 1 || M >= N) throw std::invalid_argument("InnerOuterSpec: need 1 <= M < N");
  require_noisy_rates(p, dp, "InnerOuterSpec");
}

LinearProgram build_inner_outer_lp(const InnerOuterSpec& spec, InnerOuterMode mode) {
  spec.check();
  const int N = spec.N;
  const double r = spec.p + spec.dp;
  LinearProgram lp;
  // (variable, total weight) for each payload variable.
  std::vector<std::pair<std::size_t, int>> ys;
  std::vector<std::size_t> slack;

  if (mode == InnerOuterMode::three_in_N) {
    if (spec.M != 3) throw std::invalid_argument("build_inner_outer_lp: three_in_N needs M = 3");
    // Inner weight of the 3 inner bits for (stego bit i, encoding bit j).
    const int inner[2][2] = {{0, 1}, {3, 2}};
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k <= N - 3; ++k) {
          const auto v = lp.add_variable(
              "Y" + std::to_string(i) + std::to_string(j) + "_" + std::to_string(k), 1.0);
          ys.emplace_back(v, inner[i][j] + k);
        }
  } else {
    const int M = spec.M;
    for (int i = 0; i <= M; ++i)
      for (int j = 0; j <= N - M; ++j) {
        const auto v = lp.add_variable("Y" + std::to_string(i) + "_" + std::to_string(j), 1.0);
        ys.emplace_back(v, i + j);
      }
  }
  for (int w = 0; w <= N; ++w) slack.push_back(lp.add_variable("q" + std::to_string(w), 0.0));

  for (int w = 0; w <= N; ++w) {
    const double pw = std::exp2(log2_binomial(N, w)) * std::pow(r, w) * std::pow(1 - r, N - w);
    const auto row = lp.add_row(pw);
    for (const auto& [v, wt] : ys)
      if (wt == w) lp.set(row, v, 1.0);
    lp.set(row, slack[w], 1.0);
  }

  if (mode == InnerOuterMode::three_in_N) {
    // Stego bit independent of the encoding bit: Y~_0j = Y~_1j.
    const int per = N - 2;
    for (int j = 0; j < 2; ++j) {
      const auto row = lp.add_row(0.0);
      for (int k = 0; k < per; ++k) {
        lp.set(row, ys[(0 * 2 + j) * per + k].first, 1.0);
        lp.set(row, ys[(1 * 2 + j) * per + k].first, -1.0);
      }
    }
  } else {
    const int M = spec.M, outer = N - M + 1;
    for (int k = 0; k <= M; ++k) {
      const double share = std::exp2(log2_binomial(M, k) - M);
      const auto row = lp.add_row(0.0);
      for (const auto& [v, wt] : ys) lp.set(row, v, -share);
      for (int j = 0; j < outer; ++j) lp.eq_matrix[row][ys[k * outer + j].first] += 1.0;
    }
  }

  const auto total = lp.add_row(1.0);
  for (std::size_t v = 0; v < lp.variables(); ++v) lp.set(total, v, 1.0);
  return lp;
}

namespace {

double binary_h(double p) { return -xlog2x(p) - xlog2x(1 - p); }

}  // namespace

RateCurvePoint class_lp_point(const SyndromeClassSpec& spec, double p, PayloadWeighting weighting) {
  const auto lp = build_class_lp(spec, weighting);
  const auto sol = solve_max(lp);
  if (sol.status != LpStatus::optimal)
    throw std::runtime_error("class_lp_point: LP " + to_string(sol.status));
  const auto tuples = class_tuples(spec);
  RateCurvePoint pt;
  pt.p = p;
  pt.n_avg = sol.objective_value;
  for (std::size_t v = 0; v < tuples.size(); ++v) {
    double choose = 0.0;
    for (std::size_t k = 0; k < spec.sizes.size(); ++k)
      choose += log2_binomial(spec.sizes[k], tuples[v].counts[k]);
    pt.key_bits += sol.x[v] * (choose + tuple_payload(tuples[v], weighting));
  }
  pt.entropy = spec.entropy();
  return pt;
}

RateCurvePoint noisy_class_point(double p, double dp, TieRule rule) {
  const auto lp = build_noisy_class_lp(p, dp, rule);
  const auto sol = solve_max(lp);
  if (sol.status != LpStatus::optimal)
    throw std::runtime_error("noisy_class_point: LP " + to_string(sol.status));
  const auto spec = repetition_class_spec(3, p + dp);
  const auto tuples = class_tuples(spec);
  RateCurvePoint pt;
  pt.p = p;
  pt.dp = dp;
  pt.n_avg = sol.objective_value;
  for (std::size_t v = 0; v < tuples.size(); ++v) {
    double choose = 0.0;
    for (std::size_t k = 0; k < spec.sizes.size(); ++k)
      choose += log2_binomial(spec.sizes[k], tuples[v].counts[k]);
    pt.key_bits += sol.x[v] * (choose + tuple_payload(tuples[v], PayloadWeighting::floor_log2));
  }
  pt.entropy = spec.entropy();
  return pt;
}

RateCurvePoint inner_outer_point(const InnerOuterSpec& spec, InnerOuterMode mode) {
  const auto lp = build_inner_outer_lp(spec, mode);
  const auto sol = solve_max(lp);
  if (sol.status != LpStatus::optimal)
    throw std::runtime_error("inner_outer_point: LP " + to_string(sol.status));
  RateCurvePoint pt;
  pt.p = spec.p;
  pt.dp = spec.dp;
  const double bits = mode == InnerOuterMode::three_in_N ? 1.0 : spec.M;
  pt.n_avg = bits * sol.objective_value;
  // Choosing the inner positions plus the pad bits.
  pt.key_bits = sol.objective_value * (log2_binomial(spec.N, spec.M) + bits);
  pt.entropy = spec.N * binary_h(spec.p + spec.dp);
  return pt;
}

double log2_binomial(double n, double k) {
  if (k < 0 || k > n) throw std::invalid_argument("log2_binomial: need 0 <= k <= n");
  return (std::lgamma(n + 1) - std::lgamma(k + 1) - std::lgamma(n - k + 1)) / std::log(2.0);
}

double classical_key_rate(double p, double dp) {
  if (!(p >= 0.0) || !(dp >= 0.0) || !(p < 0.5))
    throw std::invalid_argument("classical_key_rate: need p in [0, 1/2) and dp >= 0");
  const double beta = (1 - 2 * (p + dp)) / (1 - 2 * p);
  if (beta <= 0.0)
    throw std::domain_error("classical_key_rate: p + dp must stay below 1/2 (beta <= 0)");
  if (dp == 0.0) return 0.0;
  const double q = dp / (1 - 2 * p);
  // 2q log2( beta / (q beta^(1/(2q))) ), expanded in logs to avoid overflow.
  return 2 * q * (std::log2(beta) - std::log2(q) - std::log2(beta) / (2 * q));
}

double exact_key_bits(long N, long M) {
  if (N < 0 || M < 0 || M > N) throw std::invalid_argument("exact_key_bits: need 0 <= M <= N");
  return log2_binomial(static_cast<double>(N), static_cast<double>(M)) + static_cast<double>(M);
}

long classical_stego_flips(long N, double p, double dp) {
  require_noisy_rates(p, dp, "classical_stego_flips");
  if (N < 1) throw std::invalid_argument("classical_stego_flips: N must be positive");
  const double x = 2.0 * N * dp / (1 - 2 * p);
  return static_cast<long>(std::ceil(x - 1e-9));
}

}  // namespace qsteg
