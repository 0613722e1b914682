#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "qsteg/lp.hpp"

namespace qsteg {

// 4x4 pair-selection probabilities q[j][k] over the syndromes of the [3,1,3]
// repetition code (0 = no flip, 1..3 = flip on bit 1..3).
using PairMatrix = std::array<std::array<double, 4>, 4>;

struct ThreeBitClosedForms {
  double q00_spread = 0, navg_spread = 0;
  double q00_packed = 0, navg_packed = 0;
  PairMatrix spread{}, packed{};
};

// Probability of no syndrome / of one particular nonzero syndrome for the
// repetition code over a binary symmetric channel with flip rate p.
double repetition3_p0(double p);
double repetition3_p1(double p);

ThreeBitClosedForms three_bit_closed_forms(double p);

// Max-norm residual of p_j = 1/2 sum_k (q_jk + q_kj) and sum q = 1.
double three_bit_constraint_residual(const PairMatrix& q, double p);

// cond[l][j] = probability that intended syndrome j is received as l when the
// wire flips each bit independently with probability `rate`.
PairMatrix repetition3_conditional(double rate);

struct NoisyThreeBit {
  double p0 = 0, p1 = 0;          // channel rates at p
  double p0_eff = 0, p1_eff = 0;  // linearized effective rates at p + dp
  double alpha = 0, beta = 0, gamma = 0;
  PairMatrix q{};                 // the printed assignment, q00 from the boxed formula
  double q00_boxed = 0;
  double q00_from_l0_row = 0;     // q00 solved from the l = 0 channel row
  double n_avg_boxed = 0;
  double n_avg_sum = 0;           // sum of the off-diagonal entries of q
  std::array<double, 4> row_residuals{};  // p_l' - 1/2 sum q_jk (p(l|j)+p(l|k))
  std::vector<int> failing_rows;          // rows with |residual| > 1e-12
};

NoisyThreeBit three_bit_noisy_closed_forms(double p, double dp);

struct SyndromeClassSpec {
  std::vector<int> sizes;
  std::vector<double> probs;  // per-syndrome probability inside each class

  void check() const;
  // 1 - sum n_k p_k; the mass of errors the classes do not model.
  double unmodeled_mass() const;
  // -sum n_k p_k log2 p_k over the modeled syndromes.
  double entropy() const;
};

// Classes of syndromes by error weight for the length-n repetition code
// (n odd); class k collects the C(n,k) patterns of weight k for k <= (n-1)/2
// with p_k = p^k (1-p)^(n-k) + p^(n-k) (1-p)^k.
SyndromeClassSpec repetition_class_spec(int n, double p);

enum class PayloadWeighting { floor_log2, fixed_table };

struct ClassTuple {
  std::vector<int> counts;  // j_k
  int total = 0;
};

std::vector<ClassTuple> class_tuples(const SyndromeClassSpec& spec);
std::string tuple_name(const ClassTuple& t);  // "Q13" style
double tuple_payload(const ClassTuple& t, PayloadWeighting w);

LinearProgram build_class_lp(const SyndromeClassSpec& spec,
                             PayloadWeighting weighting = PayloadWeighting::floor_log2);

enum class TieRule { strict, half_credit };

// Probability of decoding the hidden bit correctly when bit 0 selects syndrome
// j and bit 1 selects k, with maximum-likelihood decoding under `cond`.
double p_correct(const PairMatrix& cond, int j, int k, TieRule rule = TieRule::strict);

// Constraints of the noiseless class LP at p + dp; objective counts bits that
// survive noise of rate dp. Only the 3-bit spec is supported.
LinearProgram build_noisy_class_lp(double p, double dp, TieRule rule = TieRule::strict);

struct InnerOuterSpec {
  int N = 0;
  int M = 0;
  double p = 0;
  double dp = 0;
  void check() const;
};

enum class InnerOuterMode { three_in_N, M_in_N };

LinearProgram build_inner_outer_lp(const InnerOuterSpec& spec, InnerOuterMode mode);

struct RateCurvePoint {
  double p = 0, dp = 0;
  double n_avg = 0;
  double key_bits = 0;
  double entropy = 0;
};

// LP optimum for a class spec together with its key cost: a tuple spends
// log2 prod C(n_k, j_k) bits choosing its syndromes plus one pad bit per
// hidden bit.
RateCurvePoint class_lp_point(const SyndromeClassSpec& spec, double p,
                              PayloadWeighting weighting = PayloadWeighting::floor_log2);
// Hidden bits per N-bit block for an inner-outer LP (M times the probability of
// using the inner code); entropy is N h(p + dp).
RateCurvePoint inner_outer_point(const InnerOuterSpec& spec, InnerOuterMode mode);
RateCurvePoint noisy_class_point(double p, double dp, TieRule rule = TieRule::strict);

double log2_binomial(double n, double k);

// Closed-form asymptotic key consumption rate for emulating a BSC of rate
// p + dp on top of a BSC of rate p.
double classical_key_rate(double p, double dp);
// log2 C(N, M) + M
double exact_key_bits(long N, long M);
// M = ceil(2 N dp / (1 - 2p)) for the given block length.
long classical_stego_flips(long N, double p, double dp);

}  // namespace qsteg
