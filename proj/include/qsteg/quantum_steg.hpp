#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace qsteg {

enum class ChannelKind { bsc, depolarizing };
std::string to_string(ChannelKind k);
ChannelKind parse_channel_kind(const std::string& s);

struct ChannelSpec {
  ChannelKind kind = ChannelKind::bsc;
  double p = 0.0;   // rate Eve expects
  double dp = 0.0;  // excess the stego channel adds
  long N = 1;
  void check() const;
};

double binary_entropy(double p);
// Single-use entropy: h(p) for the BSC, -(1-p)log2(1-p) - p log2(p/3) for the
// depolarizing channel.
double channel_entropy(ChannelKind kind, double p);
double channel_entropy(const ChannelSpec& spec);

struct DiamondNorm {
  double norm = 0.0;
  double p_opt = 0.5;  // optimal probability of telling the channels apart
};

// sum_j C(N,j) |r^j (1-r)^(N-j) - p^j (1-p)^(N-j)| with r = p + dp, summed in
// log space so N up to ~1e7 is fine.
DiamondNorm diamond_norm_iid(const ChannelSpec& spec);

struct RateReport {
  double stego_rate = 0.0;  // stego (qu)bits per channel use
  double key_rate = 0.0;    // key bits per channel use
  double security = 0.0;    // diamond-norm bound
  std::vector<std::string> notes;
};

struct Protocol1Report {
  RateReport rate;
  double M = 0.0;              // stego qubits per block, (4/3) p N (1 - delta)
  double key_bits = 0.0;       // log2 C(N, M) + 2M
  double tail_threshold = 0.0; // sqrt((1 - 4p/3) / ((4p/3) N))
  bool tail_ok = false;        // delta >= 3 * tail_threshold
  // Variant where the wire itself is depolarizing at rate p and Alice adds q.
  double noisy_q = 0.0;            // dp / (1 - 4p/3)
  double noisy_M = 0.0;            // 4 q N / 3
  double noisy_key_rate_exact = 0.0;
  double noisy_key_rate_closed = 0.0;
};

// Closed-form key consumption rate H2(b) + 2b, b = 4dp/(3 - 4p).
double protocol1_key_rate_closed(double p, double dp);
Protocol1Report protocol1_report(const ChannelSpec& spec, double delta);

struct TypicalSetPartition {
  long N = 0;
  double p = 0.0, delta = 0.0;
  long weight_lo = 0, weight_hi = 0;  // inclusive weight window
  double window_mass = 0.0;
  long C = 0;
  std::vector<std::vector<std::uint32_t>> sets;  // bit strings, bit i = position i
  std::vector<double> set_probs;
  double max_ratio = 1.0;  // max over sets of max(P/target, target/P), target = mass/C
  std::size_t strings = 0;
};

// Greedy largest-first filling of C bins with the strings whose weight lies in
// [ceil(Np(1-delta)), floor(Np(1+delta))]; N <= 20.
TypicalSetPartition typical_set_partition(long N, double p, double delta);

struct Protocol2Report {
  RateReport rate;
  double stego_bits = 0.0;  // M = log2 C
  double log2_C = 0.0;
  double twirl_key_rate = 0.0;
  double selection_key_rate = 0.0;
  double window_mass = 0.0;
  bool zero_rate = false;
  std::optional<TypicalSetPartition> partition;
};

Protocol2Report protocol2_report(const ChannelSpec& spec, double delta, double epsilon = 0.0);

struct NoisyRate {
  double rate = 0.0;
  double q_opt = 0.0;
  double comparator = 0.0;  // 2 dp (1 - h(p)) / (1 - 2p)
};

NoisyRate protocol2_noisy_rate(double p, double dp);

}  // namespace qsteg
