#include "qsteg/quantum_steg.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fmt/format.h>
#include <functional>
#include <limits>
#include <queue>
#include <stdexcept>

#include "qsteg/classical_steg.hpp"

namespace qsteg {

std::string to_string(ChannelKind k) { return k == ChannelKind::bsc ? "bsc" : "depolarizing"; }

ChannelKind parse_channel_kind(const std::string& s) {
  if (s == "bsc") return ChannelKind::bsc;
  if (s == "depolarizing" || s == "dc") return ChannelKind::depolarizing;
  throw std::invalid_argument("unknown channel kind '" + s + "' (expected bsc or depolarizing)");
}

void ChannelSpec::check() const {
  if (!(p >= 0.0) || !(dp >= 0.0))
    throw std::invalid_argument("ChannelSpec: p and dp must be non-negative");
  if (N < 1) throw std::invalid_argument("ChannelSpec: N must be at least 1");
  const double limit = kind == ChannelKind::bsc ? 0.5 : 0.75;
  if (p + dp > limit)
    throw std::invalid_argument(fmt::format("ChannelSpec: p + dp must not exceed {} for the {} channel",
                                            limit, to_string(kind)));
}

namespace {

double xlog2x(double x) { return x > 0.0 ? x * std::log2(x) : 0.0; }

// k ln x with 0 ln 0 = 0.
double klog(double k, double x) {
  if (k == 0.0) return 0.0;
  return x > 0.0 ? k * std::log(x) : -std::numeric_limits<double>::infinity();
}

}  // namespace

double binary_entropy(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("binary_entropy: p must lie in [0, 1]");
  return -xlog2x(p) - xlog2x(1 - p);
}

double channel_entropy(ChannelKind kind, double p) {
  if (kind == ChannelKind::bsc) return binary_entropy(p);
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("channel_entropy: p must lie in [0, 1]");
  return -xlog2x(1 - p) - (p > 0.0 ? p * std::log2(p / 3) : 0.0);
}

double channel_entropy(const ChannelSpec& spec) {
  spec.check();
  return channel_entropy(spec.kind, spec.p);
}

DiamondNorm diamond_norm_iid(const ChannelSpec& spec) {
  spec.check();
  const double p = spec.p, r = spec.p + spec.dp;
  const double n = static_cast<double>(spec.N);
  double norm = 0.0;
  for (long j = 0; j <= spec.N; ++j) {
    const double jj = static_cast<double>(j);
    const double lc = std::lgamma(n + 1) - std::lgamma(jj + 1) - std::lgamma(n - jj + 1);
    const double a = lc + klog(jj, r) + klog(n - jj, 1 - r);
    const double b = lc + klog(jj, p) + klog(n - jj, 1 - p);
    norm += std::abs(std::exp(a) - std::exp(b));
  }
  norm = std::min(norm, 2.0);
  return {norm, 0.5 + norm / 4};
}

double protocol1_key_rate_closed(double p, double dp) {
  if (!(p >= 0.0 && p < 0.75) || !(dp >= 0.0))
    throw std::invalid_argument("protocol1_key_rate_closed: need 0 <= p < 3/4 and dp >= 0");
  const double b = 4 * dp / (3 - 4 * p);
  if (!(b < 1.0)) throw std::domain_error("protocol1_key_rate_closed: 4dp/(3-4p) must be below 1");
  if (b == 0.0) return 0.0;
  // log2[(4/b)^b (1-b)^(b-1)]
  return b * std::log2(4 / b) + (b - 1) * std::log2(1 - b);
}

Protocol1Report protocol1_report(const ChannelSpec& spec, double delta) {
  spec.check();
  if (spec.kind != ChannelKind::depolarizing)
    throw std::invalid_argument("protocol1_report: the twirling protocol emulates a depolarizing channel");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("protocol1_report: delta must lie in (0, 1)");
  Protocol1Report r;
  const double N = static_cast<double>(spec.N);
  const double x = 4 * spec.p / 3;
  r.M = x * N * (1 - delta);
  r.key_bits = log2_binomial(N, r.M) + 2 * r.M;
  r.rate.stego_rate = x * (1 - delta);
  r.rate.key_rate = r.key_bits / N;
  r.rate.security = diamond_norm_iid(spec).norm;
  if (x > 0.0) {
    r.tail_threshold = std::sqrt((1 - x) / (x * N));
    r.tail_ok = delta >= 3 * r.tail_threshold;
  } else {
    r.tail_threshold = std::numeric_limits<double>::infinity();
  }
  if (!r.tail_ok)
    r.rate.notes.push_back(fmt::format(
        "binomial tail condition violated: delta={} < 3*sqrt((1-4p/3)/((4p/3)N))={}", delta,
        3 * r.tail_threshold));

  r.noisy_q = spec.dp / (1 - x);
  r.noisy_M = 4 * r.noisy_q * N / 3;
  if (r.noisy_M > N) throw std::domain_error("protocol1_report: dp too large, emulated errors exceed N");
  r.noisy_key_rate_exact = (log2_binomial(N, r.noisy_M) + 2 * r.noisy_M) / N;
  r.noisy_key_rate_closed = protocol1_key_rate_closed(spec.p, spec.dp);
  return r;
}

TypicalSetPartition typical_set_partition(long N, double p, double delta) {
  if (N < 1 || N > 20) throw std::invalid_argument("typical_set_partition: explicit partitions need 1 <= N <= 20");
  if (!(p > 0.0 && p < 0.5)) throw std::invalid_argument("typical_set_partition: p must lie in (0, 1/2)");
  if (!(delta >= 0.0 && delta < 1.0)) throw std::invalid_argument("typical_set_partition: delta must lie in [0, 1)");
  TypicalSetPartition t;
  t.N = N;
  t.p = p;
  t.delta = delta;
  const double mean = N * p;
  t.weight_lo = static_cast<long>(std::ceil(mean * (1 - delta) - 1e-9));
  t.weight_hi = static_cast<long>(std::floor(mean * (1 + delta) + 1e-9));
  if (t.weight_lo > t.weight_hi)
    throw std::domain_error("typical_set_partition: weight window is empty; widen delta");

  struct Item {
    std::uint32_t bits;
    double prob;
  };
  std::vector<Item> items;
  for (std::uint32_t s = 0; s < (1u << N); ++s) {
    const long w = std::popcount(s);
    if (w < t.weight_lo || w > t.weight_hi) continue;
    items.push_back({s, std::pow(p, w) * std::pow(1 - p, N - w)});
  }
  std::stable_sort(items.begin(), items.end(), [](const Item& a, const Item& b) { return a.prob > b.prob; });
  t.strings = items.size();
  for (const auto& it : items) t.window_mass += it.prob;
  const double qmax = items.front().prob;
  t.C = std::max<long>(1, std::lround(t.window_mass / qmax));

  t.sets.assign(static_cast<std::size_t>(t.C), {});
  t.set_probs.assign(static_cast<std::size_t>(t.C), 0.0);
  using Slot = std::pair<double, std::size_t>;
  std::priority_queue<Slot, std::vector<Slot>, std::greater<>> open;
  for (std::size_t k = 0; k < t.sets.size(); ++k) open.emplace(0.0, k);
  for (const auto& it : items) {
    auto [load, k] = open.top();
    open.pop();
    t.sets[k].push_back(it.bits);
    t.set_probs[k] = load + it.prob;
    open.emplace(t.set_probs[k], k);
  }
  const double target = t.window_mass / static_cast<double>(t.C);
  t.max_ratio = 1.0;
  for (double sp : t.set_probs) {
    const double ratio = sp > 0.0 ? std::max(sp / target, target / sp) : std::numeric_limits<double>::infinity();
    t.max_ratio = std::max(t.max_ratio, ratio);
  }
  return t;
}

Protocol2Report protocol2_report(const ChannelSpec& spec, double delta, double epsilon) {
  spec.check();
  if (!(delta >= 0.0 && delta < 1.0)) throw std::invalid_argument("protocol2_report: delta must lie in [0, 1)");
  if (!(epsilon >= 0.0)) throw std::invalid_argument("protocol2_report: epsilon must be non-negative");
  Protocol2Report r;
  const double p = spec.p;
  const double N = static_cast<double>(spec.N);
  const double s = channel_entropy(spec.kind, p);

  if (spec.kind == ChannelKind::bsc) {
    // log2 C with C = p^(-Np(1-delta)) (1-p)^(-N(1-p+p delta))
    r.log2_C = -(p > 0.0 ? N * p * (1 - delta) * std::log2(p) : 0.0) -
               N * (1 - p + p * delta) * std::log2(1 - p);
    const double ratio = p > 0.0 ? std::log2((1 - p) / p) : 0.0;
    r.stego_bits = N * (binary_entropy(p) - p * delta * ratio);
  } else {
    r.stego_bits = N * (s - delta);
    r.log2_C = r.stego_bits;
  }
  if (r.stego_bits <= 0.0) {
    r.zero_rate = true;
    r.stego_bits = 0.0;
    r.rate.notes.push_back("typicality width leaves no room for stego bits; rate reported as zero");
  }
  r.rate.stego_rate = r.stego_bits / N;
  r.twirl_key_rate = r.zero_rate ? 0.0 : 2 * (s - delta);
  r.selection_key_rate = r.zero_rate ? 0.0 : delta;
  r.rate.key_rate = r.twirl_key_rate + r.selection_key_rate;

  if (spec.kind == ChannelKind::bsc && p > 0.0 && p < 0.5) {
    const double tail = (1 - p) / (1 - 2 * p) *
                        std::exp(N * p * (1 - delta) * std::log(p / (1 - p)) +
                                 N * std::log((1 - 2 * p + 2 * p * p) / (1 - p)));
    r.rate.security = epsilon + tail;
    double mass = 0.0;
    const long lo = static_cast<long>(std::ceil(N * p * (1 - delta) - 1e-9));
    const long hi = static_cast<long>(std::floor(N * p * (1 + delta) + 1e-9));
    for (long k = std::max(0L, lo); k <= std::min(spec.N, hi); ++k)
      mass += std::exp2(log2_binomial(N, static_cast<double>(k))) * std::pow(p, k) * std::pow(1 - p, N - k);
    r.window_mass = mass;
    if (lo > hi)
      r.rate.notes.push_back("weight window holds no integer weight at this N");
    else if (spec.N <= 20)
      r.partition = typical_set_partition(spec.N, p, delta);
  } else {
    r.rate.security = epsilon;
    r.rate.notes.push_back("security tail bound and explicit partition are derived for the BSC with 0 < p < 1/2 only");
  }
  return r;
}

NoisyRate protocol2_noisy_rate(double p, double dp) {
  if (p == 0.0)
    throw std::domain_error("protocol2_noisy_rate: p = 0 gives log2(2^h - 1) = log2(0); the rate is undefined");
  if (!(p > 0.0 && p < 0.5) || !(dp >= 0.0))
    throw std::invalid_argument("protocol2_noisy_rate: need 0 < p < 1/2 and dp >= 0");
  const double h = binary_entropy(p);
  const double m = dp / (1 - 2 * p);
  NoisyRate r;
  r.rate = -m * std::log2(std::exp2(h) - 1);
  r.q_opt = m * std::exp2(h) / (std::exp2(h) - 1);
  r.comparator = 2 * dp * (1 - h) / (1 - 2 * p);
  return r;
}

}  // namespace qsteg
