#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>

#include "oracles.hpp"
#include "qsteg/quantum_steg.hpp"

using namespace qsteg;
using Catch::Approx;

namespace {

ChannelSpec bsc(double p, double dp, long N) {
  ChannelSpec s;
  s.kind = ChannelKind::bsc;
  s.p = p;
  s.dp = dp;
  s.N = N;
  return s;
}

// Direct sum over error weights, with binomial pmfs from the oracle.
double diamond_sum(double p, double dp, int N) {
  double s = 0;
  for (int j = 0; j <= N; ++j) s += std::abs(oracle::binomial_pmf(N, j, p + dp) - oracle::binomial_pmf(N, j, p));
  return s;
}

}  // namespace

TEST_CASE("entropies", "[quantum]") {
  CHECK(binary_entropy(0.5) == Approx(1.0));
  CHECK(binary_entropy(0.0) == 0.0);
  CHECK(binary_entropy(0.11) == Approx(oracle::h2(0.11)));
  CHECK(channel_entropy(ChannelKind::bsc, 0.2) == Approx(oracle::h2(0.2)));
  // Depolarizing at p = 3/4 is the uniform distribution over four Paulis.
  CHECK(channel_entropy(ChannelKind::depolarizing, 0.75) == Approx(2.0));
  CHECK(channel_entropy(ChannelKind::depolarizing, 0.0) == 0.0);
  CHECK_THROWS_AS(binary_entropy(1.5), std::invalid_argument);
  CHECK(parse_channel_kind("bsc") == ChannelKind::bsc);
  CHECK(parse_channel_kind(to_string(ChannelKind::depolarizing)) == ChannelKind::depolarizing);
  CHECK_THROWS_AS(parse_channel_kind("erasure"), std::invalid_argument);
}

TEST_CASE("channel spec checks", "[quantum]") {
  CHECK_THROWS_AS(bsc(-0.1, 0, 1).check(), std::invalid_argument);
  CHECK_THROWS_AS(bsc(0.1, 0, 0).check(), std::invalid_argument);
  CHECK_THROWS_AS(bsc(0.4, 0.7, 1).check(), std::invalid_argument);
  CHECK_NOTHROW(bsc(0.1, 0.05, 10).check());
}

TEST_CASE("diamond norm at one and two uses", "[quantum][oracle]") {
  for (double p : {0.01, 0.1, 0.25, 0.4}) {
    for (double dp : {0.001, 0.01, 0.05}) {
      INFO(p << " " << dp);
      CHECK(std::abs(diamond_norm_iid(bsc(p, dp, 1)).norm - 2 * dp) <= 1e-12);
      const double two = diamond_norm_iid(bsc(p, dp, 2)).norm;
      CHECK(std::abs(two - 2 * dp * (2 - 2 * p - dp)) <= 1e-12);
      CHECK(std::abs(two - diamond_sum(p, dp, 2)) <= 1e-12);
      // The printed expansion with 2dp inside the bracket differs by 2dp^2.
      CHECK(std::abs(two - 2 * dp * (2 - 2 * p - 2 * dp)) > 1e-7);
    }
  }
}

TEST_CASE("diamond norm agrees with a direct sum at moderate N", "[quantum][oracle]") {
  for (int N : {5, 17, 60}) {
    const double got = diamond_norm_iid(bsc(0.2, 0.01, N)).norm;
    CHECK(got == Approx(diamond_sum(0.2, 0.01, N)).margin(1e-12));
    CHECK(diamond_norm_iid(bsc(0.2, 0.01, N)).p_opt == Approx(0.5 + got / 4));
  }
}

TEST_CASE("square-root scaling keeps the channels close", "[quantum][property]") {
  const double p = 0.1;
  double prev = 0;
  for (long N : {10L, 100L, 1000L, 10000L, 100000L}) {
    const double dp = 0.1 * std::sqrt(p * (1 - p) / N);
    const double norm = diamond_norm_iid(bsc(p, dp, N)).norm;
    INFO(N << " " << norm);
    CHECK(norm < 0.5);
    const double payload = N * dp;
    CHECK(payload / std::sqrt(static_cast<double>(N)) == Approx(0.1 * std::sqrt(p * (1 - p))));
    CHECK(payload > prev);
    prev = payload;
  }
  // Without the square-root shrinkage a fixed dp becomes distinguishable.
  CHECK(diamond_norm_iid(bsc(p, 0.01, 100000)).norm > 1.9);
}

TEST_CASE("protocol 1 key rate: closed form against exact counting", "[quantum]") {
  for (double p : {0.05, 0.1, 0.2}) {
    for (double dp : {0.001, 0.01, 0.05}) {
      ChannelSpec s = bsc(p, dp, 10000);
      s.kind = ChannelKind::depolarizing;
      const auto r = protocol1_report(s, 0.1);
      INFO(p << " " << dp);
      CHECK(std::abs(r.noisy_key_rate_closed - r.noisy_key_rate_exact) <= 0.05);
      CHECK(r.noisy_q == Approx(dp / (1 - 4 * p / 3)));
      CHECK(r.M == Approx(4 * p / 3 * 10000 * 0.9));
      CHECK(r.rate.key_rate > r.rate.stego_rate);
    }
  }
  CHECK(protocol1_key_rate_closed(0.1, 0.0) == 0.0);
  CHECK_THROWS_AS(protocol1_key_rate_closed(0.7, 0.1), std::domain_error);
  CHECK_THROWS_AS(protocol1_report(bsc(0.1, 0.01, 100), 0.1), std::invalid_argument);
}

TEST_CASE("protocol 1 tail condition", "[quantum]") {
  ChannelSpec s = bsc(0.1, 0.0, 100000);
  s.kind = ChannelKind::depolarizing;
  CHECK(protocol1_report(s, 0.1).tail_ok);
  s.N = 100;
  const auto small = protocol1_report(s, 0.1);
  CHECK_FALSE(small.tail_ok);
  CHECK_FALSE(small.rate.notes.empty());
}

TEST_CASE("typical-set partition covers the window once", "[quantum][property]") {
  for (double p : {0.1, 0.25, 0.4}) {
    const long N = 16;
    const auto t = typical_set_partition(N, p, 0.1 + (p < 0.2 ? 0.3 : 0.0));
    INFO(p);
    std::multiset<std::uint32_t> seen;
    for (const auto& s : t.sets) seen.insert(s.begin(), s.end());
    std::size_t expected = 0;
    for (std::uint32_t x = 0; x < (1u << N); ++x) {
      const long w = std::popcount(x);
      const bool in = w >= t.weight_lo && w <= t.weight_hi;
      if (in) ++expected;
      CHECK(seen.count(x) == (in ? 1u : 0u));
    }
    CHECK(seen.size() == expected);
    CHECK(t.strings == expected);
    CHECK(t.max_ratio < 2.0);
    double mass = 0;
    for (double q : t.set_probs) mass += q;
    CHECK(mass == Approx(t.window_mass));
    CHECK(t.C == static_cast<long>(t.sets.size()));
  }
  CHECK_THROWS_AS(typical_set_partition(25, 0.1, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(typical_set_partition(4, 0.1, 0.0), std::domain_error);
}

TEST_CASE("protocol 2 report", "[quantum]") {
  const auto r = protocol2_report(bsc(0.25, 0.0, 16), 0.1, 1e-3);
  REQUIRE(r.partition.has_value());
  CHECK(r.partition->max_ratio < 2.0);
  CHECK(r.rate.security >= 1e-3);
  CHECK(r.rate.stego_rate <= binary_entropy(0.25));
  CHECK(r.rate.key_rate == Approx(r.twirl_key_rate + r.selection_key_rate));
  CHECK(r.window_mass > 0.0);
  CHECK(r.window_mass < 1.0);

  // A wide window at small p leaves no stego bits.
  ChannelSpec d = bsc(0.01, 0.0, 100);
  d.kind = ChannelKind::depolarizing;
  const auto z = protocol2_report(d, 0.5);
  CHECK(z.zero_rate);
  CHECK(z.rate.stego_rate == 0.0);
}

TEST_CASE("noisy protocol 2 rate against the comparator", "[quantum]") {
  for (double p = 0.01; p <= 0.1 + 1e-12; p += 0.01) {
    for (double dp : {0.001, 0.01}) {
      const auto r = protocol2_noisy_rate(p, dp);
      INFO(p << " " << dp);
      CHECK(r.rate > r.comparator);
      const double h = oracle::h2(p);
      CHECK(r.rate == Approx(-(dp / (1 - 2 * p)) * std::log2(std::pow(2.0, h) - 1)));
    }
  }
  const auto near = protocol2_noisy_rate(0.49, 0.01);
  CHECK(std::abs(near.rate - near.comparator) < 1e-3);
  CHECK_THROWS_AS(protocol2_noisy_rate(0.0, 0.01), std::domain_error);
  CHECK_THROWS_AS(protocol2_noisy_rate(0.5, 0.01), std::invalid_argument);
}
