#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>

#include "oracles.hpp"
#include "qsteg/perfect_code.hpp"

using namespace qsteg;
using Catch::Approx;

namespace {

oracle::Mat circuit_matrix(const CliffordCircuit& c) {
  oracle::Mat u = oracle::identity(c.width);
  for (const auto& g : c.gates) {
    oracle::Mat m;
    switch (g.kind) {
      case GateKind::H: m = oracle::embed1(oracle::hadamard(), g.q0, c.width); break;
      case GateKind::P: m = oracle::embed1(oracle::phase_gate(), g.q0, c.width); break;
      case GateKind::CNOT: m = oracle::cnot(g.q0, g.q1, c.width); break;
      case GateKind::SWAP: m = oracle::swap_gate(g.q0, g.q1, c.width); break;
    }
    u = m * u;
  }
  return u;
}

StateVector cover_state(double theta, double phi) {
  Eigen::VectorXcd c(2);
  c << std::cos(theta), std::polar(std::sin(theta), phi);
  return StateVector::from_amplitudes(1, c);
}

}  // namespace

TEST_CASE("encoding fixture loads with the one known misprint", "[perfect][golden]") {
  const auto set = load_encodings();
  CHECK(set.doubles.size() == 6);
  // One record, reported for both its wrong syndrome and its conjugation mismatch.
  REQUIRE_FALSE(set.issues.empty());
  for (const auto& issue : set.issues) {
    CHECK(issue.encoding == 2);
    CHECK(issue.syndrome == "0010");
    CHECK(issue.line == set.issues[0].line);
  }
  const auto& rec = set.by_id(2).entries[0b0010];
  CHECK(format_pauli(rec.printed_encoded) == "XZIII");
  CHECK(format_pauli(rec.encoded_error.unsigned_copy()) == "ZXIII");
  CHECK(perfect_syndrome(rec.encoded_error) == "0010");
  CHECK_THROWS_AS(load_encodings(true), std::invalid_argument);
  CHECK_THROWS_AS(set.by_id(7), std::invalid_argument);
}

TEST_CASE("every encoding is a syndrome bijection", "[perfect][property]") {
  const auto set = load_encodings();
  for (int id = 0; id <= 6; ++id) {
    const auto& enc = set.by_id(id);
    REQUIRE(enc.entries.size() == 16);
    std::set<std::string> seen;
    for (std::size_t s = 0; s < 16; ++s) {
      const auto& r = enc.entries[s];
      CHECK(perfect_syndrome(r.encoded_error) == r.syndrome);
      seen.insert(r.syndrome);
      // Encoding 0 uses the single-qubit errors; the others use weight two.
      if (s != 0) CHECK(r.encoded_error.weight() == (id == 0 ? 1u : 2u));
    }
    CHECK(seen.size() == 16);
  }
}

TEST_CASE("encoder conjugation reproduces every encoding table", "[perfect]") {
  const auto set = load_encodings();
  const auto published = five_qubit_published_encoder();
  for (int id = 0; id <= 6; ++id) {
    INFO(id);
    const auto rep = verify_encodings_by_conjugation(set.by_id(id), published);
    CHECK(rep.records == 16);
    CHECK(rep.exact == 16);
    CHECK(rep.mismatches.empty());
    const auto printed = verify_encodings_by_conjugation(set.by_id(id), published, true);
    CHECK(printed.exact == (id == 2 ? 15u : 16u));
  }
}

TEST_CASE("perfect code syndromes", "[perfect]") {
  const auto code = perfect_code();
  CHECK(code.n == 5);
  CHECK(perfect_syndrome(parse_pauli("IIIII")) == "0000");
  std::set<std::string> seen;
  for (std::size_t q = 0; q < 5; ++q) {
    for (char c : std::string("XYZ")) {
      PauliOperator e(5);
      e.set_letter(q, c);
      seen.insert(perfect_syndrome(e));
    }
  }
  CHECK(seen.size() == 15);
  CHECK(seen.count("0000") == 0);
}

TEST_CASE("mixture weights", "[perfect]") {
  for (int i = 0; i <= 50; ++i) {
    const double p = i / 100.0;
    const auto r = mixture_rates(p);
    const auto& m = r.mixture;
    INFO(p);
    CHECK(m.p0 == Approx(std::pow(1 - p, 5)));
    CHECK(m.p1 == Approx(oracle::binomial_pmf(5, 1, p)).margin(1e-15));
    CHECK(m.p2 == Approx(oracle::binomial_pmf(5, 2, p)).margin(1e-15));
    CHECK(m.Q1 == Approx(16.0 / 15 * m.p1).margin(1e-15));
    CHECK(m.Q2 == Approx(16.0 / 15 * m.p2).margin(1e-15));
    CHECK(m.Q0 + m.Q1 + m.Q2 == Approx(m.p0 + m.p1 + m.p2));
    CHECK(m.Q0 >= 0.0);
    CHECK(r.n_avg == Approx(64.0 / 15 * (m.p1 + m.p2)).margin(1e-15));
    CHECK(m.residual == Approx(1 - m.p0 - m.p1 - m.p2).margin(1e-15));
  }
  CHECK(mixture_p_max() == 0.5);
  CHECK(mixture_rates(0.5).mixture.Q0 == Approx(0.0).margin(1e-15));
  CHECK(mixture_rates(0.49).mixture.Q0 > 0.0);
  CHECK_THROWS_AS(mixture_rates(0.51), std::domain_error);
  CHECK_THROWS_AS(mixture_rates(-0.1), std::invalid_argument);
  const KeySchedule ks;
  CHECK(ks.selection_bits + ks.twirl_bits == 11);
}

TEST_CASE("twirl keys and payload descriptors", "[perfect]") {
  std::set<std::string> all;
  for (int k = 0; k < 256; ++k) all.insert(format_pauli(twirl_pauli(static_cast<std::uint8_t>(k))));
  CHECK(all.size() == 256);
  CHECK(format_pauli(twirl_pauli(0)) == "IIII");
  CHECK(format_pauli(twirl_pauli(0b10000000)) == "XIII");
  CHECK(format_pauli(twirl_pauli(0b00000011)) == "IIIY");

  const auto s = parse_payload("01+-");
  CHECK(s.qubits() == 4);
  CHECK(std::abs(s.norm() - 1) < 1e-12);
  CHECK(pauli_expectation(s, parse_pauli("ZIII")) == Approx(1.0));
  CHECK(pauli_expectation(s, parse_pauli("IZII")) == Approx(-1.0));
  CHECK(pauli_expectation(s, parse_pauli("IIXI")) == Approx(1.0));
  CHECK(pauli_expectation(s, parse_pauli("IIIX")) == Approx(-1.0));
  CHECK_THROWS_AS(parse_payload("012"), std::invalid_argument);
  CHECK_THROWS_AS(parse_payload("01x0"), std::invalid_argument);
}

TEST_CASE("twirling a payload over all keys leaves the maximally mixed state", "[perfect][oracle]") {
  const auto payload = parse_payload("+0-1");
  const Eigen::VectorXcd v = payload.amplitudes();
  oracle::Mat avg = oracle::Mat::Zero(16, 16);
  for (int k = 0; k < 256; ++k) {
    const oracle::Mat e = oracle::pauli_matrix(format_pauli(twirl_pauli(static_cast<std::uint8_t>(k))));
    avg += e * v * v.adjoint() * e.adjoint() / 256.0;
  }
  CHECK((avg - oracle::identity(4) / 16.0).norm() < 1e-12);
}

TEST_CASE("wire state with a mixed stego register matches the error mixture", "[perfect][oracle]") {
  // The wire state is linear in the stego register's density matrix, so the
  // key average is (1/16) sum over basis payloads. Compare it with
  // (1/16) sum E rho_e E^dagger built from dense matrices.
  const auto set = load_encodings();
  const auto cover = cover_state(0.7, 1.9);
  const oracle::Mat u = circuit_matrix(five_qubit_published_encoder());
  Eigen::VectorXcd in = Eigen::VectorXcd::Zero(32);
  in(0) = cover.amplitude(0);
  in(1) = cover.amplitude(1);
  const Eigen::VectorXcd enc = u * in;
  const oracle::Mat rho_e = enc * enc.adjoint();
  for (int id : {0, 3}) {
    INFO(id);
    oracle::Mat expected = oracle::Mat::Zero(32, 32);
    for (const auto& r : set.by_id(id).entries) {
      const oracle::Mat e = oracle::pauli_matrix(format_pauli(r.encoded_error.unsigned_copy()));
      expected += e * rho_e * e.adjoint() / 16.0;
    }
    oracle::Mat avg = oracle::Mat::Zero(32, 32);
    for (std::size_t b = 0; b < 16; ++b)
      avg += alice_wire_state(set, id, StateVector::basis(4, b), cover, 0).matrix() / 16.0;
    CHECK((avg - expected).norm() < 1e-10);
    CHECK(eve_view_distance(set, id, cover) < 1e-10);
    // A single fixed payload and key is far from the mixture.
    const auto one = alice_wire_state(set, id, StateVector::basis(4, 5), cover, 0).matrix();
    CHECK((one - expected).norm() > 0.1);
  }
}

TEST_CASE("round trips recover the payload", "[perfect]") {
  const auto set = load_encodings();
  const auto payload = parse_payload("1+0-");
  const auto cover = cover_state(0.3, 0.4);
  for (int id = -1; id <= 6; ++id) {
    INFO(id);
    const auto t = simulate_roundtrip(set, id, payload, cover, static_cast<std::uint8_t>(37 * (id + 2)));
    CHECK(t.eve_trace_distance < 1e-10);
    if (id >= 0) {
      CHECK(t.bob_fidelity >= 1 - 1e-10);
      CHECK(t.stego_register_purity_defect < 1e-10);
      CHECK(t.payload_qubits == 4);
    } else {
      CHECK(t.payload_qubits == 0);
    }
  }
  CHECK_THROWS_AS(simulate_roundtrip(set, 7, payload, cover, 0), std::invalid_argument);
  CHECK_THROWS_AS(simulate_roundtrip(set, 0, StateVector::zero(3), cover, 0), std::invalid_argument);

  const auto a = simulate_roundtrip(0.1, payload, 99);
  const auto b = simulate_roundtrip(0.1, payload, 99);
  CHECK(a.encoding == b.encoding);
  CHECK(a.twirl_key == b.twirl_key);
  CHECK(a.bob_fidelity >= 1 - 1e-10);
}

TEST_CASE("Eve's channel statistics", "[perfect][statistical]") {
  const auto a = eve_channel_check(0.05, 20000, 7);
  const auto b = eve_channel_check(0.05, 20000, 7);
  CHECK(a.class_counts == b.class_counts);
  CHECK(a.error_counts == b.error_counts);
  CHECK(a.class_counts[0] + a.class_counts[1] + a.class_counts[2] + a.unmodeled == 20000);
  for (double s : a.class_sigma) CHECK(std::abs(s) < 4.0);
  CHECK(a.n_avg_expected == Approx(mixture_rates(0.05).n_avg));
  CHECK(a.n_avg_estimate == Approx(a.n_avg_expected).epsilon(0.05));
  std::uint64_t total = 0;
  for (const auto& [err, n] : a.error_counts) {
    CHECK(err.size() == 5);
    total += n;
  }
  CHECK(total == 20000 - a.unmodeled);
  CHECK(eve_channel_check(0.05, 20000, 8).class_counts != a.class_counts);
}
