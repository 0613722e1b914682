#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "oracles.hpp"
#include "qsteg/sim.hpp"

using namespace qsteg;

namespace {

StateVector random_state(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> g;
  Eigen::VectorXcd v(1 << n);
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = cplx(g(rng), g(rng));
  return StateVector::from_amplitudes(n, v / v.norm());
}

oracle::Mat gate_matrix(const CliffordGate& g, std::size_t n) {
  switch (g.kind) {
    case GateKind::H: return oracle::embed1(oracle::hadamard(), g.q0, n);
    case GateKind::P: return oracle::embed1(oracle::phase_gate(), g.q0, n);
    case GateKind::CNOT: return oracle::cnot(g.q0, g.q1, n);
    case GateKind::SWAP: return oracle::swap_gate(g.q0, g.q1, n);
  }
  return {};
}

// Partial trace by explicit index bookkeeping (qubit 0 = MSB).
oracle::Mat trace_out(const oracle::Mat& rho, std::size_t n, const std::vector<std::size_t>& keep) {
  const std::size_t k = keep.size();
  oracle::Mat out = oracle::Mat::Zero(1 << k, 1 << k);
  for (std::size_t i = 0; i < (1u << n); ++i)
    for (std::size_t j = 0; j < (1u << n); ++j) {
      bool match = true;
      for (std::size_t q = 0; q < n && match; ++q)
        if (std::find(keep.begin(), keep.end(), q) == keep.end())
          match = ((i >> (n - 1 - q)) & 1u) == ((j >> (n - 1 - q)) & 1u);
      if (!match) continue;
      std::size_t a = 0, b = 0;
      for (auto q : keep) {
        a = (a << 1) | ((i >> (n - 1 - q)) & 1u);
        b = (b << 1) | ((j >> (n - 1 - q)) & 1u);
      }
      out(a, b) += rho(i, j);
    }
  return out;
}

}  // namespace

TEST_CASE("basis states read qubit 0 as the leftmost bit", "[sim]") {
  const auto s = StateVector::basis("100");
  CHECK(s.qubits() == 3);
  CHECK(std::abs(s.amplitude(4) - cplx(1)) < 1e-15);
  CHECK(StateVector::zero(2).amplitude(0) == cplx(1));
  CHECK_THROWS_AS(StateVector::basis("012"), std::invalid_argument);
  CHECK_THROWS_AS(StateVector::zero(max_state_qubits + 1), std::invalid_argument);
}

TEST_CASE("gates act as their matrices", "[sim][oracle]") {
  std::mt19937_64 rng(6);
  const std::size_t n = 4;
  const std::vector<CliffordGate> gates{CliffordGate::h(0), CliffordGate::h(3), CliffordGate::p(2),
                                        CliffordGate::cnot(0, 3), CliffordGate::cnot(3, 1),
                                        CliffordGate::swap(1, 2)};
  for (const auto& g : gates) {
    const auto s = random_state(rng, n);
    const Eigen::VectorXcd expect = gate_matrix(g, n) * s.amplitudes();
    CHECK((apply_gate(s, g).amplitudes() - expect).norm() < 1e-12);
  }
  for (int t = 0; t < 20; ++t) {
    const auto s = random_state(rng, n);
    std::string txt;
    for (std::size_t q = 0; q < n; ++q) txt += "IXYZ"[rng() % 4];
    const auto p = parse_pauli((t % 2 ? "-" : "") + txt);
    const Eigen::VectorXcd expect = oracle::pauli_matrix(format_pauli(p)) * s.amplitudes();
    CHECK((apply_pauli(s, p).amplitudes() - expect).norm() < 1e-12);
    const cplx e = s.amplitudes().dot(oracle::pauli_matrix(format_pauli(p)) * s.amplitudes());
    CHECK(std::abs(pauli_expectation(s, p) - e.real()) < 1e-12);
  }
}

TEST_CASE("density-matrix evolution agrees with the state vector", "[sim][property]") {
  std::mt19937_64 rng(12);
  const auto s = random_state(rng, 3);
  CliffordCircuit c;
  c.width = 3;
  c.add(CliffordGate::h(0));
  c.add(CliffordGate::cnot(0, 2));
  c.add(CliffordGate::p(1));
  const auto rho = apply_circuit(DensityMatrix::from_state(s), c);
  const auto psi = apply_circuit(s, c);
  CHECK((rho.matrix() - psi.amplitudes() * psi.amplitudes().adjoint()).norm() < 1e-12);
  CHECK(rho.check_invariants().empty());
  CHECK(std::abs(fidelity(rho, psi) - 1) < 1e-12);
}

TEST_CASE("partial trace against explicit index sums", "[sim][oracle]") {
  std::mt19937_64 rng(13);
  const auto s = random_state(rng, 4);
  const auto rho = DensityMatrix::from_state(s);
  for (const std::vector<std::size_t>& keep :
       {std::vector<std::size_t>{0}, {1, 3}, {0, 2, 3}, {2}, {0, 1, 2, 3}}) {
    const auto r = partial_trace(rho, keep);
    CHECK((r.matrix() - trace_out(rho.matrix(), 4, keep)).norm() < 1e-12);
    CHECK(std::abs(r.trace() - 1) < 1e-12);
  }
  // Bell pair halves are maximally mixed.
  auto bell = apply_gate(apply_gate(StateVector::zero(2), CliffordGate::h(0)), CliffordGate::cnot(0, 1));
  CHECK((partial_trace(DensityMatrix::from_state(bell), {1}).matrix() -
         DensityMatrix::maximally_mixed(1).matrix()).norm() < 1e-12);
  CHECK_THROWS_AS(partial_trace(rho, {4}), std::out_of_range);
}

TEST_CASE("depolarizing channel", "[sim]") {
  const auto rho = DensityMatrix::from_state(StateVector::zero(1));
  const auto out = depolarize(rho, 0.3, {0});
  // X and Y flip |0> to |1>: probability 2p/3.
  CHECK(std::abs(out.matrix()(1, 1).real() - 0.2) < 1e-12);
  CHECK(out.check_invariants().empty());
  // p = 3/4 is full depolarization.
  CHECK((depolarize(rho, 0.75, {0}).matrix() - DensityMatrix::maximally_mixed(1).matrix()).norm() < 1e-12);
  CHECK_THROWS_AS(depolarize(rho, 1.5, {0}), std::invalid_argument);

  std::vector<KrausTerm> k{{0.5, parse_pauli("I")}, {0.5, parse_pauli("X")}};
  CHECK(std::abs(apply_pauli_channel(rho, k).matrix()(1, 1).real() - 0.5) < 1e-12);
}

TEST_CASE("fidelity and trace distance", "[sim]") {
  const auto zero = StateVector::zero(1), one = StateVector::basis("1");
  CHECK(fidelity(zero, one) == Catch::Approx(0).margin(1e-15));
  CHECK(fidelity(zero, zero) == Catch::Approx(1));
  const auto a = DensityMatrix::from_state(zero), b = DensityMatrix::from_state(one);
  CHECK(trace_distance(a, b) == Catch::Approx(1));
  CHECK(trace_distance(a, DensityMatrix::maximally_mixed(1)) == Catch::Approx(0.5));
  const auto t = tensor(a, b);
  CHECK(t.qubits() == 2);
  CHECK(std::abs(t.matrix()(1, 1).real() - 1) < 1e-15);
  CHECK(tensor(zero, one).amplitude(1) == cplx(1));
}

TEST_CASE("monomial maps", "[sim]") {
  std::mt19937_64 rng(14);
  const auto s = random_state(rng, 3);
  // Cyclic shift of basis labels with a sign on odd labels.
  MonomialMap m{[](std::size_t i) { return std::pair<std::size_t, cplx>{(i + 1) % 8, i % 2 ? -1.0 : 1.0}; }};
  const auto out = apply_monomial(s, m);
  for (std::size_t i = 0; i < 8; ++i)
    CHECK(std::abs(out.amplitude((i + 1) % 8) - (i % 2 ? -1.0 : 1.0) * s.amplitude(i)) < 1e-15);
  const auto rho = apply_monomial(DensityMatrix::from_state(s), m);
  CHECK((rho.matrix() - out.amplitudes() * out.amplitudes().adjoint()).norm() < 1e-12);
}
