#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "qsteg/bits.hpp"
#include "qsteg/codes.hpp"
#include "qsteg/pauli.hpp"

namespace qsteg {

enum class GateKind { H, P, CNOT, SWAP };

// Zero-based qubits. For CNOT, q0 is the control and q1 the target.
struct CliffordGate {
  GateKind kind = GateKind::H;
  std::size_t q0 = 0;
  std::size_t q1 = 0;

  static CliffordGate h(std::size_t q) { return {GateKind::H, q, q}; }
  static CliffordGate p(std::size_t q) { return {GateKind::P, q, q}; }
  static CliffordGate cnot(std::size_t c, std::size_t t) { return {GateKind::CNOT, c, t}; }
  static CliffordGate swap(std::size_t a, std::size_t b) { return {GateKind::SWAP, a, b}; }
  bool two_qubit() const { return kind == GateKind::CNOT || kind == GateKind::SWAP; }
  friend bool operator==(const CliffordGate&, const CliffordGate&) = default;
};

// Gates are stored in the order they are applied in time: the unitary of the
// circuit is U = g_last ··· g_1.
struct CliffordCircuit {
  std::size_t width = 0;
  std::vector<CliffordGate> gates;
  std::vector<RowOp> row_ops;  // generator mixing recorded during synthesis

  void add(const CliffordGate& g);
  CliffordCircuit inverse() const;
};

// U p U^† for a single gate, with the sign tracked exactly.
PauliOperator conjugate_gate(const CliffordGate& g, const PauliOperator& p);
// U p U^† where U is the whole circuit (gates folded in time order).
PauliOperator conjugate_circuit(const CliffordCircuit& c, const PauliOperator& p);

// One gate per line: "H 3", "P 2", "CNOT 1 4", "SWAP 3 5" (one-based qubits).
std::string format_circuit(const CliffordCircuit& c);
CliffordCircuit parse_circuit(const std::string& text, std::size_t width);

// Where the unencoded canonical stabilizer lives: ebit pairs (Bob column,
// Alice column) first, then ancillas in |0>, then information qubits.
struct EncoderLayout {
  std::vector<std::pair<std::size_t, std::size_t>> ebit_pairs;
  std::vector<std::size_t> ancillas;
  std::vector<std::size_t> info;
};

EncoderLayout canonical_layout(const StabilizerCode& code);
// Canonical unencoded generators in layout order: for each ebit the pair
// Z_B Z_A, X_B X_A, then Z on every ancilla.
std::vector<PauliOperator> canonical_generators(const StabilizerCode& code);

// Builds an encoder by reducing the generator matrix to canonical form with
// column (gate) and row operations; the encoder is the reverse of the
// reduction. Signs of the encoded generators and logical operators are fixed
// to match the code's own operators exactly. When the code fixes a syndrome order,
// ancilla slot i is mapped onto the generator read as syndrome bit i.
CliffordCircuit synthesize_encoder(const StabilizerCode& code);

struct VerificationReport {
  bool ok = false;
  bool group_ok = false;
  bool state_ok = false;
  std::vector<PauliOperator> images;  // encoder images of canonical generators
  std::vector<double> expectations;   // per code generator, on the encoded state
  std::string message;
};

VerificationReport verify_encoder(const StabilizerCode& code, const CliffordCircuit& c);

// Encoders transcribed from published circuit diagrams.
CliffordCircuit six_qubit_published_encoder();
CliffordCircuit five_qubit_published_encoder();

}  // namespace qsteg
