#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qsteg/bits.hpp"
#include "qsteg/pauli.hpp"

namespace qsteg {

enum class BuiltinCode { repetition3, five_qubit, six_qubit, six_qubit_subsystem, steane, ea_six_qubit };

struct StabilizerCode {
  std::string name;
  std::size_t n = 0;  // physical qubits, including Bob's column for EA codes
  std::size_t k = 0;
  std::vector<PauliOperator> generators;
  std::vector<PauliOperator> logical_x;
  std::vector<PauliOperator> logical_z;
  std::vector<PauliOperator> gauge_generators;
  std::size_t ebits = 0;
  std::optional<std::size_t> bob_qubit;  // zero-based column holding Bob's half of the ebit
  // Generator measured for syndrome bit i (zero-based). Empty = printed order.
  std::vector<std::size_t> syndrome_order;

  std::size_t syndrome_bits() const { return generators.size(); }
  std::size_t generator_for_bit(std::size_t bit) const {
    return syndrome_order.empty() ? bit : syndrome_order[bit];
  }
  // Qubits on which channel errors act (all qubits except Bob's).
  std::vector<std::size_t> noisy_qubits() const;
};

StabilizerCode builtin_code(BuiltinCode which);
StabilizerCode builtin_code(const std::string& name);
std::vector<std::string> builtin_code_names();

struct ValidationReport {
  bool ok = true;
  std::vector<std::pair<std::size_t, std::size_t>> anticommuting_pairs;  // zero-based
  std::size_t rank = 0;
  bool independent = true;
  bool minus_identity_free = true;
  bool logicals_ok = true;
  bool gauge_ok = true;
  std::vector<std::string> failures;
};

ValidationReport validate_code(const StabilizerCode& code);

BitVector syndrome(const StabilizerCode& code, const PauliOperator& error);

struct SyndromeTable {
  // syndrome bit-string -> errors, ordered by weight then enumeration order
  std::map<std::string, std::vector<PauliOperator>> entries;
  std::string to_csv() const;  // syndrome,error,weight (first error per syndrome listed first)
};

// Enumerates every Pauli of weight <= max_weight on the noisy qubits. If
// `letters` is non-empty, only those single-qubit letters are used (e.g. "X").
SyndromeTable build_syndrome_table(const StabilizerCode& code, std::size_t max_weight,
                                   const std::string& letters = "XYZ");

// Renders the first (lowest-weight) error for every syndrome as
// "Error,Syndrome" rows sorted by syndrome value.
std::string format_syndrome_table(const SyndromeTable& table);

enum class PairClass { anticommutes, in_stabilizer, in_gauge, uncorrectable };
std::string to_string(PairClass c);

struct PairVerdict {
  std::size_t a = 0, b = 0;  // indices into the error list
  PauliOperator product;
  PairClass verdict = PairClass::uncorrectable;
  std::size_t generator = 0;  // zero-based witness when verdict == anticommutes
};

struct CorrectabilityReport {
  std::vector<PairVerdict> pairs;
  std::size_t uncorrectable = 0;
  bool all_correctable() const { return uncorrectable == 0; }
};

CorrectabilityReport correctability_report(const StabilizerCode& code,
                                           const std::vector<PauliOperator>& errors);
// Classification of a single operator E_a^† E_b.
PairVerdict classify_product(const StabilizerCode& code, const PauliOperator& product);

bool in_stabilizer(const StabilizerCode& code, const PauliOperator& p);
bool in_gauge_group(const StabilizerCode& code, const PauliOperator& p);

// Exhaustive minimum weight of an undetectable logical error. Refuses n > 12.
std::size_t distance(const StabilizerCode& code);

std::size_t min_ebits(const BitMatrix& parity_check);

// Builds the entanglement-assisted code obtained by handing qubit `bob_qubit`
// (zero-based) to the receiver: generators are recombined so that the Bob
// column holds exactly one X and one Z; the remaining generators must be free
// of the Bob column and are kept. Result has n qubits (Bob column retained).
StabilizerCode reduce_to_ea(const StabilizerCode& code, std::size_t bob_qubit);

// Distance of an EA code restricted to errors away from Bob's column.
std::size_t ea_distance(const StabilizerCode& code);

// Plain-text serialization: "g1: XZZXI", "Xbar: ...", "Zbar: ...", "gauge: ...",
// "ebits: 1", "bob: 1" (one-based), "order: 4 1 3 2" (one-based).
std::string serialize_code(const StabilizerCode& code);
StabilizerCode parse_code(const std::string& text);

// Parity-check matrices used for the EA construction.
BitMatrix ea_six_qubit_parity_check();
BitMatrix hamming_parity_check();

}  // namespace qsteg
