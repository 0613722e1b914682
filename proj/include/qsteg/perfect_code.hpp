#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qsteg/clifford.hpp"
#include "qsteg/codes.hpp"
#include "qsteg/pauli.hpp"
#include "qsteg/sim.hpp"

namespace qsteg {

struct StegoRecord {
  std::string syndrome;           // 4 bits, syndrome bit 1 first
  PauliOperator pre_error;        // 4-qubit operator on the ancillas (signed)
  PauliOperator cover_op;         // 1-qubit operator on the cover qubit
  PauliOperator encoded_error;    // 5-qubit operator on the codeword, as used
  PauliOperator printed_encoded;  // as transcribed
  std::size_t line = 0;           // 1-based line in the fixture

  PauliOperator full_pre_error() const { return tensor(pre_error, cover_op); }
};

struct StegoEncoding {
  int id = 0;
  std::vector<StegoRecord> entries;  // indexed by syndrome value (bit 1 = MSB)
};

struct EncodingIssue {
  int encoding = 0;
  std::string syndrome;
  std::size_t line = 0;
  std::string message;
};

struct EncodingSet {
  StegoEncoding single;
  std::vector<StegoEncoding> doubles;  // six two-error encodings
  std::vector<EncodingIssue> issues;

  // 0 = single-error encoding, 1..6 = the two-error encodings.
  const StegoEncoding& by_id(int id) const;
};

// The five-qubit code with the syndrome bit order the stego tables use.
StabilizerCode perfect_code();
// Syndrome bits of a five-qubit error as a 4-character string.
std::string perfect_syndrome(const PauliOperator& error);

// Parses the encoding fixture and checks every record: syndrome bijection per
// encoding, syndrome of the encoded error, and the encoder-conjugation
// identity under the published five-qubit encoder. In strict mode the first
// failing record throws std::invalid_argument naming its line; otherwise
// failures are listed in `issues` and the record's encoded error is replaced
// by the conjugated one (the printed value is kept in printed_encoded).
EncodingSet parse_encodings(const std::string& csv, bool strict = false);
EncodingSet load_encodings(bool strict = false);

struct ConjugationReport {
  std::size_t records = 0;
  std::size_t exact = 0;              // equal including sign
  std::size_t up_to_phase = 0;
  std::size_t modulo_stabilizer = 0;  // equal up to a stabilizer element (any phase)
  std::vector<std::string> mismatches;  // syndromes failing even modulo the stabilizer
};

// Compares conjugate_circuit(circuit, pre_error ⊗ cover_op) with each
// record's encoded error (the printed value when `use_printed`).
ConjugationReport verify_encodings_by_conjugation(const StegoEncoding& enc, const CliffordCircuit& circuit,
                                                  bool use_printed = false);

struct EncodingMixture {
  double p0 = 0, p1 = 0, p2 = 0;  // channel weights: no error, one error, two errors
  double Q0 = 0, Q1 = 0, Q2 = 0;
  double residual = 0;            // 1 - (p0 + p1 + p2), errors of weight >= 3
};

struct MixtureRates {
  EncodingMixture mixture;
  double n_avg = 0;           // stego qubits per five-qubit block
  double key_rate_block = 0;  // entropy of the encoding choice, per qubit
  double key_rate_naive = 0;  // (3 + 8(Q1 + Q2)) / 5
  bool beyond_small_p = false;
};

// Largest p with Q0 = p0 - (p1 + p2)/15 >= 0.
double mixture_p_max();
MixtureRates mixture_rates(double p);

// Key bits spent on one block under the one-block-at-a-time schedule.
struct KeySchedule {
  int selection_bits = 3;  // which of the eight encodings
  int twirl_bits = 8;      // 2 per stego qubit, zero for the trivial encoding
  int paper_total = 12;    // the count quoted for a block, which rounds 3 + 8 up
};

struct ProtocolTranscript {
  int encoding = -1;  // -1 = trivial encoding (nothing hidden)
  std::uint8_t twirl_key = 0;
  int payload_qubits = 0;
  int key_bits_selection = 0;
  int key_bits_twirl = 0;
  int key_bits_paper = 12;
  double bob_fidelity = 1.0;
  double eve_trace_distance = 0.0;
  double stego_register_purity_defect = 0.0;  // 1 - <0000|rho_S|0000> after U2
};

// Twirl key: 2 bits per stego qubit, (x, z) for qubit 1 in the top bits.
PauliOperator twirl_pauli(std::uint8_t key);

// Full 9-qubit density-matrix run (stego register, four ancillas, cover).
// Eve's view is compared with (1/16) sum_i E_i rho_e E_i^dagger, the mixture
// obtained by averaging the stego register over twirl keys.
// With `with_eve_view` false the key-independent Eve-view comparison is
// skipped (eve_trace_distance stays 0); see eve_view_distance.
ProtocolTranscript simulate_roundtrip(const EncodingSet& set, int encoding, const StateVector& payload,
                                      const StateVector& cover, std::uint8_t twirl_key,
                                      bool with_eve_view = true);
double eve_view_distance(const EncodingSet& set, int encoding, const StateVector& cover);
// Samples the encoding class from mixture_rates(p) and the twirl key from the
// seed, then runs the deterministic round trip.
ProtocolTranscript simulate_roundtrip(double p, const StateVector& payload, std::uint64_t seed);

// Wire state Alice sends (5 qubits) for a fixed key, before any channel noise.
DensityMatrix alice_wire_state(const EncodingSet& set, int encoding, const StateVector& payload,
                               const StateVector& cover, std::uint8_t twirl_key);

// Payload descriptor: four characters from {0,1,+,-}.
StateVector parse_payload(const std::string& text);

struct EveCheckReport {
  double p = 0;
  std::uint64_t trials = 0, seed = 0;
  std::array<std::uint64_t, 3> class_counts{};  // trivial, single, double
  std::uint64_t unmodeled = 0;                  // weight >= 3 draws (outside the model)
  std::map<std::string, std::uint64_t> error_counts;  // wire error -> count (weight <= 2)
  std::array<double, 3> class_sigma{};               // (freq - Q) / binomial sigma
  double chi_square = 0;
  int dof = 0;
  double p_value = 1;
  double n_avg_estimate = 0;
  double n_avg_expected = 0;
};

// Trial t uses a generator seeded from (seed, t), so results do not depend on
// evaluation order.
EveCheckReport eve_channel_check(double p, std::uint64_t trials, std::uint64_t seed);

}  // namespace qsteg
