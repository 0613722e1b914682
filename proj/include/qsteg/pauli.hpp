#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "qsteg/bits.hpp"

namespace qsteg {

// n-qubit Pauli operator i^phase * (P_1 ⊗ ... ⊗ P_n), where each P_j is one of
// the Hermitian matrices I, X, Y, Z. A qubit carrying both an x and a z bit is
// the Hermitian Y (= i·XZ), so a Pauli with phase 0 or 2 is Hermitian.
// Qubit 1 is the leftmost letter and bit index 0.
class PauliOperator {
 public:
  PauliOperator() = default;
  explicit PauliOperator(std::size_t n) : x_(n), z_(n) {}
  PauliOperator(BitVector x, BitVector z, int phase = 0);

  // Single-letter operator `letter` on zero-based `qubit`.
  static PauliOperator single(std::size_t n, std::size_t qubit, char letter);

  std::size_t size() const { return x_.size(); }
  const BitVector& x_bits() const { return x_; }
  const BitVector& z_bits() const { return z_; }
  int phase() const { return phase_; }

  char letter(std::size_t qubit) const;
  void set_letter(std::size_t qubit, char letter);
  std::size_t weight() const { return (x_ | z_).popcount(); }
  // True when the bit pattern is the identity (any phase).
  bool is_identity() const { return x_.none() && z_.none(); }
  bool is_hermitian() const { return (phase_ & 1) == 0; }
  bool commutes_with(const PauliOperator& o) const;

  PauliOperator with_phase(int phase) const;
  PauliOperator negated() const { return with_phase(phase_ + 2); }
  PauliOperator unsigned_copy() const { return with_phase(0); }

  // Restriction to qubits [begin, begin+len), phase dropped.
  PauliOperator slice(std::size_t begin, std::size_t len) const;

  friend bool operator==(const PauliOperator&, const PauliOperator&) = default;

 private:
  BitVector x_, z_;
  int phase_ = 0;
};

// Symplectic image [z | x] of a Pauli (phase is not represented).
struct BinarySymplecticVector {
  BitVector z_part;
  BitVector x_part;
  std::size_t size() const { return z_part.size(); }
  friend bool operator==(const BinarySymplecticVector&,
                         const BinarySymplecticVector&) = default;
};

// M x 2N "Z|X" matrix.
struct BinarySymplecticMatrix {
  BitMatrix z_block;
  BitMatrix x_block;
  std::size_t rows() const { return z_block.rows(); }
  std::size_t qubits() const { return z_block.cols(); }
  // Row i as a [z|x] vector.
  BinarySymplecticVector row(std::size_t i) const {
    return {z_block.row(i), x_block.row(i)};
  }
  friend bool operator==(const BinarySymplecticMatrix&,
                         const BinarySymplecticMatrix&) = default;
};

// Accepts an optional prefix "+", "-", "i", "+i", "-i" followed by letters IXYZ.
PauliOperator parse_pauli(std::string_view text);
// Inverse of parse_pauli: "-" for phase 2, "i" for 1, "-i" for 3.
std::string format_pauli(const PauliOperator& p);
std::ostream& operator<<(std::ostream& os, const PauliOperator& p);

PauliOperator multiply(const PauliOperator& a, const PauliOperator& b);
inline PauliOperator operator*(const PauliOperator& a, const PauliOperator& b) {
  return multiply(a, b);
}
PauliOperator tensor(const PauliOperator& a, const PauliOperator& b);
bool equal_up_to_phase(const PauliOperator& a, const PauliOperator& b);

BinarySymplecticVector to_symplectic(const PauliOperator& p);
PauliOperator from_symplectic(const BinarySymplecticVector& v);
// Flattened [z|x] bit vector of length 2n; convenient for GF(2) solves.
BitVector to_flat_symplectic(const PauliOperator& p);

bool symplectic_product(const BinarySymplecticVector& u, const BinarySymplecticVector& v);
BinarySymplecticMatrix to_symplectic_matrix(const std::vector<PauliOperator>& rows);
BitVector matrix_syndrome_product(const BinarySymplecticMatrix& a,
                                  const BinarySymplecticVector& v);

// All 4^n - 1 non-identity Paulis of weight <= w are visited in weight order,
// letters ordered X < Y < Z per position (lexicographic over qubit index).
std::vector<PauliOperator> enumerate_paulis(std::size_t n, std::size_t max_weight,
                                            bool include_identity = true);

}  // namespace qsteg
