#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qsteg/clifford.hpp"
#include "qsteg/pauli.hpp"

namespace qsteg {

using cplx = std::complex<double>;

inline constexpr std::size_t max_state_qubits = 14;
inline constexpr std::size_t max_density_qubits = 10;

// Qubit 0 is the most significant bit of the amplitude index, so the ket
// |q0 q1 ... q_{n-1}> is read left to right.
class StateVector {
 public:
  StateVector() = default;
  static StateVector zero(std::size_t n);
  static StateVector basis(std::size_t n, std::size_t index);
  static StateVector basis(const std::string& bits);  // e.g. "010"
  static StateVector from_amplitudes(std::size_t n, Eigen::VectorXcd amps);

  std::size_t qubits() const { return n_; }
  const Eigen::VectorXcd& amplitudes() const { return v_; }
  cplx amplitude(std::size_t index) const { return v_(static_cast<Eigen::Index>(index)); }
  double norm() const { return v_.norm(); }

  // Debug dump: one "index,re,im" line per amplitude.
  std::string to_csv() const;

 private:
  std::size_t n_ = 0;
  Eigen::VectorXcd v_;
  friend class DensityMatrix;
};

class DensityMatrix {
 public:
  DensityMatrix() = default;
  static DensityMatrix from_state(const StateVector& s);
  static DensityMatrix from_matrix(std::size_t n, Eigen::MatrixXcd m);
  static DensityMatrix maximally_mixed(std::size_t n);

  std::size_t qubits() const { return n_; }
  const Eigen::MatrixXcd& matrix() const { return m_; }
  double trace() const { return m_.trace().real(); }
  // Checks trace, hermiticity and positivity; returns an empty string if all hold.
  std::string check_invariants(double tol = 1e-10) const;

 private:
  std::size_t n_ = 0;
  Eigen::MatrixXcd m_;
};

StateVector apply_gate(const StateVector& s, const CliffordGate& g);
StateVector apply_circuit(const StateVector& s, const CliffordCircuit& c);
StateVector apply_pauli(const StateVector& s, const PauliOperator& p);
DensityMatrix apply_circuit(const DensityMatrix& rho, const CliffordCircuit& c);
DensityMatrix apply_pauli(const DensityMatrix& rho, const PauliOperator& p);

// A unitary with one nonzero entry per column: |i> -> phase(i) |target(i)>.
struct MonomialMap {
  std::function<std::pair<std::size_t, cplx>(std::size_t)> map;
};
StateVector apply_monomial(const StateVector& s, const MonomialMap& u);
DensityMatrix apply_monomial(const DensityMatrix& rho, const MonomialMap& u);

double pauli_expectation(const StateVector& s, const PauliOperator& p);
double pauli_expectation(const DensityMatrix& rho, const PauliOperator& p);

struct KrausTerm {
  double weight = 0.0;
  PauliOperator op;
};
DensityMatrix apply_pauli_channel(const DensityMatrix& rho, const std::vector<KrausTerm>& kraus);
// Independent single-qubit depolarizing channel with error probability p on
// each listed qubit (X, Y, Z each with probability p/3).
DensityMatrix depolarize(const DensityMatrix& rho, double p, const std::vector<std::size_t>& qubits);

// Keeps the listed (zero-based) qubits in increasing order.
DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<std::size_t>& keep);
double trace_distance(const DensityMatrix& a, const DensityMatrix& b);
// <psi| rho |psi> for a pure reference state.
double fidelity(const DensityMatrix& rho, const StateVector& psi);
// |<a|b>|^2
double fidelity(const StateVector& a, const StateVector& b);

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);
StateVector tensor(const StateVector& a, const StateVector& b);

}  // namespace qsteg
