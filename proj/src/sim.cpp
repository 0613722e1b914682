#include "qsteg/sim.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace qsteg {

namespace {

const cplx kI(0.0, 1.0);

void check_state_width(std::size_t n) {
  if (n > max_state_qubits)
    throw std::invalid_argument("state vector limited to " + std::to_string(max_state_qubits) +
                                " qubits, requested " + std::to_string(n));
}

void check_density_width(std::size_t n) {
  if (n > max_density_qubits)
    throw std::invalid_argument("density matrix limited to " +
                                std::to_string(max_density_qubits) + " qubits, requested " +
                                std::to_string(n));
}

std::size_t bit_of(std::size_t n, std::size_t q) { return std::size_t{1} << (n - 1 - q); }

cplx i_pow(int k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return {1, 0};
    case 1: return {0, 1};
    case 2: return {-1, 0};
    default: return {0, -1};
  }
}

// Applies a gate to the row index of `m` (each column is a vector on n qubits).
void gate_rows(Eigen::MatrixXcd& m, std::size_t n, const CliffordGate& g) {
  const auto dim = static_cast<std::size_t>(m.rows());
  switch (g.kind) {
    case GateKind::H: {
      const std::size_t b = bit_of(n, g.q0);
      const double r = 1.0 / std::sqrt(2.0);
      for (std::size_t i = 0; i < dim; ++i) {
        if (i & b) continue;
        const auto i0 = static_cast<Eigen::Index>(i), i1 = static_cast<Eigen::Index>(i | b);
        Eigen::RowVectorXcd a = m.row(i0), c = m.row(i1);
        m.row(i0) = (a + c) * r;
        m.row(i1) = (a - c) * r;
      }
      break;
    }
    case GateKind::P: {
      const std::size_t b = bit_of(n, g.q0);
      for (std::size_t i = 0; i < dim; ++i)
        if (i & b) m.row(static_cast<Eigen::Index>(i)) *= kI;
      break;
    }
    case GateKind::CNOT: {
      const std::size_t bc = bit_of(n, g.q0), bt = bit_of(n, g.q1);
      for (std::size_t i = 0; i < dim; ++i)
        if ((i & bc) && !(i & bt))
          m.row(static_cast<Eigen::Index>(i)).swap(m.row(static_cast<Eigen::Index>(i | bt)));
      break;
    }
    case GateKind::SWAP: {
      const std::size_t ba = bit_of(n, g.q0), bb = bit_of(n, g.q1);
      for (std::size_t i = 0; i < dim; ++i)
        if ((i & ba) && !(i & bb))
          m.row(static_cast<Eigen::Index>(i))
              .swap(m.row(static_cast<Eigen::Index>((i & ~ba) | bb)));
      break;
    }
  }
}

void monomial_rows(Eigen::MatrixXcd& m, const MonomialMap& u) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(m.rows(), m.cols());
  std::vector<bool> hit(static_cast<std::size_t>(m.rows()), false);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    const auto [t, ph] = u.map(static_cast<std::size_t>(i));
    if (t >= hit.size() || hit[t]) throw std::invalid_argument("monomial map is not a bijection");
    hit[t] = true;
    out.row(static_cast<Eigen::Index>(t)) = ph * m.row(i);
  }
  m = std::move(out);
}

MonomialMap pauli_map(std::size_t n, const PauliOperator& p) {
  std::size_t xmask = 0, zmask = 0;
  int ys = 0;
  for (std::size_t q = 0; q < n; ++q) {
    if (p.x_bits().get(q)) xmask |= bit_of(n, q);
    if (p.z_bits().get(q)) zmask |= bit_of(n, q);
    if (p.letter(q) == 'Y') ++ys;
  }
  // Y|b> = i(-1)^b |b xor 1>, so P|b> = i^{phase + #Y} (-1)^{|b & z|} |b xor x>.
  const cplx base = i_pow(p.phase() + ys);
  return {[=](std::size_t i) {
    const bool odd = std::popcount(static_cast<unsigned long long>(i & zmask)) & 1;
    return std::make_pair(i ^ xmask, odd ? -base : base);
  }};
}

void require(std::size_t a, std::size_t b, const char* what) {
  if (a != b)
    throw std::invalid_argument(std::string(what) + ": width mismatch (" + std::to_string(a) +
                                " vs " + std::to_string(b) + ")");
}

}  // namespace

StateVector StateVector::zero(std::size_t n) { return basis(n, 0); }

StateVector StateVector::basis(std::size_t n, std::size_t index) {
  check_state_width(n);
  StateVector s;
  s.n_ = n;
  s.v_ = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(std::size_t{1} << n));
  if (index >= (std::size_t{1} << n)) throw std::out_of_range("basis index out of range");
  s.v_(static_cast<Eigen::Index>(index)) = 1.0;
  return s;
}

StateVector StateVector::basis(const std::string& bits) {
  std::size_t idx = 0;
  for (char c : bits) {
    if (c != '0' && c != '1') throw std::invalid_argument("basis: expected a 0/1 string");
    idx = (idx << 1) | static_cast<std::size_t>(c == '1');
  }
  return basis(bits.size(), idx);
}

StateVector StateVector::from_amplitudes(std::size_t n, Eigen::VectorXcd amps) {
  check_state_width(n);
  if (amps.size() != static_cast<Eigen::Index>(std::size_t{1} << n))
    throw std::invalid_argument("from_amplitudes: expected 2^n amplitudes");
  const double nrm = amps.norm();
  if (std::abs(nrm - 1.0) > 1e-12) throw std::invalid_argument("from_amplitudes: not normalized");
  StateVector s;
  s.n_ = n;
  s.v_ = std::move(amps);
  return s;
}

std::string StateVector::to_csv() const {
  std::ostringstream os;
  os.precision(12);
  os << "index,re,im\n";
  for (Eigen::Index i = 0; i < v_.size(); ++i)
    os << i << ',' << v_(i).real() << ',' << v_(i).imag() << '\n';
  return os.str();
}

DensityMatrix DensityMatrix::from_state(const StateVector& s) {
  check_density_width(s.qubits());
  DensityMatrix d;
  d.n_ = s.qubits();
  d.m_ = s.v_ * s.v_.adjoint();
  return d;
}

DensityMatrix DensityMatrix::from_matrix(std::size_t n, Eigen::MatrixXcd m) {
  check_density_width(n);
  const auto dim = static_cast<Eigen::Index>(std::size_t{1} << n);
  if (m.rows() != dim || m.cols() != dim)
    throw std::invalid_argument("from_matrix: expected a 2^n x 2^n matrix");
  DensityMatrix d;
  d.n_ = n;
  d.m_ = std::move(m);
  return d;
}

DensityMatrix DensityMatrix::maximally_mixed(std::size_t n) {
  check_density_width(n);
  const auto dim = static_cast<Eigen::Index>(std::size_t{1} << n);
  return from_matrix(n, Eigen::MatrixXcd::Identity(dim, dim) / static_cast<double>(dim));
}

std::string DensityMatrix::check_invariants(double tol) const {
  if (std::abs(trace() - 1.0) > tol) return "trace differs from 1";
  if ((m_ - m_.adjoint()).cwiseAbs().maxCoeff() > tol) return "matrix is not Hermitian";
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m_, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-9) return "matrix has a negative eigenvalue";
  return {};
}

StateVector apply_gate(const StateVector& s, const CliffordGate& g) {
  if (g.q0 >= s.qubits() || g.q1 >= s.qubits()) throw std::out_of_range("gate outside state");
  Eigen::MatrixXcd m = s.amplitudes();
  gate_rows(m, s.qubits(), g);
  return StateVector::from_amplitudes(s.qubits(), m.col(0));
}

StateVector apply_circuit(const StateVector& s, const CliffordCircuit& c) {
  require(s.qubits(), c.width, "apply_circuit");
  Eigen::MatrixXcd m = s.amplitudes();
  for (const auto& g : c.gates) gate_rows(m, s.qubits(), g);
  return StateVector::from_amplitudes(s.qubits(), m.col(0));
}

StateVector apply_pauli(const StateVector& s, const PauliOperator& p) {
  require(s.qubits(), p.size(), "apply_pauli");
  return apply_monomial(s, pauli_map(s.qubits(), p));
}

StateVector apply_monomial(const StateVector& s, const MonomialMap& u) {
  Eigen::MatrixXcd m = s.amplitudes();
  monomial_rows(m, u);
  return StateVector::from_amplitudes(s.qubits(), m.col(0));
}

DensityMatrix apply_circuit(const DensityMatrix& rho, const CliffordCircuit& c) {
  require(rho.qubits(), c.width, "apply_circuit");
  Eigen::MatrixXcd m = rho.matrix();
  for (const auto& g : c.gates) gate_rows(m, rho.qubits(), g);
  Eigen::MatrixXcd t = m.adjoint();
  for (const auto& g : c.gates) gate_rows(t, rho.qubits(), g);
  return DensityMatrix::from_matrix(rho.qubits(), t.adjoint());
}

DensityMatrix apply_monomial(const DensityMatrix& rho, const MonomialMap& u) {
  Eigen::MatrixXcd m = rho.matrix();
  monomial_rows(m, u);
  Eigen::MatrixXcd t = m.adjoint();
  monomial_rows(t, u);
  return DensityMatrix::from_matrix(rho.qubits(), t.adjoint());
}

DensityMatrix apply_pauli(const DensityMatrix& rho, const PauliOperator& p) {
  require(rho.qubits(), p.size(), "apply_pauli");
  return apply_monomial(rho, pauli_map(rho.qubits(), p));
}

double pauli_expectation(const StateVector& s, const PauliOperator& p) {
  require(s.qubits(), p.size(), "pauli_expectation");
  const StateVector ps = apply_pauli(s, p);
  return s.amplitudes().dot(ps.amplitudes()).real();  // dot conjugates the first argument
}

double pauli_expectation(const DensityMatrix& rho, const PauliOperator& p) {
  require(rho.qubits(), p.size(), "pauli_expectation");
  Eigen::MatrixXcd m = rho.matrix();
  monomial_rows(m, pauli_map(rho.qubits(), p));
  return m.trace().real();
}

DensityMatrix apply_pauli_channel(const DensityMatrix& rho, const std::vector<KrausTerm>& kraus) {
  double total = 0.0;
  for (const auto& k : kraus) {
    if (k.weight < 0.0) throw std::invalid_argument("apply_pauli_channel: negative weight");
    total += k.weight;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw std::invalid_argument("apply_pauli_channel: weights sum to " + std::to_string(total));
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(rho.matrix().rows(), rho.matrix().cols());
  for (const auto& k : kraus) {
    if (k.weight == 0.0) continue;
    acc += k.weight * apply_pauli(rho, k.op).matrix();
  }
  return DensityMatrix::from_matrix(rho.qubits(), std::move(acc));
}

DensityMatrix depolarize(const DensityMatrix& rho, double p, const std::vector<std::size_t>& qubits) {
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("depolarize: p must lie in [0,1]");
  DensityMatrix out = rho;
  for (auto q : qubits) {
    std::vector<KrausTerm> k;
    k.push_back({1.0 - p, PauliOperator(rho.qubits())});
    for (char l : {'X', 'Y', 'Z'}) k.push_back({p / 3.0, PauliOperator::single(rho.qubits(), q, l)});
    out = apply_pauli_channel(out, k);
  }
  return out;
}

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<std::size_t>& keep_in) {
  if (keep_in.empty()) throw std::invalid_argument("partial_trace: empty keep set");
  std::vector<std::size_t> keep = keep_in;
  std::sort(keep.begin(), keep.end());
  keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
  const std::size_t n = rho.qubits();
  if (keep.back() >= n) throw std::out_of_range("partial_trace: qubit outside state");
  std::vector<std::size_t> traced;
  for (std::size_t q = 0; q < n; ++q)
    if (!std::binary_search(keep.begin(), keep.end(), q)) traced.push_back(q);
  const std::size_t nk = keep.size(), nt = traced.size();
  auto compose = [&](std::size_t a, std::size_t t) {
    std::size_t idx = 0;
    for (std::size_t j = 0; j < nk; ++j)
      if ((a >> (nk - 1 - j)) & 1) idx |= bit_of(n, keep[j]);
    for (std::size_t j = 0; j < nt; ++j)
      if ((t >> (nt - 1 - j)) & 1) idx |= bit_of(n, traced[j]);
    return static_cast<Eigen::Index>(idx);
  };
  const std::size_t dk = std::size_t{1} << nk, dt = std::size_t{1} << nt;
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dk),
                                                static_cast<Eigen::Index>(dk));
  for (std::size_t a = 0; a < dk; ++a)
    for (std::size_t b = 0; b < dk; ++b) {
      cplx s = 0.0;
      for (std::size_t t = 0; t < dt; ++t) s += rho.matrix()(compose(a, t), compose(b, t));
      out(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = s;
    }
  return DensityMatrix::from_matrix(nk, std::move(out));
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.qubits() != b.qubits()) throw std::invalid_argument("trace_distance: shape mismatch");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a.matrix() - b.matrix(),
                                                     Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

double fidelity(const DensityMatrix& rho, const StateVector& psi) {
  require(rho.qubits(), psi.qubits(), "fidelity");
  return psi.amplitudes().dot(rho.matrix() * psi.amplitudes()).real();
}

double fidelity(const StateVector& a, const StateVector& b) {
  require(a.qubits(), b.qubits(), "fidelity");
  return std::norm(a.amplitudes().dot(b.amplitudes()));
}

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  const std::size_t n = a.qubits() + b.qubits();
  check_density_width(n);
  const auto& A = a.matrix();
  const auto& B = b.matrix();
  Eigen::MatrixXcd m(A.rows() * B.rows(), A.cols() * B.cols());
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = 0; j < A.cols(); ++j)
      m.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
  return DensityMatrix::from_matrix(n, std::move(m));
}

StateVector tensor(const StateVector& a, const StateVector& b) {
  const std::size_t n = a.qubits() + b.qubits();
  check_state_width(n);
  const auto& A = a.amplitudes();
  const auto& B = b.amplitudes();
  Eigen::VectorXcd v(A.size() * B.size());
  for (Eigen::Index i = 0; i < A.size(); ++i) v.segment(i * B.size(), B.size()) = A(i) * B;
  return StateVector::from_amplitudes(n, std::move(v));
}

}  // namespace qsteg
