#include "qsteg/pauli.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <ostream>
#include <stdexcept>

namespace qsteg {

namespace {

int mod4(int v) { return ((v % 4) + 4) % 4; }

void require_same_size(const PauliOperator& a, const PauliOperator& b, const char* what) {
  if (a.size() != b.size())
    throw std::invalid_argument(std::string(what) + ": qubit count mismatch (" +
                                std::to_string(a.size()) + " vs " +
                                std::to_string(b.size()) + ")");
}

}  // namespace

PauliOperator::PauliOperator(BitVector x, BitVector z, int phase)
    : x_(std::move(x)), z_(std::move(z)), phase_(mod4(phase)) {
  if (x_.size() != z_.size())
    throw std::invalid_argument("PauliOperator: x and z lengths differ");
}

PauliOperator PauliOperator::single(std::size_t n, std::size_t qubit, char letter) {
  if (qubit >= n) throw std::out_of_range("PauliOperator::single: qubit out of range");
  PauliOperator p(n);
  p.set_letter(qubit, letter);
  return p;
}

char PauliOperator::letter(std::size_t q) const {
  const bool x = x_.get(q), z = z_.get(q);
  return x ? (z ? 'Y' : 'X') : (z ? 'Z' : 'I');
}

void PauliOperator::set_letter(std::size_t q, char letter) {
  switch (letter) {
    case 'I': x_.set(q, false); z_.set(q, false); break;
    case 'X': x_.set(q, true);  z_.set(q, false); break;
    case 'Y': x_.set(q, true);  z_.set(q, true);  break;
    case 'Z': x_.set(q, false); z_.set(q, true);  break;
    default:
      throw std::invalid_argument(std::string("invalid Pauli letter '") + letter + "'");
  }
}

bool PauliOperator::commutes_with(const PauliOperator& o) const {
  require_same_size(*this, o, "commutes_with");
  return x_.dot(o.z_) == z_.dot(o.x_);
}

PauliOperator PauliOperator::with_phase(int phase) const {
  PauliOperator p = *this;
  p.phase_ = mod4(phase);
  return p;
}

PauliOperator PauliOperator::slice(std::size_t begin, std::size_t len) const {
  return PauliOperator(x_.slice(begin, len), z_.slice(begin, len), 0);
}

PauliOperator parse_pauli(std::string_view text) {
  std::size_t pos = 0;
  int phase = 0;
  if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
    if (text[pos] == '-') phase = 2;
    ++pos;
  }
  if (pos < text.size() && text[pos] == 'i') {
    phase += 1;
    ++pos;
  }
  if (pos == text.size())
    throw std::invalid_argument("parse_pauli: no Pauli letters in \"" +
                                std::string(text) + "\"");
  PauliOperator p(text.size() - pos);
  for (std::size_t i = pos; i < text.size(); ++i) {
    const char c = text[i];
    if (c != 'I' && c != 'X' && c != 'Y' && c != 'Z')
      throw std::invalid_argument("parse_pauli: invalid character '" + std::string(1, c) +
                                  "' at index " + std::to_string(i) + " in \"" +
                                  std::string(text) + "\"");
    p.set_letter(i - pos, c);
  }
  return p.with_phase(phase);
}

std::string format_pauli(const PauliOperator& p) {
  static const char* prefix[4] = {"", "i", "-", "-i"};
  std::string s = prefix[p.phase()];
  for (std::size_t q = 0; q < p.size(); ++q) s.push_back(p.letter(q));
  return s;
}

std::ostream& operator<<(std::ostream& os, const PauliOperator& p) {
  return os << format_pauli(p);
}

PauliOperator multiply(const PauliOperator& a, const PauliOperator& b) {
  require_same_size(a, b, "multiply");
  // Per qubit, XY = iZ, YZ = iX, ZX = iY and the reversed orders give -i.
  int phase = a.phase() + b.phase();
  const auto& ax = a.x_bits().words();
  const auto& az = a.z_bits().words();
  const auto& bx = b.x_bits().words();
  const auto& bz = b.z_bits().words();
  for (std::size_t w = 0; w < ax.size(); ++w) {
    const std::uint64_t aX = ax[w] & ~az[w], aY = ax[w] & az[w], aZ = ~ax[w] & az[w];
    const std::uint64_t bX = bx[w] & ~bz[w], bY = bx[w] & bz[w], bZ = ~bx[w] & bz[w];
    const std::uint64_t pos = (aX & bY) | (aY & bZ) | (aZ & bX);
    const std::uint64_t neg = (aY & bX) | (aZ & bY) | (aX & bZ);
    phase += std::popcount(pos) - std::popcount(neg);
  }
  return PauliOperator(a.x_bits() ^ b.x_bits(), a.z_bits() ^ b.z_bits(), phase);
}

PauliOperator tensor(const PauliOperator& a, const PauliOperator& b) {
  return PauliOperator(a.x_bits().concat(b.x_bits()), a.z_bits().concat(b.z_bits()),
                       a.phase() + b.phase());
}

bool equal_up_to_phase(const PauliOperator& a, const PauliOperator& b) {
  return a.x_bits() == b.x_bits() && a.z_bits() == b.z_bits();
}

BinarySymplecticVector to_symplectic(const PauliOperator& p) {
  return {p.z_bits(), p.x_bits()};
}

PauliOperator from_symplectic(const BinarySymplecticVector& v) {
  if (v.z_part.size() != v.x_part.size())
    throw std::invalid_argument("from_symplectic: part lengths differ");
  return PauliOperator(v.x_part, v.z_part, 0);
}

BitVector to_flat_symplectic(const PauliOperator& p) { return p.z_bits().concat(p.x_bits()); }

bool symplectic_product(const BinarySymplecticVector& u, const BinarySymplecticVector& v) {
  if (u.size() != v.size() || u.x_part.size() != v.x_part.size())
    throw std::invalid_argument("symplectic_product: length mismatch");
  return u.z_part.dot(v.x_part) ^ u.x_part.dot(v.z_part);
}

BinarySymplecticMatrix to_symplectic_matrix(const std::vector<PauliOperator>& rows) {
  const std::size_t n = rows.empty() ? 0 : rows.front().size();
  BinarySymplecticMatrix m{BitMatrix(rows.size(), n), BitMatrix(rows.size(), n)};
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != n)
      throw std::invalid_argument("to_symplectic_matrix: ragged operator list");
    m.z_block.row(r) = rows[r].z_bits();
    m.x_block.row(r) = rows[r].x_bits();
  }
  return m;
}

BitVector matrix_syndrome_product(const BinarySymplecticMatrix& a,
                                  const BinarySymplecticVector& v) {
  if (a.qubits() != v.size())
    throw std::invalid_argument("matrix_syndrome_product: matrix has " +
                                std::to_string(2 * a.qubits()) + " columns but vector has " +
                                std::to_string(2 * v.size()) + " entries");
  BitVector w(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    if (a.z_block.row(i).dot(v.x_part) ^ a.x_block.row(i).dot(v.z_part)) w.set(i);
  return w;
}

std::vector<PauliOperator> enumerate_paulis(std::size_t n, std::size_t max_weight,
                                            bool include_identity) {
  std::vector<PauliOperator> out;
  if (include_identity) out.emplace_back(n);
  static const char letters[3] = {'X', 'Y', 'Z'};
  for (std::size_t w = 1; w <= std::min(max_weight, n); ++w) {
    std::vector<std::size_t> support;
    std::function<void(std::size_t)> choose = [&](std::size_t start) {
      if (support.size() == w) {
        std::vector<int> digit(w, 0);
        while (true) {
          PauliOperator p(n);
          for (std::size_t k = 0; k < w; ++k) p.set_letter(support[k], letters[digit[k]]);
          out.push_back(std::move(p));
          std::size_t k = w;
          while (k > 0 && digit[k - 1] == 2) digit[--k] = 0;
          if (k == 0) break;
          ++digit[k - 1];
        }
        return;
      }
      for (std::size_t q = start; q < n; ++q) {
        support.push_back(q);
        choose(q + 1);
        support.pop_back();
      }
    };
    choose(0);
  }
  return out;
}

}  // namespace qsteg
