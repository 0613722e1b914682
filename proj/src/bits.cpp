#include "qsteg/bits.hpp"

#include <algorithm>
#include <stdexcept>

namespace qsteg {

BitVector BitVector::from_string(std::string_view s) {
  BitVector v(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '1')
      v.set(i);
    else if (s[i] != '0')
      throw std::invalid_argument("bit string has invalid character at index " +
                                  std::to_string(i));
  }
  return v;
}

BitVector BitVector::from_u64(std::size_t n, std::uint64_t v) {
  if (n > 64) throw std::invalid_argument("from_u64: length exceeds 64");
  BitVector b(n);
  if (n > 0) b.w_[0] = n == 64 ? v : (v & ((std::uint64_t{1} << n) - 1));
  return b;
}

void BitVector::clear() { std::fill(w_.begin(), w_.end(), 0); }

std::size_t BitVector::popcount() const {
  std::size_t c = 0;
  for (auto w : w_) c += static_cast<std::size_t>(std::popcount(w));
  return c;
}

bool BitVector::any() const {
  return std::any_of(w_.begin(), w_.end(), [](std::uint64_t w) { return w != 0; });
}

void BitVector::check_same(const BitVector& o) const {
  if (n_ != o.n_)
    throw std::invalid_argument("bit vector length mismatch: " + std::to_string(n_) +
                                " vs " + std::to_string(o.n_));
}

bool BitVector::dot(const BitVector& o) const {
  check_same(o);
  std::uint64_t acc = 0;
  for (std::size_t i = 0; i < w_.size(); ++i) acc ^= w_[i] & o.w_[i];
  return std::popcount(acc) & 1;
}

BitVector& BitVector::operator^=(const BitVector& o) {
  check_same(o);
  for (std::size_t i = 0; i < w_.size(); ++i) w_[i] ^= o.w_[i];
  return *this;
}

BitVector& BitVector::operator&=(const BitVector& o) {
  check_same(o);
  for (std::size_t i = 0; i < w_.size(); ++i) w_[i] &= o.w_[i];
  return *this;
}

BitVector& BitVector::operator|=(const BitVector& o) {
  check_same(o);
  for (std::size_t i = 0; i < w_.size(); ++i) w_[i] |= o.w_[i];
  return *this;
}

bool operator<(const BitVector& a, const BitVector& b) {
  if (a.n_ != b.n_) return a.n_ < b.n_;
  for (std::size_t i = 0; i < a.n_; ++i)
    if (a.get(i) != b.get(i)) return b.get(i);
  return false;
}

BitVector BitVector::concat(const BitVector& o) const {
  BitVector r(n_ + o.n_);
  for (std::size_t i = 0; i < n_; ++i)
    if (get(i)) r.set(i);
  for (std::size_t i = 0; i < o.n_; ++i)
    if (o.get(i)) r.set(n_ + i);
  return r;
}

BitVector BitVector::slice(std::size_t begin, std::size_t len) const {
  if (begin + len > n_) throw std::out_of_range("bit vector slice out of range");
  BitVector r(len);
  for (std::size_t i = 0; i < len; ++i)
    if (get(begin + i)) r.set(i);
  return r;
}

std::string BitVector::to_string() const {
  std::string s(n_, '0');
  for (std::size_t i = 0; i < n_; ++i)
    if (get(i)) s[i] = '1';
  return s;
}

std::uint64_t BitVector::to_u64() const {
  if (n_ > 64) throw std::invalid_argument("to_u64: length exceeds 64");
  return w_.empty() ? 0 : w_[0];
}

BitMatrix::BitMatrix(std::size_t rows, std::size_t cols)
    : cols_(cols), rows_(rows, BitVector(cols)) {}

BitMatrix::BitMatrix(std::vector<BitVector> rows) : rows_(std::move(rows)) {
  cols_ = rows_.empty() ? 0 : rows_.front().size();
  for (const auto& r : rows_)
    if (r.size() != cols_) throw std::invalid_argument("ragged bit matrix rows");
}

BitMatrix BitMatrix::from_strings(const std::vector<std::string>& rows) {
  std::vector<BitVector> v;
  v.reserve(rows.size());
  for (const auto& r : rows) v.push_back(BitVector::from_string(r));
  return BitMatrix(std::move(v));
}

BitMatrix BitMatrix::identity(std::size_t n) {
  BitMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.set(i, i);
  return m;
}

void BitMatrix::append_row(BitVector r) {
  if (rows_.empty() && cols_ == 0) cols_ = r.size();
  if (r.size() != cols_) throw std::invalid_argument("append_row: width mismatch");
  rows_.push_back(std::move(r));
}

BitVector BitMatrix::column(std::size_t c) const {
  BitVector v(rows());
  for (std::size_t r = 0; r < rows(); ++r)
    if (get(r, c)) v.set(r);
  return v;
}

BitMatrix BitMatrix::transpose() const {
  BitMatrix t(cols_, rows());
  for (std::size_t r = 0; r < rows(); ++r)
    for (std::size_t c = 0; c < cols_; ++c)
      if (get(r, c)) t.set(c, r);
  return t;
}

BitVector BitMatrix::multiply(const BitVector& v) const {
  if (v.size() != cols_) throw std::invalid_argument("matrix-vector width mismatch");
  BitVector out(rows());
  for (std::size_t r = 0; r < rows(); ++r)
    if (rows_[r].dot(v)) out.set(r);
  return out;
}

BitMatrix operator*(const BitMatrix& a, const BitMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matrix product shape mismatch");
  BitMatrix out(a.rows(), b.cols());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t k = 0; k < a.cols(); ++k)
      if (a.get(r, k)) out.row(r) ^= b.row(k);
  return out;
}

std::vector<std::string> BitMatrix::to_strings() const {
  std::vector<std::string> s;
  for (const auto& r : rows_) s.push_back(r.to_string());
  return s;
}

Gf2Reduction gf2_reduce(const BitMatrix& a) {
  Gf2Reduction out;
  out.reduced = a;
  BitMatrix& m = out.reduced;
  std::size_t lead = 0;
  for (std::size_t c = 0; c < m.cols() && lead < m.rows(); ++c) {
    std::size_t piv = lead;
    while (piv < m.rows() && !m.get(piv, c)) ++piv;
    if (piv == m.rows()) continue;
    if (piv != lead) {
      std::swap(m.row(piv), m.row(lead));
      out.ops.push_back({RowOp::Kind::Swap, piv, lead});
    }
    for (std::size_t r = 0; r < m.rows(); ++r) {
      if (r != lead && m.get(r, c)) {
        m.row(r) ^= m.row(lead);
        out.ops.push_back({RowOp::Kind::Add, lead, r});
      }
    }
    out.pivot_cols.push_back(c);
    ++lead;
  }
  out.rank = lead;
  return out;
}

std::size_t gf2_rank(const BitMatrix& a) { return gf2_rank(a.row_vectors()); }

std::size_t gf2_rank(const std::vector<BitVector>& rows) {
  // Incremental basis keyed by leading bit; cheaper than a full RREF.
  std::vector<BitVector> basis;
  std::vector<std::size_t> lead;
  for (BitVector v : rows) {
    for (std::size_t i = 0; i < basis.size(); ++i)
      if (v.get(lead[i])) v ^= basis[i];
    if (v.none()) continue;
    std::size_t l = 0;
    while (!v.get(l)) ++l;
    for (std::size_t i = 0; i < basis.size(); ++i)
      if (basis[i].get(l)) basis[i] ^= v;
    basis.push_back(std::move(v));
    lead.push_back(l);
  }
  return basis.size();
}

std::optional<BitVector> gf2_solve_combination(const std::vector<BitVector>& rows,
                                               const BitVector& target) {
  // Each basis entry carries the combination of input rows that produced it.
  const std::size_t m = rows.size();
  std::vector<BitVector> basis, combo;
  std::vector<std::size_t> lead;
  for (std::size_t k = 0; k < m; ++k) {
    if (rows[k].size() != target.size())
      throw std::invalid_argument("gf2_solve_combination: width mismatch");
    BitVector v = rows[k];
    BitVector c(m);
    c.set(k);
    for (std::size_t i = 0; i < basis.size(); ++i)
      if (v.get(lead[i])) {
        v ^= basis[i];
        c ^= combo[i];
      }
    if (v.none()) continue;
    std::size_t l = 0;
    while (!v.get(l)) ++l;
    for (std::size_t i = 0; i < basis.size(); ++i)
      if (basis[i].get(l)) {
        basis[i] ^= v;
        combo[i] ^= c;
      }
    basis.push_back(std::move(v));
    combo.push_back(std::move(c));
    lead.push_back(l);
  }
  BitVector t = target;
  BitVector c(m);
  for (std::size_t i = 0; i < basis.size(); ++i)
    if (t.get(lead[i])) {
      t ^= basis[i];
      c ^= combo[i];
    }
  if (t.any()) return std::nullopt;
  return c;
}

bool gf2_in_row_space(const std::vector<BitVector>& rows, const BitVector& target) {
  return gf2_solve_combination(rows, target).has_value();
}

}  // namespace qsteg
