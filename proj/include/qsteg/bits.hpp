#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qsteg {

// Fixed-length GF(2) vector packed into 64-bit words. Bit i lives in word
// i/64 at position i%64; trailing bits of the last word are always zero.
class BitVector {
 public:
  BitVector() = default;
  explicit BitVector(std::size_t n) : n_(n), w_((n + 63) / 64, 0) {}

  // Parses a string of '0'/'1' characters; index 0 is the leftmost character.
  static BitVector from_string(std::string_view s);
  // Low `n` bits of `v`, bit i of v -> index i.
  static BitVector from_u64(std::size_t n, std::uint64_t v);

  std::size_t size() const { return n_; }
  bool get(std::size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1u; }
  void set(std::size_t i, bool v = true) {
    const std::uint64_t m = std::uint64_t{1} << (i & 63);
    if (v)
      w_[i >> 6] |= m;
    else
      w_[i >> 6] &= ~m;
  }
  void flip(std::size_t i) { w_[i >> 6] ^= std::uint64_t{1} << (i & 63); }
  void clear();

  std::size_t popcount() const;
  bool any() const;
  bool none() const { return !any(); }
  // Parity of the bitwise AND (the GF(2) inner product).
  bool dot(const BitVector& o) const;

  BitVector& operator^=(const BitVector& o);
  BitVector& operator&=(const BitVector& o);
  BitVector& operator|=(const BitVector& o);
  friend BitVector operator^(BitVector a, const BitVector& b) { return a ^= b; }
  friend BitVector operator&(BitVector a, const BitVector& b) { return a &= b; }
  friend BitVector operator|(BitVector a, const BitVector& b) { return a |= b; }
  friend bool operator==(const BitVector& a, const BitVector& b) = default;
  // Orders by length, then by the '0'/'1' string read left to right.
  friend bool operator<(const BitVector& a, const BitVector& b);

  // Concatenation: this followed by `o`.
  BitVector concat(const BitVector& o) const;
  BitVector slice(std::size_t begin, std::size_t len) const;

  std::string to_string() const;
  // Only valid for n <= 64.
  std::uint64_t to_u64() const;

  const std::vector<std::uint64_t>& words() const { return w_; }
  std::vector<std::uint64_t>& words() { return w_; }

 private:
  void check_same(const BitVector& o) const;
  std::size_t n_ = 0;
  std::vector<std::uint64_t> w_;
};

// Dense GF(2) matrix stored as packed rows.
class BitMatrix {
 public:
  BitMatrix() = default;
  BitMatrix(std::size_t rows, std::size_t cols);
  explicit BitMatrix(std::vector<BitVector> rows);
  // Rows as strings of '0'/'1'.
  static BitMatrix from_strings(const std::vector<std::string>& rows);
  static BitMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_.size(); }
  std::size_t cols() const { return cols_; }
  bool get(std::size_t r, std::size_t c) const { return rows_[r].get(c); }
  void set(std::size_t r, std::size_t c, bool v = true) { rows_[r].set(c, v); }
  BitVector& row(std::size_t r) { return rows_[r]; }
  const BitVector& row(std::size_t r) const { return rows_[r]; }
  const std::vector<BitVector>& row_vectors() const { return rows_; }
  void append_row(BitVector r);

  BitVector column(std::size_t c) const;
  BitMatrix transpose() const;
  BitVector multiply(const BitVector& v) const;  // A v
  friend BitMatrix operator*(const BitMatrix& a, const BitMatrix& b);
  friend bool operator==(const BitMatrix& a, const BitMatrix& b) = default;

  std::vector<std::string> to_strings() const;

 private:
  std::size_t cols_ = 0;
  std::vector<BitVector> rows_;
};

struct RowOp {
  enum class Kind { Swap, Add };
  Kind kind;
  std::size_t src;  // for Add: row src is added into dst
  std::size_t dst;
};

struct Gf2Reduction {
  BitMatrix reduced;  // reduced row-echelon form
  std::size_t rank = 0;
  std::vector<std::size_t> pivot_cols;
  std::vector<RowOp> ops;
};

// Reduced row-echelon form over GF(2), recording the elementary operations.
Gf2Reduction gf2_reduce(const BitMatrix& a);
std::size_t gf2_rank(const BitMatrix& a);
std::size_t gf2_rank(const std::vector<BitVector>& rows);

// Finds coefficients c with sum_i c_i rows[i] = target, if any.
std::optional<BitVector> gf2_solve_combination(const std::vector<BitVector>& rows,
                                               const BitVector& target);
bool gf2_in_row_space(const std::vector<BitVector>& rows, const BitVector& target);

}  // namespace qsteg
