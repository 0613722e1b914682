#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qsteg/codes.hpp"

namespace qsteg {

// A CSS stabilizer given by two row spaces, each stored as its reduced row
// echelon basis (bit j = qubit j, pivot = lowest set bit).
struct CssCandidate {
  std::size_t n = 0;
  std::vector<std::uint32_t> x_rows;
  std::vector<std::uint32_t> z_rows;
  std::optional<std::size_t> bob_qubit;  // set for entanglement-assisted candidates

  StabilizerCode to_code() const;
  friend bool operator==(const CssCandidate&, const CssCandidate&) = default;
};

struct SplitOutcome {
  std::size_t x_generators = 0, z_generators = 0;
  std::uint64_t x_row_spaces = 0;  // distinct X-type row spaces
  std::uint64_t candidates = 0;    // commuting (X space, Z space) pairs examined
  std::uint64_t correctable = 0;
  std::string reason;              // why the split yields nothing (empty when it has hits)
  std::string example_failure;     // "E_a,E_b" pair failing for the first candidate
};

struct SearchOutcome {
  std::size_t n = 0, k = 0;
  std::optional<std::size_t> bob_qubit;  // entanglement-assisted variant
  std::vector<SplitOutcome> splits;
  std::vector<CssCandidate> witnesses;
  bool exhaustive_report = true;  // every candidate went through correctability_report
  std::uint64_t candidates() const;
};

struct CssSearchOptions {
  std::size_t n = 6, k = 1;
  // When set, the column is Bob's half of one ebit: it is noise-free, the
  // generator count is n - k (n counts Bob's column) and both an X-type and a
  // Z-type generator must touch it.
  std::optional<std::size_t> bob_qubit;
  // true: correctability_report on every candidate. false: a packed bit-mask
  // test screens candidates and only survivors are confirmed by the report.
  bool exhaustive_report = true;
};

// Enumerates every split of the n - k generators into a X-type and n - k - a
// Z-type ones, X row spaces in RREF and, for each, every Z row space inside
// its orthogonal complement, and keeps the candidates that correct all
// weight-1 errors on the noisy qubits. n <= 12.
SearchOutcome search_css(const CssSearchOptions& options);
SearchOutcome search_css_613();

// All subspaces of GF(2)^n of dimension r, one RREF basis each.
std::vector<std::vector<std::uint32_t>> enumerate_row_spaces(std::size_t n, std::size_t r);
std::vector<std::uint32_t> rref_rows(std::vector<std::uint32_t> rows);

// Bit-mask version of the weight-1 correctability test for a CSS stabilizer.
bool css_corrects_single_errors(const CssCandidate& c, const std::vector<std::size_t>& noisy_qubits);

std::string summarize(const SearchOutcome& outcome);

}  // namespace qsteg
