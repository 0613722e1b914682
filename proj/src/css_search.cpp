#include "qsteg/css_search.hpp"

#include <algorithm>
#include <bit>
#include <fmt/format.h>
#include <stdexcept>

namespace qsteg {

namespace {

int pivot(std::uint32_t row) { return std::countr_zero(row); }

bool in_span(std::uint32_t v, const std::vector<std::uint32_t>& rref) {
  for (auto r : rref)
    if ((v >> pivot(r)) & 1u) v ^= r;
  return v == 0;
}

PauliOperator mask_pauli(std::size_t n, std::uint32_t x, std::uint32_t z) {
  PauliOperator p(n);
  for (std::size_t q = 0; q < n; ++q) {
    const bool bx = (x >> q) & 1u, bz = (z >> q) & 1u;
    if (bx || bz) p.set_letter(q, bx ? (bz ? 'Y' : 'X') : 'Z');
  }
  return p;
}

std::vector<std::uint32_t> orthogonal_complement(std::size_t n, const std::vector<std::uint32_t>& rows) {
  std::vector<std::uint32_t> members;
  for (std::uint32_t v = 1; v < (1u << n); ++v) {
    bool ok = true;
    for (auto r : rows)
      if (std::popcount(v & r) & 1) {
        ok = false;
        break;
      }
    if (ok) members.push_back(v);
  }
  return rref_rows(members);
}

void enumerate_rec(std::size_t n, std::size_t r, std::size_t start, std::vector<std::size_t>& pivots,
                   std::vector<std::vector<std::uint32_t>>& out) {
  if (pivots.size() == r) {
    // Free positions: non-pivot columns to the right of each row's pivot.
    std::vector<std::pair<std::size_t, std::size_t>> free;  // (row, column)
    std::uint32_t pivot_mask = 0;
    for (auto p : pivots) pivot_mask |= 1u << p;
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t c = pivots[i] + 1; c < n; ++c)
        if (!((pivot_mask >> c) & 1u)) free.emplace_back(i, c);
    const std::uint64_t count = std::uint64_t{1} << free.size();
    for (std::uint64_t f = 0; f < count; ++f) {
      std::vector<std::uint32_t> rows(r);
      for (std::size_t i = 0; i < r; ++i) rows[i] = 1u << pivots[i];
      for (std::size_t b = 0; b < free.size(); ++b)
        if ((f >> b) & 1u) rows[free[b].first] |= 1u << free[b].second;
      out.push_back(std::move(rows));
    }
    return;
  }
  for (std::size_t c = start; c + (r - pivots.size()) <= n; ++c) {
    pivots.push_back(c);
    enumerate_rec(n, r, c + 1, pivots, out);
    pivots.pop_back();
  }
}

std::vector<PauliOperator> single_errors(std::size_t n, const std::vector<std::size_t>& noisy) {
  std::vector<PauliOperator> errors{PauliOperator(n)};
  for (auto q : noisy)
    for (char l : {'X', 'Y', 'Z'}) errors.push_back(PauliOperator::single(n, q, l));
  return errors;
}

}  // namespace

std::vector<std::uint32_t> rref_rows(std::vector<std::uint32_t> rows) {
  std::vector<std::uint32_t> basis;
  for (auto v : rows) {
    for (auto b : basis)
      if ((v >> pivot(b)) & 1u) v ^= b;
    if (!v) continue;
    for (auto& b : basis)
      if ((b >> pivot(v)) & 1u) b ^= v;
    basis.push_back(v);
  }
  std::sort(basis.begin(), basis.end(), [](auto a, auto b) { return pivot(a) < pivot(b); });
  return basis;
}

std::vector<std::vector<std::uint32_t>> enumerate_row_spaces(std::size_t n, std::size_t r) {
  if (n > 12) throw std::invalid_argument("enumerate_row_spaces: n must not exceed 12");
  if (r > n) throw std::invalid_argument("enumerate_row_spaces: dimension exceeds n");
  std::vector<std::vector<std::uint32_t>> out;
  std::vector<std::size_t> pivots;
  enumerate_rec(n, r, 0, pivots, out);
  return out;
}

StabilizerCode CssCandidate::to_code() const {
  StabilizerCode c;
  c.name = "css_candidate";
  c.n = n;
  c.k = n - x_rows.size() - z_rows.size();
  for (auto r : x_rows) c.generators.push_back(mask_pauli(n, r, 0));
  for (auto r : z_rows) c.generators.push_back(mask_pauli(n, 0, r));
  if (bob_qubit) {
    c.bob_qubit = bob_qubit;
    c.ebits = 1;
  }
  return c;
}

bool css_corrects_single_errors(const CssCandidate& c, const std::vector<std::size_t>& noisy_qubits) {
  struct E {
    std::uint32_t x, z;
  };
  std::vector<E> errors{{0, 0}};
  for (auto q : noisy_qubits) {
    const std::uint32_t m = 1u << q;
    errors.push_back({m, 0});
    errors.push_back({m, m});
    errors.push_back({0, m});
  }
  for (std::size_t a = 0; a < errors.size(); ++a)
    for (std::size_t b = a + 1; b < errors.size(); ++b) {
      const std::uint32_t x = errors[a].x ^ errors[b].x, z = errors[a].z ^ errors[b].z;
      bool detected = false;
      for (auto g : c.x_rows) detected = detected || (std::popcount(g & z) & 1);
      for (auto g : c.z_rows) detected = detected || (std::popcount(g & x) & 1);
      if (!detected && !(in_span(x, c.x_rows) && in_span(z, c.z_rows))) return false;
    }
  return true;
}

std::uint64_t SearchOutcome::candidates() const {
  std::uint64_t t = 0;
  for (const auto& s : splits) t += s.candidates;
  return t;
}

SearchOutcome search_css(const CssSearchOptions& o) {
  if (o.n < 2 || o.n > 12) throw std::invalid_argument("search_css: n must lie in [2, 12]");
  if (o.k < 1 || o.k >= o.n) throw std::invalid_argument("search_css: need 1 <= k < n");
  if (o.bob_qubit && *o.bob_qubit >= o.n) throw std::invalid_argument("search_css: Bob's column is out of range");
  const std::size_t m = o.n - o.k;
  std::vector<std::size_t> noisy;
  for (std::size_t q = 0; q < o.n; ++q)
    if (!o.bob_qubit || q != *o.bob_qubit) noisy.push_back(q);
  const auto errors = single_errors(o.n, noisy);

  SearchOutcome out;
  out.n = o.n;
  out.k = o.k;
  out.bob_qubit = o.bob_qubit;
  out.exhaustive_report = o.exhaustive_report;

  for (std::size_t a = 0; a <= m; ++a) {
    SplitOutcome split;
    split.x_generators = a;
    split.z_generators = m - a;
    const auto xs = enumerate_row_spaces(o.n, a);
    split.x_row_spaces = xs.size();
    for (const auto& x : xs) {
      const auto perp = orthogonal_complement(o.n, x);
      if (perp.size() < m - a) continue;
      for (const auto& coords : enumerate_row_spaces(perp.size(), m - a)) {
        std::vector<std::uint32_t> z;
        for (auto cr : coords) {
          std::uint32_t v = 0;
          for (std::size_t i = 0; i < perp.size(); ++i)
            if ((cr >> i) & 1u) v ^= perp[i];
          z.push_back(v);
        }
        CssCandidate cand{o.n, x, rref_rows(z), o.bob_qubit};
        if (o.bob_qubit) {
          const std::uint32_t bob = 1u << *o.bob_qubit;
          const auto touches = [bob](const std::vector<std::uint32_t>& rows) {
            return std::any_of(rows.begin(), rows.end(), [bob](auto r) { return (r & bob) != 0; });
          };
          // One ebit needs an X and a Z on Bob's column; otherwise the column
          // is a plain code qubit that happens to be noise-free.
          if (!touches(cand.x_rows) || !touches(cand.z_rows)) continue;
        }
        ++split.candidates;
        bool ok;
        if (o.exhaustive_report || css_corrects_single_errors(cand, noisy)) {
          const auto rep = correctability_report(cand.to_code(), errors);
          ok = rep.all_correctable();
          if (!ok && split.example_failure.empty())
            for (const auto& pv : rep.pairs)
              if (pv.verdict == PairClass::uncorrectable) {
                split.example_failure = format_pauli(errors[pv.a]) + "," + format_pauli(errors[pv.b]);
                break;
              }
        } else {
          ok = false;
        }
        if (ok) {
          ++split.correctable;
          out.witnesses.push_back(std::move(cand));
        }
      }
    }
    if (split.correctable == 0) {
      if (a == 0 || a == m)
        split.reason = "same-type errors uncorrectable";
      else if (split.candidates == 0)
        split.reason = "no commuting candidate";
      else
        split.reason = "every candidate leaves a weight-1 pair uncorrectable";
    }
    out.splits.push_back(std::move(split));
  }
  return out;
}

SearchOutcome search_css_613() { return search_css({}); }

std::string summarize(const SearchOutcome& s) {
  std::string text = fmt::format("CSS search n={} k={}{}: {} candidates examined, {} codes found\n", s.n, s.k,
                                 s.bob_qubit ? fmt::format(" (ebit on qubit {})", *s.bob_qubit + 1) : "",
                                 s.candidates(), s.witnesses.size());
  for (const auto& sp : s.splits) {
    text += fmt::format("  split {}X/{}Z: {} X row spaces, {} candidates, {} correctable", sp.x_generators,
                        sp.z_generators, sp.x_row_spaces, sp.candidates, sp.correctable);
    if (!sp.reason.empty()) text += " -- " + sp.reason;
    text += "\n";
  }
  return text;
}

}  // namespace qsteg
