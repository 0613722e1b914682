#include "qsteg/codes.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace qsteg {

namespace {

std::vector<PauliOperator> parse_all(const std::vector<std::string>& v) {
  std::vector<PauliOperator> out;
  for (const auto& s : v) out.push_back(parse_pauli(s));
  return out;
}

void check_width(const StabilizerCode& code, const PauliOperator& p, const char* what) {
  if (p.size() != code.n)
    throw std::invalid_argument(std::string(what) + ": operator has " +
                                std::to_string(p.size()) + " qubits, code has " +
                                std::to_string(code.n));
}

std::vector<BitVector> flat_rows(const std::vector<PauliOperator>& ops) {
  std::vector<BitVector> rows;
  rows.reserve(ops.size());
  for (const auto& p : ops) rows.push_back(to_flat_symplectic(p));
  return rows;
}

}  // namespace

std::vector<std::size_t> StabilizerCode::noisy_qubits() const {
  std::vector<std::size_t> q;
  for (std::size_t i = 0; i < n; ++i)
    if (!bob_qubit || *bob_qubit != i) q.push_back(i);
  return q;
}

std::vector<std::string> builtin_code_names() {
  return {"repetition3", "five_qubit", "six_qubit", "six_qubit_subsystem", "steane",
          "ea_six_qubit"};
}

StabilizerCode builtin_code(const std::string& name) {
  static const std::pair<const char*, BuiltinCode> table[] = {
      {"repetition3", BuiltinCode::repetition3},
      {"five_qubit", BuiltinCode::five_qubit},
      {"six_qubit", BuiltinCode::six_qubit},
      {"six_qubit_subsystem", BuiltinCode::six_qubit_subsystem},
      {"steane", BuiltinCode::steane},
      {"ea_six_qubit", BuiltinCode::ea_six_qubit}};
  for (const auto& [n, c] : table)
    if (name == n) return builtin_code(c);
  std::string valid;
  for (const auto& n : builtin_code_names()) valid += (valid.empty() ? "" : ", ") + n;
  throw std::invalid_argument("unknown code '" + name + "'; valid names: " + valid);
}

StabilizerCode builtin_code(BuiltinCode which) {
  StabilizerCode c;
  switch (which) {
    case BuiltinCode::repetition3:
      c.name = "repetition3";
      c.n = 3;
      c.k = 1;
      c.generators = parse_all({"ZZI", "IZZ"});
      c.logical_x = parse_all({"XXX"});
      c.logical_z = parse_all({"ZII"});
      break;
    case BuiltinCode::five_qubit:
      c.name = "five_qubit";
      c.n = 5;
      c.k = 1;
      c.generators = parse_all({"XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"});
      c.logical_x = parse_all({"XXXXX"});
      c.logical_z = parse_all({"ZZZZZ"});
      // The published syndrome table reads the generators in the order in
      // which the standard encoder's ancillas carry them: g4, g1, g3, g2.
      c.syndrome_order = {3, 0, 2, 1};
      break;
    case BuiltinCode::six_qubit:
      c.name = "six_qubit";
      c.n = 6;
      c.k = 1;
      // The printed h1 reads Y as ZX = iY; two such letters give the overall -1.
      c.generators = parse_all({"-YIZXXY", "ZXIIXZ", "IZXXXX", "IIIZIZ", "ZZZIZI"});
      c.logical_x = parse_all({"ZIXIXI"});
      c.logical_z = parse_all({"IZIIZZ"});
      break;
    case BuiltinCode::six_qubit_subsystem:
      c.name = "six_qubit_subsystem";
      c.n = 6;
      c.k = 1;
      c.generators = parse_all({"-YIZXXY", "ZXIIXZ", "IZXXXX", "ZZZIZI"});
      c.gauge_generators = parse_all({"IIIXII", "IIIZIZ"});
      c.logical_x = parse_all({"ZIXIXI"});
      c.logical_z = parse_all({"IZIIZZ"});
      break;
    case BuiltinCode::steane: {
      c.name = "steane";
      c.n = 7;
      c.k = 1;
      const BitMatrix h = hamming_parity_check();
      for (char t : {'X', 'Z'})
        for (std::size_t r = 0; r < h.rows(); ++r) {
          PauliOperator p(7);
          for (std::size_t q = 0; q < 7; ++q)
            if (h.get(r, q)) p.set_letter(q, t);
          c.generators.push_back(p);
        }
      c.logical_x = parse_all({"XXXXXXX"});
      c.logical_z = parse_all({"ZZZZZZZ"});
      break;
    }
    case BuiltinCode::ea_six_qubit:
      c.name = "ea_six_qubit";
      c.n = 7;
      c.k = 1;
      c.ebits = 1;
      c.bob_qubit = 0;
      c.generators =
          parse_all({"IZIZZZI", "IZZIIZZ", "ZZIIZIZ", "IXXIIXX", "IIXXXIX", "XXIIXIX"});
      c.logical_x = parse_all({"IIIIXXX"});
      c.logical_z = parse_all({"IIZZIZI"});
      break;
  }
  return c;
}

BitMatrix ea_six_qubit_parity_check() {
  return BitMatrix::from_strings({"100101", "010110", "001011"});
}

BitMatrix hamming_parity_check() {
  return BitMatrix::from_strings({"1001011", "0101101", "0010111"});
}

ValidationReport validate_code(const StabilizerCode& code) {
  ValidationReport r;
  const auto& g = code.generators;
  auto fail = [&](std::string msg) {
    r.ok = false;
    r.failures.push_back(std::move(msg));
  };
  for (const auto* list : {&code.generators, &code.logical_x, &code.logical_z,
                           &code.gauge_generators})
    for (const auto& p : *list)
      if (p.size() != code.n) {
        fail("operator " + format_pauli(p) + " has wrong qubit count");
        return r;
      }
  if (!code.syndrome_order.empty()) {
    auto sorted = code.syndrome_order;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i)
      if (sorted.size() != g.size() || sorted[i] != i) {
        fail("syndrome_order is not a permutation of the generators");
        break;
      }
  }

  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = i + 1; j < g.size(); ++j)
      if (!g[i].commutes_with(g[j])) {
        r.anticommuting_pairs.emplace_back(i, j);
        fail("generators g" + std::to_string(i + 1) + " and g" + std::to_string(j + 1) +
             " anticommute");
      }

  const auto rows = flat_rows(g);
  r.rank = gf2_rank(rows);
  r.independent = r.rank == g.size();
  if (!r.independent) fail("generators are dependent (rank " + std::to_string(r.rank) + ")");

  // -I membership: each dependency among generators multiplies to ±I (or ±iI).
  for (const auto& p : g)
    if (!p.is_hermitian()) {
      r.minus_identity_free = false;
      fail("generator " + format_pauli(p) + " is not Hermitian");
    }
  if (!r.independent && r.anticommuting_pairs.empty()) {
    for (std::size_t k = 0; k < g.size(); ++k) {
      std::vector<BitVector> prev(rows.begin(), rows.begin() + static_cast<long>(k));
      auto combo = gf2_solve_combination(prev, rows[k]);
      if (!combo) continue;
      PauliOperator prod = g[k];
      for (std::size_t i = 0; i < k; ++i)
        if (combo->get(i)) prod = prod * g[i];
      if (prod.phase() != 0) {
        r.minus_identity_free = false;
        fail("a product of generators equals " + format_pauli(prod));
      }
    }
  }

  if (code.logical_x.size() != code.k || code.logical_z.size() != code.k) {
    r.logicals_ok = false;
    fail("expected " + std::to_string(code.k) + " logical X/Z pairs");
  } else {
    std::vector<PauliOperator> must_commute = g;
    must_commute.insert(must_commute.end(), code.gauge_generators.begin(),
                        code.gauge_generators.end());
    for (std::size_t i = 0; i < code.k; ++i) {
      for (const auto* L : {&code.logical_x[i], &code.logical_z[i]})
        for (std::size_t j = 0; j < must_commute.size(); ++j)
          if (!L->commutes_with(must_commute[j])) {
            r.logicals_ok = false;
            fail("logical " + format_pauli(*L) + " anticommutes with " +
                 format_pauli(must_commute[j]));
          }
      for (std::size_t j = 0; j < code.k; ++j) {
        const bool anti = !code.logical_x[i].commutes_with(code.logical_z[j]);
        if (anti != (i == j)) {
          r.logicals_ok = false;
          fail("logical pairing broken between Xbar" + std::to_string(i + 1) + " and Zbar" +
               std::to_string(j + 1));
        }
      }
    }
  }

  if (!code.gauge_generators.empty()) {
    for (const auto& h : code.gauge_generators)
      for (const auto& s : g)
        if (!h.commutes_with(s)) {
          r.gauge_ok = false;
          fail("gauge generator " + format_pauli(h) + " anticommutes with stabilizer " +
               format_pauli(s));
        }
    auto all = rows;
    for (const auto& h : code.gauge_generators) all.push_back(to_flat_symplectic(h));
    if (gf2_rank(all) != rows.size() + code.gauge_generators.size()) {
      r.gauge_ok = false;
      fail("gauge generators are not independent of the stabilizer");
    }
  }

  if (code.ebits > 0) {
    if (!code.bob_qubit || *code.bob_qubit >= code.n) {
      fail("entanglement-assisted code lacks a valid Bob column");
    } else {
      const std::size_t b = *code.bob_qubit;
      std::size_t touching = 0;
      std::vector<BitVector> col;
      for (const auto& p : g) {
        if (p.letter(b) != 'I') ++touching;
        BitVector v(2);
        v.set(0, p.x_bits().get(b));
        v.set(1, p.z_bits().get(b));
        col.push_back(v);
      }
      if (touching != 2 * code.ebits || gf2_rank(col) != 2)
        fail("Bob column must carry exactly one X-type and one Z-type generator");
      for (const auto* list : {&code.logical_x, &code.logical_z})
        for (const auto& L : *list)
          if (L.letter(b) != 'I') fail("logical " + format_pauli(L) + " acts on Bob's qubit");
    }
  }
  return r;
}

BitVector syndrome(const StabilizerCode& code, const PauliOperator& error) {
  check_width(code, error, "syndrome");
  BitVector s(code.generators.size());
  for (std::size_t i = 0; i < s.size(); ++i)
    if (!error.commutes_with(code.generators[code.generator_for_bit(i)])) s.set(i);
  return s;
}

SyndromeTable build_syndrome_table(const StabilizerCode& code, std::size_t max_weight,
                                   const std::string& letters) {
  if (max_weight > code.n) throw std::invalid_argument("max_weight exceeds code length");
  const auto qubits = code.noisy_qubits();
  SyndromeTable t;
  for (const auto& local : enumerate_paulis(qubits.size(), max_weight, true)) {
    bool allowed = true;
    PauliOperator e(code.n);
    for (std::size_t i = 0; i < qubits.size(); ++i) {
      const char l = local.letter(i);
      if (l == 'I') continue;
      if (letters.find(l) == std::string::npos) allowed = false;
      e.set_letter(qubits[i], l);
    }
    if (!allowed) continue;
    t.entries[syndrome(code, e).to_string()].push_back(e);
  }
  return t;
}

std::string SyndromeTable::to_csv() const {
  std::ostringstream os;
  os << "syndrome,error,weight\n";
  for (const auto& [s, errs] : entries)
    for (const auto& e : errs) os << s << ',' << format_pauli(e) << ',' << e.weight() << '\n';
  return os.str();
}

std::string format_syndrome_table(const SyndromeTable& table) {
  std::ostringstream os;
  os << "Error,Syndrome\n";
  for (const auto& [s, errs] : table.entries) os << format_pauli(errs.front()) << ',' << s << '\n';
  return os.str();
}

std::string to_string(PairClass c) {
  switch (c) {
    case PairClass::anticommutes: return "anticommutes";
    case PairClass::in_stabilizer: return "in-stabilizer";
    case PairClass::in_gauge: return "in-gauge-group";
    case PairClass::uncorrectable: return "UNCORRECTABLE";
  }
  return "?";
}

bool in_stabilizer(const StabilizerCode& code, const PauliOperator& p) {
  check_width(code, p, "in_stabilizer");
  return p.is_identity() || gf2_in_row_space(flat_rows(code.generators), to_flat_symplectic(p));
}

bool in_gauge_group(const StabilizerCode& code, const PauliOperator& p) {
  check_width(code, p, "in_gauge_group");
  auto rows = flat_rows(code.generators);
  for (const auto& h : code.gauge_generators) rows.push_back(to_flat_symplectic(h));
  return p.is_identity() || gf2_in_row_space(rows, to_flat_symplectic(p));
}

PairVerdict classify_product(const StabilizerCode& code, const PauliOperator& product) {
  PairVerdict v;
  v.product = product;
  for (std::size_t i = 0; i < code.generators.size(); ++i)
    if (!product.commutes_with(code.generators[i])) {
      v.verdict = PairClass::anticommutes;
      v.generator = i;
      return v;
    }
  if (in_stabilizer(code, product))
    v.verdict = PairClass::in_stabilizer;
  else if (!code.gauge_generators.empty() && in_gauge_group(code, product))
    v.verdict = PairClass::in_gauge;
  else
    v.verdict = PairClass::uncorrectable;
  return v;
}

CorrectabilityReport correctability_report(const StabilizerCode& code,
                                           const std::vector<PauliOperator>& errors) {
  for (const auto& e : errors) check_width(code, e, "correctability_report");
  CorrectabilityReport rep;
  for (std::size_t a = 0; a < errors.size(); ++a)
    for (std::size_t b = a + 1; b < errors.size(); ++b) {
      // Pauli adjoint only conjugates the phase; classification is phase-free.
      PairVerdict v = classify_product(code, errors[a] * errors[b]);
      v.a = a;
      v.b = b;
      if (v.verdict == PairClass::uncorrectable) ++rep.uncorrectable;
      rep.pairs.push_back(std::move(v));
    }
  return rep;
}

namespace {

// Packed (x | z << n) words for n <= 12 with a reduced basis for span tests.
struct SmallSpan {
  std::vector<std::uint32_t> basis;
  std::vector<int> lead;
  void add(std::uint32_t v) {
    for (std::size_t i = 0; i < basis.size(); ++i)
      if ((v >> lead[i]) & 1u) v ^= basis[i];
    if (!v) return;
    const int l = std::countr_zero(v);
    for (auto& b : basis)
      if ((b >> l) & 1u) b ^= v;
    basis.push_back(v);
    lead.push_back(l);
  }
  bool contains(std::uint32_t v) const {
    for (std::size_t i = 0; i < basis.size(); ++i)
      if ((v >> lead[i]) & 1u) v ^= basis[i];
    return v == 0;
  }
};

std::uint32_t pack(const PauliOperator& p) {
  const std::size_t n = p.size();
  return static_cast<std::uint32_t>(p.x_bits().to_u64() | (p.z_bits().to_u64() << n));
}

std::size_t distance_over(const StabilizerCode& code, const std::vector<std::size_t>& qubits) {
  const std::size_t n = code.n;
  if (n > 12)
    throw std::invalid_argument("distance: exhaustive enumeration refused for n = " +
                                std::to_string(n) + " > 12");
  const std::uint32_t nmask = (1u << n) - 1;
  std::vector<std::uint32_t> gens;
  for (const auto& g : code.generators) gens.push_back(pack(g));
  SmallSpan trivial;  // operators that act trivially on the encoded information
  for (auto g : gens) trivial.add(g);
  for (const auto& h : code.gauge_generators) trivial.add(pack(h));
  auto commutes_all = [&](std::uint32_t v) {
    const std::uint32_t x = v & nmask, z = v >> n;
    for (auto g : gens) {
      const std::uint32_t gx = g & nmask, gz = g >> n;
      if ((std::popcount(x & gz) + std::popcount(z & gx)) & 1) return false;
    }
    return true;
  };
  const std::size_t m = qubits.size();
  for (std::size_t w = 1; w <= m; ++w) {
    // Iterate supports of size w via bitmask combinations over m positions.
    for (std::uint32_t sup = (1u << w) - 1; sup < (1u << m);) {
      std::vector<std::size_t> pos;
      for (std::size_t i = 0; i < m; ++i)
        if ((sup >> i) & 1u) pos.push_back(qubits[i]);
      std::uint32_t count = 1;
      for (std::size_t i = 0; i < w; ++i) count *= 3;
      for (std::uint32_t c = 0; c < count; ++c) {
        std::uint32_t v = 0, t = c;
        for (std::size_t i = 0; i < w; ++i, t /= 3) {
          const std::uint32_t l = t % 3;  // 0 X, 1 Y, 2 Z
          if (l != 2) v |= 1u << pos[i];
          if (l != 0) v |= 1u << (pos[i] + n);
        }
        if (commutes_all(v) && !trivial.contains(v)) return w;
      }
      const std::uint32_t lo = sup & -sup, r = sup + lo;
      sup = (((r ^ sup) >> 2) / lo) | r;
    }
  }
  return 0;  // no nontrivial logical operator found on the allowed qubits
}

}  // namespace

std::size_t distance(const StabilizerCode& code) {
  std::vector<std::size_t> all(code.n);
  for (std::size_t i = 0; i < code.n; ++i) all[i] = i;
  if (code.bob_qubit) return distance_over(code, code.noisy_qubits());
  return distance_over(code, all);
}

std::size_t ea_distance(const StabilizerCode& code) {
  return distance_over(code, code.noisy_qubits());
}

std::size_t min_ebits(const BitMatrix& h) { return gf2_rank(h * h.transpose()); }

StabilizerCode reduce_to_ea(const StabilizerCode& code, std::size_t bob) {
  if (bob >= code.n) throw std::out_of_range("reduce_to_ea: Bob qubit out of range");
  if (code.ebits != 0 || code.bob_qubit)
    throw std::invalid_argument("reduce_to_ea: code already entanglement-assisted");
  if (code.k != 1) throw std::invalid_argument("reduce_to_ea: expected one logical qubit");
  std::vector<PauliOperator> g = code.generators;
  auto col = [&](const PauliOperator& p) {
    return (p.x_bits().get(bob) ? 1 : 0) | (p.z_bits().get(bob) ? 2 : 0);
  };
  // Find two generators whose Bob-column letters are distinct non-identity
  // letters; any Y is then replaced by the product giving the missing letter.
  std::optional<std::size_t> a, b;
  for (std::size_t i = 0; i < g.size() && !b; ++i) {
    if (col(g[i]) == 0) continue;
    if (!a)
      a = i;
    else if (col(g[i]) != col(g[*a]))
      b = i;
  }
  if (!a || !b)
    throw std::invalid_argument("reduce_to_ea: column " + std::to_string(bob + 1) +
                                " lacks two distinct Pauli types; errors on that qubit "
                                "cannot all be corrected");
  PauliOperator gx = g[*a], gz = g[*b];
  if (col(gx) == 3) gx = gx * gz;         // Y·(X or Z) -> the other letter
  if (col(gz) == 3) gz = gz * gx;
  if (col(gx) == 2) std::swap(gx, gz);    // ensure gx has X, gz has Z on Bob
  auto clear = [&](PauliOperator p) {
    const int c = col(p);
    if (c & 1) p = p * gx;
    if (c & 2) p = p * gz;
    return p.unsigned_copy().with_phase(p.phase() & 2);
  };
  StabilizerCode out = code;
  out.name = code.name + "_ea_bob" + std::to_string(bob + 1);
  out.generators.clear();
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (i == *a || i == *b) continue;
    out.generators.push_back(clear(g[i]));
  }
  out.generators.push_back(gz.with_phase(gz.phase() & 2));
  out.generators.push_back(gx.with_phase(gx.phase() & 2));
  for (auto& L : out.logical_x) L = clear(L);
  for (auto& L : out.logical_z) L = clear(L);
  out.ebits = 1;
  out.bob_qubit = bob;
  out.syndrome_order.clear();
  return out;
}

std::string serialize_code(const StabilizerCode& code) {
  std::ostringstream os;
  os << "name: " << code.name << '\n';
  for (std::size_t i = 0; i < code.generators.size(); ++i)
    os << 'g' << i + 1 << ": " << format_pauli(code.generators[i]) << '\n';
  for (const auto& h : code.gauge_generators) os << "gauge: " << format_pauli(h) << '\n';
  for (const auto& L : code.logical_x) os << "Xbar: " << format_pauli(L) << '\n';
  for (const auto& L : code.logical_z) os << "Zbar: " << format_pauli(L) << '\n';
  if (code.ebits) os << "ebits: " << code.ebits << '\n';
  if (code.bob_qubit) os << "bob: " << *code.bob_qubit + 1 << '\n';
  if (!code.syndrome_order.empty()) {
    os << "order:";
    for (auto i : code.syndrome_order) os << ' ' << i + 1;
    os << '\n';
  }
  return os.str();
}

StabilizerCode parse_code(const std::string& text) {
  StabilizerCode c;
  std::istringstream is(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    const auto colon = line.find(':');
    if (colon == std::string::npos)
      throw std::invalid_argument("parse_code: line " + std::to_string(lineno) +
                                  " lacks ':'");
    const std::string key = line.substr(0, colon);
    std::string val = line.substr(colon + 1);
    val.erase(0, val.find_first_not_of(' '));
    if (key == "name") {
      c.name = val;
    } else if (key.size() > 1 && key[0] == 'g' &&
               key.find_first_not_of("0123456789", 1) == std::string::npos) {
      c.generators.push_back(parse_pauli(val));
    } else if (key == "gauge") {
      c.gauge_generators.push_back(parse_pauli(val));
    } else if (key == "Xbar") {
      c.logical_x.push_back(parse_pauli(val));
    } else if (key == "Zbar") {
      c.logical_z.push_back(parse_pauli(val));
    } else if (key == "ebits") {
      c.ebits = std::stoul(val);
    } else if (key == "bob") {
      c.bob_qubit = std::stoul(val) - 1;
    } else if (key == "order") {
      std::istringstream vs(val);
      std::size_t i;
      while (vs >> i) c.syndrome_order.push_back(i - 1);
    } else {
      throw std::invalid_argument("parse_code: unknown key '" + key + "' on line " +
                                  std::to_string(lineno));
    }
  }
  if (c.generators.empty()) throw std::invalid_argument("parse_code: no generators");
  c.n = c.generators.front().size();
  c.k = c.logical_x.size();
  return c;
}

}  // namespace qsteg
