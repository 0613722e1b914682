#include "qsteg/clifford.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "qsteg/sim.hpp"

namespace qsteg {

void CliffordCircuit::add(const CliffordGate& g) {
  if (g.q0 >= width || g.q1 >= width)
    throw std::out_of_range("gate qubit index outside circuit width " + std::to_string(width));
  if (g.two_qubit() && g.q0 == g.q1)
    throw std::invalid_argument("two-qubit gate needs distinct qubits");
  gates.push_back(g);
}

CliffordCircuit CliffordCircuit::inverse() const {
  CliffordCircuit inv;
  inv.width = width;
  for (auto it = gates.rbegin(); it != gates.rend(); ++it) {
    // H, CNOT and SWAP are involutions; P^† = P^3.
    const int reps = it->kind == GateKind::P ? 3 : 1;
    for (int r = 0; r < reps; ++r) inv.gates.push_back(*it);
  }
  return inv;
}

PauliOperator conjugate_gate(const CliffordGate& g, const PauliOperator& p) {
  if (g.q0 >= p.size() || g.q1 >= p.size())
    throw std::out_of_range("conjugate_gate: qubit index out of range for " +
                            std::to_string(p.size()) + "-qubit operator");
  BitVector x = p.x_bits(), z = p.z_bits();
  int phase = p.phase();
  const std::size_t a = g.q0, b = g.q1;
  switch (g.kind) {
    case GateKind::H: {
      // X -> Z, Z -> X, Y -> -Y
      const bool xa = x.get(a), za = z.get(a);
      if (xa && za) phase += 2;
      x.set(a, za);
      z.set(a, xa);
      break;
    }
    case GateKind::P: {
      // X -> Y, Y -> -X, Z -> Z
      const bool xa = x.get(a), za = z.get(a);
      if (xa && za) phase += 2;
      z.set(a, za ^ xa);
      break;
    }
    case GateKind::CNOT: {
      const bool xc = x.get(a), zc = z.get(a), xt = x.get(b), zt = z.get(b);
      if (xc && zt && (xt == zc)) phase += 2;
      x.set(b, xt ^ xc);
      z.set(a, zc ^ zt);
      break;
    }
    case GateKind::SWAP: {
      const bool xa = x.get(a), za = z.get(a);
      x.set(a, x.get(b));
      z.set(a, z.get(b));
      x.set(b, xa);
      z.set(b, za);
      break;
    }
  }
  return PauliOperator(std::move(x), std::move(z), phase);
}

PauliOperator conjugate_circuit(const CliffordCircuit& c, const PauliOperator& p) {
  if (c.width != p.size())
    throw std::invalid_argument("conjugate_circuit: circuit width " + std::to_string(c.width) +
                                " vs operator width " + std::to_string(p.size()));
  PauliOperator out = p;
  for (const auto& g : c.gates) out = conjugate_gate(g, out);
  return out;
}

std::string format_circuit(const CliffordCircuit& c) {
  std::ostringstream os;
  for (const auto& g : c.gates) {
    switch (g.kind) {
      case GateKind::H: os << "H " << g.q0 + 1; break;
      case GateKind::P: os << "P " << g.q0 + 1; break;
      case GateKind::CNOT: os << "CNOT " << g.q0 + 1 << ' ' << g.q1 + 1; break;
      case GateKind::SWAP: os << "SWAP " << g.q0 + 1 << ' ' << g.q1 + 1; break;
    }
    os << '\n';
  }
  return os.str();
}

CliffordCircuit parse_circuit(const std::string& text, std::size_t width) {
  CliffordCircuit c;
  c.width = width;
  std::istringstream is(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string op;
    if (!(ls >> op) || op[0] == '#') continue;
    std::size_t a = 0, b = 0;
    auto bad = [&](const std::string& why) {
      return std::invalid_argument("parse_circuit line " + std::to_string(lineno) + ": " + why);
    };
    if (!(ls >> a) || a == 0) throw bad("missing or invalid qubit index");
    if (op == "H") {
      c.add(CliffordGate::h(a - 1));
    } else if (op == "P") {
      c.add(CliffordGate::p(a - 1));
    } else if (op == "CNOT" || op == "SWAP") {
      if (!(ls >> b) || b == 0) throw bad("two-qubit gate needs a second qubit");
      c.add(op == "CNOT" ? CliffordGate::cnot(a - 1, b - 1) : CliffordGate::swap(a - 1, b - 1));
    } else {
      throw bad("unknown gate '" + op + "'");
    }
  }
  return c;
}

EncoderLayout canonical_layout(const StabilizerCode& code) {
  EncoderLayout l;
  const auto alice = code.noisy_qubits();
  const std::size_t m = code.generators.size();
  if (m < 2 * code.ebits || alice.size() < m - code.ebits)
    throw std::invalid_argument("canonical_layout: inconsistent generator count");
  std::size_t slot = 0;
  for (std::size_t e = 0; e < code.ebits; ++e) l.ebit_pairs.emplace_back(*code.bob_qubit, alice[slot++]);
  const std::size_t ancillas = m - 2 * code.ebits;
  for (std::size_t i = 0; i < ancillas; ++i) l.ancillas.push_back(alice[slot++]);
  while (slot < alice.size()) l.info.push_back(alice[slot++]);
  return l;
}

std::vector<PauliOperator> canonical_generators(const StabilizerCode& code) {
  const auto l = canonical_layout(code);
  std::vector<PauliOperator> out;
  for (const auto& [b, a] : l.ebit_pairs) {
    PauliOperator zz(code.n), xx(code.n);
    zz.set_letter(b, 'Z');
    zz.set_letter(a, 'Z');
    xx.set_letter(b, 'X');
    xx.set_letter(a, 'X');
    out.push_back(zz);
    out.push_back(xx);
  }
  for (auto q : l.ancillas) out.push_back(PauliOperator::single(code.n, q, 'Z'));
  return out;
}

namespace {

// Reduction state: rows are conjugated by every column operation as it is
// applied; the list of operations is later reversed to form the encoder.
struct Reducer {
  std::vector<PauliOperator> rows;
  std::vector<PauliOperator> logicals;
  std::vector<CliffordGate> ops;
  std::vector<RowOp> row_ops;

  void apply(const CliffordGate& g) {
    ops.push_back(g);
    for (auto& r : rows) r = conjugate_gate(g, r);
    for (auto& r : logicals) r = conjugate_gate(g, r);
  }
  void row_add(std::size_t src, std::size_t dst) {
    rows[dst] = rows[src] * rows[dst];
    row_ops.push_back({RowOp::Kind::Add, src, dst});
  }

  // Turns the letter at column c of operator `p` into X (from Z or Y).
  void make_x(const PauliOperator& p, std::size_t c) {
    const char l = p.letter(c);
    if (l == 'Z') apply(CliffordGate::h(c));
    if (l == 'Y') apply(CliffordGate::p(c));  // binary action: Y -> X
  }

  // Reduces row `r` (restricted to `cols`, all other columns identity) to a
  // single X on cols[slot]. Only columns cols[slot..] are touched.
  void isolate_x(std::size_t r, const std::vector<std::size_t>& cols, std::size_t slot) {
    std::size_t piv = cols.size();
    for (std::size_t i = slot; i < cols.size(); ++i)
      if (rows[r].letter(cols[i]) != 'I') {
        piv = i;
        break;
      }
    if (piv == cols.size())
      throw std::runtime_error("synthesis stuck: generator " + std::to_string(r + 1) +
                               " has no support on column " + std::to_string(cols[slot] + 1) +
                               " or later");
    if (piv != slot) apply(CliffordGate::swap(cols[piv], cols[slot]));
    const std::size_t s = cols[slot];
    make_x(rows[r], s);
    for (std::size_t i = slot + 1; i < cols.size(); ++i) {
      const std::size_t c = cols[i];
      if (rows[r].letter(c) == 'I') continue;
      make_x(rows[r], c);
      apply(CliffordGate::cnot(s, c));
    }
  }

  // Reduces row `r`, which anticommutes with the Z already placed on
  // cols[slot], to X there without disturbing that Z.
  void isolate_partner_x(std::size_t r, const std::vector<std::size_t>& cols, std::size_t slot) {
    const std::size_t s = cols[slot];
    for (std::size_t i = slot + 1; i < cols.size(); ++i) {
      const std::size_t c = cols[i];
      if (rows[r].letter(c) == 'I') continue;
      make_x(rows[r], c);
      apply(CliffordGate::cnot(s, c));
    }
    if (rows[r].letter(s) == 'Y') apply(CliffordGate::p(s));
  }
};

}  // namespace

CliffordCircuit synthesize_encoder(const StabilizerCode& code) {
  const auto v = validate_code(code);
  if (!v.ok) throw std::invalid_argument("synthesize_encoder: invalid code: " + v.failures.front());
  if (code.ebits > 1)
    throw std::invalid_argument("synthesize_encoder: multi-ebit pairing order is not defined");
  if (!code.syndrome_order.empty()) {
    // Ancilla slot i carries syndrome bit i.
    StabilizerCode ordered = code;
    ordered.generators.clear();
    for (auto g : code.syndrome_order) ordered.generators.push_back(code.generators[g]);
    ordered.syndrome_order.clear();
    return synthesize_encoder(ordered);
  }
  // Logical pairs to place on the information slots. Gauge generators are
  // treated as extra (unprotected) logical pairs, taken consecutively.
  std::vector<PauliOperator> pair_x = code.logical_x, pair_z = code.logical_z;
  if (code.gauge_generators.size() % 2 != 0)
    throw std::invalid_argument("synthesize_encoder: gauge generators must come in X/Z pairs");
  for (std::size_t g = 0; g + 1 < code.gauge_generators.size(); g += 2) {
    if (code.gauge_generators[g].commutes_with(code.gauge_generators[g + 1]))
      throw std::invalid_argument("synthesize_encoder: gauge generators " + std::to_string(g + 1) +
                                  " and " + std::to_string(g + 2) + " do not anticommute");
    pair_x.push_back(code.gauge_generators[g]);
    pair_z.push_back(code.gauge_generators[g + 1]);
  }
  const auto layout = canonical_layout(code);
  const auto alice = code.noisy_qubits();
  const std::size_t m = code.generators.size();

  Reducer red;
  red.rows = code.generators;
  for (const auto& L : pair_x) red.logicals.push_back(L);
  for (const auto& L : pair_z) red.logicals.push_back(L);

  std::vector<std::size_t> order;  // row index occupying each canonical slot
  std::size_t slot = 0;

  if (code.ebits == 1) {
    const std::size_t b = *code.bob_qubit;
    auto col = [&](std::size_t r) {
      return (red.rows[r].x_bits().get(b) ? 1 : 0) | (red.rows[r].z_bits().get(b) ? 2 : 0);
    };
    // Row operations leaving exactly one row with X and one with Z on Bob.
    std::size_t rx = m, rz = m;
    for (std::size_t r = 0; r < m; ++r) {
      if (col(r) == 0) continue;
      if (rx == m) rx = r;
      else if (rz == m && col(r) != col(rx)) rz = r;
    }
    if (rz == m) throw std::runtime_error("synthesis stuck: Bob column lacks an X/Z pair");
    if (col(rx) == 3) red.row_add(rz, rx);
    if (col(rz) == 3) red.row_add(rx, rz);
    if (col(rx) == 2) std::swap(rx, rz);
    for (std::size_t r = 0; r < m; ++r) {
      if (r == rx || r == rz) continue;
      const int c = col(r);
      if (c & 1) red.row_add(rx, r);
      if (c & 2) red.row_add(rz, r);
    }
    red.isolate_x(rz, alice, 0);
    red.apply(CliffordGate::h(alice[0]));  // Alice part of rz is now Z
    red.isolate_partner_x(rx, alice, 0);
    order.push_back(rz);
    order.push_back(rx);
    slot = 1;
  }

  // Remaining generators become Z on consecutive ancilla slots.
  std::vector<bool> used(m, false);
  for (auto r : order) used[r] = true;
  for (std::size_t r = 0; r < m; ++r) {
    if (used[r]) continue;
    // Earlier slots are already clear: every processed row cleared its
    // column from the others, and rows commuting with an ebit pair vanish on
    // its Alice column.
    red.isolate_x(r, alice, slot);
    red.apply(CliffordGate::h(alice[slot]));
    for (std::size_t o = 0; o < m; ++o)
      if (o != r && red.rows[o].letter(alice[slot]) == 'Z') red.row_add(r, o);
    order.push_back(r);
    used[r] = true;
    ++slot;
  }

  // Logical operators: strip stabilizer content, then map the pair to the
  // information slot.
  const std::size_t k = pair_x.size();
  auto strip = [&](PauliOperator& L) {
    for (std::size_t i = 0; i < slot; ++i) {
      const std::size_t c = alice[i];
      const std::size_t r = order[code.ebits == 1 ? (i == 0 ? 0 : i + 1) : i];
      if (L.letter(c) == 'Z' && red.rows[r].letter(c) == 'Z') L = L * red.rows[r];
    }
    if (code.ebits == 1) {
      const std::size_t c = alice[0];
      if (L.letter(c) == 'X' || L.letter(c) == 'Y') L = L * red.rows[order[1]];
      if (L.letter(c) == 'Z') L = L * red.rows[order[0]];
    }
  };
  for (std::size_t t = 0; t < k; ++t) {
    for (auto& L : red.logicals) strip(L);
    const std::size_t zi = k + t, xi = t;
    // Reduce Zbar_t to Z on its info slot.
    red.rows.push_back(red.logicals[zi]);
    const std::size_t tmp = red.rows.size() - 1;
    red.isolate_x(tmp, alice, slot + t);
    red.apply(CliffordGate::h(alice[slot + t]));
    red.logicals[zi] = red.rows[tmp];
    red.rows.pop_back();
    red.rows.push_back(red.logicals[xi]);
    red.isolate_partner_x(red.rows.size() - 1, alice, slot + t);
    red.logicals[xi] = red.rows.back();
    red.rows.pop_back();
    for (std::size_t u = t + 1; u < k; ++u) {
      // Later logicals commute with both and are cleared on this slot by
      // multiplication with the pair.
      for (std::size_t which : {u, k + u}) {
        auto& L = red.logicals[which];
        const char l = L.letter(alice[slot + t]);
        if (l == 'X' || l == 'Y') L = L * red.logicals[xi];
        if (L.letter(alice[slot + t]) == 'Z') L = L * red.logicals[zi];
      }
    }
  }

  CliffordCircuit enc;
  enc.width = code.n;
  enc.row_ops = red.row_ops;
  // Encoder = reverse of the reduction (each op inverted).
  CliffordCircuit reduction;
  reduction.width = code.n;
  reduction.gates = red.ops;
  CliffordCircuit body = reduction.inverse();

  // Sign fixing: prepend Paulis on input slots so encoded generators and
  // logicals carry exactly the code's signs.
  const auto canon = canonical_generators(code);
  std::vector<PauliOperator> images;
  for (const auto& g : canon) images.push_back(conjugate_circuit(body, g));
  std::vector<BitVector> img_rows;
  for (const auto& im : images) img_rows.push_back(to_flat_symplectic(im));
  // flips[i] = 1 means the sign of image i must be flipped.
  const std::size_t mm = images.size();
  std::vector<BitVector> eq_rows;  // one row per code generator: which images compose it
  BitVector rhs(m);
  for (std::size_t j = 0; j < m; ++j) {
    auto combo = gf2_solve_combination(img_rows, to_flat_symplectic(code.generators[j]));
    if (!combo) throw std::runtime_error("synthesis failed: generator not reproduced");
    PauliOperator prod(code.n);
    for (std::size_t i = 0; i < mm; ++i)
      if (combo->get(i)) prod = prod * images[i];
    if (prod.phase() != code.generators[j].phase()) rhs.set(j);
    eq_rows.push_back(*combo);
  }
  // Solve eq_rows · f = rhs: transpose system so that columns are images.
  BitMatrix sys(eq_rows);
  std::vector<BitVector> cols;
  for (std::size_t i = 0; i < mm; ++i) cols.push_back(sys.column(i));
  auto flips = gf2_solve_combination(cols, rhs);
  if (!flips) throw std::runtime_error("synthesis failed: sign system inconsistent");

  std::vector<CliffordGate> prefix;
  auto add_x = [&](std::size_t q) {
    for (auto g : {CliffordGate::h(q), CliffordGate::p(q), CliffordGate::p(q), CliffordGate::h(q)})
      prefix.push_back(g);
  };
  auto add_z = [&](std::size_t q) {
    prefix.push_back(CliffordGate::p(q));
    prefix.push_back(CliffordGate::p(q));
  };
  for (std::size_t i = 0; i < mm; ++i) {
    if (!flips->get(i)) continue;
    if (code.ebits == 1 && i < 2) {
      // ZZ pair flipped by X on Alice's half; XX pair by Z.
      if (i == 0) add_x(layout.ebit_pairs[0].second);
      else add_z(layout.ebit_pairs[0].second);
    } else {
      add_x(layout.ancillas[i - 2 * code.ebits]);
    }
  }
  // Logical signs, judged modulo the (now correctly signed) stabilizer.
  CliffordCircuit trial;
  trial.width = code.n;
  trial.gates = prefix;
  trial.gates.insert(trial.gates.end(), body.gates.begin(), body.gates.end());
  std::vector<PauliOperator> fixed_images;
  for (const auto& g : canon) fixed_images.push_back(conjugate_circuit(trial, g));
  for (std::size_t t = 0; t < k; ++t) {
    const std::size_t q = layout.info[t];
    for (int which = 0; which < 2; ++which) {
      const PauliOperator in = PauliOperator::single(code.n, q, which == 0 ? 'X' : 'Z');
      const PauliOperator target = which == 0 ? pair_x[t] : pair_z[t];
      PauliOperator im = conjugate_circuit(trial, in);
      PauliOperator diff = im * target;  // stabilizer element times a sign
      auto combo = gf2_solve_combination(img_rows, to_flat_symplectic(diff));
      if (!combo) throw std::runtime_error("synthesis failed: logical operator not reproduced");
      PauliOperator s(code.n);
      for (std::size_t i = 0; i < mm; ++i)
        if (combo->get(i)) s = s * fixed_images[i];
      // im * target = ±s ; with target^2 = I, im = ±s * target.
      if (diff.phase() != s.phase()) {
        if (which == 0) add_z(q);
        else add_x(q);
      }
    }
  }
  enc.gates = prefix;
  enc.gates.insert(enc.gates.end(), body.gates.begin(), body.gates.end());
  return enc;
}

VerificationReport verify_encoder(const StabilizerCode& code, const CliffordCircuit& c) {
  VerificationReport rep;
  if (c.width != code.n) {
    rep.message = "circuit width does not match code length";
    return rep;
  }
  const auto canon = canonical_generators(code);
  std::vector<BitVector> img_rows;
  for (const auto& g : canon) {
    rep.images.push_back(conjugate_circuit(c, g));
    img_rows.push_back(to_flat_symplectic(rep.images.back()));
  }
  std::vector<BitVector> gen_rows;
  for (const auto& g : code.generators) gen_rows.push_back(to_flat_symplectic(g));
  rep.group_ok = true;
  for (std::size_t j = 0; j < code.generators.size(); ++j)
    if (!gf2_in_row_space(img_rows, gen_rows[j])) {
      rep.group_ok = false;
      rep.message = "generator g" + std::to_string(j + 1) + " (" +
                    format_pauli(code.generators[j]) + ") is not produced by the encoder";
      break;
    }
  if (rep.group_ok)
    for (std::size_t i = 0; i < rep.images.size(); ++i)
      if (!gf2_in_row_space(gen_rows, img_rows[i])) {
        rep.group_ok = false;
        rep.message = "encoded image " + format_pauli(rep.images[i]) +
                      " lies outside the code's stabilizer";
        break;
      }

  // State check on the dense simulator.
  const auto layout = canonical_layout(code);
  StateVector s = StateVector::zero(code.n);
  CliffordCircuit prep;
  prep.width = code.n;
  for (const auto& [b, a] : layout.ebit_pairs) {
    prep.add(CliffordGate::h(a));
    prep.add(CliffordGate::cnot(a, b));
  }
  s = apply_circuit(apply_circuit(s, prep), c);
  rep.state_ok = true;
  for (const auto& g : code.generators) {
    const double e = pauli_expectation(s, g);
    rep.expectations.push_back(e);
    if (std::abs(e - 1.0) > 1e-10) rep.state_ok = false;
  }
  if (!rep.state_ok && rep.message.empty())
    rep.message = "a code generator does not have expectation +1 on the encoded state";
  rep.ok = rep.group_ok && rep.state_ok;
  if (rep.ok) rep.message = "ok";
  return rep;
}

CliffordCircuit six_qubit_published_encoder() {
  return parse_circuit(
      "H 1\nH 2\nH 4\n"
      "CNOT 4 6\n"
      "H 4\n"
      "SWAP 3 6\n"
      "CNOT 3 6\n"
      "H 3\n"
      "CNOT 3 4\nCNOT 3 5\n"
      "H 3\n"
      "CNOT 2 5\nCNOT 2 6\n"
      "CNOT 1 6\n"
      "H 6\n"
      "CNOT 1 3\nCNOT 1 4\nCNOT 1 5\nCNOT 1 6\n"
      "H 3\n",
      6);
}

CliffordCircuit five_qubit_published_encoder() {
  return parse_circuit(
      "H 3\nH 4\n"
      "CNOT 4 5\n"
      "CNOT 3 4\nH 5\n"
      "CNOT 3 5\n"
      "H 2\nH 3\nH 4\n"
      "CNOT 2 3\n"
      "CNOT 2 4\n"
      "H 1\nH 2\nH 3\n"
      "CNOT 1 2\n"
      "CNOT 1 4\n"
      "CNOT 1 5\n"
      "H 1\nH 5\n",
      5);
}

}  // namespace qsteg
