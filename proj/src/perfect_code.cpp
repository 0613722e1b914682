#include "qsteg/perfect_code.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include <boost/math/distributions/chi_squared.hpp>
#include <fmt/format.h>

#include "qsteg/fixtures_data.hpp"

namespace qsteg {

const StegoEncoding& EncodingSet::by_id(int id) const {
  if (id == 0) return single;
  if (id >= 1 && id <= static_cast<int>(doubles.size())) return doubles[static_cast<std::size_t>(id - 1)];
  throw std::invalid_argument("EncodingSet: no encoding with id " + std::to_string(id));
}

StabilizerCode perfect_code() {
  // Logical representatives are taken from the published encoder, so any
  // encoder synthesized from this code agrees with it modulo the stabilizer.
  StabilizerCode code = builtin_code(BuiltinCode::five_qubit);
  const auto enc = five_qubit_published_encoder();
  code.logical_x = {conjugate_circuit(enc, PauliOperator::single(5, 4, 'X'))};
  code.logical_z = {conjugate_circuit(enc, PauliOperator::single(5, 4, 'Z'))};
  return code;
}

std::string perfect_syndrome(const PauliOperator& error) {
  static const StabilizerCode code = perfect_code();
  return syndrome(code, error).to_string();
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) {
    field.erase(0, field.find_first_not_of(" \t\r"));
    field.erase(field.find_last_not_of(" \t\r") + 1);
    out.push_back(field);
  }
  return out;
}

int syndrome_value(const std::string& s) {
  if (s.size() != 4 || s.find_first_not_of("01") != std::string::npos)
    throw std::invalid_argument("syndrome '" + s + "' is not a 4-bit string");
  return std::stoi(s, nullptr, 2);
}

}  // namespace

EncodingSet parse_encodings(const std::string& csv, bool strict) {
  EncodingSet set;
  std::map<int, StegoEncoding> by_id;
  std::map<int, std::vector<bool>> seen;
  const CliffordCircuit encoder = five_qubit_published_encoder();

  auto report = [&](int enc, const std::string& syn, std::size_t line, const std::string& msg) {
    if (strict)
      throw std::invalid_argument(fmt::format("encoding fixture line {}: {}", line, msg));
    set.issues.push_back({enc, syn, line, msg});
  };

  std::stringstream in(csv);
  std::string line;
  std::size_t lineno = 0;
  bool header = true;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos || line[0] == '#') continue;
    if (header) {
      header = false;
      if (line.rfind("encoding_id", 0) == 0) continue;
    }
    const auto f = split_csv(line);
    if (f.size() != 5)
      throw std::invalid_argument(fmt::format("encoding fixture line {}: expected 5 fields, got {}", lineno, f.size()));
    StegoRecord r;
    int id = 0;
    try {
      id = std::stoi(f[0]);
      r.syndrome = f[1];
      syndrome_value(r.syndrome);
      r.pre_error = parse_pauli(f[2]);
      r.cover_op = parse_pauli(f[3]);
      r.printed_encoded = parse_pauli(f[4]);
    } catch (const std::exception& e) {
      throw std::invalid_argument(fmt::format("encoding fixture line {}: {}", lineno, e.what()));
    }
    r.line = lineno;
    if (r.pre_error.size() != 4 || r.cover_op.size() != 1 || r.printed_encoded.size() != 5)
      throw std::invalid_argument(fmt::format("encoding fixture line {}: operator widths must be 4, 1 and 5", lineno));
    if (id < 0 || id > 6)
      throw std::invalid_argument(fmt::format("encoding fixture line {}: encoding id {} outside 0..6", lineno, id));
    r.encoded_error = r.printed_encoded;

    if (perfect_syndrome(r.printed_encoded) != r.syndrome)
      report(id, r.syndrome, lineno,
             fmt::format("encoded error {} has syndrome {}, not {}", format_pauli(r.printed_encoded),
                         perfect_syndrome(r.printed_encoded), r.syndrome));
    const PauliOperator conj = conjugate_circuit(encoder, r.full_pre_error());
    if (!(conj == r.printed_encoded)) {
      report(id, r.syndrome, lineno,
             fmt::format("encoder maps {} to {}, table prints {}", format_pauli(r.full_pre_error()),
                         format_pauli(conj), format_pauli(r.printed_encoded)));
      r.encoded_error = conj;
    }

    auto& enc = by_id[id];
    enc.id = id;
    auto& used = seen[id];
    used.resize(16, false);
    const int s = syndrome_value(r.syndrome);
    if (used[static_cast<std::size_t>(s)]) {
      report(id, r.syndrome, lineno, "syndrome listed twice within the encoding");
      continue;
    }
    used[static_cast<std::size_t>(s)] = true;
    if (enc.entries.empty()) enc.entries.resize(16);
    enc.entries[static_cast<std::size_t>(s)] = r;
  }

  for (int id = 0; id <= 6; ++id) {
    auto it = by_id.find(id);
    if (it == by_id.end()) throw std::invalid_argument(fmt::format("encoding fixture: encoding {} missing", id));
    for (int s = 0; s < 16; ++s)
      if (!seen[id][static_cast<std::size_t>(s)])
        throw std::invalid_argument(fmt::format("encoding fixture: encoding {} lacks syndrome {:04b}", id, s));
  }
  set.single = by_id[0];
  for (int id = 1; id <= 6; ++id) set.doubles.push_back(by_id[id]);

  // The two-error encodings should use each weight-2 error once.
  std::map<std::string, std::pair<int, std::string>> owner;
  for (const auto& enc : set.doubles)
    for (const auto& r : enc.entries) {
      if (r.encoded_error.is_identity()) continue;
      const auto key = format_pauli(r.encoded_error.unsigned_copy());
      if (r.encoded_error.weight() != 2)
        set.issues.push_back({enc.id, r.syndrome, r.line, "two-error encoding uses " + key + " (weight " +
                                                             std::to_string(r.encoded_error.weight()) + ")"});
      auto [pos, fresh] = owner.emplace(key, std::make_pair(enc.id, r.syndrome));
      if (!fresh)
        set.issues.push_back({enc.id, r.syndrome, r.line,
                              fmt::format("{} already used by encoding {} at syndrome {}", key, pos->second.first,
                                          pos->second.second)});
    }
  return set;
}

EncodingSet load_encodings(bool strict) { return parse_encodings(fixtures::perfect_code_encodings, strict); }

ConjugationReport verify_encodings_by_conjugation(const StegoEncoding& enc, const CliffordCircuit& circuit,
                                                  bool use_printed) {
  if (circuit.width != 5) throw std::invalid_argument("verify_encodings_by_conjugation: encoder must act on 5 qubits");
  static const StabilizerCode code = perfect_code();
  ConjugationReport rep;
  for (const auto& r : enc.entries) {
    const auto& target = use_printed ? r.printed_encoded : r.encoded_error;
    const auto got = conjugate_circuit(circuit, r.full_pre_error());
    ++rep.records;
    if (got == target) ++rep.exact;
    if (equal_up_to_phase(got, target)) ++rep.up_to_phase;
    if (in_stabilizer(code, got * target))
      ++rep.modulo_stabilizer;
    else
      rep.mismatches.push_back(r.syndrome);
  }
  return rep;
}

namespace {

double xlog2x(double x) { return x > 0.0 ? x * std::log2(x) : 0.0; }

}  // namespace

// Q0 = p0 - (p1 + p2)/15 factors as (1-p)^3 (1-2p)(3-p)/3, so it is
// non-negative exactly up to p = 1/2.
double mixture_p_max() { return 0.5; }

MixtureRates mixture_rates(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("mixture_rates: p must lie in [0, 1]");
  if (p > mixture_p_max())
    throw std::domain_error(fmt::format(
        "mixture_rates: Q0 = p0 - (p1+p2)/15 is negative for p > {:.12g}; the solution only holds for small p",
        mixture_p_max()));
  MixtureRates r;
  auto& m = r.mixture;
  const double a = 1 - p;
  m.p0 = std::pow(a, 5);
  m.p1 = 5 * p * std::pow(a, 4);
  m.p2 = 10 * p * p * std::pow(a, 3);
  m.Q0 = std::max(0.0, m.p0 - (m.p1 + m.p2) / 15);
  m.Q1 = 16.0 / 15 * m.p1;
  m.Q2 = 16.0 / 15 * m.p2;
  m.residual = 1 - (m.p0 + m.p1 + m.p2);
  r.n_avg = 64.0 / 15 * (m.p1 + m.p2);
  const double q2_term = m.Q2 > 0 ? m.Q2 * std::log2(m.Q2 / 6) : 0.0;
  r.key_rate_block = (-xlog2x(m.Q0) - xlog2x(m.Q1) - q2_term) / 5;
  r.key_rate_naive = (3 + 8 * (m.Q1 + m.Q2)) / 5;
  r.beyond_small_p = p > 0.2;
  return r;
}

PauliOperator twirl_pauli(std::uint8_t key) {
  static const char letters[4] = {'I', 'Z', 'X', 'Y'};  // (x, z) bits
  std::string s;
  for (int q = 0; q < 4; ++q) s += letters[(key >> (6 - 2 * q)) & 3];
  return parse_pauli(s);
}

StateVector parse_payload(const std::string& text) {
  if (text.size() != 4) throw std::invalid_argument("payload descriptor needs exactly 4 characters from {0,1,+,-}");
  const double h = 1 / std::sqrt(2.0);
  StateVector out;
  for (std::size_t q = 0; q < 4; ++q) {
    Eigen::VectorXcd v(2);
    switch (text[q]) {
      case '0': v << 1, 0; break;
      case '1': v << 0, 1; break;
      case '+': v << h, h; break;
      case '-': v << h, -h; break;
      default:
        throw std::invalid_argument(fmt::format("payload descriptor: '{}' is not one of 0,1,+,-", text[q]));
    }
    auto one = StateVector::from_amplitudes(1, v);
    out = q == 0 ? one : tensor(out, one);
  }
  return out;
}

namespace {

// Action of a Pauli on computational basis index b (qubit 0 = MSB).
struct PauliAction {
  std::size_t xmask = 0, zmask = 0;
  cplx prefactor = 1.0;

  explicit PauliAction(const PauliOperator& p) {
    const std::size_t n = p.size();
    int k = p.phase();
    for (std::size_t q = 0; q < n; ++q) {
      const std::size_t bit = std::size_t{1} << (n - 1 - q);
      const bool x = p.x_bits().get(q), z = p.z_bits().get(q);
      if (x) xmask |= bit;
      if (z) zmask |= bit;
      if (x && z) ++k;
    }
    static const cplx ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    prefactor = ipow[((k % 4) + 4) % 4];
  }
  std::pair<std::size_t, cplx> operator()(std::size_t b) const {
    const bool odd = std::popcount(b & zmask) & 1;
    return {b ^ xmask, odd ? -prefactor : prefactor};
  }
};

constexpr std::size_t stego_shift = 5;  // S occupies the top 4 of 9 qubits

MonomialMap controlled_errors(const StegoEncoding& enc) {
  std::vector<PauliAction> acts;
  for (const auto& r : enc.entries) {
    const auto full = r.full_pre_error();
    if (!full.is_hermitian())
      throw std::invalid_argument("controlled_errors: pre-error " + format_pauli(full) + " is not Hermitian");
    acts.emplace_back(full);
  }
  return {[acts](std::size_t idx) {
    const std::size_t s = idx >> stego_shift;
    const auto [low, ph] = acts[s](idx & 31);
    return std::make_pair((s << stego_shift) | low, ph);
  }};
}

MonomialMap stego_xor_ancilla() {
  return {[](std::size_t idx) {
    const std::size_t a = (idx >> 1) & 15;
    return std::make_pair(idx ^ (a << stego_shift), cplx(1.0));
  }};
}

CliffordCircuit shifted(const CliffordCircuit& c, std::size_t offset, std::size_t width) {
  CliffordCircuit out;
  out.width = width;
  for (auto g : c.gates) {
    g.q0 += offset;
    if (g.two_qubit()) g.q1 += offset;
    out.add(g);
  }
  return out;
}

PauliOperator on_stego(const PauliOperator& p4) { return tensor(p4, PauliOperator(5)); }

DensityMatrix alice_full(const EncodingSet& set, int encoding, const DensityMatrix& rho_s, const StateVector& cover) {
  const auto zero4 = DensityMatrix::from_state(StateVector::zero(4));
  DensityMatrix rho = tensor(tensor(rho_s, zero4), DensityMatrix::from_state(cover));
  if (encoding >= 0) {
    const auto& enc = set.by_id(encoding);
    rho = apply_monomial(rho, controlled_errors(enc));
    rho = apply_monomial(rho, stego_xor_ancilla());
  }
  return apply_circuit(rho, shifted(five_qubit_published_encoder(), 4, 9));
}

std::vector<std::size_t> range(std::size_t lo, std::size_t hi) {
  std::vector<std::size_t> v;
  for (std::size_t i = lo; i < hi; ++i) v.push_back(i);
  return v;
}

void check_inputs(int encoding, const StateVector& payload, const StateVector& cover) {
  if (encoding < -1 || encoding > 6) throw std::invalid_argument("simulate_roundtrip: encoding must be -1..6");
  if (payload.qubits() != 4) throw std::invalid_argument("simulate_roundtrip: payload must be a 4-qubit state");
  if (cover.qubits() != 1) throw std::invalid_argument("simulate_roundtrip: cover must be a 1-qubit state");
}

}  // namespace

DensityMatrix alice_wire_state(const EncodingSet& set, int encoding, const StateVector& payload,
                               const StateVector& cover, std::uint8_t twirl_key) {
  check_inputs(encoding, payload, cover);
  const auto twirled = DensityMatrix::from_state(apply_pauli(payload, twirl_pauli(twirl_key)));
  return partial_trace(alice_full(set, encoding, twirled, cover), range(4, 9));
}

double eve_view_distance(const EncodingSet& set, int encoding, const StateVector& cover) {
  check_inputs(encoding, StateVector::zero(4), cover);
  const auto rho_e = DensityMatrix::from_state(apply_circuit(tensor(StateVector::zero(4), cover),
                                                             five_qubit_published_encoder()));
  // Averaged over twirl keys the stego register is maximally mixed.
  const auto eve = partial_trace(alice_full(set, encoding, DensityMatrix::maximally_mixed(4), cover), range(4, 9));
  if (encoding < 0) return trace_distance(eve, rho_e);
  std::vector<KrausTerm> kraus;
  for (const auto& r : set.by_id(encoding).entries) kraus.push_back({1.0 / 16, r.encoded_error.unsigned_copy()});
  return trace_distance(eve, apply_pauli_channel(rho_e, kraus));
}

ProtocolTranscript simulate_roundtrip(const EncodingSet& set, int encoding, const StateVector& payload,
                                      const StateVector& cover, std::uint8_t twirl_key, bool with_eve_view) {
  check_inputs(encoding, payload, cover);
  ProtocolTranscript t;
  t.encoding = encoding;
  const KeySchedule sched;
  t.key_bits_selection = sched.selection_bits;
  t.key_bits_paper = sched.paper_total;
  if (with_eve_view) t.eve_trace_distance = eve_view_distance(set, encoding, cover);
  if (encoding < 0) return t;
  t.twirl_key = twirl_key;
  t.payload_qubits = 4;
  t.key_bits_twirl = sched.twirl_bits;
  const auto& enc = set.by_id(encoding);
  const CliffordCircuit enc5 = five_qubit_published_encoder();

  const auto twirl = twirl_pauli(twirl_key);
  const auto sent = alice_full(set, encoding, DensityMatrix::from_state(apply_pauli(payload, twirl)), cover);
  const auto rho_s = partial_trace(sent, range(0, 4));
  t.stego_register_purity_defect = 1 - fidelity(rho_s, StateVector::zero(4));
  const auto wire = partial_trace(sent, range(4, 9));

  // Bob: fresh 4-qubit register, decode, copy the ancillas into it, undo U1,
  // then remove the twirl.
  DensityMatrix bob = tensor(DensityMatrix::from_state(StateVector::zero(4)), wire);
  bob = apply_circuit(bob, shifted(enc5.inverse(), 4, 9));
  bob = apply_monomial(bob, stego_xor_ancilla());
  bob = apply_monomial(bob, controlled_errors(enc));
  bob = apply_pauli(bob, on_stego(twirl));
  const auto expected = tensor(tensor(payload, StateVector::zero(4)), cover);
  t.bob_fidelity = fidelity(bob, expected);
  return t;
}

ProtocolTranscript simulate_roundtrip(double p, const StateVector& payload, std::uint64_t seed) {
  const auto rates = mixture_rates(p);
  const auto& m = rates.mixture;
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double total = m.Q0 + m.Q1 + m.Q2;
  const double u = unif(gen) * total;
  int encoding = -1;
  if (u >= m.Q0) encoding = u < m.Q0 + m.Q1 ? 0 : 1 + std::uniform_int_distribution<int>(0, 5)(gen);
  const auto key = static_cast<std::uint8_t>(std::uniform_int_distribution<int>(0, 255)(gen));
  // Random cover qubit.
  const double theta = std::acos(2 * unif(gen) - 1) / 2, phi = 2 * M_PI * unif(gen);
  Eigen::VectorXcd c(2);
  c << std::cos(theta), std::polar(std::sin(theta), phi);
  static const EncodingSet set = load_encodings();
  return simulate_roundtrip(set, encoding, payload, StateVector::from_amplitudes(1, c), key);
}

namespace {

// SplitMix64: a splittable generator, so trial t's stream depends only on
// (seed, t).
struct SplitMix64 {
  using result_type = std::uint64_t;
  std::uint64_t state;
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }
  result_type operator()() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
};

SplitMix64 trial_stream(std::uint64_t seed, std::uint64_t trial) {
  SplitMix64 root{seed};
  const std::uint64_t base = root();
  SplitMix64 mix{base ^ (trial * 0xd1b54a32d192ed03ULL)};
  return SplitMix64{mix()};
}

}  // namespace

EveCheckReport eve_channel_check(double p, std::uint64_t trials, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("eve_channel_check: trials must be at least 1");
  const auto rates = mixture_rates(p);
  const auto& m = rates.mixture;
  static const EncodingSet set = load_encodings();
  EveCheckReport rep;
  rep.p = p;
  rep.trials = trials;
  rep.seed = seed;

  std::vector<std::array<std::string, 16>> names(7);
  for (int id = 0; id <= 6; ++id)
    for (int s = 0; s < 16; ++s)
      names[id][s] = format_pauli(set.by_id(id).entries[s].encoded_error.unsigned_copy());
  const std::string identity = "IIIII";

  std::map<std::string, std::uint64_t> counts;
  for (std::uint64_t t = 0; t < trials; ++t) {
    auto g = trial_stream(seed, t);
    const double u = static_cast<double>(g() >> 11) * 0x1.0p-53;
    if (u < m.Q0) {
      ++rep.class_counts[0];
      ++counts[identity];
    } else if (u < m.Q0 + m.Q1) {
      ++rep.class_counts[1];
      ++counts[names[0][g() & 15]];
    } else if (u < m.Q0 + m.Q1 + m.Q2) {
      ++rep.class_counts[2];
      const int which = 1 + static_cast<int>(g() % 6);
      ++counts[names[which][g() & 15]];
    } else {
      ++rep.unmodeled;
    }
  }
  rep.error_counts = counts;

  const double T = static_cast<double>(trials);
  const double Q[3] = {m.Q0, m.Q1, m.Q2};
  for (int k = 0; k < 3; ++k) {
    const double sigma = std::sqrt(Q[k] * (1 - Q[k]) / T);
    const double diff = rep.class_counts[k] / T - Q[k];
    rep.class_sigma[k] = sigma > 0 ? diff / sigma : (diff == 0 ? 0.0 : INFINITY);
  }
  rep.n_avg_estimate = 4.0 * static_cast<double>(rep.class_counts[1] + rep.class_counts[2]) / T;
  rep.n_avg_expected = rates.n_avg;

  // Chi-square against the channel conditioned on weight <= 2.
  const double modeled = m.p0 + m.p1 + m.p2;
  const double n = T - static_cast<double>(rep.unmodeled);
  int cells = 0;
  for (const auto& e : enumerate_paulis(5, 2, true)) {
    const auto w = e.weight();
    const double prob = (w == 0 ? m.p0 : w == 1 ? m.p1 / 15 : m.p2 / 90) / modeled;
    const auto it = counts.find(format_pauli(e));
    const double obs = it == counts.end() ? 0.0 : static_cast<double>(it->second);
    const double expv = n * prob;
    if (expv <= 0.0) {
      if (obs > 0) rep.chi_square = INFINITY;
      continue;
    }
    ++cells;
    rep.chi_square += (obs - expv) * (obs - expv) / expv;
  }
  rep.dof = std::max(cells - 1, 0);
  if (rep.dof > 0 && std::isfinite(rep.chi_square))
    rep.p_value = boost::math::cdf(boost::math::complement(boost::math::chi_squared(rep.dof), rep.chi_square));
  else
    rep.p_value = std::isfinite(rep.chi_square) ? 1.0 : 0.0;
  return rep;
}

}  // namespace qsteg
