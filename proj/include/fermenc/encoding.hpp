// Copyright 2026 The fermenc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "fermenc/bitvec.hpp"
#include "fermenc/decompose.hpp"
#include "fermenc/lattice.hpp"
#include "fermenc/majorana.hpp"
#include "fermenc/pauli.hpp"

namespace fermenc {

enum class EncodingKind : std::uint8_t { jw, vc, dk };
enum class QubitRole : std::uint8_t { primary, auxiliary, vertex, face };

inline const char* to_string(EncodingKind k) {
  switch (k) {
    case EncodingKind::jw: return "jw";
    case EncodingKind::vc: return "vc";
    case EncodingKind::dk: return "dk";
  }
  return "?";
}
inline EncodingKind encoding_kind_from_string(const std::string& s) {
  if (s == "jw") return EncodingKind::jw;
  if (s == "vc") return EncodingKind::vc;
  if (s == "dk") return EncodingKind::dk;
  throw std::invalid_argument("unknown encoding kind '" + s + "'");
}
inline const char* to_string(QubitRole r) {
  switch (r) {
    case QubitRole::primary: return "primary";
    case QubitRole::auxiliary: return "auxiliary";
    case QubitRole::vertex: return "vertex";
    case QubitRole::face: return "face";
  }
  return "?";
}

inline constexpr std::uint32_t kNoMode = std::numeric_limits<std::uint32_t>::max();

/// What a physical qubit stands for.
struct QubitInfo {
  QubitRole role = QubitRole::primary;
  std::optional<SiteId> site;
  std::optional<std::size_t> face;
  std::uint32_t mode = kNoMode;  // fermionic mode carried by the qubit (JW/VC, DK vertices)

  /// Primary qubits are the ones whose X/Y errors the random correction addresses.
  bool is_primary() const { return role == QubitRole::primary || role == QubitRole::vertex; }
};

struct VariantFlags {
  bool vc_first_pair_swapped = false;
  bool dk_corner_shaved = false;
  bool parity_stabilizer_included = false;
  bool parity_stabilizer_redundant = false;
};

/// Two auxiliary Majoranas whose product is a VC stabilizer generator.
struct AuxPair {
  MajoranaFactor first;
  MajoranaFactor second;
  std::size_t stabilizer = 0;
};

/// Encoded edge operator E_{tail,head} for an oriented lattice edge.
struct EdgeImage {
  std::size_t edge = 0;
  SiteId tail = 0;
  SiteId head = 0;
  PauliOp image;
};

/// A built fermion-to-qubit encoding: qubit layout, stabilizer generators, and the qubit
/// images of a generating set of fermionic operators.
///
/// Invariants (checked by tests and the verify command): generators commute pairwise,
/// are Hermitian and independent; every logical image commutes with every generator.
struct Encoding {
  EncodingKind kind = EncodingKind::jw;
  std::optional<Lattice> lattice;
  std::size_t n_qubits = 0;
  std::size_t n_modes = 0;          // modes in fermionic images (VC counts auxiliaries)
  std::size_t n_primary_modes = 0;
  std::vector<QubitInfo> qubits;
  std::vector<ModeIndex> modes;
  std::vector<std::uint32_t> site_mode;  // lattice site id -> primary mode, kNoMode if none
  std::vector<PauliOp> stabilizers;
  std::vector<std::string> stabilizer_labels;
  std::vector<PauliOp> gauge;  // logical operators outside the fermionic algebra
  std::vector<LogicalGenerator> logical;
  std::vector<EdgeImage> edge_images;
  std::vector<AuxPair> aux_pairs;
  std::vector<SiteId> jw_order;  // VC path over sites
  VariantFlags flags;

  std::size_t n_generators() const { return stabilizers.size(); }
  std::size_t logical_qubits() const { return n_qubits - stabilizers.size(); }

  /// True when odd fermionic operators are represented (the full Fock space is encoded).
  bool full_fock() const {
    for (const auto& g : logical)
      if (parity_sector(g.fermion) == ParitySector::odd) return true;
    return false;
  }

  std::uint32_t mode_of_site(SiteId s) const {
    if (s >= site_mode.size() || site_mode[s] == kNoMode) throw std::invalid_argument("site has no fermionic mode");
    return site_mode[s];
  }

  std::optional<std::size_t> vertex_qubit(SiteId s) const {
    for (std::size_t q = 0; q < qubits.size(); ++q)
      if (qubits[q].is_primary() && qubits[q].site == s) return q;
    return std::nullopt;
  }

  /// Qubit image of a generator by label, e.g. "c3", "c'3", "V5", "E(2,3)".
  const LogicalGenerator& generator(const std::string& label) const {
    for (const auto& g : logical)
      if (g.label == label) return g;
    throw std::out_of_range("no logical generator labelled '" + label + "'");
  }

  /// Encoded E_{u,v}; traversing against the arrow flips the sign.
  PauliOp edge_image(SiteId u, SiteId v) const {
    for (const auto& e : edge_images) {
      if (e.tail == u && e.head == v) return e.image;
      if (e.tail == v && e.head == u) {
        PauliOp r = e.image;
        r.mul_phase(2);
        return r;
      }
    }
    throw std::invalid_argument("no encoded edge between sites " + std::to_string(u) + " and " + std::to_string(v));
  }

  PauliDecomposer decomposer() const { return PauliDecomposer(n_qubits, logical, gauge, stabilizers, n_modes); }
  MonomialEncoder monomial_encoder() const { return MonomialEncoder(logical, n_modes, n_qubits); }

  /// Qubit image of an arbitrary Majorana monomial built from the generating set.
  PauliOp encode_monomial(const MajoranaMonomial& m) const {
    auto p = monomial_encoder().encode(m);
    if (!p) throw std::invalid_argument("monomial " + m.to_string() + " is not represented by this encoding");
    return *p;
  }

  nlohmann::json to_json() const;
  static Encoding from_json(const nlohmann::json& j);
};

namespace detail {

/// Jordan-Wigner images over an ordered register: c_m -> Z_{<m} X_m, c'_m -> Z_{<m} Y_m.
inline PauliOp jw_image(std::size_t n, std::size_t pos, MajoranaKind kind) {
  PauliOp p(n);
  for (std::size_t q = 0; q < pos; ++q) p.set(q, 'Z');
  p.set(pos, kind == MajoranaKind::c ? 'X' : 'Y');
  return p;
}

/// Hermitian product +/- i*A*B normalised to a + sign; returns the sign s with P = s*i*A*B.
inline PauliOp normalized_pair_product(const PauliOp& a, const PauliOp& b, int* sign_out = nullptr) {
  PauliOp p = a * b;
  p.mul_phase(1);
  int sign = 1;
  if (p.phase() == 2) {
    p.mul_phase(2);
    sign = -1;
  }
  if (p.phase() != 0) throw ConsistencyError("pair product of commuting Majorana images");
  if (sign_out) *sign_out = sign;
  return p;
}

inline std::string site_label(const Lattice& l, SiteId s) {
  return "(" + std::to_string(l.sites()[s].row) + "," + std::to_string(l.sites()[s].col) + ")";
}

/// Keeps independent candidates; a dependent candidate must equal the product of the
/// generators it depends on, otherwise the code space would be empty.
inline bool add_generator(std::vector<PauliOp>& gens, std::vector<std::string>& labels, Gf2Basis& basis,
                          const PauliOp& cand, const std::string& label) {
  if (!is_hermitian(cand)) throw ConsistencyError("stabilizer candidate " + label + " is not Hermitian");
  for (const auto& g : gens)
    if (!commutes(g, cand)) throw ConsistencyError("stabilizer candidate " + label + " does not commute");
  if (basis.insert(cand.symplectic())) {
    gens.push_back(cand);
    labels.push_back(label);
    return true;
  }
  Gf2Basis local(2 * cand.num_qubits());
  for (const auto& g : gens) local.insert(g.symplectic());
  auto combo = local.solve(cand.symplectic());
  PauliOp prod = PauliOp::identity(cand.num_qubits());
  for (auto k : *combo) prod = prod * gens[k];
  if (prod != cand) throw ConsistencyError("stabilizer candidate " + label + " contradicts earlier generators");
  return false;
}

}  // namespace detail

/// Plain Jordan-Wigner transform on n_modes modes; no stabilizers.
inline Encoding build_jw(std::size_t n_modes) {
  if (n_modes < 1) throw std::invalid_argument("Jordan-Wigner encoding needs at least one mode");
  Encoding enc;
  enc.kind = EncodingKind::jw;
  enc.n_qubits = n_modes;
  enc.n_modes = n_modes;
  enc.n_primary_modes = n_modes;
  for (std::size_t m = 0; m < n_modes; ++m) {
    enc.qubits.push_back({QubitRole::primary, static_cast<SiteId>(m), std::nullopt, static_cast<std::uint32_t>(m)});
    enc.modes.push_back({static_cast<std::uint32_t>(m), ModeRole::primary});
    enc.site_mode.push_back(static_cast<std::uint32_t>(m));
  }
  for (std::size_t m = 0; m < n_modes; ++m) {
    auto id = static_cast<std::uint32_t>(m);
    enc.logical.push_back({"c" + std::to_string(m), MajoranaMonomial::c(n_modes, id),
                           detail::jw_image(n_modes, m, MajoranaKind::c)});
    enc.logical.push_back({"c'" + std::to_string(m), MajoranaMonomial::c_prime(n_modes, id),
                           detail::jw_image(n_modes, m, MajoranaKind::c_prime)});
  }
  return enc;
}

/// The stabilizer obtained by pairing two auxiliary Majoranas, normalised to a + sign.
inline PauliOp vc_pair_stabilizer(const Encoding& vc, MajoranaFactor a, MajoranaFactor b) {
  if (a.code() > b.code()) std::swap(a, b);
  return detail::normalized_pair_product(detail::jw_image(vc.n_qubits, a.mode, a.kind),
                                         detail::jw_image(vc.n_qubits, b.mode, b.kind));
}

/// Verstraete-Cirac encoding: Jordan-Wigner over interleaved primary/auxiliary modes along
/// the row snake, with stabilizers pairing auxiliary Majoranas so that every vertical edge
/// not consecutive on the path has a pair linking its two auxiliary sites.
///
/// Pairing rules (path rows r = 0..R-1, aux Majoranas d, d'):
///   - vertical pairs d(r,c)-d'(r+1,c) on every column when the column count is even, and on
///     all but the last column when it is odd;
///   - leftover d'(0,c)-d'(0,c+1) and d(R-1,c)-d(R-1,c+1) for even c;
///   - odd column count, last column: d(r)-d'(r+1) and d'(r)-d(r+1) for odd r, plus
///     self pairs d(r)-d'(r) on the first row and, for even R, the last row.
/// With swap_first_pair the path begins 1',1,2,2',... instead of 1,1',2,2',...
inline Encoding build_vc(const Lattice& lattice, bool swap_first_pair = false, bool parity_stabilizer = false) {
  if (lattice.boundary() != Boundary::open)
    throw LatticeError("Verstraete-Cirac encoding is only built on open lattices");
  if (!lattice.shaved_corners().empty()) throw LatticeError("corner shaving applies to the DK encoding only");
  for (SiteId s : lattice.active_sites())
    if (lattice.degree(s) > 4) throw LatticeError("Verstraete-Cirac encoding needs maximum degree 4");

  const int R = lattice.rows(), C = lattice.cols();
  Encoding enc;
  enc.kind = EncodingKind::vc;
  enc.lattice = lattice;
  enc.jw_order = default_jw_order(lattice);
  const std::size_t S = enc.jw_order.size();
  enc.n_qubits = 2 * S;
  enc.n_modes = 2 * S;
  enc.n_primary_modes = S;
  enc.flags.vc_first_pair_swapped = swap_first_pair;
  enc.site_mode.assign(lattice.sites().size(), kNoMode);
  std::vector<std::uint32_t> aux_mode(lattice.sites().size(), kNoMode);
  enc.qubits.resize(enc.n_qubits);
  enc.modes.resize(enc.n_modes);
  for (std::size_t p = 0; p < S; ++p) {
    SiteId s = enc.jw_order[p];
    auto prim = static_cast<std::uint32_t>(2 * p), aux = static_cast<std::uint32_t>(2 * p + 1);
    if (p == 0 && swap_first_pair) std::swap(prim, aux);
    enc.site_mode[s] = prim;
    aux_mode[s] = aux;
    enc.qubits[prim] = {QubitRole::primary, s, std::nullopt, prim};
    enc.qubits[aux] = {QubitRole::auxiliary, s, std::nullopt, aux};
    enc.modes[prim] = {prim, ModeRole::primary};
    enc.modes[aux] = {aux, ModeRole::auxiliary};
  }

  for (std::size_t p = 0; p < S; ++p) {
    SiteId s = enc.jw_order[p];
    std::uint32_t m = enc.site_mode[s];
    std::string tag = detail::site_label(lattice, s);
    enc.logical.push_back({"c" + std::to_string(m), MajoranaMonomial::c(enc.n_modes, m),
                           detail::jw_image(enc.n_qubits, m, MajoranaKind::c)});
    enc.logical.push_back({"c'" + std::to_string(m), MajoranaMonomial::c_prime(enc.n_modes, m),
                           detail::jw_image(enc.n_qubits, m, MajoranaKind::c_prime)});
  }

  auto d = [&](int r, int c) { return MajoranaFactor{aux_mode[lattice.site_id(r, c)], MajoranaKind::c}; };
  auto dp = [&](int r, int c) { return MajoranaFactor{aux_mode[lattice.site_id(r, c)], MajoranaKind::c_prime}; };
  std::vector<std::pair<MajoranaFactor, MajoranaFactor>> pairs;
  const int paired_cols = (C % 2 == 0) ? C : C - 1;
  for (int c = 0; c < paired_cols; ++c)
    for (int r = 0; r + 1 < R; ++r) pairs.emplace_back(d(r, c), dp(r + 1, c));
  for (int c = 0; c + 1 < paired_cols; c += 2) {
    pairs.emplace_back(dp(0, c), dp(0, c + 1));
    pairs.emplace_back(d(R - 1, c), d(R - 1, c + 1));
  }
  if (C % 2 == 1) {
    const int c = C - 1;
    pairs.emplace_back(d(0, c), dp(0, c));
    for (int r = 1; r + 1 < R; r += 2) {
      pairs.emplace_back(d(r, c), dp(r + 1, c));
      pairs.emplace_back(dp(r, c), d(r + 1, c));
    }
    if (R % 2 == 0) pairs.emplace_back(d(R - 1, c), dp(R - 1, c));
  }

  Gf2Basis basis(2 * enc.n_qubits);
  std::vector<int> used(2 * enc.n_modes, 0);
  for (auto [a, b] : pairs) {
    if (a.code() > b.code()) std::swap(a, b);
    ++used[a.code()];
    ++used[b.code()];
    PauliOp stab = vc_pair_stabilizer(enc, a, b);
    std::string label = "pair(g" + std::to_string(a.mode) + (a.kind == MajoranaKind::c_prime ? "'" : "") + ",g" +
                        std::to_string(b.mode) + (b.kind == MajoranaKind::c_prime ? "'" : "") + ")";
    if (!detail::add_generator(enc.stabilizers, enc.stabilizer_labels, basis, stab, label))
      throw ConsistencyError("dependent auxiliary pairing " + label);
    enc.aux_pairs.push_back({a, b, enc.stabilizers.size() - 1});
  }
  for (std::uint32_t m = 0; m < enc.n_modes; ++m) {
    if (enc.modes[m].role != ModeRole::auxiliary) continue;
    if (used[2 * m] != 1 || used[2 * m + 1] != 1)
      throw ConsistencyError("auxiliary Majorana on mode " + std::to_string(m) + " not paired exactly once");
  }

  if (parity_stabilizer) {
    PauliOp par(enc.n_qubits);
    for (std::size_t q = 0; q < enc.n_qubits; ++q)
      if (enc.qubits[q].role == QubitRole::primary) par.set(q, 'Z');
    enc.flags.parity_stabilizer_included = true;
    if (!detail::add_generator(enc.stabilizers, enc.stabilizer_labels, basis, par, "parity"))
      enc.flags.parity_stabilizer_redundant = true;
    // Odd operators no longer preserve the code space.
    std::erase_if(enc.logical, [](const LogicalGenerator& g) { return parity_sector(g.fermion) == ParitySector::odd; });
    for (std::size_t s = 0; s < lattice.sites().size(); ++s) {
      std::uint32_t m = enc.site_mode[s];
      if (m == kNoMode) continue;
      PauliOp z = PauliOp::single(enc.n_qubits, m, 'Z');
      enc.logical.push_back({"V" + std::to_string(m), MajoranaMonomial::phase_flip(enc.n_modes, m), z});
    }
    for (const auto& e : lattice.edges()) {
      std::uint32_t a = enc.site_mode[e.a], b = enc.site_mode[e.b];
      MajoranaMonomial f = MajoranaMonomial::edge(enc.n_modes, a, b);
      PauliOp img = detail::jw_image(enc.n_qubits, a, MajoranaKind::c) * detail::jw_image(enc.n_qubits, b, MajoranaKind::c);
      img.mul_phase(3);
      enc.logical.push_back({"E(" + std::to_string(a) + "," + std::to_string(b) + ")", f, img});
    }
  }
  return enc;
}

namespace detail {

/// Loop operator i^{|p|-1} prod E~_{p_k p_{k+1}} around a closed site cycle.
inline PauliOp dk_loop(const Encoding& enc, const std::vector<SiteId>& cycle) {
  PauliOp p = PauliOp::identity(enc.n_qubits);
  for (std::size_t k = 0; k < cycle.size(); ++k) p = p * enc.edge_image(cycle[k], cycle[(k + 1) % cycle.size()]);
  p.mul_phase(static_cast<int>(cycle.size()));
  return p;
}

/// Lexicographic search for a Pauli on `support` with prescribed (anti)commutation.
inline std::optional<PauliOp> search_pauli(std::size_t n, const std::vector<std::size_t>& support,
                                           const std::vector<PauliOp>& must_anticommute,
                                           const std::vector<PauliOp>& must_commute) {
  static constexpr char kLetters[] = {'I', 'X', 'Y', 'Z'};
  std::size_t total = 1;
  for (std::size_t k = 0; k < support.size(); ++k) total *= 4;
  for (std::size_t code = 1; code < total; ++code) {
    PauliOp p(n);
    std::size_t c = code;
    for (std::size_t k = support.size(); k-- > 0;) {
      p.set(support[k], kLetters[c % 4]);
      c /= 4;
    }
    bool ok = true;
    for (const auto& a : must_anticommute) ok = ok && !commutes(p, a);
    for (const auto& b : must_commute) ok = ok && commutes(p, b);
    if (ok) return p;
  }
  return std::nullopt;
}

}  // namespace detail

namespace detail {

/// Layouts with four corner-only odd faces carry one more logical qubit than modes. Once the
/// full fermionic algebra is represented, its commutant (modulo stabilizers) acts on that
/// qubit alone; a basis of it is recorded as gauge operators.
inline void add_surplus_gauge(Encoding& enc, const Gf2Basis& stab_basis) {
  const std::size_t N = enc.n_qubits;
  if (N - enc.stabilizers.size() <= enc.n_modes) return;
  std::vector<BitVec> rows;
  auto add_row = [&](const PauliOp& p) {
    BitVec sw = p.symplectic();
    rows.push_back(BitVec::concat(sw.slice(N, N), sw.slice(0, N)));
  };
  for (const auto& g : enc.stabilizers) add_row(g);
  for (const auto& g : enc.logical) add_row(g.image);
  Gf2Basis basis = stab_basis;
  for (const auto& v : gf2_null_space(rows, 2 * N)) {
    if (basis.insert(v)) enc.gauge.emplace_back(v.slice(0, N), v.slice(N, N));
  }
  if (enc.gauge.size() != 2 * (N - enc.stabilizers.size() - enc.n_modes))
    throw ConsistencyError("surplus logical qubits do not factor off the fermionic algebra");
}

}  // namespace detail

/// DK encoding: a qubit per vertex and per odd face. Edge operators follow
///   E~_ij = X_i Y_j X_f (down), -X_i Y_j X_f (up), X_i Y_j Y_f (horizontal)
/// for the edge oriented i -> j with odd face qubit f (dropped on boundary edges without
/// one); a corner diagonal acts as P_a P_b Z_f with the vertex letters of the remaining
/// odd-face edges and the sign that makes its triangle loop the identity. Stabilizers are
/// the even-face loops (plus both non-contractible loops on a torus).
///
/// Without the parity stabilizer, every corner touching only an odd face (and both ends of
/// each shaved diagonal) also gets single-Majorana images, found as the first Pauli on the
/// vertex (and face) qubit with the commutation pattern of c_j.
inline Encoding build_dk(const Lattice& lattice, bool parity_stabilizer = false) {
  Encoding enc;
  enc.kind = EncodingKind::dk;
  enc.lattice = lattice;
  enc.flags.dk_corner_shaved = !lattice.shaved_corners().empty();
  enc.site_mode.assign(lattice.sites().size(), kNoMode);
  const auto active = lattice.active_sites();
  const std::size_t M = active.size();
  enc.n_modes = M;
  enc.n_primary_modes = M;
  std::vector<std::size_t> face_qubit(lattice.faces().size(), 0);
  for (std::size_t m = 0; m < M; ++m) {
    enc.site_mode[active[m]] = static_cast<std::uint32_t>(m);
    enc.qubits.push_back({QubitRole::vertex, active[m], std::nullopt, static_cast<std::uint32_t>(m)});
    enc.modes.push_back({static_cast<std::uint32_t>(m), ModeRole::primary});
  }
  for (std::size_t f = 0; f < lattice.faces().size(); ++f) {
    if (!lattice.faces()[f].odd) continue;
    face_qubit[f] = enc.qubits.size();
    enc.qubits.push_back({QubitRole::face, std::nullopt, f, kNoMode});
  }
  const std::size_t N = enc.qubits.size();
  enc.n_qubits = N;
  auto vq = [&](SiteId s) { return static_cast<std::size_t>(enc.site_mode[s]); };

  for (std::size_t m = 0; m < M; ++m) {
    enc.logical.push_back({"V" + std::to_string(m), MajoranaMonomial::phase_flip(M, static_cast<std::uint32_t>(m)),
                           PauliOp::single(N, m, 'Z')});
  }

  // Letter an ordinary edge applies at one of its endpoints.
  auto vertex_letter = [](const Edge& e, SiteId s) { return e.tail() == s ? 'X' : 'Y'; };
  std::vector<std::size_t> diagonals;
  for (std::size_t ei = 0; ei < lattice.edges().size(); ++ei) {
    const Edge& e = lattice.edges()[ei];
    if (e.cls == EdgeClass::diagonal_corner) {
      diagonals.push_back(ei);
      continue;
    }
    PauliOp p(N);
    p.set(vq(e.tail()), 'X');
    p.set(vq(e.head()), 'Y');
    if (e.odd_face) p.set(face_qubit[*e.odd_face], e.cls == EdgeClass::horizontal ? 'Y' : 'X');
    if (e.cls == EdgeClass::vertical_up) p.mul_phase(2);
    enc.edge_images.push_back({ei, e.tail(), e.head(), p});
  }
  for (std::size_t ei : diagonals) {
    const Edge& e = lattice.edges()[ei];
    std::size_t f = *e.odd_face;
    PauliOp p(N);
    for (SiteId s : {e.a, e.b}) {
      char letter = '?';
      for (std::size_t oi : lattice.incident_edges(s)) {
        const Edge& o = lattice.edges()[oi];
        if (oi != ei && o.odd_face == f) letter = vertex_letter(o, s);
      }
      if (letter == '?') throw ConsistencyError("shaved corner diagonal has no neighbouring odd-face edge");
      p.set(vq(s), letter);
    }
    p.set(face_qubit[f], 'Z');
    enc.edge_images.push_back({ei, e.tail(), e.head(), p});
    PauliOp tri = detail::dk_loop(enc, lattice.faces()[f].cycle);
    if (tri.phase() == 2 && weight(tri) == 0) {
      enc.edge_images.back().image.mul_phase(2);
    } else if (!(tri.phase() == 0 && weight(tri) == 0)) {
      throw ConsistencyError("shaved corner triangle loop is not a scalar");
    }
  }
  for (const auto& ei : enc.edge_images) {
    std::uint32_t a = enc.site_mode[ei.tail], b = enc.site_mode[ei.head];
    enc.logical.push_back({"E(" + std::to_string(a) + "," + std::to_string(b) + ")", MajoranaMonomial::edge(M, a, b),
                           ei.image});
  }

  Gf2Basis basis(2 * N);
  for (std::size_t f = 0; f < lattice.faces().size(); ++f) {
    const Face& face = lattice.faces()[f];
    if (face.odd) continue;
    std::string label = "face(" + std::to_string(face.row) + "," + std::to_string(face.col) + ")";
    detail::add_generator(enc.stabilizers, enc.stabilizer_labels, basis, detail::dk_loop(enc, face.cycle), label);
  }
  if (lattice.boundary() == Boundary::periodic) {
    std::vector<SiteId> row_loop, col_loop;
    for (int c = 0; c < lattice.cols(); ++c) row_loop.push_back(lattice.site_id(0, c));
    for (int r = 0; r < lattice.rows(); ++r) col_loop.push_back(lattice.site_id(r, 0));
    detail::add_generator(enc.stabilizers, enc.stabilizer_labels, basis, detail::dk_loop(enc, row_loop), "row_loop");
    detail::add_generator(enc.stabilizers, enc.stabilizer_labels, basis, detail::dk_loop(enc, col_loop), "col_loop");
  }
  if (parity_stabilizer) {
    PauliOp par(N);
    for (std::size_t m = 0; m < M; ++m) par.set(m, 'Z');
    enc.flags.parity_stabilizer_included = true;
    if (!detail::add_generator(enc.stabilizers, enc.stabilizer_labels, basis, par, "parity"))
      enc.flags.parity_stabilizer_redundant = true;
    return enc;
  }

  // Single-Majorana images at corners that touch no stabilizer.
  std::vector<std::pair<SiteId, std::vector<std::size_t>>> candidates;
  for (Corner c : lattice.eligible_corners()) candidates.push_back({lattice.corner_site(c), {vq(lattice.corner_site(c))}});
  for (std::size_t ei : diagonals) {
    const Edge& e = lattice.edges()[ei];
    for (SiteId s : {e.a, e.b}) candidates.push_back({s, {vq(s), face_qubit[*e.odd_face]}});
  }
  std::vector<PauliOp> found;
  for (const auto& [site, support] : candidates) {
    std::uint32_t m = enc.site_mode[site];
    std::vector<PauliOp> anti{PauliOp::single(N, m, 'Z')}, comm = enc.stabilizers;
    for (const auto& ei : enc.edge_images) (ei.tail == site || ei.head == site ? anti : comm).push_back(ei.image);
    for (std::size_t k = 0; k < M; ++k)
      if (k != m) comm.push_back(PauliOp::single(N, k, 'Z'));
    auto q = detail::search_pauli(N, support, anti, comm);
    if (!q) throw ConsistencyError("no local single-Majorana image at site " + detail::site_label(lattice, site));
    found.push_back(*q);
  }
  if (found.empty()) return enc;

  for (std::size_t k = 0; k < found.size(); ++k) {
    std::uint32_t m = enc.site_mode[candidates[k].first];
    MajoranaMonomial fermion = MajoranaMonomial::c(M, m);
    if (k > 0) {
      // Either c_m or a hole c_m * prod_j V_j relative to the Majoranas already present,
      // possibly times an operator on surplus logical qubits.
      auto dec = enc.decomposer().decompose(found[k]);
      if (!dec) throw ConsistencyError("corner operator outside the logical algebra");
      if (!dec->gauge_used.empty()) continue;
      fermion = dec->fermion;
    }
    // c' = c * (i V) since i V = c c'.
    PauliOp iz = PauliOp::single(N, m, 'Z');
    iz.mul_phase(1);
    enc.logical.push_back({"c" + std::to_string(m), fermion, found[k]});
    enc.logical.push_back({"c'" + std::to_string(m),
                           fermion * MajoranaMonomial(M, {{m, MajoranaKind::c}, {m, MajoranaKind::c_prime}}),
                           found[k] * iz});
    if (k == 0) detail::add_surplus_gauge(enc, basis);
  }
  return enc;
}

/// Everything needed to construct an encoding.
struct EncodingConfig {
  EncodingKind kind = EncodingKind::dk;
  int rows = 2;
  int cols = 2;
  std::size_t modes = 4;  // Jordan-Wigner only
  Boundary boundary = Boundary::open;
  int face_parity_offset = 0;
  std::vector<Corner> shaved;
  bool swap_first_pair = false;
  bool parity_stabilizer = false;
};

/// Rejects combinations no builder supports.
inline void validate(const EncodingConfig& c) {
  if (c.kind != EncodingKind::dk && c.boundary == Boundary::periodic)
    throw std::invalid_argument("periodic boundaries are only supported by the dk encoding");
  if (c.kind != EncodingKind::dk && !c.shaved.empty())
    throw std::invalid_argument("corner shaving is only supported by the dk encoding");
  if (c.kind != EncodingKind::vc && c.swap_first_pair)
    throw std::invalid_argument("the first-pair swap only applies to the vc encoding");
  if (c.kind == EncodingKind::jw && c.parity_stabilizer)
    throw std::invalid_argument("the jw encoding has no parity stabilizer variant");
}

inline Encoding build_encoding(const EncodingConfig& c) {
  validate(c);
  if (c.kind == EncodingKind::jw) return build_jw(c.modes);
  Lattice l = build_lattice(c.rows, c.cols, c.boundary, c.face_parity_offset);
  // Canonical order, matching the lattice dump.
  for (Corner k : std::set<Corner>(c.shaved.begin(), c.shaved.end())) l = shave_corner(l, k);
  if (c.kind == EncodingKind::vc) return build_vc(l, c.swap_first_pair, c.parity_stabilizer);
  return build_dk(l, c.parity_stabilizer);
}

/// The configuration an encoding declares about itself.
inline EncodingConfig declared_config(const Encoding& enc) {
  EncodingConfig c;
  c.kind = enc.kind;
  c.modes = enc.n_modes;
  if (enc.lattice) {
    c.rows = enc.lattice->rows();
    c.cols = enc.lattice->cols();
    c.boundary = enc.lattice->boundary();
    c.face_parity_offset = enc.lattice->face_parity_offset();
    c.shaved.assign(enc.lattice->shaved_corners().begin(), enc.lattice->shaved_corners().end());
  }
  c.swap_first_pair = enc.flags.vc_first_pair_swapped;
  c.parity_stabilizer = enc.flags.parity_stabilizer_included;
  return c;
}

// ---------------------------------------------------------------------------------------
// Hubbard terms

enum class TermKind : std::uint8_t { hopping, number, onsite };
enum class Spin : std::uint8_t { up, down };

/// A Fermi-Hubbard term on lattice sites. A term with a spin label (and every onsite
/// term) lives on two stacked copies of the encoding: qubits [0, N) for spin up and
/// [N, 2N) for spin down.
struct TermSpec {
  TermKind kind = TermKind::number;
  SiteId i = 0;
  SiteId k = 0;
  std::optional<Spin> spin;

  static TermSpec hopping(SiteId i, SiteId k, std::optional<Spin> s = std::nullopt) { return {TermKind::hopping, i, k, s}; }
  static TermSpec number(SiteId j, std::optional<Spin> s = std::nullopt) { return {TermKind::number, j, j, s}; }
  static TermSpec onsite(SiteId j) { return {TermKind::onsite, j, j, std::nullopt}; }
};

struct PauliTerm {
  std::complex<double> coefficient;
  PauliOp op;  // phase exponent always 0; the phase lives in the coefficient
};

namespace detail {

inline std::complex<double> i_power(int k) {
  static const std::complex<double> kPow[] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  return kPow[((k % 4) + 4) % 4];
}

inline PauliTerm make_term(std::complex<double> coeff, const PauliOp& p) {
  return {coeff * i_power(p.phase()), p.with_phase(0)};
}

inline PauliOp embed(const PauliOp& p, std::size_t offset, std::size_t n) {
  PauliOp out(n);
  for (auto q : p.support()) out.set(q + offset, p.letter(q));
  out.mul_phase(p.phase());
  return out;
}

inline std::vector<PauliTerm> merge_terms(std::vector<PauliTerm> terms) {
  std::vector<PauliTerm> out;
  for (auto& t : terms) {
    bool merged = false;
    for (auto& o : out) {
      if (o.op == t.op) {
        o.coefficient += t.coefficient;
        merged = true;
        break;
      }
    }
    if (!merged) out.push_back(std::move(t));
  }
  std::erase_if(out, [](const PauliTerm& t) { return std::abs(t.coefficient) < 1e-15; });
  return out;
}

inline std::vector<PauliTerm> number_terms(const Encoding& enc, SiteId j) {
  std::uint32_t m = enc.mode_of_site(j);
  PauliOp phase = enc.encode_monomial(MajoranaMonomial::phase_flip(enc.n_modes, m));
  return merge_terms({make_term(0.5, PauliOp::identity(enc.n_qubits)), make_term(-0.5, phase)});
}

inline std::vector<PauliTerm> hopping_terms(const Encoding& enc, SiteId i, SiteId k) {
  if (i == k) throw std::invalid_argument("hopping needs two distinct sites");
  if (enc.lattice && !enc.lattice->adjacent(i, k))
    throw std::invalid_argument("hopping sites " + std::to_string(i) + " and " + std::to_string(k) + " are not adjacent");
  const std::size_t M = enc.n_modes;
  std::uint32_t a = enc.mode_of_site(i), b = enc.mode_of_site(k);
  std::vector<PauliTerm> terms;
  if (enc.kind == EncodingKind::dk) {
    // a_k^dag a_i + h.c. = (i/2) E_ik (V_i - V_k)
    PauliOp e = enc.edge_image(i, k);
    terms.push_back(make_term({0, 0.5}, e * PauliOp::single(enc.n_qubits, a, 'Z')));
    terms.push_back(make_term({0, -0.5}, e * PauliOp::single(enc.n_qubits, b, 'Z')));
    return merge_terms(std::move(terms));
  }
  // a_k^dag a_i + h.c. = (i/2) (c_i c'_k - c'_i c_k)
  PauliOp t1 = enc.encode_monomial(MajoranaMonomial(M, {{a, MajoranaKind::c}, {b, MajoranaKind::c_prime}}));
  PauliOp t2 = enc.encode_monomial(MajoranaMonomial(M, {{a, MajoranaKind::c_prime}, {b, MajoranaKind::c}}));
  if (enc.kind == EncodingKind::vc) {
    std::size_t pi = 0, pk = 0;
    for (std::size_t p = 0; p < enc.jw_order.size(); ++p) {
      if (enc.jw_order[p] == i) pi = p;
      if (enc.jw_order[p] == k) pk = p;
    }
    if (pi + 1 != pk && pk + 1 != pi) {
      // Cancel the Z string with the stabilizer pairing the two auxiliary sites.
      const PauliOp* stab = nullptr;
      for (const auto& pair : enc.aux_pairs) {
        SiteId s1 = *enc.qubits[pair.first.mode].site, s2 = *enc.qubits[pair.second.mode].site;
        if ((s1 == i && s2 == k) || (s1 == k && s2 == i)) {
          stab = &enc.stabilizers[pair.stabilizer];
          break;
        }
      }
      if (!stab) throw ConsistencyError("no auxiliary pair for non-consecutive edge");
      t1 = *stab * t1;
      t2 = *stab * t2;
    }
  }
  terms.push_back(make_term({0, 0.5}, t1));
  terms.push_back(make_term({0, -0.5}, t2));
  return merge_terms(std::move(terms));
}

}  // namespace detail

/// Encodes one Hubbard term as a sum of Pauli operators. VC hoppings on non-consecutive
/// sites are returned in their stabilizer-reduced local form.
inline std::vector<PauliTerm> encode_hubbard_term(const Encoding& enc, const TermSpec& term) {
  const std::size_t N = enc.n_qubits;
  auto layer = [&](std::vector<PauliTerm> ts, std::optional<Spin> spin) {
    if (!spin) return ts;
    std::size_t off = *spin == Spin::up ? 0 : N;
    for (auto& t : ts) t.op = detail::embed(t.op, off, 2 * N);
    return ts;
  };
  switch (term.kind) {
    case TermKind::number: return layer(detail::number_terms(enc, term.i), term.spin);
    case TermKind::hopping: return layer(detail::hopping_terms(enc, term.i, term.k), term.spin);
    case TermKind::onsite: {
      auto up = layer(detail::number_terms(enc, term.i), Spin::up);
      auto down = layer(detail::number_terms(enc, term.i), Spin::down);
      std::vector<PauliTerm> out;
      for (const auto& u : up)
        for (const auto& d : down) out.push_back(detail::make_term(u.coefficient * d.coefficient, u.op * d.op));
      return detail::merge_terms(std::move(out));
    }
  }
  return {};
}

/// The fermionic generating set and its images: c_j, c'_j for JW/VC; vertex, edge and
/// (when the full Fock space is encoded) corner Majorana images for DK.
inline const std::vector<LogicalGenerator>& logical_generators(const Encoding& enc) { return enc.logical; }

// ---------------------------------------------------------------------------------------
// Dump format

namespace detail {
inline nlohmann::json site_json(const Lattice* l, SiteId s) {
  if (!l) return s;
  return nlohmann::json::array({l->sites()[s].row, l->sites()[s].col});
}
inline SiteId site_from_json(const Lattice* l, const nlohmann::json& j) {
  if (!l) return j.get<SiteId>();
  return l->site_id(j.at(0).get<int>(), j.at(1).get<int>());
}
inline std::string factor_string(const MajoranaFactor& f) {
  return "g" + std::to_string(f.mode) + (f.kind == MajoranaKind::c_prime ? "'" : "");
}
}  // namespace detail

inline nlohmann::json Encoding::to_json() const {
  using nlohmann::json;
  const Lattice* l = lattice ? &*lattice : nullptr;
  json j;
  j["kind"] = to_string(kind);
  j["lattice"] = l ? l->to_json() : json(nullptr);
  j["n_qubits"] = n_qubits;
  j["n_modes"] = n_modes;
  j["n_primary_modes"] = n_primary_modes;
  j["flags"] = {{"vc_first_pair_swapped", flags.vc_first_pair_swapped},
                {"dk_corner_shaved", flags.dk_corner_shaved},
                {"parity_stabilizer_included", flags.parity_stabilizer_included},
                {"parity_stabilizer_redundant", flags.parity_stabilizer_redundant}};
  json layout = json::array();
  for (std::size_t q = 0; q < qubits.size(); ++q) {
    json e{{"qubit", q}, {"role", to_string(qubits[q].role)}};
    if (qubits[q].site) e["site"] = detail::site_json(l, *qubits[q].site);
    if (qubits[q].face) e["face"] = {l->faces()[*qubits[q].face].row, l->faces()[*qubits[q].face].col};
    if (qubits[q].mode != kNoMode) e["mode"] = qubits[q].mode;
    layout.push_back(e);
  }
  j["layout"] = layout;
  json stabs = json::array();
  for (std::size_t s = 0; s < stabilizers.size(); ++s)
    stabs.push_back({{"label", stabilizer_labels[s]}, {"pauli", stabilizers[s].to_string()}});
  j["stabilizers"] = stabs;
  json g = json::array();
  for (const auto& p : gauge) g.push_back(p.to_string());
  j["gauge"] = g;
  json lg = json::array();
  for (const auto& x : logical)
    lg.push_back({{"label", x.label}, {"fermion", x.fermion.to_string()}, {"pauli", x.image.to_string()}});
  j["logical"] = lg;
  json edges = json::array();
  for (const auto& e : edge_images)
    edges.push_back({{"edge", e.edge},
                     {"tail", detail::site_json(l, e.tail)},
                     {"head", detail::site_json(l, e.head)},
                     {"class", to_string(l->edges()[e.edge].cls)},
                     {"pauli", e.image.to_string()}});
  j["edges"] = edges;
  json pairs = json::array();
  for (const auto& p : aux_pairs)
    pairs.push_back({{"first", detail::factor_string(p.first)},
                     {"second", detail::factor_string(p.second)},
                     {"stabilizer", p.stabilizer}});
  j["aux_pairs"] = pairs;
  json order = json::array();
  for (SiteId s : jw_order) order.push_back(detail::site_json(l, s));
  j["jw_order"] = order;
  return j;
}

inline Encoding Encoding::from_json(const nlohmann::json& j) {
  Encoding enc;
  enc.kind = encoding_kind_from_string(j.at("kind").get<std::string>());
  if (!j.at("lattice").is_null()) enc.lattice = Lattice::from_json(j.at("lattice"));
  const Lattice* l = enc.lattice ? &*enc.lattice : nullptr;
  enc.n_qubits = j.at("n_qubits").get<std::size_t>();
  enc.n_modes = j.at("n_modes").get<std::size_t>();
  enc.n_primary_modes = j.at("n_primary_modes").get<std::size_t>();
  const auto& fl = j.at("flags");
  enc.flags.vc_first_pair_swapped = fl.value("vc_first_pair_swapped", false);
  enc.flags.dk_corner_shaved = fl.value("dk_corner_shaved", false);
  enc.flags.parity_stabilizer_included = fl.value("parity_stabilizer_included", false);
  enc.flags.parity_stabilizer_redundant = fl.value("parity_stabilizer_redundant", false);
  enc.site_mode.assign(l ? l->sites().size() : enc.n_modes, kNoMode);
  enc.modes.resize(enc.n_modes);
  for (std::uint32_t m = 0; m < enc.n_modes; ++m) enc.modes[m] = {m, ModeRole::primary};
  for (const auto& e : j.at("layout")) {
    QubitInfo qi;
    std::string role = e.at("role").get<std::string>();
    for (QubitRole r : {QubitRole::primary, QubitRole::auxiliary, QubitRole::vertex, QubitRole::face})
      if (role == to_string(r)) qi.role = r;
    if (e.contains("site")) qi.site = detail::site_from_json(l, e.at("site"));
    if (e.contains("face")) {
      int fr = e.at("face").at(0).get<int>(), fc = e.at("face").at(1).get<int>();
      for (std::size_t f = 0; f < l->faces().size(); ++f)
        if (l->faces()[f].row == fr && l->faces()[f].col == fc) qi.face = f;
    }
    if (e.contains("mode")) qi.mode = e.at("mode").get<std::uint32_t>();
    if (qi.mode != kNoMode) {
      if (qi.role == QubitRole::auxiliary) {
        enc.modes[qi.mode].role = ModeRole::auxiliary;
      } else if (qi.site) {
        enc.site_mode[*qi.site] = qi.mode;
      }
    }
    enc.qubits.push_back(qi);
  }
  if (enc.qubits.size() != enc.n_qubits) throw std::invalid_argument("layout size differs from n_qubits");
  for (const auto& s : j.at("stabilizers")) {
    enc.stabilizer_labels.push_back(s.at("label").get<std::string>());
    enc.stabilizers.push_back(PauliOp::parse(s.at("pauli").get<std::string>(), enc.n_qubits));
  }
  for (const auto& g : j.at("gauge")) enc.gauge.push_back(PauliOp::parse(g.get<std::string>(), enc.n_qubits));
  for (const auto& g : j.at("logical"))
    enc.logical.push_back({g.at("label").get<std::string>(),
                           MajoranaMonomial::parse(g.at("fermion").get<std::string>(), enc.n_modes),
                           PauliOp::parse(g.at("pauli").get<std::string>(), enc.n_qubits)});
  for (const auto& e : j.at("edges"))
    enc.edge_images.push_back({e.at("edge").get<std::size_t>(), detail::site_from_json(l, e.at("tail")),
                               detail::site_from_json(l, e.at("head")),
                               PauliOp::parse(e.at("pauli").get<std::string>(), enc.n_qubits)});
  for (const auto& p : j.at("aux_pairs")) {
    auto parse_factor = [&](const std::string& s) {
      MajoranaMonomial m = MajoranaMonomial::parse(s, enc.n_modes);
      return m.factors().at(0);
    };
    enc.aux_pairs.push_back({parse_factor(p.at("first").get<std::string>()),
                             parse_factor(p.at("second").get<std::string>()), p.at("stabilizer").get<std::size_t>()});
  }
  for (const auto& s : j.at("jw_order")) enc.jw_order.push_back(detail::site_from_json(l, s));
  return enc;
}

}  // namespace fermenc
