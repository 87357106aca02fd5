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
#include <optional>
#include <algorithm>
#include <bit>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fermenc/encoding.hpp"
#include "fermenc/majorana.hpp"
#include "fermenc/pauli.hpp"

namespace fermenc {

using cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

/// Full 2^n x 2^n matrices are built up to this size.
inline constexpr std::size_t kDenseMatrixCap = 12;
/// Matrix-free state-vector work goes up to this size.
inline constexpr std::size_t kOracleCap = 14;
inline constexpr double kOracleTol = 1e-10;

class OracleCapError : public std::length_error {
 public:
  using std::length_error::length_error;
};

namespace detail {
inline cplx ipow(int k) {
  static const cplx kPow[] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  return kPow[((k % 4) + 4) % 4];
}
inline void check_cap(std::size_t n, std::size_t cap, const char* what) {
  if (n > cap)
    throw OracleCapError(std::string(what) + " on " + std::to_string(n) + " qubits exceeds the cap of " +
                         std::to_string(cap));
}
inline double max_abs(const CMat& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }
}  // namespace detail

/// Kronecker product with qubit 0 as the leftmost (most significant) factor.
inline CMat dense_of_pauli(const PauliOp& p, std::size_t cap = kDenseMatrixCap) {
  const std::size_t n = p.num_qubits();
  detail::check_cap(n, cap, "dense Pauli matrix");
  CMat out = CMat::Identity(1, 1);
  for (std::size_t q = 0; q < n; ++q) {
    CMat s(2, 2);
    switch (p.letter(q)) {
      case 'I': s << 1, 0, 0, 1; break;
      case 'X': s << 0, 1, 1, 0; break;
      case 'Y': s << 0, cplx(0, -1), cplx(0, 1), 0; break;
      default: s << 1, 0, 0, -1; break;
    }
    CMat next(out.rows() * 2, out.cols() * 2);
    for (Eigen::Index r = 0; r < out.rows(); ++r)
      for (Eigen::Index c = 0; c < out.cols(); ++c) next.block(2 * r, 2 * c, 2, 2) = out(r, c) * s;
    out = std::move(next);
  }
  return out * detail::ipow(p.phase());
}

/// P|v> without materialising P.
inline CVec apply_pauli(const PauliOp& p, const CVec& v) {
  const std::size_t n = p.num_qubits();
  detail::check_cap(n, kOracleCap, "Pauli application");
  if (static_cast<std::size_t>(v.size()) != (std::size_t{1} << n)) throw DimensionError("state size differs from 2^n");
  std::uint64_t xmask = 0, zmask = 0;
  int ys = 0;
  for (std::size_t q = 0; q < n; ++q) {
    const std::uint64_t bit = std::uint64_t{1} << (n - 1 - q);
    char l = p.letter(q);
    if (l == 'X' || l == 'Y') xmask |= bit;
    if (l == 'Z' || l == 'Y') zmask |= bit;
    if (l == 'Y') ++ys;
  }
  const cplx global = detail::ipow(p.phase() + ys);
  CVec out(v.size());
  for (std::uint64_t b = 0; b < static_cast<std::uint64_t>(v.size()); ++b) {
    const bool neg = std::popcount(b & zmask) & 1;
    out[static_cast<Eigen::Index>(b ^ xmask)] = (neg ? -global : global) * v[static_cast<Eigen::Index>(b)];
  }
  return out;
}

inline CMat apply_pauli_columns(const PauliOp& p, const CMat& m) {
  CMat out(m.rows(), m.cols());
  for (Eigen::Index c = 0; c < m.cols(); ++c) out.col(c) = apply_pauli(p, m.col(c));
  return out;
}

/// Jordan-Wigner matrices: c_j = Z^(j) X_j, c'_j = Z^(j) Y_j with mode 0 leftmost; the
/// occupied state of mode j is |1>.
inline CMat dense_of_majorana(const MajoranaMonomial& m, std::size_t cap = kDenseMatrixCap) {
  const std::size_t M = m.n_modes();
  detail::check_cap(M, cap, "dense Majorana matrix");
  CMat out = CMat::Identity(std::size_t{1} << M, std::size_t{1} << M);
  for (const auto& f : m.factors()) {
    PauliOp img(M);
    for (std::size_t q = 0; q < f.mode; ++q) img.set(q, 'Z');
    img.set(f.mode, f.kind == MajoranaKind::c ? 'X' : 'Y');
    out = out * dense_of_pauli(img, cap);
  }
  return out * detail::ipow(m.phase());
}

/// Action of a monomial on an occupation basis state, computed from the sign rules alone:
/// c_j|n> = (-1)^{n_<j}|n^e_j>, c'_j|n> = i(-1)^{n_<j + n_j}|n^e_j>. Mode 0 is the most
/// significant bit of the index.
inline std::pair<std::uint64_t, cplx> fock_apply(const MajoranaMonomial& m, std::uint64_t n) {
  const std::size_t M = m.n_modes();
  cplx amp = detail::ipow(m.phase());
  const auto& fs = m.factors();
  for (std::size_t k = fs.size(); k-- > 0;) {
    const std::uint64_t bit = std::uint64_t{1} << (M - 1 - fs[k].mode);
    const std::uint64_t below = fs[k].mode == 0 ? 0 : (~std::uint64_t{0} << (M - fs[k].mode)) & ((std::uint64_t{1} << M) - 1);
    int sign = std::popcount(n & below) & 1;
    if (fs[k].kind == MajoranaKind::c_prime) {
      amp *= cplx(0, 1);
      sign ^= (n & bit) ? 1 : 0;
    }
    if (sign) amp = -amp;
    n ^= bit;
  }
  return {n, amp};
}

inline CVec project_code(const Encoding& enc, CVec v);

/// Product of (I + G)/2 over the stabilizer generators, built column by column.
inline CMat code_projector(const Encoding& enc) {
  detail::check_cap(enc.n_qubits, kDenseMatrixCap, "code projector");
  const auto dim = static_cast<Eigen::Index>(std::size_t{1} << enc.n_qubits);
  CMat proj(dim, dim);
  for (Eigen::Index c = 0; c < dim; ++c) proj.col(c) = project_code(enc, CVec::Unit(dim, c));
  return proj;
}

inline CVec project_code(const Encoding& enc, CVec v) {
  for (const auto& g : enc.stabilizers) v = 0.5 * (v + apply_pauli(g, v));
  return v;
}

/// Gauge operators fixed to +1 when labelling the code space: a greedy commuting subset.
inline std::vector<PauliOp> fixed_gauge(const Encoding& enc) {
  std::vector<PauliOp> out;
  for (const auto& g : enc.gauge) {
    bool ok = true;
    for (const auto& h : out) ok = ok && commutes(g, h);
    if (ok) out.push_back(g);
  }
  return out;
}

inline CVec project_gauge(const Encoding& enc, CVec v) {
  for (const auto& g : fixed_gauge(enc)) v = 0.5 * (v + apply_pauli(g, v));
  return v;
}

inline CVec random_state(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  CVec v(static_cast<Eigen::Index>(std::size_t{1} << n));
  for (Eigen::Index k = 0; k < v.size(); ++k) v[k] = cplx(nd(rng), nd(rng));
  return v;
}

/// Isometry from fermionic occupation states onto the code space. Column k is the encoded
/// image of occupation pattern `patterns[k]` (mode 0 most significant). The reference
/// column is the lexicographically smallest pattern present in the code; every other column
/// is obtained by applying the encoded c_j of the differing modes, with the phase chosen so
/// that W intertwines the Jordan-Wigner matrices with the encoded operators.
struct CodeSpace {
  std::vector<std::uint64_t> patterns;
  std::uint64_t reference = 0;
  CMat W;
};

inline CodeSpace build_code_space(const Encoding& enc, std::uint64_t seed = 1) {
  detail::check_cap(enc.n_qubits, kOracleCap, "code space");
  const std::size_t M = enc.n_primary_modes;
  const auto enc_m = enc.monomial_encoder();
  auto image_of = [&](const MajoranaMonomial& m) {
    auto p = enc_m.encode(m);
    if (!p) throw std::invalid_argument("monomial " + m.to_string() + " not represented");
    return *p;
  };
  // Map primary occupation index (mode 0 = MSB over primary modes) to the encoding's mode ids.
  std::vector<std::uint32_t> primary;
  for (const auto& md : enc.modes)
    if (md.role == ModeRole::primary) primary.push_back(md.id);
  std::sort(primary.begin(), primary.end());

  CVec psi = project_gauge(enc, project_code(enc, random_state(enc.n_qubits, seed)));
  std::uint64_t n0 = 0;
  for (std::size_t j = 0; j < M; ++j) {
    PauliOp phi = image_of(MajoranaMonomial::phase_flip(enc.n_modes, primary[j]));
    CVec empty = 0.5 * (psi + apply_pauli(phi, psi));
    if (empty.norm() > 1e-6) {
      psi = empty;
    } else {
      psi = 0.5 * (psi - apply_pauli(phi, psi));
      n0 |= std::uint64_t{1} << (M - 1 - j);
    }
    if (psi.norm() < 1e-6) throw ConsistencyError("code space has no occupation eigenstate");
  }
  psi.normalize();

  CodeSpace cs;
  cs.reference = n0;
  const bool all = enc.full_fock();
  for (std::uint64_t n = 0; n < (std::uint64_t{1} << M); ++n)
    if (all || (std::popcount(n) & 1) == (std::popcount(n0) & 1)) cs.patterns.push_back(n);
  cs.W.resize(psi.size(), static_cast<Eigen::Index>(cs.patterns.size()));
  for (std::size_t k = 0; k < cs.patterns.size(); ++k) {
    const std::uint64_t diff = cs.patterns[k] ^ n0;
    std::vector<MajoranaFactor> fs;
    std::vector<MajoranaFactor> ref_fs;
    for (std::size_t j = 0; j < M; ++j) {
      if (diff & (std::uint64_t{1} << (M - 1 - j))) {
        fs.push_back({primary[j], MajoranaKind::c});
        ref_fs.push_back({static_cast<std::uint32_t>(j), MajoranaKind::c});
      }
    }
    MajoranaMonomial f(enc.n_modes, fs);
    auto [target, amp] = fock_apply(MajoranaMonomial(M, ref_fs), n0);
    if (target != cs.patterns[k]) throw ConsistencyError("occupation bookkeeping");
    cs.W.col(static_cast<Eigen::Index>(k)) = apply_pauli(image_of(f), psi) * std::conj(amp);
  }
  return cs;
}

/// Action of a monomial on the code-space patterns: column c of the reference matrix has the
/// single entry `amp` in row `row`. Monomials are written over the encoding's mode ids;
/// auxiliary modes must not appear.
struct PatternAction {
  std::vector<Eigen::Index> row;
  std::vector<cplx> amp;
};

inline PatternAction pattern_action(const Encoding& enc, const CodeSpace& cs, const MajoranaMonomial& m) {
  std::vector<std::uint32_t> primary;
  for (const auto& md : enc.modes)
    if (md.role == ModeRole::primary) primary.push_back(md.id);
  std::sort(primary.begin(), primary.end());
  std::vector<MajoranaFactor> fs;
  for (const auto& f : m.factors()) {
    auto it = std::lower_bound(primary.begin(), primary.end(), f.mode);
    if (it == primary.end() || *it != f.mode) throw std::invalid_argument("monomial acts on an auxiliary mode");
    fs.push_back({static_cast<std::uint32_t>(it - primary.begin()), f.kind});
  }
  MajoranaMonomial local(primary.size(), {}, m.phase());
  local = local * MajoranaMonomial(primary.size(), fs);
  PatternAction out;
  for (std::uint64_t pattern : cs.patterns) {
    auto [n, amp] = fock_apply(local, pattern);
    auto it = std::lower_bound(cs.patterns.begin(), cs.patterns.end(), n);
    if (it == cs.patterns.end() || *it != n) throw std::invalid_argument("monomial leaves the encoded parity sector");
    out.row.push_back(it - cs.patterns.begin());
    out.amp.push_back(amp);
  }
  return out;
}

inline CMat reference_on_patterns(const Encoding& enc, const CodeSpace& cs, const MajoranaMonomial& m) {
  PatternAction act = pattern_action(enc, cs, m);
  const auto D = static_cast<Eigen::Index>(cs.patterns.size());
  CMat out = CMat::Zero(D, D);
  for (Eigen::Index c = 0; c < D; ++c) out(act.row[c], c) = act.amp[c];
  return out;
}

/// W * J without forming J.
inline CMat times_reference(const CMat& W, const PatternAction& act) {
  CMat out(W.rows(), W.cols());
  for (Eigen::Index c = 0; c < W.cols(); ++c) out.col(c) = act.amp[c] * W.col(act.row[c]);
  return out;
}

enum class ActionMatch : std::uint8_t { match, mismatch_phase, mismatch_operator };

struct ActionResult {
  ActionMatch kind = ActionMatch::mismatch_operator;
  cplx phase = 1.0;  // P W = phase * W J(claimed) when kind != mismatch_operator
};

/// Compares P restricted to the code space with the encoded action of `claimed`, optionally
/// followed by an operator on surplus (gauge) qubits.
inline ActionResult verify_logical_action(const Encoding& enc, const CodeSpace& cs, const PauliOp& pauli,
                                          const MajoranaMonomial& claimed,
                                          const std::optional<PauliOp>& gauge_factor = std::nullopt) {
  CMat lhs = apply_pauli_columns(pauli, cs.W);
  CMat ref;
  try {
    ref = times_reference(cs.W, pattern_action(enc, cs, claimed));
  } catch (const std::invalid_argument&) {
    return {};
  }
  if (gauge_factor) ref = apply_pauli_columns(*gauge_factor, ref);
  for (int k = 0; k < 4; ++k) {
    cplx lam = detail::ipow(k);
    if (detail::max_abs(lhs - lam * ref) < kOracleTol) return {k == 0 ? ActionMatch::match : ActionMatch::mismatch_phase, lam};
  }
  return {};
}

inline ActionResult verify_logical_action(const Encoding& enc, const PauliOp& pauli, const MajoranaMonomial& claimed) {
  return verify_logical_action(enc, build_code_space(enc), pauli, claimed);
}

/// W^dag P W.
inline CMat restrict_to_code(const CodeSpace& cs, const PauliOp& p) {
  return cs.W.adjoint() * apply_pauli_columns(p, cs.W);
}

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Independent verification of an encoding's algebraic claims.
inline std::vector<CheckResult> run_oracle_checks(const Encoding& enc, std::uint64_t seed = 7) {
  std::vector<CheckResult> out;
  auto add = [&](std::string name, bool ok, std::string detail = {}) {
    out.push_back({std::move(name), ok, std::move(detail)});
  };
  const std::size_t N = enc.n_qubits;
  detail::check_cap(N, kOracleCap, "oracle checks");
  const std::size_t d = enc.stabilizers.size();

  // Stabilizers: Hermitian involutions, pairwise commuting.
  {
    CVec r = random_state(N, seed);
    bool herm = true, comm = true;
    for (std::size_t a = 0; a < d; ++a) {
      CVec ga = apply_pauli(enc.stabilizers[a], r);
      herm = herm && (apply_pauli(enc.stabilizers[a], ga) - r).cwiseAbs().maxCoeff() < kOracleTol;
      herm = herm && std::abs(r.dot(ga) - ga.dot(r)) < 1e-8 * r.squaredNorm();
      for (std::size_t b = a + 1; b < d; ++b) {
        CVec ab = apply_pauli(enc.stabilizers[a], apply_pauli(enc.stabilizers[b], r));
        CVec ba = apply_pauli(enc.stabilizers[b], ga);
        comm = comm && (ab - ba).cwiseAbs().maxCoeff() < kOracleTol;
      }
    }
    add("stabilizers_hermitian_involutory", herm);
    add("stabilizers_commute", comm);
    std::vector<BitVec> rows;
    for (const auto& g : enc.stabilizers) rows.push_back(g.symplectic());
    add("stabilizers_independent", gf2_rank(rows) == d, "rank " + std::to_string(gf2_rank(rows)) + " of " + std::to_string(d));
  }

  const double expected_dim = std::ldexp(1.0, static_cast<int>(N - d));
  if (N <= kDenseMatrixCap) {
    CMat proj = code_projector(enc);
    double tr = proj.trace().real();
    bool idem = true;
    for (Eigen::Index c = 0; c < proj.cols() && idem; ++c)
      for (Eigen::Index r = 0; r <= c; ++r) idem = idem && std::abs(proj(r, c) - std::conj(proj(c, r))) < kOracleTol;
    for (std::uint64_t k = 0; k < 4 && idem; ++k) {
      CVec pr = proj * random_state(N, seed + 100 + k);
      idem = (proj * pr - pr).cwiseAbs().maxCoeff() < kOracleTol;
    }
    add("projector_rank", idem && std::abs(tr - expected_dim) < 1e-8,
        "trace " + std::to_string(tr) + ", expected " + std::to_string(expected_dim));
  }

  CodeSpace cs;
  try {
    cs = build_code_space(enc, seed);
  } catch (const std::exception& e) {
    add("code_space", false, e.what());
    return out;
  }
  const auto D = cs.W.cols();
  {
    double orth = detail::max_abs(cs.W.adjoint() * cs.W - CMat::Identity(D, D));
    CVec r = random_state(N, seed + 1);
    CVec pr = project_gauge(enc, project_code(enc, r));
    double comp = (pr - cs.W * (cs.W.adjoint() * pr)).cwiseAbs().maxCoeff();
    add("code_space_isometry", orth < kOracleTol, "max |W^dag W - I| = " + std::to_string(orth));
    add("code_space_complete", comp < 1e-8, "residual " + std::to_string(comp));
    // Each fixed gauge operator halves the labelled subspace.
    const double labelled = std::ldexp(expected_dim, -static_cast<int>(fixed_gauge(enc).size()));
    add("code_space_dimension", std::abs(static_cast<double>(D) - labelled) < 0.5,
        std::to_string(D) + " columns, expected " + std::to_string(labelled));
  }

  // Every generator acts on the code space as its fermionic counterpart.
  {
    bool ok = true;
    std::string bad;
    for (const auto& g : enc.logical) {
      if (!g.fermion.factors().empty() && verify_logical_action(enc, cs, g.image, g.fermion).kind != ActionMatch::match) {
        ok = false;
        bad += g.label + " ";
      }
    }
    add("logical_images_intertwine", ok, bad);
  }

  // Anticommutation relations directly from the encoded operators.
  {
    std::vector<const LogicalGenerator*> majoranas;
    for (const auto& g : enc.logical)
      if (g.fermion.factors().size() == 1 || g.label[0] == 'c') majoranas.push_back(&g);
    std::vector<CMat> applied;
    for (const auto* g : majoranas) applied.push_back(apply_pauli_columns(g->image, cs.W));
    bool ok = true;
    for (std::size_t a = 0; a < majoranas.size(); ++a) {
      for (std::size_t b = a; b < majoranas.size(); ++b) {
        // Squares are the identity; distinct images (anti)commute as their fermions do.
        const double sign = (a != b && commutes(majoranas[a]->fermion, majoranas[b]->fermion)) ? -1.0 : 1.0;
        CMat rel = apply_pauli_columns(majoranas[a]->image, applied[b]) +
                   sign * apply_pauli_columns(majoranas[b]->image, applied[a]);
        CMat expect = a == b ? CMat(2.0 * cs.W) : CMat(CMat::Zero(cs.W.rows(), D));
        ok = ok && detail::max_abs(rel - expect) < kOracleTol;
      }
    }
    add("majorana_relations", ok, std::to_string(majoranas.size()) + " single-Majorana images");
  }

  if (enc.kind == EncodingKind::dk && enc.lattice) {
    bool sq = true, rev = true;
    for (const auto& e : enc.edge_images) {
      CMat ew = apply_pauli_columns(e.image, cs.W);
      sq = sq && detail::max_abs(apply_pauli_columns(e.image, ew) - cs.W) < kOracleTol;
      rev = rev && detail::max_abs(apply_pauli_columns(enc.edge_image(e.head, e.tail), cs.W) + ew) < kOracleTol;
    }
    add("edge_squares_identity", sq);
    add("edge_reversal_sign", rev);
    bool loops = true;
    std::string bad;
    for (const auto& f : enc.lattice->faces()) {
      CMat m = cs.W;
      const auto& cyc = f.cycle;
      for (std::size_t k = cyc.size(); k-- > 0;) m = apply_pauli_columns(enc.edge_image(cyc[k], cyc[(k + 1) % cyc.size()]), m);
      m *= detail::ipow(static_cast<int>(cyc.size()));
      if (detail::max_abs(m - cs.W) > kOracleTol) {
        loops = false;
        bad += "(" + std::to_string(f.row) + "," + std::to_string(f.col) + ") ";
      }
    }
    add("face_loops_identity", loops, bad);
  }
  return out;
}

inline bool all_passed(const std::vector<CheckResult>& rs) {
  for (const auto& r : rs)
    if (!r.passed) return false;
  return true;
}

}  // namespace fermenc
