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

#include <cstddef>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fermenc/bitvec.hpp"

namespace fermenc {

/// Raised when two operators that must live on the same register do not.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An n-qubit Pauli operator i^phase * P_0 (x) P_1 (x) ... with P_k chosen by (x_k, z_k):
/// (0,0)=I, (1,0)=X, (0,1)=Z, (1,1)=Y, where Y = i X Z.
///
/// Qubit 0 is the leftmost tensor factor. All arithmetic is exact; phases are kept mod 4.
class PauliOp {
 public:
  PauliOp() = default;
  explicit PauliOp(std::size_t n) : xs_(n), zs_(n) {}
  PauliOp(BitVec xs, BitVec zs, std::uint8_t phase = 0) : xs_(std::move(xs)), zs_(std::move(zs)), phase_(phase & 3u) {
    if (xs_.size() != zs_.size()) throw DimensionError("x and z parts differ in length");
  }

  static PauliOp identity(std::size_t n) { return PauliOp(n); }

  /// Single-qubit Pauli `letter` in {I,X,Y,Z} on qubit q.
  static PauliOp single(std::size_t n, std::size_t q, char letter) {
    PauliOp p(n);
    p.set(q, letter);
    return p;
  }

  std::size_t num_qubits() const { return xs_.size(); }
  const BitVec& xs() const { return xs_; }
  const BitVec& zs() const { return zs_; }
  std::uint8_t phase() const { return phase_; }

  char letter(std::size_t q) const {
    bool x = xs_.get(q), z = zs_.get(q);
    if (x && z) return 'Y';
    if (x) return 'X';
    if (z) return 'Z';
    return 'I';
  }

  /// Overwrites the tensor factor on qubit q; the global phase is left untouched.
  PauliOp& set(std::size_t q, char letter) {
    if (q >= num_qubits()) throw DimensionError("qubit index " + std::to_string(q) + " out of range");
    switch (letter) {
      case 'I': xs_.set(q, false); zs_.set(q, false); break;
      case 'X': xs_.set(q, true); zs_.set(q, false); break;
      case 'Y': xs_.set(q, true); zs_.set(q, true); break;
      case 'Z': xs_.set(q, false); zs_.set(q, true); break;
      default: throw std::invalid_argument(std::string("not a Pauli letter: ") + letter);
    }
    return *this;
  }

  /// Multiplies the operator by i^k.
  PauliOp& mul_phase(int k) {
    phase_ = static_cast<std::uint8_t>((phase_ + ((k % 4) + 4)) & 3u);
    return *this;
  }
  PauliOp with_phase(std::uint8_t k) const {
    PauliOp p = *this;
    p.phase_ = k & 3u;
    return p;
  }

  /// Same tensor product, phase exponent 0.
  PauliOp unsigned_part() const { return with_phase(0); }

  /// Symplectic row [x | z].
  BitVec symplectic() const { return BitVec::concat(xs_, zs_); }

  std::vector<std::size_t> support() const { return (xs_ | zs_).ones(); }

  friend bool operator==(const PauliOp& a, const PauliOp& b) = default;

  std::string to_string() const;
  static PauliOp parse(std::string_view text, std::size_t n);

 private:
  BitVec xs_;
  BitVec zs_;
  std::uint8_t phase_ = 0;
};

inline void require_same_size(const PauliOp& a, const PauliOp& b) {
  if (a.num_qubits() != b.num_qubits())
    throw DimensionError("Pauli operators on " + std::to_string(a.num_qubits()) + " and " +
                         std::to_string(b.num_qubits()) + " qubits");
}

/// Number of qubits acted on non-trivially.
inline std::size_t weight(const PauliOp& a) { return (a.xs() | a.zs()).popcount(); }

/// True iff the symplectic product x_a.z_b + z_a.x_b vanishes mod 2.
inline bool commutes(const PauliOp& a, const PauliOp& b) {
  require_same_size(a, b);
  return dot(a.xs(), b.zs()) == dot(a.zs(), b.xs());
}

/// Every tensor factor is Hermitian, so the operator is Hermitian iff i^phase is real.
inline bool is_hermitian(const PauliOp& a) { return (a.phase() & 1u) == 0; }

/// Exact product a*b.
///
/// Writing each factor as i^{xz} X^x Z^z and commuting Z^{z_a} past X^{x_b} gives
/// phase = p_a + p_b + |x_a z_a| + |x_b z_b| - |x_c z_c| + 2 |z_a x_b|  (mod 4).
inline PauliOp pauli_mul(const PauliOp& a, const PauliOp& b) {
  require_same_size(a, b);
  BitVec xc = a.xs() ^ b.xs();
  BitVec zc = a.zs() ^ b.zs();
  std::size_t ya = (a.xs() & a.zs()).popcount();
  std::size_t yb = (b.xs() & b.zs()).popcount();
  std::size_t yc = (xc & zc).popcount();
  std::size_t cross = (a.zs() & b.xs()).popcount();
  std::size_t ph = a.phase() + b.phase() + ya + yb + 2 * cross + 4 * a.num_qubits() - yc;
  return PauliOp(std::move(xc), std::move(zc), static_cast<std::uint8_t>(ph & 3u));
}

inline PauliOp operator*(const PauliOp& a, const PauliOp& b) { return pauli_mul(a, b); }

/// Renders as e.g. "+iY0 X3 Z5"; the identity is "+I" (with its phase prefix).
inline std::string PauliOp::to_string() const {
  static constexpr const char* kPrefix[] = {"+", "+i", "-", "-i"};
  std::ostringstream os;
  os << kPrefix[phase_];
  bool first = true;
  for (std::size_t q = 0; q < num_qubits(); ++q) {
    char c = letter(q);
    if (c == 'I') continue;
    if (!first) os << ' ';
    os << c << q;
    first = false;
  }
  if (first) os << 'I';
  return os.str();
}

inline PauliOp PauliOp::parse(std::string_view text, std::size_t n) {
  auto fail = [&](const std::string& why) {
    throw std::invalid_argument("cannot parse Pauli string '" + std::string(text) + "': " + why);
  };
  std::size_t pos = 0;
  auto skip_ws = [&] {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
  };
  skip_ws();
  PauliOp p(n);
  int ph = 0;
  if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
    if (text[pos] == '-') ph = 2;
    ++pos;
  }
  if (pos < text.size() && text[pos] == 'i') {
    ph += 1;
    ++pos;
  }
  std::vector<bool> seen(n, false);
  bool any = false;
  while (true) {
    skip_ws();
    if (pos >= text.size()) break;
    char c = text[pos++];
    if (c == 'I' && (pos >= text.size() || text[pos] == ' ')) {
      any = true;
      continue;
    }
    if (c != 'X' && c != 'Y' && c != 'Z') fail(std::string("unexpected '") + c + "'");
    std::size_t start = pos;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') ++pos;
    if (start == pos) fail("missing qubit index");
    std::size_t q = std::stoul(std::string(text.substr(start, pos - start)));
    if (q >= n) fail("qubit index " + std::to_string(q) + " out of range");
    if (seen[q]) fail("qubit " + std::to_string(q) + " repeated");
    seen[q] = true;
    p.set(q, c);
    any = true;
  }
  if (!any) fail("empty operator");
  p.mul_phase(ph);
  return p;
}

}  // namespace fermenc
