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

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fermenc/bitvec.hpp"
#include "fermenc/pauli.hpp"

namespace fermenc {

enum class MajoranaKind : std::uint8_t { c = 0, c_prime = 1 };

/// One Majorana factor. Canonical order is by mode, then c before c'.
struct MajoranaFactor {
  std::uint32_t mode = 0;
  MajoranaKind kind = MajoranaKind::c;

  std::uint32_t code() const { return 2 * mode + static_cast<std::uint32_t>(kind); }
  static MajoranaFactor from_code(std::uint32_t code) {
    return {code / 2, static_cast<MajoranaKind>(code & 1u)};
  }
  friend bool operator==(const MajoranaFactor&, const MajoranaFactor&) = default;
};

enum class ParitySector : std::uint8_t { even, odd };

enum class ModeRole : std::uint8_t { primary, auxiliary };

/// A fermionic mode id together with its role; auxiliary modes only occur in VC layouts.
struct ModeIndex {
  std::uint32_t id = 0;
  ModeRole role = ModeRole::primary;
  friend bool operator==(const ModeIndex&, const ModeIndex&) = default;
};

/// i^phase times an ordered product of distinct Majorana operators over n_modes modes.
///
/// Factors are kept strictly sorted in canonical order; repeated factors cancel because
/// every Majorana squares to the identity.
class MajoranaMonomial {
 public:
  MajoranaMonomial() = default;
  explicit MajoranaMonomial(std::size_t n_modes) : n_modes_(n_modes) {}

  /// Canonicalizes an arbitrary product of factors (taken left to right).
  MajoranaMonomial(std::size_t n_modes, const std::vector<MajoranaFactor>& factors, std::uint8_t phase = 0)
      : n_modes_(n_modes), phase_(phase & 3u) {
    for (const auto& f : factors) push_right(f);
  }

  static MajoranaMonomial identity(std::size_t n_modes) { return MajoranaMonomial(n_modes); }
  static MajoranaMonomial c(std::size_t n_modes, std::uint32_t mode) {
    return MajoranaMonomial(n_modes, {{mode, MajoranaKind::c}});
  }
  static MajoranaMonomial c_prime(std::size_t n_modes, std::uint32_t mode) {
    return MajoranaMonomial(n_modes, {{mode, MajoranaKind::c_prime}});
  }
  /// -i c_j c'_j = 1 - 2 n_j, the on-site dephasing operator.
  static MajoranaMonomial phase_flip(std::size_t n_modes, std::uint32_t mode) {
    return MajoranaMonomial(n_modes, {{mode, MajoranaKind::c}, {mode, MajoranaKind::c_prime}}, 3);
  }
  /// -i c_a c_b, the edge operator E_ab.
  static MajoranaMonomial edge(std::size_t n_modes, std::uint32_t a, std::uint32_t b) {
    return MajoranaMonomial(n_modes, {{a, MajoranaKind::c}, {b, MajoranaKind::c}}, 3);
  }

  std::size_t n_modes() const { return n_modes_; }
  const std::vector<MajoranaFactor>& factors() const { return factors_; }
  std::uint8_t phase() const { return phase_; }
  bool is_scalar() const { return factors_.empty(); }

  MajoranaMonomial& mul_phase(int k) {
    phase_ = static_cast<std::uint8_t>((phase_ + ((k % 4) + 4)) & 3u);
    return *this;
  }
  MajoranaMonomial with_phase(std::uint8_t k) const {
    MajoranaMonomial m = *this;
    m.phase_ = k & 3u;
    return m;
  }

  /// Bit mask over the 2*n_modes Majorana codes present.
  BitVec mask() const {
    BitVec m(2 * n_modes_);
    for (const auto& f : factors_) m.set(f.code());
    return m;
  }

  /// Multiplies by a single factor on the right, moving it into canonical position.
  MajoranaMonomial& push_right(const MajoranaFactor& f) {
    if (f.mode >= n_modes_)
      throw DimensionError("mode " + std::to_string(f.mode) + " out of range for " + std::to_string(n_modes_) +
                           " modes");
    // Moving f left past every strictly larger factor costs one sign per transposition.
    auto it = std::lower_bound(factors_.begin(), factors_.end(), f,
                               [](const MajoranaFactor& a, const MajoranaFactor& b) { return a.code() < b.code(); });
    std::size_t larger = static_cast<std::size_t>(factors_.end() - it);
    if (it != factors_.end() && it->code() == f.code()) {
      larger -= 1;
      factors_.erase(it);
    } else {
      factors_.insert(it, f);
    }
    if (larger & 1u) mul_phase(2);
    return *this;
  }

  friend bool operator==(const MajoranaMonomial&, const MajoranaMonomial&) = default;

  std::string to_string() const;
  static MajoranaMonomial parse(std::string_view text, std::size_t n_modes);

 private:
  std::size_t n_modes_ = 0;
  std::vector<MajoranaFactor> factors_;
  std::uint8_t phase_ = 0;
};

/// Canonical product a*b with exact sign.
inline MajoranaMonomial majorana_mul(const MajoranaMonomial& a, const MajoranaMonomial& b) {
  if (a.n_modes() != b.n_modes())
    throw DimensionError("Majorana monomials over " + std::to_string(a.n_modes()) + " and " +
                         std::to_string(b.n_modes()) + " modes");
  MajoranaMonomial out = a;
  for (const auto& f : b.factors()) out.push_right(f);
  out.mul_phase(b.phase());
  return out;
}

inline MajoranaMonomial operator*(const MajoranaMonomial& a, const MajoranaMonomial& b) {
  return majorana_mul(a, b);
}

/// Number of distinct modes touched.
inline std::size_t mode_weight(const MajoranaMonomial& m) {
  std::size_t w = 0;
  const auto& fs = m.factors();
  for (std::size_t k = 0; k < fs.size(); ++k)
    if (k == 0 || fs[k].mode != fs[k - 1].mode) ++w;
  return w;
}

inline ParitySector parity_sector(const MajoranaMonomial& m) {
  return (m.factors().size() & 1u) ? ParitySector::odd : ParitySector::even;
}

/// Monomials commute iff |a||b| - |a & b| is even.
inline bool commutes(const MajoranaMonomial& a, const MajoranaMonomial& b) {
  BitVec ma = a.mask(), mb = b.mask();
  std::size_t na = ma.popcount(), nb = mb.popcount();
  ma &= mb;
  return ((na * nb + ma.popcount()) & 1) == 0;
}

/// True when every touched mode carries both c and c', i.e. the monomial is a product of
/// on-site dephasing operators (up to phase).
inline bool is_pure_dephasing(const MajoranaMonomial& m) {
  const auto& fs = m.factors();
  if (fs.size() & 1u) return false;
  for (std::size_t k = 0; k < fs.size(); k += 2)
    if (fs[k].mode != fs[k + 1].mode) return false;
  return true;
}

/// Renders as "-i g0 g0' g3": a sign token ("+", "+i", "-", "-i") then factors, "g" for c
/// and "g'" for c'. A scalar renders as the sign token followed by "I".
inline std::string MajoranaMonomial::to_string() const {
  static constexpr const char* kPrefix[] = {"+", "+i", "-", "-i"};
  std::ostringstream os;
  os << kPrefix[phase_];
  if (factors_.empty()) os << " I";
  for (const auto& f : factors_) os << " g" << f.mode << (f.kind == MajoranaKind::c_prime ? "'" : "");
  return os.str();
}

inline MajoranaMonomial MajoranaMonomial::parse(std::string_view text, std::size_t n_modes) {
  auto fail = [&](const std::string& why) {
    throw std::invalid_argument("cannot parse Majorana monomial '" + std::string(text) + "': " + why);
  };
  std::vector<std::string> tokens;
  {
    std::istringstream is{std::string(text)};
    std::string t;
    while (is >> t) tokens.push_back(t);
  }
  if (tokens.empty()) fail("empty");
  std::size_t k = 0;
  int ph = 0;
  const std::string& head = tokens[0];
  if (head == "+" || head == "-" || head == "+i" || head == "-i" || head == "i") {
    if (head[0] == '-') ph = 2;
    if (head.back() == 'i') ph += 1;
    k = 1;
  }
  MajoranaMonomial m(n_modes);
  for (; k < tokens.size(); ++k) {
    const std::string& t = tokens[k];
    if (t == "I" || t == "1") continue;
    if (t.size() < 2 || t[0] != 'g') fail("bad factor '" + t + "'");
    bool prime = t.back() == '\'';
    std::string digits = t.substr(1, t.size() - 1 - (prime ? 1 : 0));
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos) fail("bad mode in '" + t + "'");
    std::uint32_t mode = static_cast<std::uint32_t>(std::stoul(digits));
    if (mode >= n_modes) fail("mode out of range");
    m.push_right({mode, prime ? MajoranaKind::c_prime : MajoranaKind::c});
  }
  m.mul_phase(ph);
  return m;
}

}  // namespace fermenc
