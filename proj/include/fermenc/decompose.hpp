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
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fermenc/bitvec.hpp"
#include "fermenc/majorana.hpp"
#include "fermenc/pauli.hpp"

namespace fermenc {

/// Signals a broken internal invariant (e.g. an undetectable error outside the logical algebra).
class ConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A fermionic generator together with the qubit operator that represents it.
struct LogicalGenerator {
  std::string label;
  MajoranaMonomial fermion;
  PauliOp image;
};

/// Expresses a Pauli operator as (logical generators) x (gauge) x (stabilizers) over GF(2),
/// then fixes the phase by exact multiplication.
///
/// Logical rows are tried first so that an undetectable error is explained by the earliest
/// fermionic generators; stabilizer and gauge factors act trivially on the fermionic part
/// and are dropped from the image.
class PauliDecomposer {
 public:
  struct Result {
    MajoranaMonomial fermion;
    std::vector<std::size_t> logical_used;
    std::vector<std::size_t> gauge_used;
    std::vector<std::size_t> stabilizers_used;
  };

  PauliDecomposer(std::size_t n_qubits, const std::vector<LogicalGenerator>& logical,
                  const std::vector<PauliOp>& gauge, const std::vector<PauliOp>& stabilizers, std::size_t n_modes)
      : n_qubits_(n_qubits), n_modes_(n_modes), logical_(&logical), gauge_(&gauge), stabilizers_(&stabilizers),
        basis_(2 * n_qubits) {
    for (const auto& g : logical) basis_.insert(g.image.symplectic());
    for (const auto& g : gauge) basis_.insert(g.symplectic());
    for (const auto& s : stabilizers) basis_.insert(s.symplectic());
  }

  std::optional<Result> decompose(const PauliOp& target) const {
    if (target.num_qubits() != n_qubits_) throw DimensionError("target size differs from code size");
    auto combo = basis_.solve(target.symplectic());
    if (!combo) return std::nullopt;
    const std::size_t nl = logical_->size(), ng = gauge_->size();
    Result r{MajoranaMonomial::identity(n_modes_), {}, {}, {}};
    PauliOp product = PauliOp::identity(n_qubits_);
    for (std::size_t idx : *combo) {
      if (idx < nl) {
        r.logical_used.push_back(idx);
        product = product * (*logical_)[idx].image;
        r.fermion = r.fermion * (*logical_)[idx].fermion;
      } else if (idx < nl + ng) {
        r.gauge_used.push_back(idx - nl);
        product = product * (*gauge_)[idx - nl];
      } else {
        r.stabilizers_used.push_back(idx - nl - ng);
        product = product * (*stabilizers_)[idx - nl - ng];
      }
    }
    // target = i^delta * product; the stabilizer part acts as +1 on the code space.
    int delta = (static_cast<int>(target.phase()) - static_cast<int>(product.phase()) + 4) % 4;
    r.fermion.mul_phase(delta);
    return r;
  }

 private:
  std::size_t n_qubits_;
  std::size_t n_modes_;
  const std::vector<LogicalGenerator>* logical_;
  const std::vector<PauliOp>* gauge_;
  const std::vector<PauliOp>* stabilizers_;
  Gf2Basis basis_;
};

/// Maps Majorana monomials to qubit operators by writing them as products of generators.
class MonomialEncoder {
 public:
  MonomialEncoder(const std::vector<LogicalGenerator>& logical, std::size_t n_modes, std::size_t n_qubits)
      : logical_(&logical), n_modes_(n_modes), n_qubits_(n_qubits), basis_(2 * n_modes) {
    for (const auto& g : logical) basis_.insert(g.fermion.mask());
  }

  std::optional<PauliOp> encode(const MajoranaMonomial& m) const {
    if (m.n_modes() != n_modes_) throw DimensionError("monomial mode count differs from encoding");
    auto combo = basis_.solve(m.mask());
    if (!combo) return std::nullopt;
    MajoranaMonomial f = MajoranaMonomial::identity(n_modes_);
    PauliOp p = PauliOp::identity(n_qubits_);
    for (std::size_t idx : *combo) {
      f = f * (*logical_)[idx].fermion;
      p = p * (*logical_)[idx].image;
    }
    // f and m share factors, so m = i^(m.phase - f.phase) * f.
    p.mul_phase(static_cast<int>(m.phase()) - static_cast<int>(f.phase()));
    return p;
  }

 private:
  const std::vector<LogicalGenerator>* logical_;
  std::size_t n_modes_;
  std::size_t n_qubits_;
  Gf2Basis basis_;
};

}  // namespace fermenc
