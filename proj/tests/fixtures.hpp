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

// Encodings shared by the unit tests and the acceptance binary.

#pragma once

#include <string>
#include <vector>

#include "fermenc/encoding.hpp"

namespace fermenc::testing {

inline EncodingConfig jw(std::size_t modes) {
  EncodingConfig c;
  c.kind = EncodingKind::jw;
  c.modes = modes;
  return c;
}

inline EncodingConfig vc(int rows, int cols, bool swap = false, bool parity = false) {
  EncodingConfig c;
  c.kind = EncodingKind::vc;
  c.rows = rows;
  c.cols = cols;
  c.swap_first_pair = swap;
  c.parity_stabilizer = parity;
  return c;
}

inline EncodingConfig dk(int rows, int cols, int offset = 0, std::vector<Corner> shaved = {}, bool parity = false,
                         Boundary b = Boundary::open) {
  EncodingConfig c;
  c.kind = EncodingKind::dk;
  c.rows = rows;
  c.cols = cols;
  c.face_parity_offset = offset;
  c.shaved = std::move(shaved);
  c.parity_stabilizer = parity;
  c.boundary = b;
  return c;
}

inline std::string describe(const EncodingConfig& c) {
  std::string s = to_string(c.kind);
  if (c.kind == EncodingKind::jw) return s + std::to_string(c.modes);
  s += " " + std::to_string(c.rows) + "x" + std::to_string(c.cols);
  if (c.kind == EncodingKind::dk) s += " offset " + std::to_string(c.face_parity_offset);
  if (c.boundary == Boundary::periodic) s += " periodic";
  for (Corner k : c.shaved) s += std::string(" shave ") + to_string(k);
  if (c.swap_first_pair) s += " swap";
  if (c.parity_stabilizer) s += " parity";
  return s;
}

/// Every encoding small enough for the dense oracle (at most 14 qubits).
inline std::vector<EncodingConfig> oracle_fixtures() {
  std::vector<EncodingConfig> out = {jw(4), vc(2, 2), vc(2, 2, true), vc(2, 3), vc(3, 2), vc(2, 2, false, true)};
  for (int off : {0, 1}) {
    out.push_back(dk(2, 2, off));
    out.push_back(dk(2, 3, off));
    out.push_back(dk(3, 3, off));
    out.push_back(dk(2, 4, off));
    out.push_back(dk(3, 3, off, {}, true));
  }
  out.push_back(dk(3, 3, 0, {Corner::bottom_left}));
  out.push_back(dk(3, 3, 0, {Corner::top_right, Corner::bottom_left}));
  out.push_back(dk(3, 3, 0, {Corner::bottom_left}, true));
  return out;
}

}  // namespace fermenc::testing
