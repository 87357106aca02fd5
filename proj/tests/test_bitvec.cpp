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

#include <random>

#include <gtest/gtest.h>

#include "fermenc/bitvec.hpp"

using namespace fermenc;

namespace {

BitVec bits(const std::string& s) {
  BitVec v(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) v.set(i, s[i] == '1');
  return v;
}

}  // namespace

TEST(BitVec, SetGetPopcount) {
  BitVec v(130);
  v.set(0);
  v.set(64);
  v.set(129);
  EXPECT_TRUE(v.get(64));
  EXPECT_FALSE(v.get(63));
  EXPECT_EQ(v.popcount(), 3u);
  EXPECT_EQ(v.ones(), (std::vector<std::size_t>{0, 64, 129}));
  EXPECT_EQ(*v.lowest(), 0u);
}

TEST(BitVec, XorAndDot) {
  BitVec a = bits("1101"), b = bits("0111");
  EXPECT_EQ(a ^ b, bits("1010"));
  EXPECT_EQ(a & b, bits("0101"));
  EXPECT_FALSE(dot(a, b));
  EXPECT_TRUE(dot(a, bits("1000")));
}

TEST(BitVec, SizeMismatchThrows) {
  BitVec a(3), b(4);
  EXPECT_THROW(a ^= b, std::invalid_argument);
}

TEST(BitVec, HexRoundTrip) {
  std::mt19937_64 rng(5);
  for (std::size_t n : {1u, 7u, 8u, 63u, 64u, 65u, 200u}) {
    BitVec v(n);
    for (std::size_t i = 0; i < n; ++i) v.set(i, rng() & 1u);
    EXPECT_EQ(BitVec::from_hex(v.to_hex(), n), v) << n;
  }
}

TEST(BitVec, SliceAndConcat) {
  BitVec a = bits("101"), b = bits("0011");
  BitVec c = BitVec::concat(a, b);
  EXPECT_EQ(c, bits("1010011"));
  EXPECT_EQ(c.slice(3, 4), b);
  EXPECT_EQ(c.slice(0, 3), a);
}

TEST(Gf2, RankAndSolve) {
  std::vector<BitVec> rows = {bits("1100"), bits("0110"), bits("1010")};
  EXPECT_EQ(gf2_rank(rows), 2u);
  Gf2Basis basis(4);
  EXPECT_TRUE(basis.insert(rows[0]));
  EXPECT_TRUE(basis.insert(rows[1]));
  EXPECT_FALSE(basis.insert(rows[2]));
  auto combo = basis.solve(bits("1010"));
  ASSERT_TRUE(combo.has_value());
  BitVec acc(4);
  for (auto k : *combo) acc ^= rows[k];
  EXPECT_EQ(acc, bits("1010"));
  EXPECT_FALSE(basis.solve(bits("0001")).has_value());
}

TEST(Gf2, NullSpaceIsOrthogonalAndComplete) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t width = 12;
    std::vector<BitVec> rows;
    for (int r = 0; r < 7; ++r) {
      BitVec v(width);
      for (std::size_t i = 0; i < width; ++i) v.set(i, rng() & 1u);
      rows.push_back(v);
    }
    auto null = gf2_null_space(rows, width);
    EXPECT_EQ(null.size() + gf2_rank(rows), width);
    for (const auto& v : null)
      for (const auto& r : rows) EXPECT_FALSE(dot(v, r));
    EXPECT_EQ(gf2_rank(null), null.size());
  }
}
