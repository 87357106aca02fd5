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

#include "fermenc/dense_oracle.hpp"
#include "fermenc/majorana.hpp"

using namespace fermenc;

namespace {

MajoranaMonomial random_monomial(std::size_t n, std::mt19937_64& rng) {
  std::vector<MajoranaFactor> fs;
  std::size_t len = rng() % 6;
  for (std::size_t k = 0; k < len; ++k) fs.push_back(MajoranaFactor::from_code(static_cast<std::uint32_t>(rng() % (2 * n))));
  return MajoranaMonomial(n, fs, static_cast<std::uint8_t>(rng() % 4));
}

}  // namespace

TEST(Majorana, CanonicalOrderingSigns) {
  auto c0 = MajoranaMonomial::c(2, 0), c1 = MajoranaMonomial::c(2, 1);
  EXPECT_EQ(c1 * c0, (c0 * c1).with_phase(2));
  EXPECT_EQ(c0 * c0, MajoranaMonomial::identity(2));
  EXPECT_EQ((c0 * c1 * c0), c1.with_phase(2));
}

TEST(Majorana, ParseRender) {
  auto m = MajoranaMonomial::parse("-i g0 g0'", 2);
  EXPECT_EQ(m, MajoranaMonomial::phase_flip(2, 0));
  EXPECT_EQ(MajoranaMonomial::parse(m.to_string(), 2), m);
  EXPECT_EQ(MajoranaMonomial::parse("g1 g0", 2), (MajoranaMonomial::c(2, 0) * MajoranaMonomial::c(2, 1)).with_phase(2));
  EXPECT_THROW(MajoranaMonomial::parse("g5", 2), std::invalid_argument);
  EXPECT_THROW(MajoranaMonomial::parse("h0", 2), std::invalid_argument);
}

TEST(Majorana, ModeWeightParityDephasing) {
  auto m = MajoranaMonomial::parse("g0 g0' g2", 3);
  EXPECT_EQ(mode_weight(m), 2u);
  EXPECT_EQ(parity_sector(m), ParitySector::odd);
  EXPECT_FALSE(is_pure_dephasing(m));
  auto d = MajoranaMonomial::phase_flip(3, 0) * MajoranaMonomial::phase_flip(3, 2);
  EXPECT_TRUE(is_pure_dephasing(d));
  EXPECT_EQ(mode_weight(d), 2u);
  EXPECT_FALSE(is_pure_dephasing(MajoranaMonomial::edge(3, 0, 1)));
}

TEST(Majorana, DenseSingleMode) {
  CMat sx(2, 2);
  sx << 0, 1, 1, 0;
  EXPECT_LT(detail::max_abs(dense_of_majorana(MajoranaMonomial::c(1, 0)) - sx), 1e-15);
}

// -i c0 c0' = 1 - 2 n0 on two modes: diag(1, 1, -1, -1) with mode 0 leftmost.
TEST(Majorana, DenseOccupationPhase) {
  CMat expect = CMat::Zero(4, 4);
  expect.diagonal() << 1, 1, -1, -1;
  EXPECT_LT(detail::max_abs(dense_of_majorana(MajoranaMonomial::phase_flip(2, 0)) - expect), 1e-15);
}

TEST(Majorana, DenseCanonicalAnticommutation) {
  for (std::size_t M = 1; M <= 5; ++M) {
    std::vector<CMat> gs;
    for (std::uint32_t code = 0; code < 2 * M; ++code)
      gs.push_back(dense_of_majorana(MajoranaMonomial(M, {MajoranaFactor::from_code(code)})));
    const auto d = gs[0].rows();
    for (std::size_t a = 0; a < gs.size(); ++a)
      for (std::size_t b = 0; b < gs.size(); ++b) {
        CMat ac = gs[a] * gs[b] + gs[b] * gs[a];
        CMat expect = (a == b ? 2.0 : 0.0) * CMat::Identity(d, d);
        ASSERT_LT(detail::max_abs(ac - expect), 1e-12) << M << " " << a << " " << b;
      }
  }
}

TEST(Majorana, SymbolicProductMatchesDense) {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 300; ++trial) {
    std::size_t n = 1 + rng() % 4;
    auto a = random_monomial(n, rng), b = random_monomial(n, rng);
    CMat da = dense_of_majorana(a), db = dense_of_majorana(b);
    ASSERT_LT(detail::max_abs(dense_of_majorana(a * b) - da * db), 1e-12);
    ASSERT_EQ(commutes(a, b), detail::max_abs(da * db - db * da) < 1e-12);
  }
}

TEST(Majorana, FockApplyMatchesDense) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t n = 1 + rng() % 4;
    auto m = random_monomial(n, rng);
    CMat d = dense_of_majorana(m);
    std::uint64_t in = rng() % (std::uint64_t{1} << n);
    auto [out, amp] = fock_apply(m, in);
    ASSERT_LT(std::abs(d(static_cast<Eigen::Index>(out), static_cast<Eigen::Index>(in)) - amp), 1e-12);
  }
}

TEST(Majorana, ModeOutOfRange) {
  EXPECT_THROW(MajoranaMonomial::c(2, 2), DimensionError);
  EXPECT_THROW(MajoranaMonomial::c(2, 0) * MajoranaMonomial::c(3, 0), DimensionError);
}
