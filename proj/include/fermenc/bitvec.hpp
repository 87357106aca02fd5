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
#include <bit>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fermenc {

/// Fixed-length bit vector packed into 64-bit words. Bits past size() are kept zero.
class BitVec {
 public:
  BitVec() = default;
  explicit BitVec(std::size_t n) : n_(n), words_((n + 63) / 64, 0) {}

  std::size_t size() const { return n_; }
  std::size_t num_words() const { return words_.size(); }
  const std::vector<std::uint64_t>& words() const { return words_; }

  bool get(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
  void set(std::size_t i, bool v = true) {
    std::uint64_t m = std::uint64_t{1} << (i & 63);
    if (v) {
      words_[i >> 6] |= m;
    } else {
      words_[i >> 6] &= ~m;
    }
  }
  void flip(std::size_t i) { words_[i >> 6] ^= std::uint64_t{1} << (i & 63); }

  BitVec& operator^=(const BitVec& o) {
    check_same(o);
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] ^= o.words_[k];
    return *this;
  }
  BitVec& operator&=(const BitVec& o) {
    check_same(o);
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] &= o.words_[k];
    return *this;
  }
  BitVec& operator|=(const BitVec& o) {
    check_same(o);
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] |= o.words_[k];
    return *this;
  }
  friend BitVec operator^(BitVec a, const BitVec& b) { return a ^= b; }
  friend BitVec operator&(BitVec a, const BitVec& b) { return a &= b; }
  friend BitVec operator|(BitVec a, const BitVec& b) { return a |= b; }

  std::size_t popcount() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }
  bool any() const {
    for (auto w : words_)
      if (w) return true;
    return false;
  }
  bool none() const { return !any(); }

  /// Index of the lowest set bit, if any.
  std::optional<std::size_t> lowest() const {
    for (std::size_t k = 0; k < words_.size(); ++k)
      if (words_[k]) return k * 64 + static_cast<std::size_t>(std::countr_zero(words_[k]));
    return std::nullopt;
  }

  std::vector<std::size_t> ones() const {
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < words_.size(); ++k) {
      std::uint64_t w = words_[k];
      while (w) {
        out.push_back(k * 64 + static_cast<std::size_t>(std::countr_zero(w)));
        w &= w - 1;
      }
    }
    return out;
  }

  /// Parity of popcount(a & b).
  friend bool dot(const BitVec& a, const BitVec& b) {
    a.check_same(b);
    std::uint64_t acc = 0;
    for (std::size_t k = 0; k < a.words_.size(); ++k) acc ^= a.words_[k] & b.words_[k];
    return std::popcount(acc) & 1;
  }

  /// Concatenation [a | b], used for symplectic (x|z) rows.
  BitVec slice(std::size_t start, std::size_t len) const {
    if (start + len > n_) throw std::out_of_range("BitVec slice out of range");
    BitVec out(len);
    for (std::size_t i = 0; i < len; ++i)
      if (get(start + i)) out.set(i);
    return out;
  }

  static BitVec concat(const BitVec& a, const BitVec& b) {
    BitVec out(a.size() + b.size());
    for (auto i : a.ones()) out.set(i);
    for (auto i : b.ones()) out.set(a.size() + i);
    return out;
  }

  /// Hex rendering with bit 0 as the least significant bit. Width is ceil(n/4), "0" when empty.
  std::string to_hex() const {
    if (n_ == 0) return "0";
    static constexpr char kDigits[] = "0123456789abcdef";
    std::size_t nibbles = (n_ + 3) / 4;
    std::string s(nibbles, '0');
    for (std::size_t k = 0; k < nibbles; ++k) {
      unsigned v = 0;
      for (std::size_t b = 0; b < 4; ++b) {
        std::size_t i = 4 * k + b;
        if (i < n_ && get(i)) v |= 1u << b;
      }
      s[nibbles - 1 - k] = kDigits[v];
    }
    return s;
  }

  static BitVec from_hex(const std::string& hex, std::size_t n) {
    BitVec out(n);
    std::size_t k = 0;
    for (auto it = hex.rbegin(); it != hex.rend(); ++it, ++k) {
      char c = *it;
      unsigned v;
      if (c >= '0' && c <= '9') {
        v = static_cast<unsigned>(c - '0');
      } else if (c >= 'a' && c <= 'f') {
        v = static_cast<unsigned>(c - 'a' + 10);
      } else if (c >= 'A' && c <= 'F') {
        v = static_cast<unsigned>(c - 'A' + 10);
      } else {
        throw std::invalid_argument("bad hex digit in '" + hex + "'");
      }
      for (std::size_t b = 0; b < 4; ++b) {
        if (!(v >> b & 1u)) continue;
        std::size_t i = 4 * k + b;
        if (i >= n) throw std::invalid_argument("hex value wider than bit vector");
        out.set(i);
      }
    }
    return out;
  }

  friend bool operator==(const BitVec& a, const BitVec& b) = default;

 private:
  void check_same(const BitVec& o) const {
    if (o.n_ != n_) throw std::invalid_argument("bit vector length mismatch");
  }

  std::size_t n_ = 0;
  std::vector<std::uint64_t> words_;
};

/// Incremental GF(2) row reduction that remembers which input rows form each basis row.
///
/// Rows are inserted in order; a row dependent on earlier rows is not added to the
/// basis. solve() expresses a target as an XOR of input rows, preferring earlier rows.
class Gf2Basis {
 public:
  explicit Gf2Basis(std::size_t width) : width_(width) {}

  /// Returns true when the row was independent of all previously inserted rows.
  bool insert(const BitVec& row) {
    if (row.size() != width_) throw std::invalid_argument("GF(2) row width mismatch");
    std::size_t id = num_inputs_++;
    BitVec r = row;
    std::vector<std::size_t> used;
    for (std::size_t k = 0; k < rows_.size(); ++k) {
      if (r.get(pivots_[k])) {
        r ^= rows_[k];
        used.push_back(k);
      }
    }
    if (r.none()) return false;
    std::vector<std::size_t> c{id};
    for (auto k : used) {
      for (auto j : combos_[k]) toggle(c, j);
    }
    pivots_.push_back(*r.lowest());
    rows_.push_back(std::move(r));
    combos_.push_back(std::move(c));
    return true;
  }

  std::size_t rank() const { return rows_.size(); }
  std::size_t num_inputs() const { return num_inputs_; }

  /// Input-row indices (ascending) whose XOR equals target, or nullopt when not in the span.
  std::optional<std::vector<std::size_t>> solve(const BitVec& target) const {
    if (target.size() != width_) throw std::invalid_argument("GF(2) target width mismatch");
    BitVec r = target;
    std::vector<std::size_t> c;
    for (std::size_t k = 0; k < rows_.size(); ++k) {
      if (r.get(pivots_[k])) {
        r ^= rows_[k];
        for (auto j : combos_[k]) toggle(c, j);
      }
    }
    if (r.any()) return std::nullopt;
    std::sort(c.begin(), c.end());
    return c;
  }

 private:
  static void toggle(std::vector<std::size_t>& v, std::size_t j) {
    for (auto it = v.begin(); it != v.end(); ++it) {
      if (*it == j) {
        v.erase(it);
        return;
      }
    }
    v.push_back(j);
  }

  std::size_t width_;
  std::size_t num_inputs_ = 0;
  std::vector<BitVec> rows_;
  std::vector<std::size_t> pivots_;
  std::vector<std::vector<std::size_t>> combos_;
};

/// Rank of a set of rows over GF(2).
inline std::size_t gf2_rank(const std::vector<BitVec>& rows) {
  if (rows.empty()) return 0;
  Gf2Basis b(rows.front().size());
  for (const auto& r : rows) b.insert(r);
  return b.rank();
}

/// Basis of {v : dot(row, v) = 0 for every row}, one vector per free column of the reduced
/// row echelon form, in increasing free-column order.
inline std::vector<BitVec> gf2_null_space(std::vector<BitVec> rows, std::size_t width) {
  std::vector<std::size_t> pivot_col;
  std::size_t r = 0;
  for (std::size_t col = 0; col < width && r < rows.size(); ++col) {
    std::size_t k = r;
    while (k < rows.size() && !rows[k].get(col)) ++k;
    if (k == rows.size()) continue;
    std::swap(rows[r], rows[k]);
    for (std::size_t j = 0; j < rows.size(); ++j)
      if (j != r && rows[j].get(col)) rows[j] ^= rows[r];
    pivot_col.push_back(col);
    ++r;
  }
  std::vector<bool> is_pivot(width, false);
  for (auto c : pivot_col) is_pivot[c] = true;
  std::vector<BitVec> out;
  for (std::size_t free = 0; free < width; ++free) {
    if (is_pivot[free]) continue;
    BitVec v(width);
    v.set(free, true);
    for (std::size_t k = 0; k < pivot_col.size(); ++k)
      if (rows[k].get(free)) v.set(pivot_col[k], true);
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace fermenc
