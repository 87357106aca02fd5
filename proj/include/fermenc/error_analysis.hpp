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
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "fermenc/bitvec.hpp"
#include "fermenc/decompose.hpp"
#include "fermenc/encoding.hpp"
#include "fermenc/majorana.hpp"
#include "fermenc/pauli.hpp"

namespace fermenc {

/// One bit per stabilizer generator; a set bit means the error anticommutes with it.
using Syndrome = BitVec;

enum class ErrorCategory : std::uint8_t { detectable, stabilizer, logical };

inline const char* to_string(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::detectable: return "detectable";
    case ErrorCategory::stabilizer: return "stabilizer";
    case ErrorCategory::logical: return "logical";
  }
  return "?";
}
inline ErrorCategory error_category_from_string(const std::string& s) {
  if (s == "detectable") return ErrorCategory::detectable;
  if (s == "stabilizer") return ErrorCategory::stabilizer;
  if (s == "logical") return ErrorCategory::logical;
  throw std::invalid_argument("unknown error category '" + s + "'");
}

struct ErrorReport {
  PauliOp error;
  Syndrome syndrome;
  ErrorCategory category = ErrorCategory::detectable;
  std::optional<MajoranaMonomial> fermionic_image;
  bool parity_switching = false;
  std::optional<std::size_t> mode_weight;
  // Part of the error acting on surplus logical qubits outside the fermionic algebra; only
  // DK layouts with four corner-only odd faces have such qubits.
  std::optional<PauliOp> gauge_factor;

  bool operator==(const ErrorReport&) const = default;
};

inline Syndrome syndrome_of(const Encoding& enc, const PauliOp& error) {
  if (error.num_qubits() != enc.n_qubits)
    throw DimensionError("error on " + std::to_string(error.num_qubits()) + " qubits, encoding has " +
                         std::to_string(enc.n_qubits));
  Syndrome s(enc.stabilizers.size());
  for (std::size_t g = 0; g < enc.stabilizers.size(); ++g)
    if (!commutes(error, enc.stabilizers[g])) s.set(g, true);
  return s;
}

/// Classifies many errors against one encoding; holds the elimination state.
/// The encoding must outlive the classifier.
class ErrorClassifier {
 public:
  explicit ErrorClassifier(const Encoding& enc) : enc_(&enc), decomposer_(enc.decomposer()) {}

  const Encoding& encoding() const { return *enc_; }

  ErrorReport classify(const PauliOp& error) const {
    ErrorReport r{error, syndrome_of(*enc_, error)};
    if (r.syndrome.any()) {
      r.category = ErrorCategory::detectable;
      return r;
    }
    auto dec = decomposer_.decompose(error);
    if (!dec) throw ConsistencyError("undetectable error " + error.to_string() + " is outside the logical algebra");
    if (!dec->gauge_used.empty()) {
      PauliOp g = PauliOp::identity(error.num_qubits());
      for (auto k : dec->gauge_used) g = g * enc_->gauge[k];
      r.gauge_factor = g;
    }
    if (dec->logical_used.empty() && !r.gauge_factor) {
      r.category = ErrorCategory::stabilizer;
      return r;
    }
    r.category = ErrorCategory::logical;
    r.parity_switching = parity_sector(dec->fermion) == ParitySector::odd;
    r.mode_weight = mode_weight(dec->fermion);
    r.fermionic_image = std::move(dec->fermion);
    return r;
  }

 private:
  const Encoding* enc_;
  PauliDecomposer decomposer_;
};

inline ErrorReport classify(const Encoding& enc, const PauliOp& error) { return ErrorClassifier(enc).classify(error); }

/// Every Pauli of weight 1..max_weight on n qubits, ordered by weight, then by the qubit
/// tuple, then by letters in X < Y < Z order.
inline std::vector<PauliOp> all_errors(std::size_t n, std::size_t max_weight) {
  static constexpr char kLetters[] = {'X', 'Y', 'Z'};
  std::vector<PauliOp> out;
  for (std::size_t w = 1; w <= max_weight && w <= n; ++w) {
    std::vector<std::size_t> qs(w);
    for (std::size_t k = 0; k < w; ++k) qs[k] = k;
    while (true) {
      std::size_t combos = 1;
      for (std::size_t k = 0; k < w; ++k) combos *= 3;
      for (std::size_t code = 0; code < combos; ++code) {
        PauliOp p(n);
        std::size_t c = code;
        for (std::size_t k = w; k-- > 0;) {
          p.set(qs[k], kLetters[c % 3]);
          c /= 3;
        }
        out.push_back(std::move(p));
      }
      // next combination
      std::size_t k = w;
      while (k > 0 && qs[k - 1] == n - w + k - 1) --k;
      if (k == 0) break;
      ++qs[k - 1];
      for (std::size_t j = k; j < w; ++j) qs[j] = qs[j - 1] + 1;
    }
  }
  return out;
}

struct SummaryKey {
  std::size_t weight;
  ErrorCategory category;
  bool parity_switching;
  std::optional<std::size_t> mode_weight;
  auto operator<=>(const SummaryKey&) const = default;
};

struct Enumeration {
  std::vector<ErrorReport> reports;
  std::map<SummaryKey, std::size_t> summary;
  // Undetectable errors of weight >= 2 that are neither stabilizers nor pure dephasing.
  // On open lattices these sit on the boundary.
  std::vector<std::size_t> non_phase_logical;

  std::size_t count(std::size_t weight, ErrorCategory cat) const {
    std::size_t n = 0;
    for (const auto& [k, v] : summary)
      if (k.weight == weight && k.category == cat) n += v;
    return n;
  }
  std::size_t parity_switching_count() const {
    std::size_t n = 0;
    for (const auto& r : reports) n += r.parity_switching ? 1 : 0;
    return n;
  }
};

inline Enumeration enumerate_errors(const Encoding& enc, std::size_t max_weight) {
  if (max_weight < 1) throw std::invalid_argument("max_weight must be at least 1");
  ErrorClassifier cls(enc);
  Enumeration out;
  for (const auto& e : all_errors(enc.n_qubits, max_weight)) {
    ErrorReport r = cls.classify(e);
    std::size_t w = weight(e);
    ++out.summary[{w, r.category, r.parity_switching, r.mode_weight}];
    if (w >= 2 && r.category == ErrorCategory::logical && !is_pure_dephasing(*r.fermionic_image))
      out.non_phase_logical.push_back(out.reports.size());
    out.reports.push_back(std::move(r));
  }
  return out;
}

/// Coin strategy for an X or Y error on a primary qubit: both give the same syndrome, so
/// guess. coin 0 applies X_j, coin 1 applies Y_j; the residual is either trivial or Z_j.
inline ErrorReport random_xy_correction(const Encoding& enc, const ErrorReport& detected, int coin) {
  if (coin != 0 && coin != 1) throw std::invalid_argument("coin must be 0 or 1");
  if (detected.category != ErrorCategory::detectable)
    throw std::invalid_argument("random correction needs a detected error");
  const std::size_t n = enc.n_qubits;
  auto matches = [&](std::size_t q) {
    if (!enc.qubits[q].is_primary()) return false;
    return syndrome_of(enc, PauliOp::single(n, q, 'X')) == detected.syndrome &&
           syndrome_of(enc, PauliOp::single(n, q, 'Y')) == detected.syndrome;
  };
  std::optional<std::size_t> target;
  auto supp = detected.error.support();
  if (supp.size() == 1 && matches(supp[0])) target = supp[0];
  for (std::size_t q = 0; q < n && !target; ++q)
    if (matches(q)) target = q;
  if (!target) throw std::invalid_argument("syndrome is not that of an X/Y error on a primary qubit");
  PauliOp residual = PauliOp::single(n, *target, coin == 0 ? 'X' : 'Y') * detected.error;
  // Global phases of an error are unobservable.
  return classify(enc, residual.with_phase(0));
}

// ---------------------------------------------------------------------------------------
// Tables

inline const char* kTableColumns[] = {"error",          "weight",      "syndrome",        "category",
                                      "fermionic_image", "mode_weight", "parity_switching"};

inline nlohmann::json report_to_json(const ErrorReport& r) {
  nlohmann::json j;
  j["error"] = r.error.to_string();
  j["weight"] = weight(r.error);
  j["syndrome"] = r.syndrome.to_hex();
  j["category"] = to_string(r.category);
  j["fermionic_image"] = r.fermionic_image ? nlohmann::json(r.fermionic_image->to_string()) : nlohmann::json(nullptr);
  j["mode_weight"] = r.mode_weight ? nlohmann::json(*r.mode_weight) : nlohmann::json(nullptr);
  j["parity_switching"] = r.parity_switching;
  if (r.gauge_factor) j["gauge_factor"] = r.gauge_factor->to_string();
  return j;
}

inline ErrorReport report_from_json(const Encoding& enc, const nlohmann::json& j) {
  ErrorReport r{PauliOp::parse(j.at("error").get<std::string>(), enc.n_qubits),
                Syndrome::from_hex(j.at("syndrome").get<std::string>(), enc.stabilizers.size())};
  r.category = error_category_from_string(j.at("category").get<std::string>());
  if (!j.at("fermionic_image").is_null())
    r.fermionic_image = MajoranaMonomial::parse(j.at("fermionic_image").get<std::string>(), enc.n_modes);
  if (!j.at("mode_weight").is_null()) r.mode_weight = j.at("mode_weight").get<std::size_t>();
  r.parity_switching = j.at("parity_switching").get<bool>();
  if (j.contains("gauge_factor"))
    r.gauge_factor = PauliOp::parse(j.at("gauge_factor").get<std::string>(), enc.n_qubits);
  return r;
}

inline std::string summary_key_string(const SummaryKey& k) {
  return std::to_string(k.weight) + "," + to_string(k.category) + "," + (k.parity_switching ? "true" : "false") + "," +
         (k.mode_weight ? std::to_string(*k.mode_weight) : std::string());
}

inline nlohmann::json summary_to_json(const Enumeration& e) {
  nlohmann::json s = nlohmann::json::array();
  for (const auto& [k, v] : e.summary)
    s.push_back({{"weight", k.weight},
                 {"category", to_string(k.category)},
                 {"parity_switching", k.parity_switching},
                 {"mode_weight", k.mode_weight ? nlohmann::json(*k.mode_weight) : nlohmann::json(nullptr)},
                 {"count", v}});
  return s;
}

inline nlohmann::json enumeration_to_json(const Enumeration& e) {
  nlohmann::json j;
  j["columns"] = kTableColumns;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : e.reports) rows.push_back(report_to_json(r));
  j["rows"] = rows;
  j["summary"] = summary_to_json(e);
  nlohmann::json extra = nlohmann::json::array();
  for (auto idx : e.non_phase_logical) extra.push_back(report_to_json(e.reports[idx]));
  j["non_phase_logical"] = extra;
  return j;
}

namespace detail {
inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += (c == '"') ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}
}  // namespace detail

/// CSV view: one row per error, then '#'-prefixed summary and non-phase sections.
inline std::string enumeration_to_csv(const Enumeration& e) {
  std::ostringstream os;
  for (std::size_t k = 0; k < std::size(kTableColumns); ++k) os << (k ? "," : "") << kTableColumns[k];
  os << "\n";
  for (const auto& r : e.reports) {
    os << r.error.to_string() << ',' << weight(r.error) << ',' << r.syndrome.to_hex() << ',' << to_string(r.category)
       << ',' << (r.fermionic_image ? r.fermionic_image->to_string() : "") << ','
       << (r.mode_weight ? std::to_string(*r.mode_weight) : "") << ',' << (r.parity_switching ? "true" : "false")
       << "\n";
  }
  os << "# summary: weight,category,parity_switching,mode_weight,count\n";
  for (const auto& [k, v] : e.summary) os << "# " << summary_key_string(k) << ',' << v << "\n";
  os << "# non_phase_logical: " << e.non_phase_logical.size() << "\n";
  for (auto idx : e.non_phase_logical)
    os << "# " << e.reports[idx].error.to_string() << " -> " << e.reports[idx].fermionic_image->to_string() << "\n";
  return os.str();
}

/// Parses the data rows of enumeration_to_csv back into reports.
inline std::vector<ErrorReport> reports_from_csv(const Encoding& enc, const std::string& text) {
  std::vector<ErrorReport> out;
  std::istringstream is(text);
  std::string line;
  bool header = true;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (header) {
      header = false;
      continue;
    }
    std::vector<std::string> f;
    std::string cur;
    for (char c : line) {
      if (c == ',') {
        f.push_back(cur);
        cur.clear();
      } else {
        cur += c;
      }
    }
    f.push_back(cur);
    if (f.size() != std::size(kTableColumns)) throw std::invalid_argument("malformed table row: " + line);
    ErrorReport r{PauliOp::parse(f[0], enc.n_qubits), Syndrome::from_hex(f[2], enc.stabilizers.size())};
    r.category = error_category_from_string(f[3]);
    if (!f[4].empty()) r.fermionic_image = MajoranaMonomial::parse(f[4], enc.n_modes);
    if (!f[5].empty()) r.mode_weight = std::stoul(f[5]);
    r.parity_switching = f[6] == "true";
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace fermenc
