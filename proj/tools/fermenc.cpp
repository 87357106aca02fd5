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

// Command-line driver: build encodings, classify errors, run oracle checks, fit the
// phase-noise channel.
//
// Exit codes: 0 success, 1 usage or configuration error, 2 verification failure.

#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fermenc/dense_oracle.hpp"
#include "fermenc/encoding.hpp"
#include "fermenc/error_analysis.hpp"
#include "fermenc/noise_channel.hpp"

namespace {

using namespace fermenc;
using nlohmann::json;

constexpr int kExitUsage = 1;
constexpr int kExitVerify = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EncodingArgs {
  std::string kind = "dk";
  int rows = 3;
  int cols = 3;
  std::size_t modes = 4;
  std::string boundary = "open";
  int offset = 0;
  std::vector<std::string> shave;
  bool swap_first_pair = false;
  bool parity = false;

  void attach(CLI::App* app) {
    app->add_option("--enc", kind, "Encoding: jw, vc or dk")->check(CLI::IsMember({"jw", "vc", "dk"}));
    app->add_option("--rows", rows, "Lattice rows");
    app->add_option("--cols", cols, "Lattice columns");
    app->add_option("--modes", modes, "Mode count (jw only)");
    app->add_option("--boundary", boundary, "open or periodic")->check(CLI::IsMember({"open", "periodic"}));
    app->add_option("--offset", offset, "Face parity offset (0 or 1)");
    app->add_option("--shave", shave, "Corners to shave (top_left, top_right, bottom_left, bottom_right)");
    app->add_flag("--swap-first-pair", swap_first_pair, "vc: start the path at the first auxiliary mode");
    app->add_flag("--parity-stabilizer", parity, "Append the global parity stabilizer");
  }

  EncodingConfig config() const {
    EncodingConfig c;
    try {
      c.kind = encoding_kind_from_string(kind);
      c.boundary = boundary_from_string(boundary);
      for (const auto& s : shave) c.shaved.push_back(corner_from_string(s));
    } catch (const std::exception& e) {
      throw UsageError(e.what());
    }
    c.rows = rows;
    c.cols = cols;
    c.modes = modes;
    c.face_parity_offset = offset;
    c.swap_first_pair = swap_first_pair;
    c.parity_stabilizer = parity;
    try {
      validate(c);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    return c;
  }

  Encoding build() const {
    EncodingConfig c = config();
    try {
      return build_encoding(c);
    } catch (const LatticeError& e) {
      throw UsageError(e.what());
    }
  }
};

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write " + path);
  out << text;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_build(const EncodingArgs& args, const std::string& out) {
  Encoding enc = args.build();
  write_text(out, enc.to_json().dump(2) + "\n");
  std::ostream& log = (out.empty() || out == "-") ? std::cerr : std::cout;
  log << "encoding " << to_string(enc.kind) << ": " << enc.n_qubits << " qubits, " << enc.stabilizers.size()
      << " stabilizer generators, " << enc.n_primary_modes << " modes\n";
  return 0;
}

struct ClassifyArgs {
  std::size_t max_weight = 1;
  bool allow_large = false;
  std::string format = "json";
  std::string out;
  bool xy_correction = false;
  std::uint64_t seed = 0;
};

json correction_table(const Encoding& enc, const Enumeration& e, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  json rows = json::array();
  for (const auto& r : e.reports) {
    if (weight(r.error) != 1 || r.category != ErrorCategory::detectable) continue;
    auto q = r.error.support()[0];
    char l = r.error.letter(q);
    if ((l != 'X' && l != 'Y') || !enc.qubits[q].is_primary()) continue;
    const int coin = static_cast<int>(rng() & 1u);
    ErrorReport res = random_xy_correction(enc, r, coin);
    json row = report_to_json(res);
    row["detected"] = r.error.to_string();
    row["coin"] = coin;
    rows.push_back(row);
  }
  return rows;
}

int run_classify(const EncodingArgs& eargs, const ClassifyArgs& args) {
  if (args.max_weight > 2 && !args.allow_large)
    throw UsageError("--max-weight above 2 needs --allow-large (the table grows as 3^w C(n, w))");
  Encoding enc = eargs.build();
  Enumeration e = enumerate_errors(enc, args.max_weight);
  std::string text;
  if (args.format == "csv") {
    text = enumeration_to_csv(e);
  } else {
    json j = enumeration_to_json(e);
    j["encoding"] = {{"kind", to_string(enc.kind)},
                     {"n_qubits", enc.n_qubits},
                     {"n_generators", enc.stabilizers.size()},
                     {"lattice", enc.lattice ? enc.lattice->to_json() : json(nullptr)},
                     {"flags",
                      {{"vc_first_pair_swapped", enc.flags.vc_first_pair_swapped},
                       {"dk_corner_shaved", enc.flags.dk_corner_shaved},
                       {"parity_stabilizer_included", enc.flags.parity_stabilizer_included}}}};
    j["max_weight"] = args.max_weight;
    if (args.xy_correction) {
      j["xy_correction"] = {{"seed", args.seed}, {"rows", correction_table(enc, e, args.seed)}};
    }
    text = j.dump(2) + "\n";
  }
  write_text(args.out, text);
  std::ostream& log = (args.out.empty() || args.out == "-") ? std::cerr : std::cout;
  for (const auto& [k, v] : e.summary) log << "  " << summary_key_string(k) << " : " << v << "\n";
  if (!e.non_phase_logical.empty())
    log << "  undetectable errors that are not pure dephasing: " << e.non_phase_logical.size() << "\n";
  return 0;
}

int run_verify(const EncodingArgs& eargs, const std::string& dump_path, bool strict) {
  Encoding enc;
  std::vector<CheckResult> results;
  if (!dump_path.empty()) {
    try {
      enc = Encoding::from_json(json::parse(read_text(dump_path)));
    } catch (const json::exception& e) {
      throw UsageError(std::string("malformed dump: ") + e.what());
    }
    bool same = false;
    std::string detail;
    try {
      same = build_encoding(declared_config(enc)).to_json() == enc.to_json();
    } catch (const std::exception& e) {
      detail = e.what();
    }
    results.push_back({"dump_matches_construction", same, detail});
  } else {
    enc = eargs.build();
  }
  if (enc.n_qubits > kOracleCap) {
    std::cerr << "warning: " << enc.n_qubits << " qubits exceeds the oracle cap of " << kOracleCap
              << "; dense checks skipped\n";
    if (strict) {
      std::cout << "FAIL oracle_cap\n";
      return kExitVerify;
    }
  } else {
    for (auto& r : run_oracle_checks(enc)) results.push_back(std::move(r));
  }
  for (const auto& r : results) {
    std::cout << (r.passed ? "PASS " : "FAIL ") << r.name;
    if (!r.detail.empty()) std::cout << " (" << r.detail << ")";
    std::cout << "\n";
  }
  return all_passed(results) ? 0 : kExitVerify;
}

struct NoiseArgs {
  std::size_t modes = 1;
  std::size_t cutoff = 4;
  std::string beta = "1";
  double gamma_min = 0.005;
  double gamma_max = 0.05;
  std::size_t points = 6;
  std::string out;
};

double parse_beta(const std::string& s) {
  if (s == "inf" || s == "infinity") return std::numeric_limits<double>::infinity();
  try {
    std::size_t used = 0;
    double b = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return b;
  } catch (const std::exception&) {
    throw UsageError("--beta must be a number or 'inf'");
  }
}

int run_noise_fit(const NoiseArgs& args) {
  ChannelSpec spec{args.modes, args.cutoff, parse_beta(args.beta), 1.0};
  DephasingFit fit;
  try {
    fit = fit_dephasing(spec, log_grid(args.gamma_min, args.gamma_max, args.points));
  } catch (const ChannelError& e) {
    throw UsageError(e.what());
  }
  json j;
  j["M"] = spec.n_modes;
  j["boson_cutoff"] = spec.boson_cutoff;
  j["beta"] = std::isinf(spec.beta) ? json("inf") : json(spec.beta);
  j["gamma_grid"] = fit.gammas;
  j["Gamma_fit"] = fit.gamma_fit;
  j["Gamma_estimates"] = fit.gamma_estimates;
  j["residuals"] = fit.residuals;
  j["slope"] = fit.residual_exponent;
  json corr = json::array();
  for (Eigen::Index x = 0; x < fit.correlators.rows(); ++x) {
    json row = json::array();
    for (Eigen::Index y = 0; y < fit.correlators.cols(); ++y) row.push_back(fit.correlators(x, y).real());
    corr.push_back(row);
  }
  j["bath_correlators"] = corr;
  j["max_offdiag_correlator"] = fit.max_offdiag_correlator;
  j["diagnostics"] = {{"trace_error", fit.worst.trace_error},
                      {"min_choi_eigenvalue", fit.worst.min_choi_eigenvalue},
                      {"unitality_error", fit.worst.unitality_error},
                      {"number_leak", fit.worst.number_leak}};
  write_text(args.out, j.dump(2) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fermion-to-qubit encodings: construction, error classification and checks"};
  app.set_config("--config", "", "Read options from a TOML/INI file");
  app.require_subcommand(1);

  EncodingArgs eargs;
  std::string build_out;
  auto* build = app.add_subcommand("build", "Construct an encoding and write its dump");
  eargs.attach(build);
  build->add_option("--out,-o", build_out, "Output path (default stdout)");

  ClassifyArgs cargs;
  auto* classify = app.add_subcommand("classify", "Classify every Pauli error up to a weight");
  eargs.attach(classify);
  classify->add_option("--max-weight,-w", cargs.max_weight, "Largest error weight")->check(CLI::PositiveNumber);
  classify->add_flag("--allow-large", cargs.allow_large, "Permit weights above 2");
  classify->add_option("--format", cargs.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  classify->add_option("--out,-o", cargs.out, "Output path (default stdout)");
  classify->add_flag("--xy-correction", cargs.xy_correction, "Add coin-flip corrections of primary X/Y errors");
  classify->add_option("--seed", cargs.seed, "Seed for the correction coin");

  std::string dump_path;
  bool strict = false;
  auto* verify = app.add_subcommand("verify", "Run the dense-oracle checks");
  eargs.attach(verify);
  verify->add_option("--dump", dump_path, "Check a dump file instead of building");
  verify->add_flag("--strict", strict, "Fail instead of skipping above the oracle cap");

  NoiseArgs nargs;
  auto* noise = app.add_subcommand("noise-fit", "Fit the bosonic phase-noise channel to the dephasing form");
  noise->add_option("--modes,-M", nargs.modes, "Spin-up modes")->check(CLI::PositiveNumber);
  noise->add_option("--cutoff", nargs.cutoff, "Maximum boson occupation per mode");
  noise->add_option("--beta", nargs.beta, "Inverse temperature, or 'inf'");
  noise->add_option("--gamma-min", nargs.gamma_min, "Smallest coupling");
  noise->add_option("--gamma-max", nargs.gamma_max, "Largest coupling");
  noise->add_option("--points", nargs.points, "Number of log-spaced couplings");
  noise->add_option("--out,-o", nargs.out, "Output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*build) return run_build(eargs, build_out);
    if (*classify) return run_classify(eargs, cargs);
    if (*verify) return run_verify(eargs, dump_path, strict);
    if (*noise) return run_noise_fit(nargs);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitVerify;
  }
  return kExitUsage;
}
