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
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <string>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "fermenc/dense_oracle.hpp"

namespace fermenc {

/// Spin-up fermions on M sites coupled through their density to one boson mode per site:
///   H_int = sum_x (N_x,up + N_x,down)(b_x + b_x^dag),
/// evolved for U = exp(-i gamma H_int). Spin-down fermions start maximally mixed and the
/// bosons in a Gibbs state of sum_x b_x^dag b_x (beta = infinity gives the vacuum).
struct ChannelSpec {
  std::size_t n_modes = 1;
  std::size_t boson_cutoff = 4;  // maximum occupation kept per boson mode
  double beta = 1.0;             // inverse temperature; +inf for the ground state
  double coupling = 1.0;         // momentum-independent g
};

inline constexpr std::size_t kChannelDimCap = 4096;

class ChannelError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Dimensions and index layout of F_up (x) F_down (x) B, with the spin-up register leftmost.
struct ChannelLayout {
  std::size_t fermion_dim;  // 2^M
  std::size_t boson_dim;    // (cutoff + 1)^M
  std::size_t total() const { return fermion_dim * fermion_dim * boson_dim; }
  std::size_t index(std::size_t up, std::size_t down, std::size_t b) const {
    return (up * fermion_dim + down) * boson_dim + b;
  }
};

inline ChannelLayout channel_layout(const ChannelSpec& s) {
  if (s.n_modes < 1) throw ChannelError("at least one mode is required");
  if (s.boson_cutoff < 2) throw ChannelError("boson cutoff must be at least 2");
  if (!(s.beta >= 0)) throw ChannelError("inverse temperature must be non-negative");
  ChannelLayout l{std::size_t{1} << s.n_modes, 1};
  for (std::size_t x = 0; x < s.n_modes; ++x) l.boson_dim *= s.boson_cutoff + 1;
  if (l.total() > kChannelDimCap)
    throw ChannelError("channel Hilbert space of dimension " + std::to_string(l.total()) + " exceeds the cap");
  return l;
}

/// Occupation of mode x in fermionic basis state `state` (mode 0 most significant).
inline int occupation(std::size_t state, std::size_t x, std::size_t n_modes) {
  return static_cast<int>((state >> (n_modes - 1 - x)) & 1u);
}

/// Occupation of boson x in bath index b (boson 0 most significant, base cutoff+1).
inline std::size_t boson_occupation(std::size_t b, std::size_t x, const ChannelSpec& s) {
  std::size_t base = s.boson_cutoff + 1;
  for (std::size_t k = s.n_modes - 1; k > x; --k) b /= base;
  return b % base;
}

/// Position quadrature b_x + b_x^dag on the truncated bath.
inline CMat bath_quadrature(const ChannelSpec& s, std::size_t x) {
  const ChannelLayout l = channel_layout(s);
  const auto B = static_cast<Eigen::Index>(l.boson_dim);
  std::size_t stride = 1;
  for (std::size_t k = s.n_modes - 1; k > x; --k) stride *= s.boson_cutoff + 1;
  CMat q = CMat::Zero(B, B);
  for (std::size_t b = 0; b < l.boson_dim; ++b) {
    std::size_t n = boson_occupation(b, x, s);
    if (n < s.boson_cutoff) {
      double amp = std::sqrt(static_cast<double>(n + 1));
      auto up = static_cast<Eigen::Index>(b + stride);
      q(up, static_cast<Eigen::Index>(b)) = amp;
      q(static_cast<Eigen::Index>(b), up) = amp;
    }
  }
  return q;
}

/// Gibbs state of sum_x b_x^dag b_x on the truncated bath.
inline CMat bath_state(const ChannelSpec& s) {
  const ChannelLayout l = channel_layout(s);
  const auto B = static_cast<Eigen::Index>(l.boson_dim);
  CMat rho = CMat::Zero(B, B);
  double z = 0;
  for (std::size_t b = 0; b < l.boson_dim; ++b) {
    std::size_t n = 0;
    for (std::size_t x = 0; x < s.n_modes; ++x) n += boson_occupation(b, x, s);
    double w = std::isinf(s.beta) ? (n == 0 ? 1.0 : 0.0) : std::exp(-s.beta * static_cast<double>(n));
    rho(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(b)) = w;
    z += w;
  }
  return rho / z;
}

/// Bath correlators Gamma_xx' = Tr[rho_B (b_x + b_x^dag)(b_x' + b_x'^dag)].
inline CMat bath_correlators(const ChannelSpec& s) {
  const CMat rho = bath_state(s);
  const auto M = static_cast<Eigen::Index>(s.n_modes);
  CMat g(M, M);
  for (Eigen::Index x = 0; x < M; ++x)
    for (Eigen::Index y = 0; y < M; ++y)
      g(x, y) = (rho * bath_quadrature(s, static_cast<std::size_t>(x)) * bath_quadrature(s, static_cast<std::size_t>(y))).trace();
  return g;
}

inline CMat build_interaction(const ChannelSpec& s) {
  const ChannelLayout l = channel_layout(s);
  const auto D = static_cast<Eigen::Index>(l.total());
  const auto B = static_cast<Eigen::Index>(l.boson_dim);
  CMat h = CMat::Zero(D, D);
  std::vector<CMat> quad;
  for (std::size_t x = 0; x < s.n_modes; ++x) quad.push_back(s.coupling * bath_quadrature(s, x));
  for (std::size_t up = 0; up < l.fermion_dim; ++up) {
    for (std::size_t down = 0; down < l.fermion_dim; ++down) {
      const auto at = static_cast<Eigen::Index>(l.index(up, down, 0));
      for (std::size_t x = 0; x < s.n_modes; ++x) {
        int n = occupation(up, x, s.n_modes) + occupation(down, x, s.n_modes);
        if (n) h.block(at, at, B, B) += static_cast<double>(n) * quad[x];
      }
    }
  }
  return h;
}

/// The reduced channel on F_up for a fixed spec, evaluated at any coupling strength gamma.
///
/// The superoperator acts on row-major vectorised density matrices: entry (n, m) of rho
/// sits at n * 2^M + m.
class PhaseNoiseModel {
 public:
  explicit PhaseNoiseModel(const ChannelSpec& spec)
      : spec_(spec), layout_(channel_layout(spec)), rho_bath_(bath_state(spec)) {
    Eigen::SelfAdjointEigenSolver<CMat> es(build_interaction(spec));
    if (es.info() != Eigen::Success) throw ChannelError("diagonalisation of the interaction failed");
    evals_ = es.eigenvalues();
    evecs_ = es.eigenvectors();
  }

  const ChannelSpec& spec() const { return spec_; }
  std::size_t dim() const { return layout_.fermion_dim; }

  /// U = exp(-i gamma H_int) from the spectral decomposition.
  CMat propagator(double gamma) const {
    Eigen::VectorXcd phases(evals_.size());
    for (Eigen::Index k = 0; k < evals_.size(); ++k) phases[k] = std::exp(cplx(0, -gamma * evals_[k]));
    return evecs_ * phases.asDiagonal() * evecs_.adjoint();
  }

  /// Lambda(rho) = Tr_{down,B}[U (rho (x) I/2^M (x) rho_B) U^dag].
  CMat apply(double gamma, const CMat& rho) const {
    check_rho(rho);
    return apply_with(propagator(gamma), rho);
  }

  CMat superoperator(double gamma) const {
    const CMat u = propagator(gamma);
    const auto F = static_cast<Eigen::Index>(layout_.fermion_dim);
    CMat s = CMat::Zero(F * F, F * F);
    for (Eigen::Index n = 0; n < F; ++n) {
      for (Eigen::Index m = 0; m < F; ++m) {
        CMat e = CMat::Zero(F, F);
        e(n, m) = 1;
        CMat out = apply_with(u, e);
        for (Eigen::Index a = 0; a < F; ++a)
          for (Eigen::Index b = 0; b < F; ++b) s(a * F + b, n * F + m) = out(a, b);
      }
    }
    return s;
  }

 private:
  void check_rho(const CMat& rho) const {
    const auto F = static_cast<Eigen::Index>(layout_.fermion_dim);
    if (rho.rows() != F || rho.cols() != F) throw ChannelError("density matrix has the wrong dimension");
    if (std::abs(rho.trace() - cplx(1, 0)) > 1e-10) throw ChannelError("density matrix trace differs from one");
    if (detail::max_abs(rho - rho.adjoint()) > 1e-10) throw ChannelError("density matrix is not Hermitian");
    Eigen::SelfAdjointEigenSolver<CMat> es(rho);
    if (es.eigenvalues().minCoeff() < -1e-10) throw ChannelError("density matrix is not positive semidefinite");
  }

  CMat apply_with(const CMat& u, const CMat& rho) const {
    const std::size_t F = layout_.fermion_dim, Bd = layout_.boson_dim;
    const auto B = static_cast<Eigen::Index>(Bd);
    CMat out = CMat::Zero(static_cast<Eigen::Index>(F), static_cast<Eigen::Index>(F));
    // Input is sum_{n,m,d} rho_nm / F |n,d><m,d| (x) rho_B; each term contributes
    // U[:, (n,d,.)] rho_B U[:, (m,d,.)]^dag, of which only the (down, bath) trace is kept.
    for (std::size_t n = 0; n < F; ++n) {
      for (std::size_t m = 0; m < F; ++m) {
        const cplx w = rho(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m)) / static_cast<double>(F);
        if (w == cplx(0, 0)) continue;
        for (std::size_t d = 0; d < F; ++d) {
          const CMat a = u.middleCols(static_cast<Eigen::Index>(layout_.index(n, d, 0)), B) * rho_bath_;
          const auto b = u.middleCols(static_cast<Eigen::Index>(layout_.index(m, d, 0)), B);
          for (std::size_t n2 = 0; n2 < F; ++n2) {
            for (std::size_t m2 = 0; m2 < F; ++m2) {
              cplx acc = 0;
              for (std::size_t d2 = 0; d2 < F; ++d2) {
                const auto rn = static_cast<Eigen::Index>(layout_.index(n2, d2, 0));
                const auto rm = static_cast<Eigen::Index>(layout_.index(m2, d2, 0));
                acc += (a.middleRows(rn, B).cwiseProduct(b.middleRows(rm, B).conjugate())).sum();
              }
              out(static_cast<Eigen::Index>(n2), static_cast<Eigen::Index>(m2)) += w * acc;
            }
          }
        }
      }
    }
    return out;
  }

  ChannelSpec spec_;
  ChannelLayout layout_;
  CMat rho_bath_;
  Eigen::VectorXd evals_;
  CMat evecs_;
};

inline CMat effective_channel(const ChannelSpec& spec, double gamma, const CMat& rho) {
  return PhaseNoiseModel(spec).apply(gamma, rho);
}

/// Superoperator of rho -> 1/4 sum_x (phi_x rho phi_x - rho) with phi_x = 1 - 2 N_x.
inline CMat dephasing_generator(std::size_t n_modes) {
  const std::size_t F = std::size_t{1} << n_modes;
  const auto FF = static_cast<Eigen::Index>(F * F);
  CMat t = CMat::Zero(FF, FF);
  for (std::size_t n = 0; n < F; ++n) {
    for (std::size_t m = 0; m < F; ++m) {
      double v = 0;
      for (std::size_t x = 0; x < n_modes; ++x) {
        int sn = occupation(n, x, n_modes) ? -1 : 1, sm = occupation(m, x, n_modes) ? -1 : 1;
        v += 0.25 * (sn * sm - 1);
      }
      const auto k = static_cast<Eigen::Index>(n * F + m);
      t(k, k) = v;
    }
  }
  return t;
}

struct ChannelDiagnostics {
  double trace_error = 0;         // max |Tr Lambda(|n><m|) - delta_nm|
  double min_choi_eigenvalue = 0; // Choi matrix normalised to trace 2^M
  double unitality_error = 0;     // max |Lambda(I/d) - I/d|
  double number_leak = 0;         // weight moved between total-number blocks
};

inline ChannelDiagnostics channel_diagnostics(const CMat& superop, std::size_t n_modes) {
  const std::size_t F = std::size_t{1} << n_modes;
  const auto f = static_cast<Eigen::Index>(F);
  ChannelDiagnostics d;
  CMat choi = CMat::Zero(f * f, f * f);
  CMat unit = CMat::Zero(f, f);
  for (Eigen::Index n = 0; n < f; ++n) {
    for (Eigen::Index m = 0; m < f; ++m) {
      cplx tr = 0;
      for (Eigen::Index a = 0; a < f; ++a) {
        for (Eigen::Index b = 0; b < f; ++b) {
          cplx v = superop(a * f + b, n * f + m);
          choi(n * f + a, m * f + b) = v;
          if (a == b) tr += v;
          if (n == m) unit(a, b) += v / static_cast<double>(F);
          bool same_blocks = std::popcount(static_cast<std::size_t>(a)) == std::popcount(static_cast<std::size_t>(n)) &&
                             std::popcount(static_cast<std::size_t>(b)) == std::popcount(static_cast<std::size_t>(m));
          if (!same_blocks) d.number_leak = std::max(d.number_leak, std::abs(v));
        }
      }
      d.trace_error = std::max(d.trace_error, std::abs(tr - (n == m ? cplx(1, 0) : cplx(0, 0))));
    }
  }
  Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (choi + choi.adjoint()));
  d.min_choi_eigenvalue = es.eigenvalues().minCoeff();
  d.unitality_error = detail::max_abs(unit - CMat::Identity(f, f) / static_cast<double>(F));
  return d;
}

struct DephasingFit {
  std::vector<double> gammas;
  std::vector<double> gamma_estimates;  // <T, Lambda - 1> / (gamma^2 <T, T>) per sample
  std::vector<double> residuals;        // |Lambda - 1 - gamma^2 Gamma_fit T|_F per sample
  double gamma_fit = 0;                 // gamma -> 0 limit of the estimates
  double residual_exponent = 0;         // log-log slope of residuals against gamma
  CMat correlators;                     // Gamma_xx' from the bath state
  double max_offdiag_correlator = 0;
  ChannelDiagnostics worst;             // worst-case diagnostics over the grid
};

/// Least-squares fit of the channel's deviation from identity to gamma^2 Gamma T.
/// Gamma(gamma) is extrapolated linearly in gamma^2 to gamma -> 0; the residual exponent is
/// the slope of log residual against log gamma.
inline DephasingFit fit_dephasing(const ChannelSpec& spec, const std::vector<double>& gammas) {
  if (gammas.size() < 4) throw ChannelError("fit needs at least four coupling values");
  double lo = std::numeric_limits<double>::infinity(), hi = 0;
  for (double g : gammas) {
    if (!(g > 0)) throw ChannelError("coupling values must be positive");
    lo = std::min(lo, g);
    hi = std::max(hi, g);
  }
  if (hi / lo < 10 - 1e-9) throw ChannelError("coupling values must span at least a decade");

  PhaseNoiseModel model(spec);
  const CMat t = dephasing_generator(spec.n_modes);
  const double tt = t.squaredNorm();
  const auto FF = t.rows();
  DephasingFit fit;
  fit.gammas = gammas;
  fit.worst.min_choi_eigenvalue = std::numeric_limits<double>::infinity();
  std::vector<CMat> dev;
  for (double g : gammas) {
    CMat s = model.superoperator(g);
    ChannelDiagnostics d = channel_diagnostics(s, spec.n_modes);
    fit.worst.trace_error = std::max(fit.worst.trace_error, d.trace_error);
    fit.worst.min_choi_eigenvalue = std::min(fit.worst.min_choi_eigenvalue, d.min_choi_eigenvalue);
    fit.worst.unitality_error = std::max(fit.worst.unitality_error, d.unitality_error);
    fit.worst.number_leak = std::max(fit.worst.number_leak, d.number_leak);
    dev.push_back(s - CMat::Identity(FF, FF));
    fit.gamma_estimates.push_back((t.adjoint() * dev.back()).trace().real() / (g * g * tt));
  }
  // Linear regression of the estimates against gamma^2; the intercept is Gamma.
  {
    double sx = 0, sy = 0, sxx = 0, sxy = 0, n = static_cast<double>(gammas.size());
    for (std::size_t k = 0; k < gammas.size(); ++k) {
      double x = gammas[k] * gammas[k], y = fit.gamma_estimates[k];
      sx += x, sy += y, sxx += x * x, sxy += x * y;
    }
    double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    fit.gamma_fit = (sy - slope * sx) / n;
  }
  {
    double sx = 0, sy = 0, sxx = 0, sxy = 0, n = static_cast<double>(gammas.size());
    for (std::size_t k = 0; k < gammas.size(); ++k) {
      double g = gammas[k];
      double r = (dev[k] - g * g * fit.gamma_fit * t).norm();
      fit.residuals.push_back(r);
      double x = std::log(g), y = std::log(r);
      sx += x, sy += y, sxx += x * x, sxy += x * y;
    }
    fit.residual_exponent = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  }
  fit.correlators = bath_correlators(spec);
  for (Eigen::Index x = 0; x < fit.correlators.rows(); ++x)
    for (Eigen::Index y = 0; y < fit.correlators.cols(); ++y)
      if (x != y) fit.max_offdiag_correlator = std::max(fit.max_offdiag_correlator, std::abs(fit.correlators(x, y)));
  return fit;
}

/// Log-spaced coupling grid.
inline std::vector<double> log_grid(double lo, double hi, std::size_t count) {
  std::vector<double> g;
  for (std::size_t k = 0; k < count; ++k)
    g.push_back(lo * std::pow(hi / lo, static_cast<double>(k) / static_cast<double>(count - 1)));
  return g;
}

}  // namespace fermenc
