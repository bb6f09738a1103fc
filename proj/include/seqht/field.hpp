// Copyright 2026 The seqht Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Single-site scalar field on a symmetric digital grid.
//
// H = 1/2 Pi^2 + 1/2 m^2 phi^2 + (lambda/4!) phi^4, with phi diagonal on the
// grid and Pi^2 diagonal in the conjugate basis reached by the centered DFT
//   W_kj = N^{-1/2} exp(2 pi i (j - c)(k - c) / N),   c = (N - 1) / 2.

#pragma once

#include <Eigen/Dense>
#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>
#include <vector>

#include "seqht/core.hpp"
#include "seqht/walsh.hpp"

namespace seqht {

struct FieldGrid {
  int n_qubits = 5;
  double phi_max = 4.0;
  double delta_phi = 0.0;
  std::vector<double> values;

  FieldGrid() : FieldGrid(5, 4.0) {}
  FieldGrid(int n, double pm) : n_qubits(n), phi_max(pm) {
    const std::size_t d = dim_of(n);
    if (!(pm > 0.0) || !std::isfinite(pm)) throw DomainError("phi_max must be positive");
    delta_phi = 2.0 * pm / double(d - 1);
    values.resize(d);
    for (std::size_t j = 0; j < d; ++j) values[j] = -pm + double(j) * delta_phi;
    values.back() = pm;
  }
  std::size_t size() const { return values.size(); }
};

struct MomentumGrid {
  double delta_pi = 0.0;
  std::vector<double> values;

  explicit MomentumGrid(const FieldGrid& g) {
    const std::size_t d = g.size();
    const double c = 0.5 * double(d - 1);
    delta_pi = 2.0 * std::numbers::pi / (double(d) * g.delta_phi);
    values.resize(d);
    for (std::size_t k = 0; k < d; ++k) values[k] = delta_pi * (double(k) - c);
  }
};

struct HamiltonianSpec {
  double lambda = 0.0;
  double mass = 1.0;
  std::optional<std::uint64_t> nu_cut_phi4;
  std::optional<std::uint64_t> nu_cut_phi2;
  // Drop the nu = 0 term of truncated operators (a constant energy shift).
  bool drop_identity = false;

  void validate() const {
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw DomainError("lambda must be >= 0");
    for (const auto& c : {nu_cut_phi4, nu_cut_phi2})
      if (c && (*c % 2) != 0) throw DomainError("sequency cutoffs must be even");
  }
};

inline DiagonalVector phi_power_operator(const FieldGrid& g, int p) {
  if (p < 1) throw DomainError("power must be >= 1");
  std::vector<double> e(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) e[j] = std::pow(g.values[j], p);
  return DiagonalVector(std::move(e));
}

inline double optimal_phi_max(int n_qubits) {
  if (n_qubits < 1) throw DomainError("n_qubits must be >= 1");
  const double d = std::ldexp(1.0, n_qubits);
  return 0.5 * d * std::sqrt(std::sqrt(8.0) * std::numbers::pi / d);
}

// Applies W and W^dagger with an FFT. Phase factors are reduced with exact
// integer arithmetic so they stay accurate for large registers.
class CenteredDft {
 public:
  explicit CenteredDft(int n_qubits) : n_(dim_of(n_qubits)) {
    const std::uint64_t N = n_;
    const double inv_sqrt = 1.0 / std::sqrt(double(N));
    // exp(-2 pi i c j / N) with c j / N = (N-1) j / (2N)
    twist_.resize(N);
    for (std::uint64_t j = 0; j < N; ++j) {
      const std::uint64_t r = ((N - 1) * j) % (2 * N);
      twist_[j] = std::polar(1.0, -std::numbers::pi * double(r) / double(N));
    }
    // exp(2 pi i c^2 / N) with c^2 / N = (N-1)^2 / (4N)
    const std::uint64_t r = ((N - 1) * (N - 1)) % (4 * N);
    global_ = std::polar(inv_sqrt, 0.5 * std::numbers::pi * double(r) / double(N));
  }

  std::size_t size() const { return n_; }

  // y = W x
  void forward(const std::vector<cplx>& x, std::vector<cplx>& y) const {
    buf_.resize(n_);
    for (std::size_t j = 0; j < n_; ++j) buf_[j] = twist_[j] * x[j];
    fft_.inv(y, buf_);
    const double scale = double(n_);
    for (std::size_t k = 0; k < n_; ++k) y[k] *= global_ * twist_[k] * scale;
  }

  // y = W^dagger x
  void inverse(const std::vector<cplx>& x, std::vector<cplx>& y) const {
    buf_.resize(n_);
    for (std::size_t k = 0; k < n_; ++k) buf_[k] = std::conj(twist_[k]) * x[k];
    fft_.fwd(y, buf_);
    const cplx g = std::conj(global_);
    for (std::size_t j = 0; j < n_; ++j) y[j] *= g * std::conj(twist_[j]);
  }

 private:
  std::size_t n_;
  std::vector<cplx> twist_;
  cplx global_;
  mutable std::vector<cplx> buf_;
  mutable Eigen::FFT<double> fft_;
};

inline Eigen::MatrixXcd centered_dft_matrix(int n_qubits) {
  const std::size_t N = dim_of(n_qubits);
  const double c = 0.5 * double(N - 1);
  Eigen::MatrixXcd w(N, N);
  for (std::size_t k = 0; k < N; ++k)
    for (std::size_t j = 0; j < N; ++j)
      w(k, j) = std::polar(1.0 / std::sqrt(double(N)),
                           2.0 * std::numbers::pi * (double(j) - c) * (double(k) - c) / double(N));
  return w;
}

// Pi^2 in the field basis. Real symmetric: entry (a, b) depends on b - a only.
inline Eigen::MatrixXd pi_squared_operator(const FieldGrid& g) {
  const MomentumGrid mg(g);
  const std::size_t N = g.size();
  std::vector<double> t(2 * N - 1, 0.0);
  for (std::size_t m = 0; m < 2 * N - 1; ++m) {
    const double off = double(m) - double(N - 1);
    double s = 0.0;
    for (std::size_t k = 0; k < N; ++k) {
      const double pk = mg.values[k];
      s += pk * pk * std::cos(2.0 * std::numbers::pi * (double(k) - 0.5 * double(N - 1)) * off /
                              double(N));
    }
    t[m] = s / double(N);
  }
  Eigen::MatrixXd p2(N, N);
  for (std::size_t a = 0; a < N; ++a)
    for (std::size_t b = 0; b < N; ++b) p2(a, b) = t[b + N - 1 - a];
  return p2;
}

// Diagonal part 1/2 m^2 T(phi^2) + lambda/24 T(phi^4).
inline DiagonalVector potential_diagonal(const FieldGrid& g, const HamiltonianSpec& spec) {
  spec.validate();
  DiagonalVector f2 = phi_power_operator(g, 2);
  DiagonalVector f4 = phi_power_operator(g, 4);
  if (spec.nu_cut_phi2) f2 = truncated_diagonal(f2, *spec.nu_cut_phi2, spec.drop_identity);
  if (spec.nu_cut_phi4) f4 = truncated_diagonal(f4, *spec.nu_cut_phi4, spec.drop_identity);
  std::vector<double> v(g.size());
  for (std::size_t j = 0; j < v.size(); ++j)
    v[j] = 0.5 * spec.mass * spec.mass * f2[j] + spec.lambda / 24.0 * f4[j];
  return DiagonalVector(std::move(v));
}

inline Eigen::MatrixXd build_hamiltonian(const FieldGrid& g, const HamiltonianSpec& spec) {
  Eigen::MatrixXd h = 0.5 * pi_squared_operator(g);
  const DiagonalVector v = potential_diagonal(g, spec);
  for (std::size_t j = 0; j < g.size(); ++j) h(j, j) += v[j];
  return h;
}

// Matrix-free H = W^dagger diag(kinetic) W + diag(potential).
class HamiltonianOperator {
 public:
  HamiltonianOperator(const FieldGrid& g, const HamiltonianSpec& spec)
      : dft_(g.n_qubits), potential_(potential_diagonal(g, spec).entries) {
    const MomentumGrid mg(g);
    kinetic_.resize(g.size());
    for (std::size_t k = 0; k < g.size(); ++k) kinetic_[k] = 0.5 * mg.values[k] * mg.values[k];
  }

  std::size_t size() const { return potential_.size(); }
  const std::vector<double>& kinetic() const { return kinetic_; }
  const std::vector<double>& potential() const { return potential_; }
  const CenteredDft& dft() const { return dft_; }

  // y = W^dagger diag(f) W x
  void apply_momentum_diagonal(const std::vector<double>& f, const std::vector<cplx>& x,
                               std::vector<cplx>& y) const {
    tmp_.resize(size());
    dft_.forward(x, tmp_);
    for (std::size_t k = 0; k < size(); ++k) tmp_[k] *= f[k];
    dft_.inverse(tmp_, y);
  }

  void apply(const std::vector<cplx>& x, std::vector<cplx>& y) const {
    apply_momentum_diagonal(kinetic_, x, y);
    for (std::size_t j = 0; j < size(); ++j) y[j] += potential_[j] * x[j];
  }

  Eigen::VectorXd apply(const Eigen::VectorXd& x) const {
    std::vector<cplx> cx(x.data(), x.data() + x.size()), cy(size());
    apply(cx, cy);
    Eigen::VectorXd y(size());
    for (std::size_t j = 0; j < size(); ++j) y[j] = cy[j].real();
    return y;
  }

  // Momentum-diagonal preconditioner (K + shift)^{-1}.
  Eigen::VectorXd precondition(const Eigen::VectorXd& r, double shift) const {
    std::vector<double> f(size());
    for (std::size_t k = 0; k < size(); ++k) f[k] = 1.0 / (kinetic_[k] + shift);
    std::vector<cplx> cx(r.data(), r.data() + r.size()), cy(size());
    apply_momentum_diagonal(f, cx, cy);
    Eigen::VectorXd y(size());
    for (std::size_t j = 0; j < size(); ++j) y[j] = cy[j].real();
    return y;
  }

 private:
  CenteredDft dft_;
  std::vector<double> potential_;
  std::vector<double> kinetic_;
  mutable std::vector<cplx> tmp_;
};

struct Eigenpair {
  double energy = 0.0;
  StateVector state;
  double residual = 0.0;
};

namespace detail {

// Largest-magnitude amplitude made positive real.
inline StateVector fix_phase(std::vector<cplx> a) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < a.size(); ++i)
    if (std::abs(a[i]) > std::abs(a[best]) + 1e-14) best = i;
  const cplx ph = std::abs(a[best]) > 0 ? std::conj(a[best]) / std::abs(a[best]) : cplx(1.0);
  for (auto& v : a) v *= ph;
  StateVector s(std::move(a));
  s.normalize();
  return s;
}

inline StateVector fix_phase(const Eigen::VectorXd& v) {
  return fix_phase(std::vector<cplx>(v.data(), v.data() + v.size()));
}

}  // namespace detail

inline Eigenpair ground_state(const Eigen::MatrixXd& h) {
  if (h.rows() != h.cols()) throw DomainError("Hamiltonian must be square");
  if ((h - h.transpose()).cwiseAbs().maxCoeff() > 1e-9 * std::max(1.0, h.cwiseAbs().maxCoeff()))
    throw DomainError("Hamiltonian is not symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  if (es.info() != Eigen::Success) throw ConvergenceError("dense eigensolver failed", 0.0);
  const Eigen::VectorXd v = es.eigenvectors().col(0);
  Eigenpair out{es.eigenvalues()[0], detail::fix_phase(v), 0.0};
  out.residual = (h * v - out.energy * v).norm();
  return out;
}

inline Eigen::VectorXd eigenvalues(const Eigen::MatrixXd& h) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw ConvergenceError("dense eigensolver failed", 0.0);
  return es.eigenvalues();
}

struct IterativeOptions {
  double tolerance = 1e-10;  // on ||H x - theta x|| / max(1, |theta|)
  int max_iterations = 5000;
  double precondition_shift = 1.0;
};

// Lowest eigenpair by LOBPCG with a kinetic-energy preconditioner.
inline Eigenpair ground_state_iterative(const HamiltonianOperator& op, const Eigen::VectorXd& guess,
                                        const IterativeOptions& opt = {}) {
  const auto n = Eigen::Index(op.size());
  Eigen::VectorXd x = guess.normalized();
  Eigen::VectorXd hx = op.apply(x);
  Eigen::VectorXd p, hp;
  double theta = x.dot(hx);
  double res = 0.0;
  for (int it = 0; it < opt.max_iterations; ++it) {
    const Eigen::VectorXd r = hx - theta * x;
    res = r.norm();
    if (res <= opt.tolerance * std::max(1.0, std::abs(theta)))
      return {theta, detail::fix_phase(x), res};

    Eigen::VectorXd w = op.precondition(r, opt.precondition_shift);
    // Orthonormal basis of span{x, w, p}.
    std::vector<Eigen::VectorXd> basis{x};
    auto add = [&](Eigen::VectorXd v) {
      for (int pass = 0; pass < 2; ++pass)
        for (const auto& b : basis) v -= b.dot(v) * b;
      const double nv = v.norm();
      if (nv > 1e-12) basis.push_back(v / nv);
    };
    add(w);
    if (p.size() == n) add(p);

    std::vector<Eigen::VectorXd> hb{hx};
    for (std::size_t i = 1; i < basis.size(); ++i) hb.push_back(op.apply(basis[i]));
    const auto m = Eigen::Index(basis.size());
    Eigen::MatrixXd s(m, m);
    for (Eigen::Index i = 0; i < m; ++i)
      for (Eigen::Index j = 0; j < m; ++j) s(i, j) = basis[i].dot(hb[j]);
    s = 0.5 * (s + s.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s);
    const Eigen::VectorXd c = es.eigenvectors().col(0);

    Eigen::VectorXd xn = Eigen::VectorXd::Zero(n), hxn = Eigen::VectorXd::Zero(n);
    p = Eigen::VectorXd::Zero(n);
    hp = Eigen::VectorXd::Zero(n);
    for (Eigen::Index i = 0; i < m; ++i) {
      xn += c[i] * basis[i];
      hxn += c[i] * hb[i];
      if (i > 0) {
        p += c[i] * basis[i];
        hp += c[i] * hb[i];
      }
    }
    const double nx = xn.norm();
    x = xn / nx;
    // Refresh the product periodically to stop drift from the recurrences.
    hx = (it % 20 == 19) ? op.apply(x) : Eigen::VectorXd(hxn / nx);
    theta = x.dot(hx);
  }
  std::ostringstream msg;
  msg << "LOBPCG did not converge in " << opt.max_iterations << " iterations, residual " << res;
  throw ConvergenceError(msg.str(), res);
}

inline StateVector analytic_ho_state(int n, const FieldGrid& g);

// Ground state of H(grid, spec): dense for n_q <= 8, iterative above.
inline Eigenpair ground_state(const FieldGrid& g, const HamiltonianSpec& spec,
                              const IterativeOptions& opt = {}) {
  if (g.n_qubits <= 8) return ground_state(build_hamiltonian(g, spec));
  const HamiltonianOperator op(g, spec);
  const StateVector guess = analytic_ho_state(0, g);
  Eigen::VectorXd x0(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) x0[j] = guess[j].real();
  return ground_state_iterative(op, x0, opt);
}

// Sampled harmonic-oscillator eigenfunction H_n(phi) exp(-phi^2/2), renormalized.
inline StateVector analytic_ho_state(int n, const FieldGrid& g) {
  if (n < 0) throw DomainError("level must be >= 0");
  std::vector<cplx> a(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double x = g.values[j];
    a[j] = std::hermite(unsigned(n), x) * std::exp(-0.5 * x * x);
  }
  StateVector s(std::move(a));
  s.normalize();
  return s;
}

}  // namespace seqht
