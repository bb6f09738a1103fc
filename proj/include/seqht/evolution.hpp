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

// Trotterized adiabatic state preparation on the digitized field.
//
//   Phi(lambda, t) = exp(-i [1/2 phi^2 + lambda/24 phi^4] t)   diagonal
//   Pi(t)          = exp(-i 1/2 Pi^2 t)                        via the centered DFT

#pragma once

#include <algorithm>
#include <cmath>
#include <future>
#include <map>
#include <optional>
#include <thread>
#include <utility>
#include <vector>

#include "seqht/field.hpp"
#include "seqht/walsh.hpp"

namespace seqht {

struct Cutoffs {
  std::optional<std::uint64_t> nu_cut_phi4;
  std::optional<std::uint64_t> nu_cut_phi2;
};

// How lambda ramps over the N steps.
enum class Ramp {
  kInterior,  // lambda_k = lambda k / (N + 1)
  kEndpoint,  // lambda_k = lambda k / N
};

// Order of the two factors inside a first-order step.
enum class FirstOrderSplit {
  kKineticFirst,    // Phi(dt) Pi(dt) psi
  kPotentialFirst,  // Pi(dt) Phi(dt) psi
};

struct AspSchedule {
  int n_steps = 0;
  double dt = 0.1;
  int trotter_order = 2;
  double lambda_target = 10.0;
  Cutoffs cutoffs;
  bool merge_adjacent = false;
  Ramp ramp = Ramp::kInterior;
  FirstOrderSplit split = FirstOrderSplit::kKineticFirst;

  double total_time() const { return n_steps * dt; }

  double lambda_at(int k) const {
    const double denom = ramp == Ramp::kInterior ? double(n_steps + 1) : double(n_steps);
    return lambda_target * double(k) / denom;
  }

  void validate() const {
    if (n_steps < 0) throw DomainError("n_steps must be >= 0");
    if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("dt must be positive");
    if (trotter_order != 1 && trotter_order != 2) throw DomainError("trotter_order must be 1 or 2");
    if (!(lambda_target >= 0.0)) throw DomainError("lambda must be >= 0");
    for (const auto& c : {cutoffs.nu_cut_phi4, cutoffs.nu_cut_phi2})
      if (c && *c % 2 != 0) throw DomainError("sequency cutoffs must be even");
  }
};

// Precomputed diagonals for repeated Phi / Pi factors on one grid.
class TrotterEngine {
 public:
  TrotterEngine(const FieldGrid& g, const Cutoffs& cut) : grid_(g), dft_(g.n_qubits) {
    DiagonalVector f2 = phi_power_operator(g, 2);
    DiagonalVector f4 = phi_power_operator(g, 4);
    if (cut.nu_cut_phi2) f2 = truncated_diagonal(f2, *cut.nu_cut_phi2, true);
    if (cut.nu_cut_phi4) f4 = truncated_diagonal(f4, *cut.nu_cut_phi4, true);
    f2_ = std::move(f2.entries);
    f4_ = std::move(f4.entries);
    const MomentumGrid mg(g);
    kinetic_.resize(g.size());
    for (std::size_t k = 0; k < g.size(); ++k) kinetic_[k] = 0.5 * mg.values[k] * mg.values[k];
  }

  const FieldGrid& grid() const { return grid_; }
  const std::vector<double>& phi2() const { return f2_; }
  const std::vector<double>& phi4() const { return f4_; }

  // exp(-i [t2 * 1/2 phi^2 + t4 * lambda/24 phi^4]); Phi(lambda, t) is t2 = t4 = t.
  void apply_diagonal(StateVector& s, double lambda, double t2, double t4) const {
    for (std::size_t j = 0; j < s.size(); ++j) {
      const double e = 0.5 * f2_[j] * t2 + lambda / 24.0 * f4_[j] * t4;
      s[j] *= std::polar(1.0, -e);
    }
  }

  void phi_step(StateVector& s, double lambda, double t) const { apply_diagonal(s, lambda, t, t); }

  void pi_step(StateVector& s, double t) const {
    std::vector<cplx> m(s.size());
    dft_.forward(s.amplitudes, m);
    for (std::size_t k = 0; k < m.size(); ++k) m[k] *= std::polar(1.0, -kinetic_[k] * t);
    dft_.inverse(m, s.amplitudes);
  }

 private:
  FieldGrid grid_;
  CenteredDft dft_;
  std::vector<double> f2_, f4_, kinetic_;
};

inline StateVector phi_step(StateVector s, double lambda, double t, const FieldGrid& g,
                            const Cutoffs& cut = {}) {
  TrotterEngine(g, cut).phi_step(s, lambda, t);
  return s;
}

inline StateVector pi_step(StateVector s, double t, const FieldGrid& g) {
  TrotterEngine(g, {}).pi_step(s, t);
  return s;
}

// Ground state of the free (lambda = 0) Hamiltonian.
inline StateVector free_ground_state(const FieldGrid& g) {
  return ground_state(g, HamiltonianSpec{}).state;
}

// Ground state of the untruncated Hamiltonian at coupling lambda.
inline StateVector target_ground_state(const FieldGrid& g, double lambda) {
  HamiltonianSpec spec;
  spec.lambda = lambda;
  return ground_state(g, spec).state;
}

inline StateVector run_asp(const AspSchedule& sch, const TrotterEngine& eng, StateVector psi) {
  sch.validate();
  const int n = sch.n_steps;
  const double dt = sch.dt;
  if (sch.trotter_order == 1) {
    for (int k = 1; k <= n; ++k) {
      const double lam = sch.lambda_at(k);
      if (sch.split == FirstOrderSplit::kKineticFirst) {
        eng.pi_step(psi, dt);
        eng.phi_step(psi, lam, dt);
      } else {
        eng.phi_step(psi, lam, dt);
        eng.pi_step(psi, dt);
      }
    }
    return psi;
  }
  if (!sch.merge_adjacent) {
    for (int k = 1; k <= n; ++k) {
      const double lam = sch.lambda_at(k);
      eng.phi_step(psi, lam, 0.5 * dt);
      eng.pi_step(psi, dt);
      eng.phi_step(psi, lam, 0.5 * dt);
    }
    return psi;
  }
  // Interior half steps of neighbouring steps fuse into one diagonal factor.
  if (n == 0) return psi;
  eng.phi_step(psi, sch.lambda_at(1), 0.5 * dt);
  for (int k = 1; k <= n; ++k) {
    eng.pi_step(psi, dt);
    if (k < n) {
      const double l1 = sch.lambda_at(k), l2 = sch.lambda_at(k + 1);
      eng.apply_diagonal(psi, 0.5 * (l1 + l2), dt, dt);
    } else {
      eng.phi_step(psi, sch.lambda_at(n), 0.5 * dt);
    }
  }
  return psi;
}

inline StateVector run_asp(const AspSchedule& sch, const FieldGrid& g) {
  const TrotterEngine eng(g, sch.cutoffs);
  return run_asp(sch, eng, free_ground_state(g));
}

// Exact per-step propagators exp(-i H(lambda_k) dt) from dense eigendecomposition.
inline StateVector run_asp_exact(int n_steps, double total_time, double lambda_target,
                                 const FieldGrid& g, const Cutoffs& cut = {},
                                 Ramp ramp = Ramp::kInterior) {
  if (g.n_qubits > 8) throw ResourceError("exact propagation limited to n_qubits <= 8");
  if (n_steps < 0) throw DomainError("n_steps must be >= 0");
  StateVector psi = free_ground_state(g);
  if (n_steps == 0) return psi;
  AspSchedule sch;
  sch.n_steps = n_steps;
  sch.dt = total_time / n_steps;
  sch.lambda_target = lambda_target;
  sch.ramp = ramp;
  const auto N = Eigen::Index(g.size());
  Eigen::VectorXcd v(N);
  for (Eigen::Index j = 0; j < N; ++j) v[j] = psi[j];
  for (int k = 1; k <= n_steps; ++k) {
    HamiltonianSpec spec;
    spec.lambda = sch.lambda_at(k);
    spec.nu_cut_phi4 = cut.nu_cut_phi4;
    spec.nu_cut_phi2 = cut.nu_cut_phi2;
    spec.drop_identity = true;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(build_hamiltonian(g, spec));
    const Eigen::MatrixXd& u = es.eigenvectors();
    Eigen::VectorXcd c = u.transpose() * v;
    for (Eigen::Index i = 0; i < N; ++i) c[i] *= std::polar(1.0, -es.eigenvalues()[i] * sch.dt);
    v = u * c;
  }
  for (Eigen::Index j = 0; j < N; ++j) psi[j] = v[j];
  return psi;
}

inline double fidelity(const StateVector& a, const StateVector& b) {
  return std::norm(inner(a, b));
}

// sum_j |a_j| |b_j|: the overlap of amplitude magnitudes.
inline double amplitude_overlap(const StateVector& a, const StateVector& b) {
  if (a.size() != b.size()) throw DomainError("state dimensions differ");
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) s += std::abs(a[j]) * std::abs(b[j]);
  return s;
}

struct ObservableReport {
  int n_qubits = 0;
  std::map<std::pair<int, int>, double> zz;

  double at(int i, int j) const { return zz.at({std::min(i, j), std::max(i, j)}); }
};

inline ObservableReport zz_expectations(const StateVector& s) {
  const int n = s.n_qubits();
  ObservableReport r{n, {}};
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) {
      const Mask m = (Mask{1} << bit_of_qubit(i, n)) | (Mask{1} << bit_of_qubit(j, n));
      double e = 0.0;
      for (std::size_t k = 0; k < s.size(); ++k)
        e += (parity(k & m) ? -1.0 : 1.0) * std::norm(s[k]);
      r.zz[{i, j}] = e;
    }
  return r;
}

// Forward-then-backward companion circuit for a two-step second-order schedule:
// Phi(s1, t/2) Pi(t) Phi(s1 + s2, 0) Pi(-t) Phi(s2, -t/2) applied to psi.
inline StateVector run_mitigation(const AspSchedule& sch, const TrotterEngine& eng, StateVector psi) {
  sch.validate();
  if (sch.n_steps != 2 || sch.trotter_order != 2)
    throw DomainError("mitigation circuit needs a two-step second-order schedule");
  const double t = sch.dt;
  const double s1 = sch.lambda_at(1), s2 = sch.lambda_at(2);
  eng.phi_step(psi, s2, -0.5 * t);
  eng.pi_step(psi, -t);
  eng.pi_step(psi, t);
  eng.phi_step(psi, s1, 0.5 * t);
  return psi;
}

inline StateVector run_mitigation(const AspSchedule& sch, const FieldGrid& g) {
  const TrotterEngine eng(g, sch.cutoffs);
  return run_mitigation(sch, eng, free_ground_state(g));
}

struct ScanConfig {
  int n_qubits = 5;
  double phi_max = 4.0;
  double lambda_target = 10.0;
  int trotter_order = 2;
  Cutoffs cutoffs;
  Ramp ramp = Ramp::kInterior;
  FirstOrderSplit split = FirstOrderSplit::kKineticFirst;
  // Score against the ground state of the truncated Hamiltonian instead of the full one.
  bool truncated_target = false;
  unsigned workers = 0;  // 0: hardware concurrency
};

// rows = step counts, columns = dt values
inline std::vector<std::vector<double>> scan_fidelity(const std::vector<double>& dt_grid,
                                                      const std::vector<int>& step_grid,
                                                      const ScanConfig& cfg) {
  const FieldGrid g(cfg.n_qubits, cfg.phi_max);
  const StateVector psi0 = free_ground_state(g);
  HamiltonianSpec tspec;
  tspec.lambda = cfg.lambda_target;
  if (cfg.truncated_target) {
    tspec.nu_cut_phi4 = cfg.cutoffs.nu_cut_phi4;
    tspec.nu_cut_phi2 = cfg.cutoffs.nu_cut_phi2;
  }
  const StateVector target = ground_state(g, tspec).state;
  const TrotterEngine proto(g, cfg.cutoffs);

  std::vector<std::vector<double>> out(step_grid.size(), std::vector<double>(dt_grid.size()));
  const std::size_t cells = step_grid.size() * dt_grid.size();
  unsigned w = cfg.workers ? cfg.workers : std::max(1U, std::thread::hardware_concurrency());
  w = unsigned(std::min<std::size_t>(w, std::max<std::size_t>(cells, 1)));

  auto work = [&](unsigned id) {
    const TrotterEngine eng = proto;  // FFT plans are not shared across threads
    for (std::size_t c = id; c < cells; c += w) {
      const std::size_t r = c / dt_grid.size(), col = c % dt_grid.size();
      AspSchedule sch;
      sch.n_steps = step_grid[r];
      sch.dt = dt_grid[col];
      sch.trotter_order = cfg.trotter_order;
      sch.lambda_target = cfg.lambda_target;
      sch.cutoffs = cfg.cutoffs;
      sch.ramp = cfg.ramp;
      sch.split = cfg.split;
      out[r][col] = fidelity(target, run_asp(sch, eng, psi0));
    }
  };
  if (w <= 1) {
    work(0);
  } else {
    std::vector<std::future<void>> fs;
    for (unsigned id = 0; id < w; ++id) fs.push_back(std::async(std::launch::async, work, id));
    for (auto& f : fs) f.get();
  }
  return out;
}

}  // namespace seqht
