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

// Gate-level circuits for sequency-truncated evolution.
//
// Qubits are 1-based with qubit 1 the most significant bit of the basis index.
// Gate conventions:
//   RZ(t)    = exp(-i t Z / 2)
//   RY(t)    = exp(-i t Y / 2)
//   PHASE(t) = diag(1, e^{i t})
// Two-qubit accounting counts CNOTs only; single-qubit gates are free.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "seqht/core.hpp"
#include "seqht/evolution.hpp"
#include "seqht/field.hpp"
#include "seqht/walsh.hpp"

namespace seqht {

enum class GateKind { kCnot, kRz, kRy, kH, kPhase };

enum class Connectivity { kAllToAll, kLinearChain };

struct Gate {
  GateKind kind = GateKind::kH;
  int q0 = 1;  // control for CNOT, otherwise the acted-on qubit
  int q1 = 0;  // target for CNOT
  double angle = 0.0;
  std::string block;

  bool is_two_qubit() const { return kind == GateKind::kCnot; }
  bool touches(int q) const { return q0 == q || (is_two_qubit() && q1 == q); }
  bool is_diagonal() const { return kind == GateKind::kRz || kind == GateKind::kPhase; }
};

struct CircuitIR {
  int n_qubits = 1;
  Connectivity connectivity = Connectivity::kAllToAll;
  std::vector<Gate> gates;
  std::string current_block;

  CircuitIR() = default;
  CircuitIR(int n, Connectivity c) : n_qubits(n), connectivity(c) {
    if (n < 1 || n > kMaxQubits) throw DomainError("n_qubits out of range");
  }

  void check_qubit(int q) const {
    if (q < 1 || q > n_qubits) throw DomainError("qubit " + std::to_string(q) + " out of range");
  }

  void push(Gate g) {
    check_qubit(g.q0);
    if (!std::isfinite(g.angle)) throw DomainError("non-finite gate angle");
    if (g.is_two_qubit()) {
      check_qubit(g.q1);
      if (g.q0 == g.q1) throw DomainError("CNOT control equals target");
      if (connectivity == Connectivity::kLinearChain && std::abs(g.q0 - g.q1) != 1)
        throw DomainError("non-adjacent CNOT on a linear chain");
    }
    if (g.block.empty()) g.block = current_block;
    gates.push_back(std::move(g));
  }

  void h(int q) { push({GateKind::kH, q, 0, 0.0, {}}); }
  void rz(int q, double t) { push({GateKind::kRz, q, 0, t, {}}); }
  void ry(int q, double t) { push({GateKind::kRy, q, 0, t, {}}); }
  void phase(int q, double t) { push({GateKind::kPhase, q, 0, t, {}}); }

  // CNOT; routed along the chain when the qubits are not adjacent.
  void cx(int c, int t);

  void append(const CircuitIR& other) {
    if (other.n_qubits != n_qubits) throw DomainError("register sizes differ");
    for (const auto& g : other.gates) push(g);
  }

  std::size_t cnot_count() const {
    return std::size_t(std::count_if(gates.begin(), gates.end(),
                                     [](const Gate& g) { return g.is_two_qubit(); }));
  }
};

namespace detail {

// Adds CNOT(c -> b) for every b strictly between c and t and for t itself,
// using nearest-neighbour CNOTs only: 2|t - c| - 1 gates.
inline void fan_out(CircuitIR& c, int ctrl, int tgt) {
  const int s = tgt > ctrl ? 1 : -1;
  for (int b = tgt; b != ctrl; b -= s) c.push({GateKind::kCnot, b - s, b, 0.0, {}});
  for (int b = ctrl + 2 * s; b != tgt + s; b += s) c.push({GateKind::kCnot, b - s, b, 0.0, {}});
}

}  // namespace detail

inline void CircuitIR::cx(int c, int t) {
  check_qubit(c);
  check_qubit(t);
  if (connectivity == Connectivity::kAllToAll || std::abs(c - t) == 1) {
    push({GateKind::kCnot, c, t, 0.0, {}});
    return;
  }
  // Fan out to (c, t], then undo the fan-out to (c, t): 4(|t - c| - 1) gates.
  const int s = t > c ? 1 : -1;
  detail::fan_out(*this, c, t);
  detail::fan_out(*this, c, t - s);
}

inline CircuitIR inverse(const CircuitIR& c) {
  CircuitIR out(c.n_qubits, c.connectivity);
  for (auto it = c.gates.rbegin(); it != c.gates.rend(); ++it) {
    Gate g = *it;
    if (g.kind != GateKind::kCnot && g.kind != GateKind::kH) g.angle = -g.angle;
    out.push(std::move(g));
  }
  return out;
}

inline CircuitIR with_block(CircuitIR c, const std::string& name) {
  for (auto& g : c.gates) g.block = name;
  return c;
}

// ---------------------------------------------------------------------------
// Synthesis

// exp(-i theta/2 Z...Z) over the qubits of op: parity ladder, RZ, mirrored ladder.
inline CircuitIR synth_sequency_rotation(const SequencyOp& op, double theta,
                                         Connectivity conn = Connectivity::kAllToAll) {
  if (op.z_mask == 0) throw DomainError("identity sequency operator is a pure phase");
  CircuitIR c(op.n_qubits, conn);
  const std::vector<int> q = op.qubits();
  for (std::size_t i = 0; i + 1 < q.size(); ++i) c.cx(q[i], q[i + 1]);
  c.rz(q.back(), theta);
  for (std::size_t i = q.size() - 1; i-- > 0;) c.cx(q[i], q[i + 1]);
  return c;
}

using PairAngles = std::map<std::pair<int, int>, double>;

// Overlaid two-body block: for each leading qubit a, the parities x_a ^ x_b of
// every b > a sit on qubit b at the same time, so each R_ZZ(a, b) is one RZ.
// Consecutive groups are linked by a short nearest-neighbour CNOT sequence.
inline CircuitIR synth_phi2_block(int n_qubits, const PairAngles& angles,
                                  Connectivity conn = Connectivity::kLinearChain) {
  CircuitIR c(n_qubits, conn);
  if (angles.empty()) return c;
  int lo = n_qubits, hi = 1;
  for (const auto& [p, th] : angles) {
    auto [a, b] = p;
    if (a > b) std::swap(a, b);
    c.check_qubit(a);
    c.check_qubit(b);
    if (a == b) throw DomainError("pair with repeated qubit");
    lo = std::min(lo, a);
    hi = std::max(hi, b);
  }
  auto angle = [&](int a, int b) -> std::pair<bool, double> {
    auto it = angles.find({a, b});
    if (it == angles.end()) it = angles.find({b, a});
    return it == angles.end() ? std::pair{false, 0.0} : std::pair{true, it->second};
  };
  auto nn = [&](int ctl, int tgt) { c.push({GateKind::kCnot, ctl, tgt, 0.0, {}}); };
  auto rotations = [&](int a) {
    for (int b = a + 1; b <= hi; ++b)
      if (auto [has, th] = angle(a, b); has) c.rz(b, th);
  };

  for (int b = hi; b > lo; --b) nn(b - 1, b);
  for (int b = lo + 2; b <= hi; ++b) nn(b - 1, b);
  rotations(lo);
  for (int a = lo; a <= hi - 2; ++a) {
    for (int b = hi; b >= a + 2; --b) nn(b - 1, b);
    nn(a, a + 1);
    for (int b = a + 3; b <= hi; ++b) nn(b - 1, b);
    rotations(a + 1);
  }
  nn(hi - 1, hi);
  return c;
}

inline PairAngles all_pairs(int n_qubits, double theta) {
  PairAngles p;
  for (int a = 1; a <= n_qubits; ++a)
    for (int b = a + 1; b <= n_qubits; ++b) p[{a, b}] = theta;
  return p;
}

// RY angles that prepare a real symmetric state: level k holds the 2^k
// rotations on qubit k + 2, indexed by the values of qubits 2..k+1.
struct StatePrepAngles {
  int n_qubits = 1;
  std::vector<std::vector<double>> levels;
};

inline StatePrepAngles state_prep_angles(const StateVector& s, double tol = 1e-10) {
  const int n = s.n_qubits();
  if (n < 2) throw DomainError("state preparation needs at least two qubits");
  const std::size_t d = s.size(), half = d / 2;
  std::vector<double> h(half);
  for (std::size_t j = 0; j < half; ++j) {
    if (std::abs(s[j].imag()) > tol || std::abs(s[d - 1 - j].imag()) > tol)
      throw DomainError("state preparation expects real amplitudes");
    if (std::abs(s[j].real() - s[d - 1 - j].real()) > tol)
      throw DomainError("state preparation expects a reflection-symmetric state");
    h[j] = std::sqrt(2.0) * s[j].real();
  }
  StatePrepAngles out{n, {}};
  const int m = n - 1;
  for (int k = 0; k < m; ++k) {
    const std::size_t block = half >> k, sub = block / 2;
    std::vector<double> lv(std::size_t{1} << k);
    for (std::size_t p = 0; p < lv.size(); ++p) {
      const std::size_t base = p * block;
      if (sub == 1) {
        lv[p] = 2.0 * std::atan2(h[base + 1], h[base]);
      } else {
        double l = 0.0, r = 0.0;
        for (std::size_t i = 0; i < sub; ++i) {
          l += h[base + i] * h[base + i];
          r += h[base + sub + i] * h[base + sub + i];
        }
        lv[p] = 2.0 * std::atan2(std::sqrt(r), std::sqrt(l));
      }
    }
    out.levels.push_back(std::move(lv));
  }
  return out;
}

namespace detail {

// Uniformly controlled RY on `target` with controls `ctrls` (most significant
// first); angle i applies when the controls read i. Gray-code CNOT pattern.
inline void uniformly_controlled_ry(CircuitIR& c, const std::vector<int>& ctrls, int target,
                                    const std::vector<double>& alpha) {
  const std::size_t k = ctrls.size(), m = std::size_t{1} << k;
  if (k == 0) {
    c.ry(target, alpha[0]);
    return;
  }
  for (std::size_t j = 0; j < m; ++j) {
    const Mask g = gray_encode(j);
    double th = 0.0;
    for (std::size_t i = 0; i < m; ++i) th += parity(i & g) ? -alpha[i] : alpha[i];
    c.ry(target, th / double(m));
    const Mask next = gray_encode((j + 1) % m);
    const int bit = std::countr_zero(g ^ next);
    c.cx(ctrls[k - 1 - std::size_t(bit)], target);
  }
}

}  // namespace detail

// Half-register preparation on qubits 2..n, then the reflection block
// F = H(1) followed by CNOTs from qubit 1 onto every other qubit.
inline CircuitIR synth_state_prep(int n_qubits, const StatePrepAngles& angles,
                                  Connectivity conn = Connectivity::kAllToAll) {
  if (angles.n_qubits != n_qubits || int(angles.levels.size()) != n_qubits - 1)
    throw DomainError("state preparation angles do not match the register");
  CircuitIR c(n_qubits, conn);
  std::vector<int> ctrls;
  for (int k = 0; k < n_qubits - 1; ++k) {
    detail::uniformly_controlled_ry(c, ctrls, k + 2, angles.levels[std::size_t(k)]);
    ctrls.push_back(k + 2);
  }
  c.h(1);
  if (conn == Connectivity::kAllToAll) {
    for (int b = n_qubits; b >= 2; --b) c.cx(1, b);
  } else if (n_qubits >= 2) {
    detail::fan_out(c, 1, n_qubits);
  }
  return c;
}

// Swap-free QFT, |j> -> N^{-1/2} sum_k e^{2 pi i j k / N} |rev(k)>, on nearest
// neighbours. Controlled phases are split into single-qubit phases plus one
// phase on the parity x_a ^ x_b, and the parities of each H layer are built
// with the same overlaid ladder as the two-body block.
inline CircuitIR synth_qft(int n, Connectivity conn = Connectivity::kLinearChain) {
  CircuitIR c(n, conn);
  const double pi = std::numbers::pi;
  auto cp = [&](int a, int b) { return pi / std::ldexp(1.0, b - a); };
  std::vector<double> acc(std::size_t(n) + 1, 0.0);
  for (int a = 1; a <= n; ++a)
    for (int b = a + 1; b <= n; ++b) acc[std::size_t(b)] += 0.5 * cp(a, b);
  auto nn = [&](int ctl, int tgt) { c.push({GateKind::kCnot, ctl, tgt, 0.0, {}}); };
  auto open = [&](int a) {
    if (acc[std::size_t(a)] != 0.0) c.phase(a, acc[std::size_t(a)]);
    c.h(a);
    double own = 0.0;
    for (int b = a + 1; b <= n; ++b) own += 0.5 * cp(a, b);
    if (own != 0.0) c.phase(a, own);
  };
  auto parities = [&](int a) {
    for (int b = a + 1; b <= n; ++b) c.phase(b, -0.5 * cp(a, b));
  };

  open(1);
  if (n == 1) return c;
  for (int b = n; b >= 2; --b) nn(b - 1, b);
  for (int b = 3; b <= n; ++b) nn(b - 1, b);
  parities(1);
  for (int j = 1; j <= n - 2; ++j) {
    for (int b = n; b >= j + 2; --b) nn(b - 1, b);
    nn(j, j + 1);
    nn(j + 1, j + 2);
    open(j + 1);
    nn(j + 1, j + 2);
    for (int b = j + 3; b <= n; ++b) nn(b - 1, b);
    parities(j + 1);
  }
  nn(n - 1, n);
  open(n);
  return c;
}

// Phase layer P(-M pi / 2^q), M = 2^n - 1, followed by the swap-free QFT.
// Together with its inverse this realizes the centered DFT sandwich.
inline CircuitIR synth_symmetric_qft(int n, Connectivity conn = Connectivity::kLinearChain) {
  CircuitIR c(n, conn);
  const double M = std::ldexp(1.0, n) - 1.0;
  for (int q = 1; q <= n; ++q)
    c.phase(q, std::remainder(-M * std::numbers::pi / std::ldexp(1.0, q), 2.0 * std::numbers::pi));
  c.append(synth_qft(n, conn));
  return c;
}

// exp(-i Pi^2 t / 2) on the grid: symmetric QFT, two-body phase block with
// momentum-grid angles on the bit-reversed register, inverse.
inline CircuitIR synth_pi_evolution(const FieldGrid& g, double t,
                                    Connectivity conn = Connectivity::kLinearChain) {
  const int n = g.n_qubits;
  const MomentumGrid mg(g);
  const double dp2 = mg.delta_pi * mg.delta_pi;
  // (k - c)^2 = const + 1/2 sum_{a<b} 2^{2n-a-b} Z_a Z_b on the bits of k;
  // qubit a of k sits on physical qubit n + 1 - a after the swap-free QFT.
  PairAngles ang;
  for (int a = 1; a <= n; ++a)
    for (int b = a + 1; b <= n; ++b) {
      const double coeff = 0.5 * dp2 * 0.5 * std::ldexp(1.0, 2 * n - a - b);
      ang[{n + 1 - b, n + 1 - a}] = 2.0 * coeff * t;
    }
  const CircuitIR fwd = synth_symmetric_qft(n, conn);
  CircuitIR c(n, conn);
  c.append(with_block(fwd, "qft"));
  c.append(with_block(synth_phi2_block(n, ang, conn), "pi_diag"));
  c.append(with_block(inverse(fwd), "qft_inv"));
  return c;
}

// exp(-i diag t) for a diagonal with the given Walsh spectrum; the identity
// term (a global phase) is skipped. Two-body terms share one overlaid block;
// heavier strings each get a ladder, in sequency order.
inline CircuitIR synth_diagonal(const WalshSpectrum& spec, double t,
                                Connectivity conn = Connectivity::kLinearChain,
                                double zero_tol = 1e-12) {
  const int n = spec.n_qubits;
  CircuitIR c(n, conn);
  const double cut = zero_tol * std::max(1.0, spec.max_abs());
  PairAngles pairs;
  std::vector<std::pair<SequencyOp, double>> heavy;
  for (const auto& [nu, beta] : spec.coefficients) {
    if (nu == 0 || std::abs(beta) <= cut) continue;
    const SequencyOp op = SequencyOp::from_sequency(nu, n);
    const double theta = 2.0 * beta * t;
    if (op.weight() == 2) {
      const auto q = op.qubits();
      pairs[{q[0], q[1]}] = theta;
    } else {
      heavy.emplace_back(op, theta);
    }
  }
  c.append(synth_phi2_block(n, pairs, conn));
  for (const auto& [op, th] : heavy) c.append(synth_sequency_rotation(op, th, conn));
  return c;
}

// ---------------------------------------------------------------------------
// Optimization

namespace detail {

// Whether gate g can be moved across a CNOT(c, t).
inline bool commutes_with_cnot(const Gate& g, int c, int t) {
  if (!g.touches(c) && !g.touches(t)) return true;
  if (g.is_two_qubit()) {
    if (g.q0 == c && g.q1 != t && g.q1 != c) return true;  // shared control
    if (g.q1 == t && g.q0 != c && g.q0 != t) return true;  // shared target
    return false;
  }
  return g.is_diagonal() && g.q0 == c;
}

}  // namespace detail

// Removes pairs of identical CNOTs separated only by gates that commute with
// them, and merges neighbouring diagonal rotations of the same kind. Never
// increases the CNOT count.
inline CircuitIR cancel_cnots(const CircuitIR& in) {
  std::vector<Gate> g = in.gates;
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<bool> dead(g.size(), false);
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (dead[i] || !g[i].is_two_qubit()) continue;
      const int c = g[i].q0, t = g[i].q1;
      for (std::size_t j = i + 1; j < g.size(); ++j) {
        if (dead[j]) continue;
        if (g[j].is_two_qubit() && g[j].q0 == c && g[j].q1 == t) {
          dead[i] = dead[j] = true;
          changed = true;
          break;
        }
        if (!detail::commutes_with_cnot(g[j], c, t)) break;
      }
    }
    std::vector<Gate> kept;
    for (std::size_t i = 0; i < g.size(); ++i)
      if (!dead[i]) kept.push_back(g[i]);
    // Fuse adjacent same-kind diagonal rotations on one qubit.
    std::vector<Gate> fused;
    for (auto& x : kept) {
      if (!fused.empty() && x.is_diagonal() && fused.back().kind == x.kind &&
          fused.back().q0 == x.q0) {
        fused.back().angle += x.angle;
        continue;
      }
      fused.push_back(x);
    }
    std::erase_if(fused, [](const Gate& x) { return x.is_diagonal() && x.angle == 0.0; });
    if (fused.size() != g.size()) changed = true;
    g = std::move(fused);
  }
  CircuitIR out(in.n_qubits, in.connectivity);
  out.gates = std::move(g);
  return out;
}

// ---------------------------------------------------------------------------
// Accounting and export

struct BlockResources {
  std::size_t count = 0;
  std::size_t depth = 0;
};

struct ResourceReport {
  std::size_t two_qubit_count = 0;
  std::size_t two_qubit_depth = 0;
  std::map<std::string, BlockResources> by_block;
};

namespace detail {

inline std::size_t layered_depth(int n, const std::vector<const Gate*>& gates) {
  std::vector<std::size_t> level(std::size_t(n) + 1, 0);
  std::size_t d = 0;
  for (const Gate* g : gates) {
    if (!g->is_two_qubit()) continue;
    const std::size_t l = std::max(level[std::size_t(g->q0)], level[std::size_t(g->q1)]) + 1;
    level[std::size_t(g->q0)] = level[std::size_t(g->q1)] = l;
    d = std::max(d, l);
  }
  return d;
}

}  // namespace detail

inline ResourceReport count_resources(const CircuitIR& c) {
  ResourceReport r;
  std::vector<const Gate*> all;
  std::map<std::string, std::vector<const Gate*>> blocks;
  for (const auto& g : c.gates) {
    all.push_back(&g);
    if (g.is_two_qubit()) blocks[g.block.empty() ? "main" : g.block].push_back(&g);
  }
  r.two_qubit_count = c.cnot_count();
  r.two_qubit_depth = detail::layered_depth(c.n_qubits, all);
  for (const auto& [name, gs] : blocks)
    r.by_block[name] = {gs.size(), detail::layered_depth(c.n_qubits, gs)};
  return r;
}

inline constexpr const char* kQasmHeader = "OPENQASM 2.0; include \"qelib1.inc\";";

// OpenQASM 2.0 text. Qubit k maps to q[n - k] so the little-endian register
// index of q[] equals the basis index used here.
inline std::string export_qasm(const CircuitIR& c) {
  std::ostringstream os;
  os << kQasmHeader << "\nqreg q[" << c.n_qubits << "];\n";
  auto reg = [&](int k) { return "q[" + std::to_string(c.n_qubits - k) + "]"; };
  char buf[64];
  for (const auto& g : c.gates) {
    std::snprintf(buf, sizeof buf, "%.17g", g.angle);
    switch (g.kind) {
      case GateKind::kCnot: os << "cx " << reg(g.q0) << "," << reg(g.q1) << ";\n"; break;
      case GateKind::kRz: os << "rz(" << buf << ") " << reg(g.q0) << ";\n"; break;
      case GateKind::kRy: os << "ry(" << buf << ") " << reg(g.q0) << ";\n"; break;
      case GateKind::kH: os << "h " << reg(g.q0) << ";\n"; break;
      case GateKind::kPhase: os << "u1(" << buf << ") " << reg(g.q0) << ";\n"; break;
      default: throw SerializationError("unsupported gate kind in QASM export");
    }
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Dense simulation (verification)

inline void apply_gate(StateVector& s, const Gate& g, int n) {
  const std::size_t d = s.size();
  const std::size_t m0 = std::size_t{1} << bit_of_qubit(g.q0, n);
  switch (g.kind) {
    case GateKind::kCnot: {
      const std::size_t mt = std::size_t{1} << bit_of_qubit(g.q1, n);
      for (std::size_t j = 0; j < d; ++j)
        if ((j & m0) && !(j & mt)) std::swap(s[j], s[j | mt]);
      break;
    }
    case GateKind::kRz: {
      const cplx a = std::polar(1.0, -0.5 * g.angle), b = std::conj(a);
      for (std::size_t j = 0; j < d; ++j) s[j] *= (j & m0) ? b : a;
      break;
    }
    case GateKind::kPhase: {
      const cplx b = std::polar(1.0, g.angle);
      for (std::size_t j = 0; j < d; ++j)
        if (j & m0) s[j] *= b;
      break;
    }
    case GateKind::kRy: {
      const double co = std::cos(0.5 * g.angle), si = std::sin(0.5 * g.angle);
      for (std::size_t j = 0; j < d; ++j)
        if (!(j & m0)) {
          const cplx x = s[j], y = s[j | m0];
          s[j] = co * x - si * y;
          s[j | m0] = si * x + co * y;
        }
      break;
    }
    case GateKind::kH: {
      const double r = 1.0 / std::sqrt(2.0);
      for (std::size_t j = 0; j < d; ++j)
        if (!(j & m0)) {
          const cplx x = s[j], y = s[j | m0];
          s[j] = r * (x + y);
          s[j | m0] = r * (x - y);
        }
      break;
    }
  }
}

inline StateVector simulate(const CircuitIR& c, StateVector s) {
  if (s.n_qubits() != c.n_qubits) throw DomainError("state and circuit sizes differ");
  for (const auto& g : c.gates) apply_gate(s, g, c.n_qubits);
  return s;
}

inline Eigen::MatrixXcd circuit_unitary(const CircuitIR& c) {
  const std::size_t d = dim_of(c.n_qubits);
  if (c.n_qubits > 10) throw ResourceError("dense unitary limited to 10 qubits");
  Eigen::MatrixXcd u(d, d);
  for (std::size_t k = 0; k < d; ++k) {
    const StateVector col = simulate(c, StateVector::basis(c.n_qubits, k));
    for (std::size_t j = 0; j < d; ++j) u(j, k) = col[j];
  }
  return u;
}

// max |a - e^{i phi} b| over entries, with phi fitted from the largest entry of b.
inline double distance_up_to_phase(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::Index r = 0, col = 0;
  b.cwiseAbs().maxCoeff(&r, &col);
  cplx ph = a(r, col) / b(r, col);
  ph /= std::abs(ph);
  return (a - ph * b).cwiseAbs().maxCoeff();
}

// ---------------------------------------------------------------------------
// Adiabatic preparation circuit

// exp(-i [1/2 T(phi^2) t2 + lambda/24 T(phi^4) t4]) as a circuit.
inline CircuitIR synth_phi_evolution(const TrotterEngine& eng, double lambda, double t2, double t4,
                                     Connectivity conn = Connectivity::kLinearChain) {
  const auto& f2 = eng.phi2();
  const auto& f4 = eng.phi4();
  std::vector<double> d(f2.size());
  for (std::size_t j = 0; j < d.size(); ++j) d[j] = 0.5 * f2[j] * t2 + lambda / 24.0 * f4[j] * t4;
  return synth_diagonal(decompose(DiagonalVector(std::move(d))), 1.0, conn);
}

struct AspCircuitOptions {
  Connectivity connectivity = Connectivity::kLinearChain;
  bool include_state_prep = true;
  bool cancel = true;
};

// State preparation plus second-order steps with merged interior diagonal factors.
inline CircuitIR assemble_asp_circuit(const AspSchedule& sch, const FieldGrid& g,
                                      const AspCircuitOptions& opt = {}) {
  sch.validate();
  if (sch.trotter_order != 2) throw DomainError("circuit assembly supports second order only");
  const int n = g.n_qubits;
  const auto conn = opt.connectivity;
  const TrotterEngine eng(g, sch.cutoffs);
  CircuitIR c(n, conn);
  if (opt.include_state_prep)
    c.append(with_block(synth_state_prep(n, state_prep_angles(free_ground_state(g)), conn),
                        "state_prep"));
  const CircuitIR pi_block = synth_pi_evolution(g, sch.dt, conn);
  const double dt = sch.dt;
  for (int k = 1; k <= sch.n_steps; ++k) {
    if (k == 1)
      c.append(with_block(synth_phi_evolution(eng, sch.lambda_at(1), 0.5 * dt, 0.5 * dt, conn),
                          "phi"));
    c.append(pi_block);
    if (k < sch.n_steps) {
      const double lm = 0.5 * (sch.lambda_at(k) + sch.lambda_at(k + 1));
      c.append(with_block(synth_phi_evolution(eng, lm, dt, dt, conn), "phi"));
    } else {
      c.append(with_block(synth_phi_evolution(eng, sch.lambda_at(k), 0.5 * dt, 0.5 * dt, conn),
                          "phi"));
    }
  }
  return opt.cancel ? cancel_cnots(c) : c;
}

}  // namespace seqht
