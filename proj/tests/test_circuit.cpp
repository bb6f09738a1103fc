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

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "seqht/circuit.hpp"

namespace seqht {
namespace {

constexpr Connectivity kBoth[] = {Connectivity::kAllToAll, Connectivity::kLinearChain};

Eigen::MatrixXcd diagonal_unitary(const std::vector<double>& phases) {
  Eigen::VectorXcd d(Eigen::Index(phases.size()));
  for (std::size_t j = 0; j < phases.size(); ++j) d[Eigen::Index(j)] = std::polar(1.0, -phases[j]);
  return d.asDiagonal();
}

double z_sign(std::size_t j, Mask m) { return parity(j & m) ? -1.0 : 1.0; }

Mask pair_mask(int a, int b, int n) {
  return (Mask{1} << bit_of_qubit(a, n)) | (Mask{1} << bit_of_qubit(b, n));
}

void expect_adjacent_only(const CircuitIR& c) {
  for (const auto& g : c.gates)
    if (g.is_two_qubit()) { ASSERT_EQ(std::abs(g.q0 - g.q1), 1); }
}

TEST(SequencyRotation, MatchesDiagonalAndLadderCost) {
  for (int n = 1; n <= 5; ++n)
    for (auto conn : kBoth)
      for (std::uint64_t nu = 1; nu < dim_of(n); ++nu) {
        const auto op = SequencyOp::from_sequency(nu, n);
        const double theta = 0.3 + 0.1 * double(nu);
        const CircuitIR c = synth_sequency_rotation(op, theta, conn);
        std::vector<double> ph(dim_of(n));
        for (std::size_t j = 0; j < ph.size(); ++j) ph[j] = 0.5 * theta * z_sign(j, op.z_mask);
        EXPECT_LT(distance_up_to_phase(circuit_unitary(c), diagonal_unitary(ph)), 1e-10);
        if (conn == Connectivity::kAllToAll)
          EXPECT_EQ(c.cnot_count(), std::size_t(2 * (op.weight() - 1)));
        else
          expect_adjacent_only(c);
      }
  EXPECT_THROW(synth_sequency_rotation(SequencyOp::from_sequency(0, 3), 1.0), DomainError);
}

TEST(TwoBodyBlock, MatchesDiagonalUpTo5Qubits) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> ua(-2.0, 2.0);
  for (int n = 2; n <= 5; ++n)
    for (auto conn : kBoth) {
      PairAngles ang;
      for (int a = 1; a <= n; ++a)
        for (int b = a + 1; b <= n; ++b) ang[{a, b}] = ua(rng);
      const CircuitIR c = synth_phi2_block(n, ang, conn);
      std::vector<double> ph(dim_of(n), 0.0);
      for (const auto& [p, th] : ang)
        for (std::size_t j = 0; j < ph.size(); ++j) ph[j] += 0.5 * th * z_sign(j, pair_mask(p.first, p.second, n));
      EXPECT_LT(distance_up_to_phase(circuit_unitary(c), diagonal_unitary(ph)), 1e-10) << "n=" << n;
      expect_adjacent_only(c);
    }
}

TEST(TwoBodyBlock, SparseAnglesStillExact) {
  const int n = 5;
  PairAngles ang{{{2, 4}, 0.7}, {{3, 5}, -0.4}};
  const CircuitIR c = synth_phi2_block(n, ang);
  std::vector<double> ph(dim_of(n), 0.0);
  for (const auto& [p, th] : ang)
    for (std::size_t j = 0; j < ph.size(); ++j) ph[j] += 0.5 * th * z_sign(j, pair_mask(p.first, p.second, n));
  EXPECT_LT(distance_up_to_phase(circuit_unitary(c), diagonal_unitary(ph)), 1e-10);
}

TEST(TwoBodyBlock, ClosedFormCounts3To8) {
  for (int n = 3; n <= 8; ++n) {
    const auto r = count_resources(synth_phi2_block(n, all_pairs(n, 0.1)));
    EXPECT_EQ(r.two_qubit_count, std::size_t(n * (n - 1))) << "n=" << n;
    EXPECT_EQ(r.two_qubit_depth, std::size_t(n * (n - 2) + 3)) << "n=" << n;
  }
  const auto r5 = count_resources(synth_phi2_block(5, all_pairs(5, 0.1)));
  EXPECT_EQ(r5.two_qubit_count, 20u);
  EXPECT_EQ(r5.two_qubit_depth, 18u);
}

Eigen::MatrixXcd reversed_dft(int n) {
  const std::size_t N = dim_of(n);
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(Eigen::Index(N), Eigen::Index(N));
  for (std::size_t j = 0; j < N; ++j)
    for (std::size_t k = 0; k < N; ++k)
      u(Eigen::Index(reverse_bits(k, n)), Eigen::Index(j)) =
          std::polar(1.0 / std::sqrt(double(N)), 2.0 * std::numbers::pi * double(j * k) / double(N));
  return u;
}

TEST(Qft, MatchesReversedDftUpTo5Qubits) {
  for (int n = 1; n <= 5; ++n) {
    const CircuitIR c = synth_qft(n);
    EXPECT_LT(distance_up_to_phase(circuit_unitary(c), reversed_dft(n)), 1e-10) << "n=" << n;
    expect_adjacent_only(c);
  }
}

TEST(Qft, ClosedFormCounts3To8) {
  for (int n = 3; n <= 8; ++n) {
    const auto r = count_resources(synth_qft(n));
    EXPECT_EQ(r.two_qubit_count, std::size_t(n * n + n - 4)) << "n=" << n;
    EXPECT_EQ(r.two_qubit_depth, std::size_t(n * n + n - 4)) << "n=" << n;
  }
}

TEST(KineticBlock, MatchesDenseExponentialUpTo5Qubits) {
  for (int n = 2; n <= 5; ++n)
    for (auto conn : kBoth) {
      const FieldGrid g(n, 4.0);
      const double t = 0.43;
      const CircuitIR c = synth_pi_evolution(g, t, conn);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * pi_squared_operator(g));
      Eigen::VectorXcd ph(es.eigenvalues().size());
      for (Eigen::Index i = 0; i < ph.size(); ++i) ph[i] = std::polar(1.0, -es.eigenvalues()[i] * t);
      const Eigen::MatrixXcd v = es.eigenvectors().cast<cplx>();
      const Eigen::MatrixXcd ref = v * ph.asDiagonal() * v.adjoint();
      EXPECT_LT(distance_up_to_phase(circuit_unitary(c), ref), 1e-10) << "n=" << n;
      if (conn == Connectivity::kLinearChain) expect_adjacent_only(c);
    }
}

TEST(StatePrep, PreparesFreeGroundStateAndCounts) {
  for (int n = 2; n <= 8; ++n)
    for (auto conn : kBoth) {
      const FieldGrid g(n, 4.0);
      HamiltonianSpec free;
      const StateVector target = ground_state(build_hamiltonian(g, free)).state;
      const CircuitIR c = synth_state_prep(n, state_prep_angles(target), conn);
      const StateVector out = simulate(c, StateVector::basis(n, 0));
      for (std::size_t j = 0; j < out.size(); ++j) ASSERT_LT(std::abs(out[j] - target[j]), 1e-10);
      if (conn == Connectivity::kAllToAll) {
        const std::size_t want = n == 2 ? 1 : (std::size_t{1} << (n - 1)) + std::size_t(n) - 3;
        EXPECT_EQ(c.cnot_count(), want) << "n=" << n;
      } else {
        expect_adjacent_only(c);
      }
    }
}

TEST(StatePrep, RejectsAsymmetricTargets) {
  EXPECT_THROW(state_prep_angles(StateVector::basis(3, 1)), DomainError);
}

TEST(DiagonalBlock, MatchesExponentialOfTruncatedPotential) {
  for (int n = 3; n <= 5; ++n)
    for (auto conn : kBoth) {
      const FieldGrid g(n, 4.0);
      Cutoffs cut;
      cut.nu_cut_phi4 = 14;
      const TrotterEngine eng(g, cut);
      const CircuitIR c = synth_phi_evolution(eng, 7.0, 0.3, 0.2, conn);
      const Eigen::MatrixXcd u = circuit_unitary(c);
      Eigen::MatrixXcd ref = Eigen::MatrixXcd::Zero(u.rows(), u.cols());
      for (std::size_t k = 0; k < g.size(); ++k) {
        StateVector s = StateVector::basis(n, k);
        eng.apply_diagonal(s, 7.0, 0.3, 0.2);
        ref(Eigen::Index(k), Eigen::Index(k)) = s[k];
      }
      EXPECT_LT(distance_up_to_phase(u, ref), 1e-10) << "n=" << n;
    }
}

TEST(Assembly, SimulatesLikeTheStateVectorEvolution) {
  for (auto conn : kBoth)
    for (bool cancel : {false, true})
      for (auto cut : {std::optional<std::uint64_t>{}, std::optional<std::uint64_t>{14}}) {
        const FieldGrid g(5, 4.0);
        AspSchedule sch;
        sch.n_steps = 2;
        sch.dt = 0.4;
        sch.cutoffs.nu_cut_phi4 = cut;
        AspCircuitOptions opt;
        opt.connectivity = conn;
        opt.cancel = cancel;
        const CircuitIR c = assemble_asp_circuit(sch, g, opt);
        const StateVector out = simulate(c, StateVector::basis(5, 0));
        const StateVector ref = run_asp(sch, g);
        EXPECT_NEAR(std::norm(inner(out, ref)), 1.0, 1e-10);
      }
}

TEST(Assembly, FirstOrderRejected) {
  AspSchedule sch;
  sch.n_steps = 2;
  sch.trotter_order = 1;
  EXPECT_THROW(assemble_asp_circuit(sch, FieldGrid(5, 4.0)), DomainError);
}

TEST(Cancellation, SharedLadderPrefixNeverIncreasesCount) {
  for (int n = 3; n <= 6; ++n)
    for (std::uint64_t a = 1; a < dim_of(n); ++a)
      for (std::uint64_t b = 1; b < dim_of(n); b += 3) {
        CircuitIR c(n, Connectivity::kAllToAll);
        c.append(synth_sequency_rotation(SequencyOp::from_sequency(a, n), 0.2));
        c.append(synth_sequency_rotation(SequencyOp::from_sequency(b, n), -0.5));
        const CircuitIR d = cancel_cnots(c);
        ASSERT_LE(d.cnot_count(), c.cnot_count());
        if (n <= 4) { ASSERT_LT(distance_up_to_phase(circuit_unitary(d), circuit_unitary(c)), 1e-10); }
      }
}

TEST(Cancellation, RandomCircuitsKeepTheirUnitary) {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> kind(0, 4), q(1, 4);
  std::uniform_real_distribution<double> ang(-3.0, 3.0);
  for (int trial = 0; trial < 200; ++trial) {
    CircuitIR c(4, Connectivity::kAllToAll);
    for (int i = 0; i < 40; ++i) {
      const int a = q(rng);
      int b = q(rng);
      if (b == a) b = a % 4 + 1;
      switch (kind(rng)) {
        case 0: c.cx(a, b); break;
        case 1: c.cx(a, b); c.cx(a, b); break;
        case 2: c.rz(a, ang(rng)); break;
        case 3: c.phase(a, ang(rng)); break;
        default: c.h(a); break;
      }
    }
    const CircuitIR d = cancel_cnots(c);
    ASSERT_LE(d.cnot_count(), c.cnot_count());
    ASSERT_LT(distance_up_to_phase(circuit_unitary(d), circuit_unitary(c)), 1e-10);
  }
}

TEST(Routing, LinearChainCnotCost) {
  for (int d = 2; d <= 5; ++d) {
    CircuitIR c(6, Connectivity::kLinearChain);
    c.cx(1, 1 + d);
    EXPECT_EQ(c.cnot_count(), std::size_t(4 * (d - 1)));
    CircuitIR ref(6, Connectivity::kAllToAll);
    ref.cx(1, 1 + d);
    EXPECT_LT(distance_up_to_phase(circuit_unitary(c), circuit_unitary(ref)), 1e-12);
    CircuitIR back(6, Connectivity::kLinearChain);
    back.cx(1 + d, 1);
    CircuitIR rb(6, Connectivity::kAllToAll);
    rb.cx(1 + d, 1);
    EXPECT_LT(distance_up_to_phase(circuit_unitary(back), circuit_unitary(rb)), 1e-12);
  }
  CircuitIR c(3, Connectivity::kLinearChain);
  EXPECT_THROW(c.push({GateKind::kCnot, 1, 3, 0.0, {}}), DomainError);
  EXPECT_THROW(c.h(4), DomainError);
}

TEST(Resources, BlocksSumToTotal) {
  AspSchedule sch;
  sch.n_steps = 2;
  sch.dt = 0.4;
  sch.cutoffs.nu_cut_phi4 = 14;
  AspCircuitOptions opt;
  opt.connectivity = Connectivity::kAllToAll;
  const auto r = count_resources(assemble_asp_circuit(sch, FieldGrid(5, 4.0), opt));
  std::size_t sum = 0;
  for (const auto& [name, b] : r.by_block) {
    sum += b.count;
    EXPECT_LE(b.depth, r.two_qubit_depth);
  }
  EXPECT_EQ(sum, r.two_qubit_count);
  for (const char* name : {"state_prep", "phi", "qft", "pi_diag", "qft_inv"}) EXPECT_EQ(r.by_block.count(name), 1u);
}

TEST(Qasm, HeaderAndGateLines) {
  CircuitIR c(3, Connectivity::kAllToAll);
  c.h(1);
  c.cx(1, 3);
  c.rz(2, 0.5);
  c.ry(3, -0.25);
  c.phase(1, 1.0);
  const std::string q = export_qasm(c);
  std::istringstream is(q);
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "OPENQASM 2.0; include \"qelib1.inc\";");
  std::getline(is, line);
  EXPECT_EQ(line, "qreg q[3];");
  std::vector<std::string> body;
  while (std::getline(is, line)) body.push_back(line);
  ASSERT_EQ(body.size(), 5u);
  EXPECT_EQ(body[0], "h q[2];");
  EXPECT_EQ(body[1], "cx q[2],q[0];");
  EXPECT_EQ(body[2], "rz(0.5) q[1];");
  EXPECT_EQ(body[3], "ry(-0.25) q[0];");
  EXPECT_EQ(body[4], "u1(1) q[2];");
}

TEST(Qasm, CnotLinesMatchCount) {
  AspSchedule sch;
  sch.n_steps = 2;
  sch.dt = 0.4;
  const CircuitIR c = assemble_asp_circuit(sch, FieldGrid(5, 4.0));
  const std::string q = export_qasm(c);
  std::size_t cx = 0;
  for (std::size_t p = q.find("\ncx "); p != std::string::npos; p = q.find("\ncx ", p + 1)) ++cx;
  EXPECT_EQ(cx, c.cnot_count());
  EXPECT_EQ(q.rfind(kQasmHeader, 0), 0u);
}

}  // namespace
}  // namespace seqht
