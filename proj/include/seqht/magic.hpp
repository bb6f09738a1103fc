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

// Linear stabilizer magic M_lin = 1 - sum_P <P>^4 / d.
//
// For a fixed X part x, the expectations over all Z parts z are one
// Walsh-Hadamard transform of v_j = conj(psi_{j^x}) psi_j, so the full sum over
// 4^n strings costs d^2 log d instead of d^3.

#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "seqht/core.hpp"
#include "seqht/field.hpp"
#include "seqht/walsh.hpp"

namespace seqht {

// X on bits of x_mask, Z on bits of z_mask, Y = iXZ where both are set.
// Masks use index convention (bit n - q for qubit q).
struct PauliString {
  int n_qubits = 1;
  Mask x_mask = 0;
  Mask z_mask = 0;

  static PauliString parse(const std::string& label) {
    PauliString p{int(label.size()), 0, 0};
    const int n = p.n_qubits;
    for (int q = 1; q <= n; ++q) {
      const Mask b = Mask{1} << bit_of_qubit(q, n);
      switch (label[q - 1]) {
        case 'I': break;
        case 'X': p.x_mask |= b; break;
        case 'Z': p.z_mask |= b; break;
        case 'Y': p.x_mask |= b; p.z_mask |= b; break;
        default: throw DomainError("bad Pauli label: " + label);
      }
    }
    return p;
  }
};

inline double pauli_expectation(const StateVector& s, const PauliString& p) {
  const std::size_t d = s.size();
  if (p.n_qubits != s.n_qubits() || p.x_mask >= d || p.z_mask >= d)
    throw DomainError("Pauli string wider than the register");
  static const cplx kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  const cplx ph = kIPow[std::popcount(p.x_mask & p.z_mask) & 3];
  cplx acc = 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    const cplx t = std::conj(s[j ^ p.x_mask]) * s[j];
    acc += parity(j & p.z_mask) ? -t : t;
  }
  return (ph * acc).real();
}

struct MagicReport {
  double m_lin = 0.0;
  std::size_t d = 0;
  double sum_xi = 0.0;
  std::size_t n_nonzero = 0;
};

inline constexpr int kMaxMagicQubits = 10;

inline MagicReport linear_magic(const StateVector& s, double zero_tol = 1e-12) {
  const int n = s.n_qubits();
  if (n > kMaxMagicQubits)
    throw ResourceError("linear magic over 4^" + std::to_string(n) + " strings needs ~" +
                        std::to_string(std::ldexp(1.0, 2 * n) * n) +
                        " operations; limit is n_qubits <= 10");
  if (!s.is_normalized()) throw DomainError("linear_magic: state is not normalized");
  const std::size_t d = s.size();
  MagicReport r{0.0, d, 0.0, 0};
  std::vector<cplx> v(d);
  double sum4 = 0.0, sum2 = 0.0;
  for (std::size_t x = 0; x < d; ++x) {
    for (std::size_t j = 0; j < d; ++j) v[j] = std::conj(s[j ^ x]) * s[j];
    detail::fwht(v);
    for (const auto& c : v) {
      const double c2 = std::norm(c);
      sum2 += c2;
      sum4 += c2 * c2;
      if (std::sqrt(c2) > zero_tol) ++r.n_nonzero;
    }
  }
  r.sum_xi = sum2 / double(d);
  r.m_lin = 1.0 - sum4 / double(d);
  return r;
}

// psi(phi) proportional to exp(-(phi - center)^2 / (4 sigma^2)), renormalized.
inline StateVector gaussian_state(double sigma, double center, const FieldGrid& g) {
  if (!(sigma > 0.0)) throw DomainError("sigma must be positive");
  std::vector<cplx> a(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double u = g.values[j] - center;
    a[j] = std::exp(-u * u / (4.0 * sigma * sigma));
  }
  StateVector s(std::move(a));
  s.normalize();
  return s;
}

inline StateVector truncated_state(const StateVector& s, std::uint64_t nu_cut) {
  return reconstruct_state(truncate(decompose_state(s), nu_cut, false));
}

inline std::map<std::uint64_t, MagicReport> truncated_magic_profile(
    const StateVector& s, const std::vector<std::uint64_t>& nu_cuts) {
  const StateSpectrum spec = decompose_state(s);
  std::map<std::uint64_t, MagicReport> out;
  for (const auto cut : nu_cuts)
    out.emplace(cut, linear_magic(reconstruct_state(truncate(spec, cut, false))));
  return out;
}

}  // namespace seqht
