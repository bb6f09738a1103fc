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

// Sequency-ordered Walsh basis of diagonal operators on n qubits.
//
// Operator O_nu is a tensor product of I and Z. Its diagonal is row nu of
// the sequency-ordered Walsh-Hadamard matrix, which changes sign exactly nu
// times. The Z placement is the bit-reversed Gray code of nu.
//
// Masks are stored in index convention: bit (n - q) of the mask is set when
// Z acts on 1-based qubit q, so `popcount(j & mask)` gives the sign exponent
// of basis state j directly.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <type_traits>
#include <vector>

#include "seqht/core.hpp"

namespace seqht {

inline Mask reverse_bits(Mask v, int n_bits) {
  Mask r = 0;
  for (int b = 0; b < n_bits; ++b)
    if ((v >> b) & 1U) r |= Mask{1} << (n_bits - 1 - b);
  return r;
}

inline Mask gray_encode(Mask v) { return v ^ (v >> 1); }

inline Mask gray_decode(Mask g) {
  Mask v = g;
  for (Mask s = g >> 1; s != 0; s >>= 1) v ^= s;
  return v;
}

inline void check_sequency(std::uint64_t nu, int n_qubits) {
  const std::size_t d = dim_of(n_qubits);
  if (nu >= d)
    throw DomainError("sequency " + std::to_string(nu) + " out of range for " +
                      std::to_string(n_qubits) + " qubits");
}

inline Mask sequency_to_zmask(std::uint64_t nu, int n_qubits) {
  check_sequency(nu, n_qubits);
  return reverse_bits(gray_encode(nu), n_qubits);
}

inline std::uint64_t zmask_to_sequency(Mask z_mask, int n_qubits) {
  if (z_mask >= dim_of(n_qubits)) throw DomainError("z_mask wider than register");
  return gray_decode(reverse_bits(z_mask, n_qubits));
}

// One Walsh basis operator.
struct SequencyOp {
  std::uint64_t nu = 0;
  int n_qubits = 1;
  Mask z_mask = 0;

  static SequencyOp from_sequency(std::uint64_t nu, int n_qubits) {
    return {nu, n_qubits, sequency_to_zmask(nu, n_qubits)};
  }
  static SequencyOp from_mask(Mask z_mask, int n_qubits) {
    return {zmask_to_sequency(z_mask, n_qubits), n_qubits, z_mask};
  }

  bool acts_on(int qubit) const {
    return (z_mask >> bit_of_qubit(qubit, n_qubits)) & 1U;
  }
  int weight() const { return std::popcount(z_mask); }

  // 1-based qubits carrying Z, most significant first.
  std::vector<int> qubits() const {
    std::vector<int> q;
    for (int k = 1; k <= n_qubits; ++k)
      if (acts_on(k)) q.push_back(k);
    return q;
  }

  // Pauli label with qubit 1 leftmost, e.g. "IIZIZ".
  std::string label() const {
    std::string s;
    for (int k = 1; k <= n_qubits; ++k) s += acts_on(k) ? 'Z' : 'I';
    return s;
  }
};

inline DiagonalVector walsh_row(std::uint64_t nu, int n_qubits) {
  const Mask m = sequency_to_zmask(nu, n_qubits);
  std::vector<double> e(dim_of(n_qubits));
  for (std::size_t j = 0; j < e.size(); ++j) e[j] = parity(j & m) ? -1.0 : 1.0;
  return DiagonalVector(std::move(e));
}

template <class T>
std::size_t count_sign_changes(const std::vector<T>& v) {
  std::size_t n = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if ((v[i] < 0) != (v[i - 1] < 0)) ++n;
  return n;
}

namespace detail {

// Unnormalized Walsh-Hadamard transform in natural (mask) order.
template <class T>
void fwht(std::vector<T>& a) {
  for (std::size_t h = 1; h < a.size(); h <<= 1)
    for (std::size_t i = 0; i < a.size(); i += h << 1)
      for (std::size_t j = i; j < i + h; ++j) {
        const T x = a[j], y = a[j + h];
        a[j] = x + y;
        a[j + h] = x - y;
      }
}

template <class T>
double magnitude(const T& v) {
  return std::abs(v);
}

}  // namespace detail

// Sparse map nu -> coefficient. T is double for operators and cplx for states.
template <class T>
struct BasicWalshSpectrum {
  int n_qubits = 1;
  std::map<std::uint64_t, T> coefficients;

  T at(std::uint64_t nu) const {
    auto it = coefficients.find(nu);
    return it == coefficients.end() ? T{} : it->second;
  }
  double max_abs() const {
    double m = 0.0;
    for (const auto& [nu, c] : coefficients) m = std::max(m, detail::magnitude(c));
    return m;
  }
  // Sequencies whose coefficient exceeds rel_tol * max|c|.
  std::vector<std::uint64_t> support(double rel_tol = 1e-12) const {
    const double cut = rel_tol * max_abs();
    std::vector<std::uint64_t> s;
    for (const auto& [nu, c] : coefficients)
      if (detail::magnitude(c) > cut) s.push_back(nu);
    return s;
  }
};

using WalshSpectrum = BasicWalshSpectrum<double>;
using StateSpectrum = BasicWalshSpectrum<cplx>;

template <class T>
BasicWalshSpectrum<T> decompose_values(std::vector<T> v) {
  const int n = qubits_for_length(v.size());
  detail::fwht(v);
  const double inv = 1.0 / double(v.size());
  BasicWalshSpectrum<T> s{n, {}};
  for (std::uint64_t nu = 0; nu < v.size(); ++nu)
    s.coefficients.emplace(nu, v[sequency_to_zmask(nu, n)] * inv);
  return s;
}

template <class T>
std::vector<T> reconstruct_values(const BasicWalshSpectrum<T>& s) {
  std::vector<T> v(dim_of(s.n_qubits), T{});
  for (const auto& [nu, c] : s.coefficients) v[sequency_to_zmask(nu, s.n_qubits)] += c;
  detail::fwht(v);
  return v;
}

inline WalshSpectrum decompose(const DiagonalVector& diag) {
  return decompose_values(diag.entries);
}

inline DiagonalVector reconstruct(const WalshSpectrum& s) {
  return DiagonalVector(reconstruct_values(s));
}

template <class T>
BasicWalshSpectrum<T> truncate(const BasicWalshSpectrum<T>& s, std::uint64_t nu_cut,
                               bool drop_identity) {
  BasicWalshSpectrum<T> out{s.n_qubits, {}};
  for (const auto& [nu, c] : s.coefficients) {
    if (nu > nu_cut) break;
    if (drop_identity && nu == 0) continue;
    out.coefficients.emplace(nu, c);
  }
  return out;
}

inline StateSpectrum decompose_state(const StateVector& state) {
  if (!state.is_normalized()) throw DomainError("decompose_state: state is not normalized");
  return decompose_values(state.amplitudes);
}

inline StateVector reconstruct_state(const StateSpectrum& s) {
  StateVector out(reconstruct_values(s));
  double n2 = 0.0;
  for (const auto& a : out.amplitudes) n2 += std::norm(a);
  if (n2 <= 1e-300)
    throw DegenerateTruncation("every surviving sequency coefficient is zero");
  out.normalize();
  return out;
}

// Diagonal of the operator truncated at nu_cut; identity optionally dropped.
inline DiagonalVector truncated_diagonal(const DiagonalVector& d, std::uint64_t nu_cut,
                                         bool drop_identity) {
  return reconstruct(truncate(decompose(d), nu_cut, drop_identity));
}

}  // namespace seqht
