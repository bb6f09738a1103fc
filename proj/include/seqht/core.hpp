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

#pragma once

#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace seqht {

using cplx = std::complex<double>;
using Mask = std::uint64_t;

// Error taxonomy. All derive from std::runtime_error so callers can catch broadly.
struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DegenerateTruncation : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ResourceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ConvergenceError : std::runtime_error {
  double residual;
  ConvergenceError(const std::string& what, double r)
      : std::runtime_error(what), residual(r) {}
};
struct SerializationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr int kMaxQubits = 24;

inline std::size_t dim_of(int n_qubits) {
  if (n_qubits < 1 || n_qubits > kMaxQubits)
    throw DomainError("n_qubits out of range: " + std::to_string(n_qubits));
  return std::size_t{1} << n_qubits;
}

// log2 of an exact power of two, or throws.
inline int qubits_for_length(std::size_t len) {
  if (len < 2 || !std::has_single_bit(len))
    throw DomainError("length " + std::to_string(len) +
                      " is not a power of two >= 2");
  return std::countr_zero(len);
}

// Index-bit position of 1-based qubit q (qubit 1 is the most significant).
inline int bit_of_qubit(int q, int n_qubits) { return n_qubits - q; }

inline int parity(Mask m) { return std::popcount(m) & 1; }

// Real diagonal of a Hermitian operator in the computational basis.
struct DiagonalVector {
  std::vector<double> entries;

  DiagonalVector() = default;
  explicit DiagonalVector(std::vector<double> e) : entries(std::move(e)) {
    qubits_for_length(entries.size());
  }
  int n_qubits() const { return qubits_for_length(entries.size()); }
  std::size_t size() const { return entries.size(); }
  double operator[](std::size_t i) const { return entries[i]; }
  double& operator[](std::size_t i) { return entries[i]; }
};

// Complex amplitude vector of unit norm.
struct StateVector {
  std::vector<cplx> amplitudes;

  StateVector() = default;
  explicit StateVector(std::vector<cplx> a) : amplitudes(std::move(a)) {
    qubits_for_length(amplitudes.size());
  }
  int n_qubits() const { return qubits_for_length(amplitudes.size()); }
  std::size_t size() const { return amplitudes.size(); }
  cplx operator[](std::size_t i) const { return amplitudes[i]; }
  cplx& operator[](std::size_t i) { return amplitudes[i]; }

  double norm() const {
    double s = 0.0;
    for (const auto& a : amplitudes) s += std::norm(a);
    return std::sqrt(s);
  }
  bool is_normalized(double tol = 1e-10) const {
    return std::abs(norm() - 1.0) <= tol;
  }
  void normalize() {
    const double n = norm();
    if (n == 0.0) throw DegenerateTruncation("cannot normalize the zero vector");
    for (auto& a : amplitudes) a /= n;
  }

  static StateVector basis(int n_qubits, std::size_t index) {
    std::vector<cplx> a(dim_of(n_qubits));
    a.at(index) = 1.0;
    return StateVector(std::move(a));
  }
  static StateVector uniform(int n_qubits) {
    const std::size_t d = dim_of(n_qubits);
    return StateVector(std::vector<cplx>(d, cplx(1.0 / std::sqrt(double(d)))));
  }
  static StateVector from_real(const std::vector<double>& v) {
    return StateVector(std::vector<cplx>(v.begin(), v.end()));
  }
};

inline cplx inner(const StateVector& a, const StateVector& b) {
  if (a.size() != b.size()) throw DomainError("state dimensions differ");
  cplx s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

}  // namespace seqht
