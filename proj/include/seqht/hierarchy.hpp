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

// Upper bounds on Walsh coefficients of x^p on [-x_M, x_M].
//
// Every basis function of sequency nu in octave k = floor(log2 nu) is constant
// beyond its last level crossing x_nu = x_M (1 - 2^-k), which caps the
// normalized coefficient at 1 - (x_nu / x_M)^{p+1}.

#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "seqht/field.hpp"
#include "seqht/walsh.hpp"

namespace seqht {

inline int octave(std::uint64_t nu) { return std::bit_width(nu) - 1; }

inline double last_crossing(std::uint64_t nu, double x_max) {
  if (nu == 0) throw DomainError("sequency 0 has no level crossing");
  if (!(x_max > 0.0)) throw DomainError("x_max must be positive");
  return x_max * (1.0 - std::ldexp(1.0, -octave(nu)));
}

inline std::uint64_t crossing_count_prefix(std::uint64_t nu, int n_qubits) {
  if (nu == 0) throw DomainError("sequency must be >= 1");
  check_sequency(nu, n_qubits);
  return std::uint64_t{1} << (n_qubits - 1 - octave(nu));
}

inline double monomial_bound(int p, std::uint64_t nu) {
  if (p < 0) throw DomainError("order must be >= 0");
  if (nu == 0) return p % 2 == 0 ? 1.0 : 0.0;
  if (int(nu % 2) != p % 2) return 0.0;
  return 1.0 - std::pow(1.0 - std::ldexp(1.0, -octave(nu)), p + 1);
}

// 2 x_M^{p+1} / (p+1): converts normalized bounds back to raw coefficients.
inline double bound_scale(int p, double x_max) {
  return 2.0 * std::pow(x_max, p + 1) / double(p + 1);
}

// beta_nu / beta_0 of the digitized x^p. The ratio uses the discrete identity
// coefficient, so nu = 0 is exactly 1.
inline WalshSpectrum normalized_spectrum(int p, double x_max, int n_qubits) {
  const FieldGrid g(n_qubits, x_max);
  WalshSpectrum s = decompose(phi_power_operator(g, p));
  const double b0 = s.at(0);
  if (b0 == 0.0) throw DomainError("odd power has no identity component to normalize by");
  for (auto& [nu, c] : s.coefficients) c /= b0;
  return s;
}

inline double normalized_coefficient(int p, std::uint64_t nu, double x_max, int n_qubits) {
  check_sequency(nu, n_qubits);
  return normalized_spectrum(p, x_max, n_qubits).at(nu);
}

// Continuum limit of beta_nu for x^p: the mean of x^p w_nu(x) over [-x_M, x_M],
// with w_nu constant on 2^m dyadic intervals, m = bit_width(nu).
inline double continuum_coefficient(int p, std::uint64_t nu, double x_max) {
  if (p < 0) throw DomainError("order must be >= 0");
  if (!(x_max > 0.0)) throw DomainError("x_max must be positive");
  const int m = std::max(1, int(std::bit_width(nu)));
  if (m > kMaxQubits) throw DomainError("sequency too large");
  const DiagonalVector row = walsh_row(nu, m);
  const std::size_t k = row.size();
  const double w = 2.0 * x_max / double(k);
  double s = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    const double a = -x_max + double(j) * w, b = a + w;
    s += row.entries[j] * (std::pow(b, p + 1) - std::pow(a, p + 1));
  }
  return s / double(p + 1) / (2.0 * x_max);
}

struct SeriesTerm {
  int p = 0;
  double a = 0.0;
};

inline double series_bound(const std::vector<SeriesTerm>& terms, std::uint64_t nu,
                           double x_max) {
  double s = 0.0;
  for (const auto& t : terms) s += std::abs(t.a) * monomial_bound(t.p, nu) * bound_scale(t.p, x_max);
  return s;
}

struct BoundEntry {
  double beta_tilde = 0.0;
  double bound = 0.0;
};

struct BoundProfile {
  int p = 0;
  double x_max = 1.0;
  int n_qubits = 1;
  std::map<std::uint64_t, BoundEntry> entries;

  std::size_t violations(double tol = 1e-12) const {
    std::size_t v = 0;
    for (const auto& [nu, e] : entries)
      if (std::abs(e.beta_tilde) > e.bound + tol) ++v;
    return v;
  }
};

// Rows for every even sequency (or every sequency when even_only is false).
inline BoundProfile bound_profile(int p, double x_max, int n_qubits, bool even_only = true) {
  BoundProfile prof{p, x_max, n_qubits, {}};
  const WalshSpectrum s = normalized_spectrum(p, x_max, n_qubits);
  for (const auto& [nu, c] : s.coefficients) {
    if (even_only && nu % 2 != 0) continue;
    prof.entries.emplace(nu, BoundEntry{c, monomial_bound(p, nu)});
  }
  return prof;
}

}  // namespace seqht
