// Apache License, Version 2.0, refer to LICENSE.txt
// Test-side helpers. These are written from first principles and do not call
// the library routines they are used to check.
#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "puchain/puchain.hpp"

namespace testsupport {

inline int popcount(std::uint64_t x) { return __builtin_popcountll(x); }

/// Erdos-Renyi mass of the simple graph with dyad bitmask `code`.
inline double er_mass(std::uint64_t code, std::size_t N, double p) {
  const int k = popcount(code);
  return std::pow(p, k) * std::pow(1.0 - p, static_cast<double>(N) - k);
}

/// Row-major n x n matrix from a function of (a, b).
template <class F>
puchain::StochasticMatrix build_matrix(std::size_t n, F f) {
  std::vector<double> e(n * n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) e[a * n + b] = f(a, b);
  }
  return puchain::StochasticMatrix(n, n, std::move(e));
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline puchain::Trajectory traj(std::size_t states, std::vector<puchain::StateIndex> x) {
  return puchain::Trajectory(states, std::move(x));
}

}  // namespace testsupport
