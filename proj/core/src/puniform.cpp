// Apache License, Version 2.0, refer to LICENSE.txt
#include "puchain/puniform.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace puchain {

Trajectory::Trajectory(std::size_t num_states, std::vector<StateIndex> states)
    : num_states_(num_states), states_(std::move(states)) {
  if (num_states_ == 0) throw std::invalid_argument("trajectory over an empty state space");
  for (StateIndex s : states_) {
    if (s >= num_states_) throw std::invalid_argument("trajectory state " + std::to_string(s) + " out of range");
  }
}

PuniformCheck check_puniform(std::span<const double> table, std::size_t n, const PermutationFamily& family,
                             double tol) {
  if (table.size() != n * n || family.size() != n) {
    throw std::invalid_argument("check_puniform: dimension mismatch");
  }
  PuniformCheck result{true, std::nullopt, 0.0};
  for (std::size_t a = 1; a < n; ++a) {
    for (std::size_t c = 0; c < n; ++c) {
      const auto cs = static_cast<StateIndex>(c);
      const double lhs = table[a * n + family.apply_inverse(static_cast<StateIndex>(a), cs)];
      const double rhs = table[family.apply_inverse(0, cs)];
      const double deviation = std::abs(lhs - rhs);
      result.max_deviation = std::max(result.max_deviation, deviation);
      if (deviation > tol && result.puniform) {
        result.puniform = false;
        result.violation = ViolationTriple{static_cast<StateIndex>(a), 0, cs};
      }
    }
  }
  return result;
}

PuniformCheck check_puniform(const StochasticMatrix& P, const PermutationFamily& family, double tol) {
  return check_puniform(P.entries(), P.size(), family, tol);
}

PuniformWitness::PuniformWitness(const StochasticMatrix& P, PermutationFamily family, Pmf common_row,
                                 StateIndex reference_state, double tol)
    : family_(std::move(family)), common_row_(std::move(common_row)), reference_state_(reference_state) {
  const std::size_t n = P.size();
  if (family_.size() != n || common_row_.size() != n) {
    throw std::invalid_argument("witness dimensions do not match the matrix");
  }
  if (reference_state_ >= n) throw std::invalid_argument("reference state out of range");
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      const double expected = common_row_[family_.apply(static_cast<StateIndex>(a), static_cast<StateIndex>(b))];
      if (std::abs(P(a, b) - expected) > tol) {
        throw std::invalid_argument("P(" + std::to_string(a) + ", " + std::to_string(b) +
                                    ") != mu(sigma_a b): not a p-uniform witness");
      }
    }
  }
}

namespace {

std::vector<StateIndex> stable_value_order(std::span<const double> row) {
  std::vector<StateIndex> order(row.size());
  std::iota(order.begin(), order.end(), StateIndex{0});
  std::stable_sort(order.begin(), order.end(), [&](StateIndex x, StateIndex y) { return row[x] < row[y]; });
  return order;
}

}  // namespace

PuniformAnalysis analyze_puniform(const StochasticMatrix& P, double tol) {
  const std::size_t n = P.size();
  const auto reference = P.row(0);
  const auto reference_order = stable_value_order(reference);

  std::vector<Permutation> sigma;
  sigma.reserve(n);
  for (std::size_t a = 0; a < n; ++a) {
    const auto row = P.row(a);
    const auto order = stable_value_order(row);
    Permutation s(n);
    for (std::size_t k = 0; k < n; ++k) {
      if (std::abs(row[order[k]] - reference[reference_order[k]]) > tol) {
        // Row multisets differ, so no family can succeed. Under the rank-matched
        // candidate, state order[k] of row a lands on c = reference_order[k].
        return {std::nullopt, ViolationTriple{static_cast<StateIndex>(a), 0, reference_order[k]}};
      }
      s[order[k]] = reference_order[k];
    }
    sigma.push_back(std::move(s));
  }

  PermutationFamily family(std::move(sigma));
  const auto check = check_puniform(P, family, tol);
  if (!check) return {std::nullopt, check.violation};
  std::vector<double> mu(reference.begin(), reference.end());
  return {PuniformWitness(P, std::move(family), Pmf(std::move(mu)), 0, std::max(tol, 1e-10)), std::nullopt};
}

std::optional<PuniformWitness> detect_puniform(const StochasticMatrix& P, double tol) {
  return analyze_puniform(P, tol).witness;
}

Trajectory chain_to_iid(const Trajectory& x, const PermutationFamily& family) {
  if (x.empty()) throw std::invalid_argument("chain_to_iid needs a non-empty trajectory");
  if (x.num_states() != family.size()) throw std::invalid_argument("family and trajectory sizes differ");
  std::vector<StateIndex> z;
  z.reserve(x.num_transitions());
  for (std::size_t i = 0; i + 1 < x.size(); ++i) z.push_back(family.apply(x[i], x[i + 1]));
  return Trajectory(x.num_states(), std::move(z));
}

Trajectory iid_to_chain(StateIndex x0, const Trajectory& z, const PermutationFamily& family) {
  if (z.num_states() != family.size()) throw std::invalid_argument("family and sequence sizes differ");
  if (x0 >= family.size()) throw std::invalid_argument("initial state out of range");
  std::vector<StateIndex> x;
  x.reserve(z.size() + 1);
  x.push_back(x0);
  for (StateIndex zi : z.states()) x.push_back(family.apply_inverse(x.back(), zi));
  return Trajectory(z.num_states(), std::move(x));
}

Permutation induced_function(const PermutationFamily& family, StateIndex z) {
  if (z >= family.size()) throw std::invalid_argument("state out of range");
  Permutation f(family.size());
  for (std::size_t b = 0; b < f.size(); ++b) f[b] = family.apply_inverse(static_cast<StateIndex>(b), z);
  return f;
}

bool induced_maps_are_valid(const PermutationFamily& family) {
  const std::size_t n = family.size();
  std::vector<Permutation> maps;
  maps.reserve(n);
  for (std::size_t z = 0; z < n; ++z) maps.push_back(induced_function(family, static_cast<StateIndex>(z)));

  for (std::size_t b = 0; b < n; ++b) {
    std::vector<bool> hit(n, false);
    for (std::size_t z = 0; z < n; ++z) {
      const StateIndex image = maps[z][b];
      if (hit[image]) return false;
      hit[image] = true;
    }
  }
  // Bijectivity in z for any fixed b already separates the maps; the pairwise
  // comparison below checks it directly.
  std::vector<Permutation> sorted = maps;
  std::sort(sorted.begin(), sorted.end());
  return std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
}

SymmetryTransferReport symmetry_transfer_check(const StochasticMatrix& P, const PermutationFamily& family,
                                               const Pmf& mu, double tol) {
  // Validates P(a, b) = mu(sigma_a b).
  PuniformWitness witness(P, family, mu, 0, tol);
  const std::size_t n = P.size();

  SymmetryTransferReport report{};
  report.family_symmetric = is_symmetric_family(family).symmetric;
  report.matrix_symmetric = true;
  for (std::size_t a = 0; a < n && report.matrix_symmetric; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      if (std::abs(P(a, b) - P(b, a)) > tol) {
        report.matrix_symmetric = false;
        break;
      }
    }
  }
  std::vector<double> sorted(mu.values().begin(), mu.values().end());
  std::sort(sorted.begin(), sorted.end());
  report.distinct_common_row = std::adjacent_find(sorted.begin(), sorted.end(), [&](double x, double y) {
                                 return std::abs(x - y) <= tol;
                               }) == sorted.end();

  if (report.family_symmetric && !report.matrix_symmetric) {
    throw InvariantViolation("symmetric family produced a non-symmetric p-uniform matrix");
  }
  if (report.matrix_symmetric && report.distinct_common_row && !report.family_symmetric) {
    throw InvariantViolation("symmetric matrix with distinct common-row entries has a non-symmetric family");
  }
  return report;
}

}  // namespace puchain
