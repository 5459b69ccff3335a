// Apache License, Version 2.0, refer to LICENSE.txt
#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "puchain/matrix.hpp"
#include "puchain/permutation.hpp"
#include "puchain/state_space.hpp"

namespace puchain {

/// Values closer than this are treated as tied when matching rows.
inline constexpr double kDefaultMatchTolerance = 1e-9;

/// A path x_0, ..., x_T of state indices (or an iid sequence z_1, ..., z_T).
class Trajectory {
 public:
  Trajectory(std::size_t num_states, std::vector<StateIndex> states);

  std::size_t num_states() const { return num_states_; }
  std::span<const StateIndex> states() const { return states_; }
  std::size_t size() const { return states_.size(); }
  bool empty() const { return states_.empty(); }
  std::size_t num_transitions() const { return states_.empty() ? 0 : states_.size() - 1; }
  StateIndex operator[](std::size_t i) const { return states_[i]; }

  bool operator==(const Trajectory&) const = default;

 private:
  std::size_t num_states_;
  std::vector<StateIndex> states_;
};

/// (a, b, c) such that f(a, sigma_a^{-1} c) != f(b, sigma_b^{-1} c).
using ViolationTriple = std::array<StateIndex, 3>;

struct PuniformCheck {
  bool puniform;
  std::optional<ViolationTriple> violation;
  double max_deviation;
  explicit operator bool() const { return puniform; }
};

/// Checks f(a, sigma_a^{-1} c) == f(0, sigma_0^{-1} c) within tol for all a, c.
/// `table` is an n x n row-major array of any per-transition quantity.
PuniformCheck check_puniform(std::span<const double> table, std::size_t n, const PermutationFamily& family,
                             double tol = kDefaultMatchTolerance);
PuniformCheck check_puniform(const StochasticMatrix& P, const PermutationFamily& family,
                             double tol = kDefaultMatchTolerance);

/// A certified representation P(a, b) = common_row(sigma_a b).
class PuniformWitness {
 public:
  /// Throws std::invalid_argument unless the representation holds within tol.
  PuniformWitness(const StochasticMatrix& P, PermutationFamily family, Pmf common_row,
                  StateIndex reference_state = 0, double tol = 1e-10);

  const PermutationFamily& family() const { return family_; }
  const Pmf& common_row() const { return common_row_; }
  StateIndex reference_state() const { return reference_state_; }

 private:
  PermutationFamily family_;
  Pmf common_row_;
  StateIndex reference_state_;
};

struct PuniformAnalysis {
  std::optional<PuniformWitness> witness;
  /// When there is no witness: a triple violating the rank-matched candidate family.
  std::optional<ViolationTriple> violation;
};

/// Tries to write P(a, b) = mu(sigma_a b) with sigma_0 = identity and mu = row 0.
///
/// Each row is stably sorted by value; sigma_a sends the k-th smallest entry
/// of row a to the position of the k-th smallest entry of row 0. Rows whose
/// sorted values differ from row 0's by more than tol rule out every family.
PuniformAnalysis analyze_puniform(const StochasticMatrix& P, double tol = kDefaultMatchTolerance);
std::optional<PuniformWitness> detect_puniform(const StochasticMatrix& P, double tol = kDefaultMatchTolerance);

/// z_{i+1} = sigma_{x_i}(x_{i+1}); the result is one shorter than x.
Trajectory chain_to_iid(const Trajectory& x, const PermutationFamily& family);

/// x_0 = x0 and x_{i+1} = sigma_{x_i}^{-1}(z_{i+1}).
Trajectory iid_to_chain(StateIndex x0, const Trajectory& z, const PermutationFamily& family);

/// The map f_z(b) = sigma_b^{-1}(z), so that x_{i+1} = f_{z_{i+1}}(x_i).
Permutation induced_function(const PermutationFamily& family, StateIndex z);

/// Exhaustively confirms that z -> f_z is injective and that z -> f_z(b) is a
/// bijection for every b.
bool induced_maps_are_valid(const PermutationFamily& family);

struct SymmetryTransferReport {
  bool family_symmetric;
  bool matrix_symmetric;
  bool distinct_common_row;
};

/// Checks the two symmetry implications for a p-uniform triple (P, sigma, mu):
/// symmetric sigma gives symmetric P, and symmetric P with distinct mu entries
/// gives symmetric sigma. Throws std::invalid_argument when P(a, b) != mu(sigma_a b)
/// and InvariantViolation when an implication fails.
SymmetryTransferReport symmetry_transfer_check(const StochasticMatrix& P, const PermutationFamily& family,
                                               const Pmf& mu, double tol = 1e-10);

}  // namespace puchain
