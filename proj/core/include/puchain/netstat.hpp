// Apache License, Version 2.0, refer to LICENSE.txt
#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "puchain/matrix.hpp"
#include "puchain/permutation.hpp"
#include "puchain/state_space.hpp"

namespace puchain {

// ---------------------------------------------------------------------------
// Simple-graph operations (t = 1)

Multigraph complement(const Multigraph& g);
Multigraph symmetric_difference(const Multigraph& a, const Multigraph& b);

/// |E(b)| / (n - 1). The first argument is the previous state and is unused.
double stat_density(const Multigraph& a, const Multigraph& b);
/// |E(complement(a xor b))| / (n - 1).
double stat_stability(const Multigraph& a, const Multigraph& b);

/// Sum of i<j<k of a(ij) a(jk), the two-paths counted by the transitivity statistic.
int two_path_count(const Multigraph& a);
/// n * [sum_{i<j<k} a(ij) a(jk)]^{-1} * sum_{i<j<k} b(ik) a(ij) a(jk), 0 when a has no two-paths.
double stat_transitivity(const Multigraph& a, const Multigraph& b);
int triangle_count(const Multigraph& g);

/// Weighted degrees: entry u is the sum of multiplicities of dyads at u.
std::vector<int> degree_sequence(const Multigraph& g);
/// Degree sequence sorted in decreasing order.
std::vector<int> sorted_degree_sequence(const Multigraph& g);

/// A loop-free directed graph stored as a flat n x n adjacency vector.
class DirectedGraph {
 public:
  explicit DirectedGraph(int n);
  DirectedGraph(int n, std::vector<std::uint8_t> adjacency);

  /// Bits of `code` fill the ordered pairs (i, j), i != j, in row-major order.
  static DirectedGraph from_code(int n, std::uint64_t code);
  static std::size_t num_arcs(int n) { return static_cast<std::size_t>(n) * static_cast<std::size_t>(n - 1); }

  int n() const { return n_; }
  bool operator()(int i, int j) const { return adj_[static_cast<std::size_t>(i * n_ + j)] != 0; }
  void set(int i, int j, bool on);
  int arc_count() const;
  std::uint64_t code() const;

  bool operator==(const DirectedGraph&) const = default;

 private:
  int n_;
  std::vector<std::uint8_t> adj_;
};

/// n * [sum a(i, j)]^{-1} * sum b(j, i) a(i, j), 0 when a has no arcs.
double stat_reciprocity(const DirectedGraph& a, const DirectedGraph& b);

// ---------------------------------------------------------------------------
// Dyadic structure

/// Per-dyad components tau_f(m) in R^l and kappa_f(m) >= 0, m = 0..t.
/// Either part may be absent.
class DyadicFactorization {
 public:
  DyadicFactorization(int n, int t, std::size_t stat_dim, std::vector<double> tau, std::vector<double> kappa);

  /// The same tau_f and kappa_f on every dyad. Tables are (t+1) x l and t+1.
  static DyadicFactorization homogeneous(int n, int t, std::size_t stat_dim, std::span<const double> tau_per_m,
                                         std::span<const double> kappa_per_m);

  int n() const { return n_; }
  int t() const { return t_; }
  std::size_t num_dyads() const { return num_dyads_; }
  std::size_t stat_dim() const { return stat_dim_; }
  bool has_tau() const { return !tau_.empty(); }
  bool has_kappa() const { return !kappa_.empty(); }

  std::span<const double> tau(std::size_t f, int m) const {
    return {tau_.data() + (f * static_cast<std::size_t>(t_ + 1) + static_cast<std::size_t>(m)) * stat_dim_,
            stat_dim_};
  }
  double kappa(std::size_t f, int m) const {
    return kappa_[f * static_cast<std::size_t>(t_ + 1) + static_cast<std::size_t>(m)];
  }

  /// sum_f tau_f(g(f))
  std::vector<double> reconstruct_tau(const Multigraph& g) const;
  /// prod_f kappa_f(g(f))
  double reconstruct_kappa(const Multigraph& g) const;

 private:
  int n_;
  int t_;
  std::size_t num_dyads_;
  std::size_t stat_dim_;
  std::vector<double> tau_;
  std::vector<double> kappa_;
};

using GraphStatistic = std::function<std::vector<double>(const Multigraph&)>;
using GraphCarrier = std::function<double(const Multigraph&)>;

struct FactorizationOptions {
  /// Spaces up to this size are verified exhaustively, larger ones on random probes.
  std::size_t exhaustive_limit = std::size_t{1} << 16;
  std::size_t random_probes = 1000;
  std::uint64_t seed = 0;
  double tol = 1e-10;
};

struct FactorizationResult {
  std::optional<DyadicFactorization> factorization;
  /// A state the candidate fails to reproduce.
  std::optional<Multigraph> witness;
  std::size_t states_checked = 0;
};

/// tau_f(m) := tau(m e_f) - tau(0) + tau(0)/N, then verified.
FactorizationResult factor_dyadditive(const StateSpace& space, std::size_t stat_dim, const GraphStatistic& tau,
                                      const FactorizationOptions& options = {});

/// kappa_f(m) := kappa(g* with f set to m) / kappa(g*) * kappa(g*)^{1/N}, where
/// g* is the empty graph when kappa(empty) > 0 and otherwise the first state
/// with positive carrier; then verified.
FactorizationResult factor_dyadically_multiplicative(const StateSpace& space, const GraphCarrier& kappa,
                                                     const FactorizationOptions& options = {});

/// Dyadwise sum of multigraphs in G(n, s); the result lives in G(n, k s).
Multigraph multigraph_union(std::span<const Multigraph> parts);

// ---------------------------------------------------------------------------
// Isomorphism and exchangeability

inline constexpr int kMaxIsomorphismVertices = 8;

/// A partition of a multigraph space into isomorphism classes. Class ids are
/// assigned in order of their smallest member, which is the representative.
class IsoClasses {
 public:
  IsoClasses(std::vector<std::size_t> class_of, std::vector<std::vector<StateIndex>> members);

  std::size_t num_states() const { return class_of_.size(); }
  std::size_t num_classes() const { return members_.size(); }
  std::size_t class_of(StateIndex s) const { return class_of_[s]; }
  StateIndex representative(std::size_t c) const { return members_[c].front(); }
  const std::vector<StateIndex>& members(std::size_t c) const { return members_[c]; }

 private:
  std::vector<std::size_t> class_of_;
  std::vector<std::vector<StateIndex>> members_;
};

/// Orbits of the vertex-relabeling action, by brute force over all n! bijections.
IsoClasses iso_classes(const StateSpace& space);

/// Degree-sequence prefilter, then a search over vertex bijections.
bool are_isomorphic(const Multigraph& a, const Multigraph& b);

struct ExchangeabilityCheck {
  bool exchangeable;
  std::optional<std::pair<StateIndex, StateIndex>> witness;
  explicit operator bool() const { return exchangeable; }
};

/// h constant on every class. tol = 0 demands exact equality.
ExchangeabilityCheck is_finitely_exchangeable(std::span<const double> h, const IsoClasses& classes,
                                              double tol = 1e-12);

struct RelationInvarianceCheck {
  bool invariant;
  /// (a, b, c) with b ~ c but sigma_a b !~ sigma_a c.
  std::optional<std::array<StateIndex, 3>> witness;
  explicit operator bool() const { return invariant; }
};

RelationInvarianceCheck is_relation_invariant(const PermutationFamily& family, const IsoClasses& classes);

struct ExchangeabilityTransferReport {
  bool mu_exchangeable;
  std::vector<bool> row_exchangeable;
  bool every_row;
  bool some_row;
};

/// For a p-uniform triple (P, sigma, mu) whose family preserves isomorphism:
/// mu exchangeable <=> every row exchangeable <=> some row exchangeable.
/// Throws std::invalid_argument when the family is not relation invariant or
/// the triple is inconsistent, and InvariantViolation if an equivalence fails.
ExchangeabilityTransferReport exchangeability_transfer(const StochasticMatrix& P, const PermutationFamily& family,
                                                       const Pmf& mu, const IsoClasses& classes,
                                                       double tol = 1e-12);

}  // namespace puchain
