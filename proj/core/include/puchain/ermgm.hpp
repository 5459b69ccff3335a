// Apache License, Version 2.0, refer to LICENSE.txt
#pragma once

#include <cstdint>
#include <span>

#include "puchain/expfam.hpp"
#include "puchain/netstat.hpp"
#include "puchain/puniform.hpp"

namespace puchain {

/// A dyadically independent exponential random t-multigraph model.
class ErmgmModel {
 public:
  /// The factorization must carry both tau_f and kappa_f.
  ErmgmModel(DyadicFactorization factorization, ParameterMap eta);

  int n() const { return fact_.n(); }
  int t() const { return fact_.t(); }
  std::size_t num_dyads() const { return fact_.num_dyads(); }
  std::size_t stat_dim() const { return fact_.stat_dim(); }
  const DyadicFactorization& factorization() const { return fact_; }
  const ParameterMap& eta() const { return eta_; }

 private:
  DyadicFactorization fact_;
  ParameterMap eta_;
};

/// kappa_f(m) exp(eta . tau_f(m)) normalized over m = 0..t.
Pmf dyad_pmf(const ErmgmModel& model, std::span<const double> theta, std::size_t f);

struct PartitionValue {
  double value;
  /// Number of (dyad, multiplicity) terms evaluated.
  std::size_t terms;
};

/// sum_f log sum_r kappa_f(r) exp(eta . tau_f(r)); never enumerates the space.
PartitionValue fast_log_partition_counted(const ErmgmModel& model, std::span<const double> theta);
double fast_log_partition(const ErmgmModel& model, std::span<const double> theta);

/// One inverse-CDF draw per dyad, keyed by (seed, replicate, dyad index).
Multigraph sample_multigraph(const ErmgmModel& model, std::span<const double> theta, std::uint64_t seed,
                             std::uint64_t replicate = 0);

/// sum_f log dyad_pmf(f)[w(f)].
LogProb multigraph_log_pmf(const ErmgmModel& model, std::span<const double> theta, const Multigraph& w);

/// log C(t, k); exact integer arithmetic for t <= 60, lgamma above.
double log_binomial(int t, int k);

/// log Pr(W = w) for the union of t iid draws from a simple-graph model:
/// log Pr(Z = z) for the canonical z (copy i has dyad f iff i < w(f)) plus
/// sum_f log C(t, w(f)).
LogProb union_log_probability(const ErmgmModel& simple_model, std::span<const double> theta, int t,
                              const Multigraph& w);

struct UnionExpFamily {
  ExpFamilySpec family;
  /// Whether eta's default probes contain l+1 affinely independent points.
  bool eta_affinely_independent;
};

/// The union law as an exponential family on G(n, t) with the simple model's
/// parameter and parameter function:
///   tau(W)   = sum_f tau_f(1) W(f) + tau_f(0) (t - W(f))
///   kappa(W) = prod_f C(t, W(f)) kappa_f(1)^W(f) kappa_f(0)^(t - W(f))
UnionExpFamily union_expfam(const ErmgmModel& simple_model, int t);

enum class GraphChainModel { density, stability };

struct MleEstimate {
  double p_hat;
  /// p_hat is 0 or 1, outside the open parameter space.
  bool boundary;
  std::size_t transitions;
};

/// p_hat = (n - 1) / (T N) * sum_{i<T} tau(G_i, G_{i+1}) over a simple-graph trajectory.
MleEstimate mle_density_stability(const Trajectory& x, const StateSpace& space, GraphChainModel kind);

/// The same estimate from the iid companion z_i: tau(G_{i-1}, G_i) = |E(z_i)| / (n - 1)
/// under both the identity and the stability family.
MleEstimate mle_from_iid(const Trajectory& z, const StateSpace& space);

/// (n - 1) log(p / (1 - p)); throws std::domain_error outside (0, 1).
double eta_density(double p, int n);

}  // namespace puchain
