// Apache License, Version 2.0, refer to LICENSE.txt
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "puchain/expfam.hpp"
#include "puchain/matrix.hpp"
#include "puchain/permutation.hpp"
#include "puchain/puniform.hpp"

namespace puchain {

/// x_0 = x0, then T inverse-CDF steps; step i uses the uniform keyed by
/// (seed, replicate, i).
Trajectory sample_chain(const StochasticMatrix& P, StateIndex x0, std::size_t T, std::uint64_t seed,
                        std::uint64_t replicate = 0);

/// T iid draws from mu, keyed like sample_chain.
Trajectory sample_iid(const Pmf& mu, std::size_t T, std::uint64_t seed, std::uint64_t replicate = 0);

/// Draws z_1..z_T iid from mu and returns iid_to_chain(x0, z, family).
Trajectory sample_puniform_chain(const Pmf& mu, const PermutationFamily& family, StateIndex x0, std::size_t T,
                                 std::uint64_t seed, std::uint64_t replicate = 0);

using TransitionStatistic = std::function<void(StateIndex, StateIndex, std::span<double>)>;

struct ConvergenceReport {
  /// Entry k averages the statistics of the first k+1 transitions.
  std::vector<ParamVector> running_mean;
  ParamVector target;
  ParamVector final_abs_error;
  /// Sample standard deviation / sqrt(T). Present only when a family was
  /// supplied and the statistic was confirmed p-uniform under it.
  std::optional<ParamVector> stderr_estimate;
};

/// Time averages of tau(x_i, x_{i+1}). When `family` is given, tau is first
/// tabulated and checked for p-uniformity (ModelError if it is not), and the
/// iid standard error is reported.
ConvergenceReport convergence_report(const Trajectory& x, std::size_t stat_dim, const TransitionStatistic& tau,
                                     ParamVector target, const PermutationFamily* family = nullptr);

/// Power iteration failed to reach the tolerance; carries the last iterate.
class NonConvergence : public std::runtime_error {
 public:
  NonConvergence(const std::string& what, std::vector<double> last, double residual)
      : std::runtime_error(what), last_(std::move(last)), residual_(residual) {}
  const std::vector<double>& last_iterate() const { return last_; }
  double residual() const { return residual_; }

 private:
  std::vector<double> last_;
  double residual_;
};

struct StationaryResult {
  Pmf pi;
  /// || pi P - pi ||_1 at the returned iterate.
  double residual;
  std::size_t iterations;
  /// A second run from the point mass at state 0 reached the same pi within
  /// 1e-8. False hints at several stationary distributions (or periodicity).
  std::optional<bool> second_start_agrees;
};

inline constexpr std::size_t kMaxPowerIterations = 1'000'000;

/// Power iteration from `start` (uniform by default) until ||pi P - pi||_1 <= tol.
/// With `probe_uniqueness` the iteration is repeated from a point mass.
StationaryResult stationary_distribution(const StochasticMatrix& P, double tol = 1e-12,
                                         std::optional<std::vector<double>> start = std::nullopt,
                                         std::size_t max_iterations = kMaxPowerIterations,
                                         bool probe_uniqueness = false);

struct TraceReport {
  int n;
  double p;
  double trace;
  double expected_trace;
  bool trace_ok;
  bool symmetric;
  /// max |P_{1/2}(a, b) - 2^-N|.
  double half_max_deviation;
  bool half_uniform;
  /// At p = 0.999 every diagonal entry is the row maximum.
  bool diagonal_dominates_near_one;
};

/// trace(P_p) = 2^N p^N, P_{1/2} = 2^-N everywhere, and P_p -> I as p -> 1
/// for the stability chain on G(n, 1).
TraceReport trace_and_limit_checks(int n, double p, double tol = 1e-10);

}  // namespace puchain
