// Apache License, Version 2.0, refer to LICENSE.txt
#include "puchain/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "puchain/models.hpp"
#include "puchain/random.hpp"

namespace puchain {

Trajectory sample_chain(const StochasticMatrix& P, StateIndex x0, std::size_t T, std::uint64_t seed,
                        std::uint64_t replicate) {
  const std::size_t n = P.size();
  if (x0 >= n) throw std::invalid_argument("initial state out of range");
  std::vector<StateIndex> x;
  x.reserve(T + 1);
  x.push_back(x0);
  for (std::size_t i = 0; i < T; ++i) {
    const double u = counter_uniform(seed, replicate, i);
    x.push_back(static_cast<StateIndex>(inverse_cdf(P.row(x.back()), u)));
  }
  return Trajectory(n, std::move(x));
}

Trajectory sample_iid(const Pmf& mu, std::size_t T, std::uint64_t seed, std::uint64_t replicate) {
  std::vector<StateIndex> z(T);
  for (std::size_t i = 0; i < T; ++i) {
    z[i] = static_cast<StateIndex>(inverse_cdf(mu.values(), counter_uniform(seed, replicate, i)));
  }
  return Trajectory(mu.size(), std::move(z));
}

Trajectory sample_puniform_chain(const Pmf& mu, const PermutationFamily& family, StateIndex x0, std::size_t T,
                                 std::uint64_t seed, std::uint64_t replicate) {
  if (mu.size() != family.size()) throw std::invalid_argument("mu and family sizes differ");
  return iid_to_chain(x0, sample_iid(mu, T, seed, replicate), family);
}

ConvergenceReport convergence_report(const Trajectory& x, std::size_t stat_dim, const TransitionStatistic& tau,
                                     ParamVector target, const PermutationFamily* family) {
  const std::size_t T = x.num_transitions();
  if (T == 0) throw std::invalid_argument("convergence report needs at least one transition");
  if (target.size() != stat_dim) throw std::invalid_argument("target has the wrong dimension");

  if (family != nullptr) {
    const std::size_t n = x.num_states();
    if (family->size() != n) throw std::invalid_argument("family and trajectory sizes differ");
    std::vector<std::vector<double>> tables(stat_dim, std::vector<double>(n * n));
    std::vector<double> value(stat_dim);
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        tau(static_cast<StateIndex>(a), static_cast<StateIndex>(b), value);
        for (std::size_t k = 0; k < stat_dim; ++k) tables[k][a * n + b] = value[k];
      }
    }
    for (const auto& table : tables) {
      if (!check_puniform(table, n, *family)) {
        throw ModelError("statistic is not p-uniform under the supplied family; no iid standard error");
      }
    }
  }

  ConvergenceReport report;
  report.target = std::move(target);
  report.running_mean.reserve(T);
  ParamVector sum(stat_dim, 0.0);
  ParamVector mean(stat_dim, 0.0);
  ParamVector m2(stat_dim, 0.0);
  ParamVector value(stat_dim);
  for (std::size_t i = 0; i < T; ++i) {
    tau(x[i], x[i + 1], value);
    const double count = static_cast<double>(i + 1);
    ParamVector running(stat_dim);
    for (std::size_t k = 0; k < stat_dim; ++k) {
      sum[k] += value[k];
      running[k] = sum[k] / count;
      const double delta = value[k] - mean[k];
      mean[k] += delta / count;
      m2[k] += delta * (value[k] - mean[k]);
    }
    report.running_mean.push_back(std::move(running));
  }
  report.final_abs_error.resize(stat_dim);
  for (std::size_t k = 0; k < stat_dim; ++k) {
    report.final_abs_error[k] = std::abs(report.running_mean.back()[k] - report.target[k]);
  }
  if (family != nullptr) {
    ParamVector se(stat_dim, 0.0);
    if (T > 1) {
      for (std::size_t k = 0; k < stat_dim; ++k) {
        se[k] = std::sqrt(m2[k] / static_cast<double>(T - 1)) / std::sqrt(static_cast<double>(T));
      }
    }
    report.stderr_estimate = std::move(se);
  }
  return report;
}

namespace {

StationaryResult power_iteration(const StochasticMatrix& P, double tol, std::vector<double> pi,
                                 std::size_t max_iterations) {
  const std::size_t n = P.size();
  std::vector<double> next(n);
  double residual = 0.0;
  for (std::size_t it = 1; it <= max_iterations; ++it) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t a = 0; a < n; ++a) {
      if (pi[a] == 0.0) continue;
      const auto row = P.row(a);
      for (std::size_t b = 0; b < n; ++b) next[b] += pi[a] * row[b];
    }
    double total = 0.0;
    for (double v : next) total += v;
    residual = 0.0;
    for (std::size_t b = 0; b < n; ++b) {
      next[b] /= total;
      residual += std::abs(next[b] - pi[b]);
    }
    pi.swap(next);
    if (residual <= tol) return {Pmf(pi, 1e-10), residual, it, std::nullopt};
  }
  throw NonConvergence("power iteration did not converge in " + std::to_string(max_iterations) + " iterations",
                       std::move(pi), residual);
}

}  // namespace

StationaryResult stationary_distribution(const StochasticMatrix& P, double tol,
                                         std::optional<std::vector<double>> start, std::size_t max_iterations,
                                         bool probe_uniqueness) {
  const std::size_t n = P.size();
  std::vector<double> pi = start ? std::move(*start) : std::vector<double>(n, 1.0 / static_cast<double>(n));
  if (pi.size() != n) throw std::invalid_argument("start vector has the wrong length");
  StationaryResult result = power_iteration(P, tol, std::move(pi), max_iterations);
  if (probe_uniqueness) {
    std::vector<double> delta(n, 0.0);
    delta[0] = 1.0;
    try {
      const StationaryResult other = power_iteration(P, tol, std::move(delta), max_iterations);
      double gap = 0.0;
      for (std::size_t b = 0; b < n; ++b) gap = std::max(gap, std::abs(other.pi[b] - result.pi[b]));
      result.second_start_agrees = gap <= 1e-8;
    } catch (const NonConvergence&) {
      result.second_start_agrees = false;
    }
  }
  return result;
}

TraceReport trace_and_limit_checks(int n, double p, double tol) {
  const StochasticMatrix P = stability_matrix(n, p);
  const std::size_t size = P.size();
  const auto N = static_cast<double>(num_dyads(n));

  TraceReport report{};
  report.n = n;
  report.p = p;
  for (std::size_t a = 0; a < size; ++a) report.trace += P(a, a);
  report.expected_trace = std::pow(2.0, N) * std::pow(p, N);
  report.trace_ok = std::abs(report.trace - report.expected_trace) <= tol;

  report.symmetric = true;
  for (std::size_t a = 0; a < size; ++a) {
    for (std::size_t b = a + 1; b < size; ++b) {
      if (std::abs(P(a, b) - P(b, a)) > tol) report.symmetric = false;
    }
  }

  const StochasticMatrix half = stability_matrix(n, 0.5);
  const double uniform = std::pow(2.0, -N);
  for (double v : half.entries()) report.half_max_deviation = std::max(report.half_max_deviation, std::abs(v - uniform));
  report.half_uniform = report.half_max_deviation <= tol;

  const StochasticMatrix near_one = stability_matrix(n, 0.999);
  report.diagonal_dominates_near_one = true;
  for (std::size_t a = 0; a < size; ++a) {
    const auto row = near_one.row(a);
    if (*std::max_element(row.begin(), row.end()) != row[a]) report.diagonal_dominates_near_one = false;
  }
  return report;
}

}  // namespace puchain
