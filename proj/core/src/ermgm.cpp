// Apache License, Version 2.0, refer to LICENSE.txt
#include "puchain/ermgm.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "puchain/random.hpp"

namespace puchain {

ErmgmModel::ErmgmModel(DyadicFactorization factorization, ParameterMap eta)
    : fact_(std::move(factorization)), eta_(std::move(eta)) {
  if (!fact_.has_tau() || !fact_.has_kappa()) {
    throw std::invalid_argument("an ERMGM needs both tau_f and kappa_f");
  }
  if (eta_.stat_dim() != fact_.stat_dim()) throw std::invalid_argument("eta and tau_f dimensions differ");
  for (std::size_t f = 0; f < fact_.num_dyads(); ++f) {
    bool positive = false;
    for (int m = 0; m <= fact_.t(); ++m) positive = positive || fact_.kappa(f, m) > 0.0;
    if (!positive) throw ModelError("dyad " + std::to_string(f) + " has kappa_f identically zero");
  }
}

namespace {

std::vector<double> dyad_log_weights(const ErmgmModel& model, std::span<const double> eta, std::size_t f) {
  const auto& fact = model.factorization();
  std::vector<double> w(static_cast<std::size_t>(model.t() + 1));
  for (int m = 0; m <= model.t(); ++m) {
    const double k = fact.kappa(f, m);
    double e = 0.0;
    const auto tau = fact.tau(f, m);
    for (std::size_t j = 0; j < tau.size(); ++j) e += eta[j] * tau[j];
    w[static_cast<std::size_t>(m)] = k > 0.0 ? std::log(k) + e : -std::numeric_limits<double>::infinity();
  }
  return w;
}

std::vector<double> dyad_masses(const ErmgmModel& model, std::span<const double> eta, std::size_t f) {
  auto w = dyad_log_weights(model, eta, f);
  const double psi = log_sum_exp(w);
  for (double& x : w) x = std::exp(x - psi);
  return w;
}

void require_dyad(const ErmgmModel& model, std::size_t f) {
  if (f >= model.num_dyads()) throw std::out_of_range("dyad index out of range");
}

}  // namespace

Pmf dyad_pmf(const ErmgmModel& model, std::span<const double> theta, std::size_t f) {
  require_dyad(model, f);
  return Pmf(dyad_masses(model, model.eta()(theta), f));
}

PartitionValue fast_log_partition_counted(const ErmgmModel& model, std::span<const double> theta) {
  const ParamVector eta = model.eta()(theta);
  PartitionValue result{0.0, 0};
  for (std::size_t f = 0; f < model.num_dyads(); ++f) {
    result.value += log_sum_exp(dyad_log_weights(model, eta, f));
    result.terms += static_cast<std::size_t>(model.t() + 1);
  }
  return result;
}

double fast_log_partition(const ErmgmModel& model, std::span<const double> theta) {
  return fast_log_partition_counted(model, theta).value;
}

Multigraph sample_multigraph(const ErmgmModel& model, std::span<const double> theta, std::uint64_t seed,
                             std::uint64_t replicate) {
  const ParamVector eta = model.eta()(theta);
  Multigraph g(model.n(), model.t());
  for (std::size_t f = 0; f < model.num_dyads(); ++f) {
    const auto masses = dyad_masses(model, eta, f);
    g.set(f, static_cast<int>(inverse_cdf(masses, counter_uniform(seed, replicate, f))));
  }
  return g;
}

LogProb multigraph_log_pmf(const ErmgmModel& model, std::span<const double> theta, const Multigraph& w) {
  if (w.n() != model.n() || w.t() > model.t()) throw std::invalid_argument("multigraph is not in the model's space");
  const ParamVector eta = model.eta()(theta);
  double total = 0.0;
  for (std::size_t f = 0; f < model.num_dyads(); ++f) {
    const auto lw = dyad_log_weights(model, eta, f);
    const double term = lw[static_cast<std::size_t>(w[f])];
    if (!std::isfinite(term)) return LogProb::impossible_event();
    total += term - log_sum_exp(lw);
  }
  return {total, false};
}

double log_binomial(int t, int k) {
  if (t < 0 || k < 0 || k > t) throw std::invalid_argument("binomial coefficient out of range");
  if (t <= 60) {
    std::uint64_t c = 1;
    const int kk = std::min(k, t - k);
    for (int i = 0; i < kk; ++i) c = c * static_cast<std::uint64_t>(t - i) / static_cast<std::uint64_t>(i + 1);
    return std::log(static_cast<double>(c));
  }
  return std::lgamma(t + 1.0) - std::lgamma(k + 1.0) - std::lgamma(t - k + 1.0);
}

LogProb union_log_probability(const ErmgmModel& simple_model, std::span<const double> theta, int t,
                              const Multigraph& w) {
  if (simple_model.t() != 1) throw std::invalid_argument("union models are built from a simple-graph model");
  if (t < 1) throw std::invalid_argument("union needs t >= 1");
  if (w.n() != simple_model.n()) throw std::invalid_argument("multigraph has the wrong vertex count");
  for (std::size_t f = 0; f < w.num_dyads(); ++f) {
    if (w[f] > t) throw std::invalid_argument("multiplicity exceeds the number of union copies");
  }
  double total = 0.0;
  for (int i = 0; i < t; ++i) {
    Multigraph z(w.n(), 1);
    for (std::size_t f = 0; f < w.num_dyads(); ++f) z.set(f, i < w[f] ? 1 : 0);
    const LogProb part = multigraph_log_pmf(simple_model, theta, z);
    if (part.impossible) return part;
    total += part.value;
  }
  for (std::size_t f = 0; f < w.num_dyads(); ++f) total += log_binomial(t, w[f]);
  return {total, false};
}

UnionExpFamily union_expfam(const ErmgmModel& simple_model, int t) {
  if (simple_model.t() != 1) throw std::invalid_argument("union models are built from a simple-graph model");
  if (t < 1) throw std::invalid_argument("union needs t >= 1");
  const auto& fact = simple_model.factorization();
  const StateSpace space = StateSpace::multigraph(simple_model.n(), t);
  const std::size_t l = simple_model.stat_dim();

  std::vector<double> kappa(space.size());
  std::vector<double> tau(space.size() * l, 0.0);
  for (std::size_t s = 0; s < space.size(); ++s) {
    const Multigraph w = space.decode(static_cast<StateIndex>(s));
    double carrier = 1.0;
    for (std::size_t f = 0; f < w.num_dyads(); ++f) {
      const int on = w[f];
      const int off = t - on;
      carrier *= std::exp(log_binomial(t, on)) * std::pow(fact.kappa(f, 1), on) * std::pow(fact.kappa(f, 0), off);
      const auto t1 = fact.tau(f, 1);
      const auto t0 = fact.tau(f, 0);
      for (std::size_t k = 0; k < l; ++k) tau[s * l + k] += t1[k] * on + t0[k] * off;
    }
    kappa[s] = carrier;
  }

  std::vector<ParamVector> etas;
  for (const auto& theta : simple_model.eta().default_probes()) etas.push_back(simple_model.eta()(theta));
  return {ExpFamilySpec(space, std::move(kappa), l, std::move(tau), simple_model.eta()),
          affinely_independent_entries(etas)};
}

namespace {

MleEstimate finish_mle(std::uint64_t edges, double tau_sum, std::size_t transitions, int n, std::size_t N) {
  MleEstimate est{0.0, false, transitions};
  const auto cells = static_cast<std::uint64_t>(transitions) * N;
  if (edges == 0 || edges == cells) {
    est.boundary = true;
    est.p_hat = edges == 0 ? 0.0 : 1.0;
    return est;
  }
  est.p_hat = static_cast<double>(n - 1) / static_cast<double>(cells) * tau_sum;
  return est;
}

void require_graph_sequence(const Trajectory& x, const StateSpace& space) {
  if (!space.is_simple_graph_space()) throw std::invalid_argument("the estimator needs a simple-graph space");
  if (x.num_states() != space.size()) throw std::invalid_argument("trajectory and space sizes differ");
}

}  // namespace

MleEstimate mle_density_stability(const Trajectory& x, const StateSpace& space, GraphChainModel kind) {
  require_graph_sequence(x, space);
  if (x.num_transitions() == 0) throw std::invalid_argument("the estimator needs at least one transition");
  const double denom = space.n() - 1;
  const auto mask = static_cast<StateIndex>(space.size() - 1);
  std::uint64_t edges = 0;
  double tau_sum = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    const StateIndex b = kind == GraphChainModel::density ? x[i + 1] : static_cast<StateIndex>(~(x[i] ^ x[i + 1]) & mask);
    const int e = std::popcount(b);
    edges += static_cast<std::uint64_t>(e);
    tau_sum += e / denom;
  }
  return finish_mle(edges, tau_sum, x.num_transitions(), space.n(), space.num_dyads());
}

MleEstimate mle_from_iid(const Trajectory& z, const StateSpace& space) {
  require_graph_sequence(z, space);
  if (z.empty()) throw std::invalid_argument("the estimator needs at least one transition");
  const double denom = space.n() - 1;
  std::uint64_t edges = 0;
  double tau_sum = 0.0;
  for (StateIndex s : z.states()) {
    const int e = std::popcount(s);
    edges += static_cast<std::uint64_t>(e);
    tau_sum += e / denom;
  }
  return finish_mle(edges, tau_sum, z.size(), space.n(), space.num_dyads());
}

double eta_density(double p, int n) {
  if (n < 2) throw std::invalid_argument("eta_density needs n >= 2");
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("eta_density is defined only for p in (0, 1)");
  return (n - 1) * std::log(p / (1.0 - p));
}

}  // namespace puchain
