// Apache License, Version 2.0, refer to LICENSE.txt
#include "puchain/models.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace puchain {

namespace {

StateSpace simple_graphs(int n) {
  if (n < 2) throw std::invalid_argument("graph models need n >= 2");
  return StateSpace::multigraph(n, 1);
}

double er_mass(int edges, int N, double p) { return std::pow(p, edges) * std::pow(1.0 - p, N - edges); }

void require_probability(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("p must lie in [0, 1]");
}

}  // namespace

ExpFamilySpec erdos_renyi_family(int n, ParameterMap eta) {
  const StateSpace space = simple_graphs(n);
  std::vector<double> tau(space.size());
  for (std::size_t s = 0; s < space.size(); ++s) tau[s] = std::popcount(s) / static_cast<double>(n - 1);
  return ExpFamilySpec(space, std::vector<double>(space.size(), 1.0), 1, std::move(tau), std::move(eta));
}

Pmf erdos_renyi_pmf(int n, double p) {
  require_probability(p);
  const StateSpace space = simple_graphs(n);
  const int N = static_cast<int>(space.num_dyads());
  std::vector<double> mu(space.size());
  for (std::size_t s = 0; s < space.size(); ++s) mu[s] = er_mass(std::popcount(s), N, p);
  return Pmf(std::move(mu));
}

ErmgmModel erdos_renyi_ermgm(int n, int t, ParameterMap eta) {
  if (n < 2 || t < 1) throw std::invalid_argument("ERMGM needs n >= 2 and t >= 1");
  std::vector<double> tau(static_cast<std::size_t>(t + 1));
  for (int m = 0; m <= t; ++m) tau[static_cast<std::size_t>(m)] = m / static_cast<double>(n - 1);
  const std::vector<double> kappa(static_cast<std::size_t>(t + 1), 1.0);
  return ErmgmModel(DyadicFactorization::homogeneous(n, t, 1, tau, kappa), std::move(eta));
}

CefSpec density_cef(int n) {
  const StateSpace space = simple_graphs(n);
  const double denom = n - 1;
  return CefSpec::tabulate(
      space, 1, [&](StateIndex, StateIndex b, std::span<double> out) { out[0] = std::popcount(b) / denom; }, nullptr,
      ParameterMap::density_logit(n));
}

CefSpec stability_cef(int n) {
  const StateSpace space = simple_graphs(n);
  const double denom = n - 1;
  const auto mask = static_cast<StateIndex>(space.size() - 1);
  return CefSpec::tabulate(
      space, 1,
      [&](StateIndex a, StateIndex b, std::span<double> out) {
        out[0] = std::popcount(static_cast<StateIndex>(~(a ^ b) & mask)) / denom;
      },
      nullptr, ParameterMap::density_logit(n));
}

CefSpec transitivity_cef(int n, ParameterMap eta) {
  if (n < 3) throw std::invalid_argument("transitivity needs n >= 3");
  const StateSpace space = simple_graphs(n);
  std::vector<Multigraph> graphs;
  graphs.reserve(space.size());
  for (std::size_t s = 0; s < space.size(); ++s) graphs.push_back(space.decode(static_cast<StateIndex>(s)));
  return CefSpec::tabulate(
      space, 1,
      [&](StateIndex a, StateIndex b, std::span<double> out) { out[0] = stat_transitivity(graphs[a], graphs[b]); },
      nullptr, std::move(eta));
}

CefSpec reciprocity_cef(int n, ParameterMap eta) {
  if (n < 2 || n > 4) throw std::invalid_argument("reciprocity CEF supports 2 <= n <= 4");
  const std::size_t size = std::size_t{1} << DirectedGraph::num_arcs(n);
  // reversed[b] has arc (i, j) iff b has arc (j, i), so the reciprocated arcs
  // of a in b are popcount(a & reversed[b]).
  std::vector<std::uint32_t> reversed(size);
  for (std::size_t b = 0; b < size; ++b) {
    const DirectedGraph g = DirectedGraph::from_code(n, b);
    DirectedGraph r(n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i != j && g(i, j)) r.set(j, i, true);
      }
    }
    reversed[b] = static_cast<std::uint32_t>(r.code());
  }
  return CefSpec::tabulate(
      StateSpace::generic(size), 1,
      [&](StateIndex a, StateIndex b, std::span<double> out) {
        const int arcs = std::popcount(a);
        out[0] = arcs == 0 ? 0.0 : static_cast<double>(n) * std::popcount(a & reversed[b]) / arcs;
      },
      nullptr, std::move(eta));
}

CefSpec gani_cef() {
  std::vector<double> kappa{2.0, 1.0, 1.0, 1.0 / 3.0, 2.0 / 3.0, 3.0, 11.0 / 4.0, 1.0, 1.0 / 4.0};
  std::vector<double> tau{1, 1, 3, 3, 3, 1, 1, 3, 3};
  return CefSpec(StateSpace::generic(3), 3, std::move(kappa), 1, std::move(tau), ParameterMap::scalar_log());
}

StochasticMatrix density_matrix(int n, double p) {
  require_probability(p);
  const StateSpace space = simple_graphs(n);
  const int N = static_cast<int>(space.num_dyads());
  const std::size_t size = space.size();
  std::vector<double> entries(size * size);
  for (std::size_t a = 0; a < size; ++a) {
    for (std::size_t b = 0; b < size; ++b) entries[a * size + b] = er_mass(std::popcount(b), N, p);
  }
  return StochasticMatrix(size, size, std::move(entries));
}

StochasticMatrix stability_matrix(int n, double p) {
  require_probability(p);
  const StateSpace space = simple_graphs(n);
  const int N = static_cast<int>(space.num_dyads());
  const std::size_t size = space.size();
  const std::size_t mask = size - 1;
  std::vector<double> entries(size * size);
  for (std::size_t a = 0; a < size; ++a) {
    for (std::size_t b = 0; b < size; ++b) entries[a * size + b] = er_mass(std::popcount(~(a ^ b) & mask), N, p);
  }
  return StochasticMatrix(size, size, std::move(entries));
}

StochasticMatrix modular_chain_matrix(int n) {
  if (n < 2) throw std::invalid_argument("the modular walk needs n >= 2");
  const auto size = static_cast<std::size_t>(n);
  std::vector<double> entries(size * size, 0.0);
  for (std::size_t i = 0; i < size; ++i) {
    entries[i * size + i] += 0.5;
    entries[i * size + (i + 1) % size] += 0.5;
  }
  return StochasticMatrix(size, size, std::move(entries));
}

Pmf modular_step_pmf(int n) {
  if (n < 2) throw std::invalid_argument("the modular walk needs n >= 2");
  std::vector<double> mu(static_cast<std::size_t>(n), 0.0);
  mu[0] += 0.5;
  mu[1 % static_cast<std::size_t>(n)] += 0.5;
  return Pmf(std::move(mu));
}

}  // namespace puchain
