// Apache License, Version 2.0, refer to LICENSE.txt
#include <doctest.h>

#include "support.hpp"

using namespace puchain;

TEST_CASE("deterministic chains") {
  const auto I = StochasticMatrix::from_rows({{1, 0}, {0, 1}});
  const auto x = sample_chain(I, 1, 20, 3);
  for (auto s : x.states()) CHECK(s == 1);
  const auto flip = StochasticMatrix::from_rows({{0, 1}, {1, 0}});
  const auto y = sample_chain(flip, 0, 9, 3);
  for (std::size_t i = 0; i < y.size(); ++i) CHECK(y[i] == i % 2);
}

TEST_CASE("sampling is reproducible and replicate-keyed") {
  const auto P = modular_chain_matrix(5);
  CHECK(sample_chain(P, 0, 500, 11, 2) == sample_chain(P, 0, 500, 11, 2));
  CHECK_FALSE(sample_chain(P, 0, 500, 11, 2) == sample_chain(P, 0, 500, 11, 3));
}

TEST_CASE("modular chain transition frequencies") {
  const auto P = modular_chain_matrix(3);
  CHECK(P(0, 1) == 0.5);
  CHECK(P(2, 0) == 0.5);
  CHECK(P(1, 0) == 0.0);
  const std::size_t T = 10000;
  const auto x = sample_chain(P, 0, T, 99);
  const auto N = transition_counts(x);
  const auto visits = N.row_sums();
  for (std::size_t a = 0; a < 3; ++a) {
    const double f = double(N(a, a)) / visits[a];
    CHECK(std::abs(f - 0.5) <= 3 * std::sqrt(0.25 / visits[a]));
  }
}

TEST_CASE("p-uniform sampling") {
  const StateSpace g3 = StateSpace::multigraph(3, 1);
  std::vector<double> er;
  for (StateIndex s = 0; s < 8; ++s) er.push_back(testsupport::er_mass(s, 3, 0.3));
  const Pmf mu(er);
  const auto id = builtin_family(FamilyKind::identity, g3);
  const auto x = sample_puniform_chain(mu, id, 4, 30, 7);
  CHECK(x[0] == 4);
  const auto z = sample_iid(mu, 30, 7);
  for (std::size_t i = 0; i < z.size(); ++i) CHECK(x[i + 1] == z[i]);

  const auto walk = sample_puniform_chain(modular_step_pmf(3), builtin_family(FamilyKind::modular, StateSpace::modular(3)),
                                          0, 200, 1);
  for (std::size_t i = 1; i < walk.size(); ++i) CHECK((walk[i] + 3 - walk[i - 1]) % 3 <= 1);
}

TEST_CASE("p-uniform sampling has the matrix two-step law") {
  // Exact law of (X_1, X_2) under x_{i+1} = sigma_{x_i}^{-1}(z) against the matrix square.
  const StateSpace g3 = StateSpace::multigraph(3, 1);
  std::vector<double> er;
  for (StateIndex s = 0; s < 8; ++s) er.push_back(testsupport::er_mass(s, 3, 0.3));
  const auto stab = builtin_family(FamilyKind::stability, g3);
  const auto P = stability_matrix(3, 0.3);
  for (StateIndex x0 = 0; x0 < 8; ++x0) {
    std::vector<double> law(64, 0.0);
    for (StateIndex z1 = 0; z1 < 8; ++z1) {
      for (StateIndex z2 = 0; z2 < 8; ++z2) {
        const auto x = iid_to_chain(x0, testsupport::traj(8, {z1, z2}), stab);
        law[x[1] * 8 + x[2]] += er[z1] * er[z2];
      }
    }
    for (StateIndex a = 0; a < 8; ++a)
      for (StateIndex b = 0; b < 8; ++b) CHECK(std::abs(law[a * 8 + b] - P(x0, a) * P(a, b)) < 1e-12);
  }
}

TEST_CASE("convergence report") {
  const StateSpace g4 = StateSpace::multigraph(4, 1);
  const auto x = sample_chain(density_matrix(4, 0.3), 0, 20000, 7);
  const auto tau = [&](StateIndex, StateIndex b, std::span<double> v) { v[0] = testsupport::popcount(b) / 3.0; };
  const auto id = builtin_family(FamilyKind::identity, g4);
  const auto r = convergence_report(x, 1, tau, {0.6}, &id);
  REQUIRE(r.stderr_estimate);
  CHECK(r.final_abs_error[0] <= 3 * (*r.stderr_estimate)[0]);
  CHECK(r.running_mean.size() == 20000);

  const auto c = convergence_report(x, 1, [](StateIndex, StateIndex, std::span<double> v) { v[0] = 2.0; }, {2.0}, &id);
  for (const auto& m : c.running_mean) CHECK(m[0] == 2.0);
  CHECK((*c.stderr_estimate)[0] == 0.0);

  const auto stab = builtin_family(FamilyKind::stability, g4);
  CHECK_THROWS_AS(convergence_report(x, 1, tau, {0.6}, &stab), ModelError);
}

TEST_CASE("stationary distributions") {
  const auto s = stationary_distribution(stability_matrix(3, 0.3));
  for (double v : s.pi.values()) CHECK(std::abs(v - 0.125) < 1e-10);
  const auto m = stationary_distribution(modular_chain_matrix(3));
  for (double v : m.pi.values()) CHECK(std::abs(v - 1.0 / 3) < 1e-10);

  const auto I = StochasticMatrix::from_rows({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
  const auto r = stationary_distribution(I, 1e-12, std::vector<double>{0.2, 0.3, 0.5}, kMaxPowerIterations, true);
  CHECK(r.pi[2] == doctest::Approx(0.5));
  REQUIRE(r.second_start_agrees);
  CHECK_FALSE(*r.second_start_agrees);

  const auto flip = StochasticMatrix::from_rows({{0, 1}, {1, 0}});
  CHECK_THROWS_AS(stationary_distribution(flip, 1e-12, std::vector<double>{1.0, 0.0}, 100), NonConvergence);
}

TEST_CASE("stability trace identities") {
  const auto half = trace_and_limit_checks(3, 0.5);
  CHECK(half.trace == doctest::Approx(1.0));
  CHECK(half.half_uniform);
  const auto hi = trace_and_limit_checks(3, 0.9);
  CHECK(hi.trace == doctest::Approx(5.832));
  CHECK(hi.trace_ok);
  CHECK(hi.symmetric);
  CHECK(hi.diagonal_dominates_near_one);
  const auto P = stability_matrix(2, 0.37);
  CHECK(P(0, 0) == doctest::Approx(0.37));
  CHECK(P(0, 1) == doctest::Approx(0.63));
  CHECK(trace_and_limit_checks(2, 0.37).trace == doctest::Approx(0.74));
}
