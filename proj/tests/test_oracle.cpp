// Apache License, Version 2.0, refer to LICENSE.txt
#include <doctest.h>

#include "support.hpp"

using namespace puchain;

TEST_CASE("kahan sum") {
  std::vector<double> v{1.0};
  for (int i = 0; i < 1000; ++i) v.push_back(1e-16);
  CHECK(oracle::kahan_sum(v) == doctest::Approx(1.0 + 1e-13).epsilon(1e-15));
}

TEST_CASE("trajectory law") {
  const auto P = StochasticMatrix::from_rows({{0.2, 0.8, 0.0}, {0.5, 0.25, 0.25}, {0.0, 0.0, 1.0}});
  const auto one = oracle::enumerate_trajectory_law(P, 1, 1);
  for (std::size_t b = 0; b < 3; ++b) CHECK(one[b] == P(1, b));

  const auto perm = StochasticMatrix::from_rows({{0, 1, 0}, {0, 0, 1}, {1, 0, 0}});
  const auto det = oracle::enumerate_trajectory_law(perm, 0, 3);
  CHECK(det[1 * 9 + 2 * 3 + 0] == 1.0);
  CHECK(det.outcome(1 * 9 + 2 * 3 + 0) == std::vector<StateIndex>{1, 2, 0});

  std::vector<std::vector<double>> rows(5, std::vector<double>(5));
  for (std::size_t a = 0; a < 5; ++a)
    for (std::size_t b = 0; b < 5; ++b) rows[a][b] = 1.0 + double(counter_bits(1, a, b) % 100);
  const auto R = StochasticMatrix::normalized_rows(rows);
  CHECK(std::abs(oracle::enumerate_trajectory_law(R, 2, 3).total() - 1.0) < 1e-14);
}

TEST_CASE("pushforward laws") {
  const auto P = StochasticMatrix::from_rows({{0.2, 0.8}, {0.5, 0.5}});
  const PermutationFamily id({{0, 1}, {0, 1}});
  const auto a = oracle::enumerate_trajectory_law(P, 0, 2);
  const auto b = oracle::pushforward_z_law(P, id, 0, 2);
  for (std::size_t i = 0; i < 4; ++i) CHECK(a[i] == b[i]);

  const StateSpace g3 = StateSpace::multigraph(3, 1);
  std::vector<double> er;
  for (StateIndex s = 0; s < 8; ++s) er.push_back(testsupport::er_mass(s, 3, 0.3));
  const auto z = oracle::pushforward_z_law(stability_matrix(3, 0.3), builtin_family(FamilyKind::stability, g3), 5, 2);
  CHECK(oracle::product_law_residual(z, er) < 1e-12);
  CHECK(oracle::independence_residual(z) < 1e-12);

  const auto bad = StochasticMatrix::normalized_rows({{1, 2}, {3, 4}});
  const auto w = oracle::pushforward_z_law(bad, id, 0, 2);
  CHECK(oracle::independence_residual(w) > 1e-2);
}

TEST_CASE("brute partition") {
  const ExpFamilySpec one(StateSpace::generic(1), {1.0}, 1, {0.0}, ParameterMap::natural(1));
  CHECK(oracle::brute_partition(one, ParamVector{2.0}) == 0.0);
  const auto er = erdos_renyi_family(3, ParameterMap::natural(1));
  CHECK(oracle::brute_partition(er, ParamVector{1.3}) == doctest::Approx(3 * std::log1p(std::exp(0.65))).epsilon(1e-13));

  const StateSpace s = StateSpace::multigraph(3, 2);
  std::vector<double> tau;
  for (StateIndex i = 0; i < s.size(); ++i) tau.push_back(s.decode(i).edge_count());
  const ExpFamilySpec g32(s, std::vector<double>(s.size(), 1.0), 1, tau, ParameterMap::natural(1));
  CHECK(oracle::brute_partition(g32, ParamVector{1.0}) == doctest::Approx(3 * std::log(1 + M_E + M_E * M_E)).epsilon(1e-13));
}

TEST_CASE("brute union law") {
  std::vector<double> simple;
  for (StateIndex s = 0; s < 8; ++s) simple.push_back(testsupport::er_mass(s, 3, 0.4));
  const auto same = oracle::brute_union_law(3, simple, 1);
  for (std::size_t i = 0; i < 8; ++i) CHECK(same[i] == doctest::Approx(simple[i]));

  const double p = 0.3, q = 0.7;
  const auto two = oracle::brute_union_law(2, std::vector<double>{q, p}, 2);
  CHECK(two[0] == doctest::Approx(q * q));
  CHECK(two[1] == doctest::Approx(2 * p * q));
  CHECK(two[2] == doctest::Approx(p * p));
}

TEST_CASE("sum-product identity") {
  CHECK(oracle::sum_product_identity_check({{0.3, 0.9, 1.1}}).equal);
  const auto c = oracle::sum_product_identity_check({{2, 3}, {5, 7}});
  CHECK(c.product_of_sums == 60.0);
  CHECK(c.sum_of_products == 60.0);
  std::vector<std::vector<double>> tables(4, std::vector<double>(5));
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t b = 0; b < 5; ++b) tables[i][b] = counter_uniform(8, i, b);
  CHECK(oracle::sum_product_identity_check(tables).equal);
}
