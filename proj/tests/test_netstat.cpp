// Apache License, Version 2.0, refer to LICENSE.txt
#include <doctest.h>

#include "support.hpp"

using namespace puchain;

namespace {

Multigraph graph(int n, std::initializer_list<std::pair<int, int>> edges) {
  Multigraph g(n, 1);
  for (auto [u, v] : edges) g.set(dyad_index(u - 1, v - 1), 1);
  return g;
}

DirectedGraph digraph(int n, std::initializer_list<std::pair<int, int>> arcs) {
  DirectedGraph d(n);
  for (auto [i, j] : arcs) d.set(i - 1, j - 1, true);
  return d;
}

}  // namespace

TEST_CASE("density and stability statistics") {
  const Multigraph empty(3, 1);
  const auto tri = graph(3, {{1, 2}, {2, 3}, {1, 3}});
  CHECK(stat_density(empty, tri) == 1.5);
  const auto a = graph(3, {{1, 2}});
  CHECK(stat_stability(a, a) == 1.5);
  CHECK(stat_stability(a, complement(a)) == 0.0);
  CHECK(symmetric_difference(a, tri) == graph(3, {{2, 3}, {1, 3}}));
}

TEST_CASE("degree sequences") {
  CHECK(degree_sequence(graph(3, {{1, 2}, {2, 3}})) == std::vector<int>{1, 2, 1});
  CHECK(degree_sequence(complement(Multigraph(4, 1))) == std::vector<int>{3, 3, 3, 3});
  Multigraph m(3, 2);
  m.set(dyad_index(1, 0), 2);
  CHECK(degree_sequence(m) == std::vector<int>{2, 2, 0});
  CHECK(sorted_degree_sequence(graph(3, {{2, 3}})) == std::vector<int>{1, 1, 0});
}

TEST_CASE("reciprocity") {
  CHECK(stat_reciprocity(digraph(3, {{1, 2}}), digraph(3, {{2, 1}})) == 3.0);
  CHECK(stat_reciprocity(DirectedGraph(3), digraph(3, {{2, 1}})) == 0.0);
  CHECK(stat_reciprocity(digraph(4, {{1, 2}, {3, 4}}), digraph(4, {{2, 1}})) == 2.0);
  const auto d = digraph(4, {{1, 2}, {4, 3}, {2, 4}});
  CHECK(DirectedGraph::from_code(4, d.code()) == d);
}

TEST_CASE("transitivity") {
  CHECK(stat_transitivity(graph(3, {{1, 2}, {2, 3}}), graph(3, {{1, 3}})) == 3.0);
  CHECK(stat_transitivity(graph(4, {{1, 2}, {2, 3}, {3, 4}}), graph(4, {{1, 3}})) == 2.0);
  CHECK(stat_transitivity(Multigraph(3, 1), graph(3, {{1, 3}})) == 0.0);
  CHECK(triangle_count(graph(4, {{1, 2}, {2, 3}, {1, 3}, {3, 4}})) == 1);
  CHECK(triangle_count(complement(Multigraph(4, 1))) == 4);
}

TEST_CASE("dyadditive statistics") {
  const StateSpace g3 = StateSpace::multigraph(3, 1);
  const auto edges = factor_dyadditive(g3, 1, [](const Multigraph& g) { return std::vector<double>{double(g.edge_count())}; });
  REQUIRE(edges.factorization);
  CHECK(edges.states_checked == 8);
  for (std::size_t f = 0; f < 3; ++f) {
    CHECK(edges.factorization->tau(f, 0)[0] == 0.0);
    CHECK(edges.factorization->tau(f, 1)[0] == 1.0);
  }

  const auto degs = factor_dyadditive(g3, 3, [](const Multigraph& g) {
    const auto d = degree_sequence(g);
    return std::vector<double>(d.begin(), d.end());
  });
  REQUIRE(degs.factorization);
  // Incidence columns: dyad {u, v} contributes 1 to degrees u and v.
  for (std::size_t f = 0; f < 3; ++f) {
    const Dyad d = dyad_at(f);
    for (int u = 0; u < 3; ++u) CHECK(degs.factorization->tau(f, 1)[u] == ((u == d.u || u == d.v) ? 1.0 : 0.0));
  }

  const auto tri = factor_dyadditive(g3, 1, [](const Multigraph& g) { return std::vector<double>{double(triangle_count(g))}; });
  CHECK_FALSE(tri.factorization);
  REQUIRE(tri.witness);
  CHECK(tri.witness->edge_count() == 3);

  // A constant offset is spread evenly over the dyads.
  const auto shifted = factor_dyadditive(StateSpace::multigraph(3, 2), 1,
                                         [](const Multigraph& g) { return std::vector<double>{g.edge_count() + 4.5}; });
  REQUIRE(shifted.factorization);
  CHECK(shifted.factorization->tau(0, 0)[0] == doctest::Approx(1.5));
}

TEST_CASE("dyadically multiplicative carriers") {
  const StateSpace g3 = StateSpace::multigraph(3, 1);
  const auto one = factor_dyadically_multiplicative(g3, [](const Multigraph&) { return 1.0; });
  REQUIRE(one.factorization);
  for (std::size_t f = 0; f < 3; ++f) CHECK(one.factorization->kappa(f, 1) == 1.0);

  const auto pow2 = factor_dyadically_multiplicative(g3, [](const Multigraph& g) { return std::pow(2.0, g.edge_count()); });
  REQUIRE(pow2.factorization);
  for (std::size_t f = 0; f < 3; ++f) CHECK(pow2.factorization->kappa(f, 1) == doctest::Approx(2 * pow2.factorization->kappa(f, 0)));

  const auto tri = factor_dyadically_multiplicative(g3, [](const Multigraph& g) { return triangle_count(g) + 1.0; });
  CHECK_FALSE(tri.factorization);
  CHECK(tri.witness);

  // The empty graph has zero carrier here, so another base point is used.
  const auto shifted = factor_dyadically_multiplicative(g3, [](const Multigraph& g) {
    return g[0] == 1 ? std::pow(3.0, g.edge_count()) : 0.0;
  });
  REQUIRE(shifted.factorization);
}

TEST_CASE("multigraph union") {
  const auto g = graph(3, {{1, 2}, {2, 3}});
  const std::vector<Multigraph> twice{g, g};
  const auto u = multigraph_union(twice);
  CHECK(u.t() == 2);
  CHECK(u.multiplicities()[dyad_index(0, 1)] == 2);
  CHECK(u.multiplicities()[dyad_index(0, 2)] == 0);
  const std::vector<Multigraph> pair{g, complement(g)};
  const auto both = multigraph_union(pair);
  for (int m : both.multiplicities()) CHECK(m == 1);
  const std::vector<Multigraph> empties{Multigraph(3, 1), Multigraph(3, 1), Multigraph(3, 1)};
  CHECK(multigraph_union(empties).edge_count() == 0);
}

TEST_CASE("isomorphism classes") {
  const auto c3 = iso_classes(StateSpace::multigraph(3, 1));
  REQUIRE(c3.num_classes() == 4);
  std::vector<std::size_t> sizes;
  for (std::size_t c = 0; c < 4; ++c) sizes.push_back(c3.members(c).size());
  CHECK(sizes == std::vector<std::size_t>{1, 3, 3, 1});

  const auto c22 = iso_classes(StateSpace::multigraph(2, 2));
  CHECK(c22.num_classes() == 3);

  const StateSpace g4 = StateSpace::multigraph(4, 1);
  const auto c4 = iso_classes(g4);
  CHECK(c4.num_classes() == 11);
  CHECK(c4.members(c4.class_of(0)).size() == 1);
  CHECK(c4.members(c4.class_of(63)).size() == 1);

  // Brute-force cross-check of are_isomorphic against the orbit partition.
  for (StateIndex a = 0; a < 64; a += 5)
    for (StateIndex b = 0; b < 64; b += 3)
      CHECK(are_isomorphic(g4.decode(a), g4.decode(b)) == (c4.class_of(a) == c4.class_of(b)));
}

TEST_CASE("finite exchangeability") {
  const StateSpace g3 = StateSpace::multigraph(3, 1);
  const auto classes = iso_classes(g3);
  std::vector<double> er, deg0, sorted0;
  for (StateIndex s = 0; s < 8; ++s) {
    er.push_back(testsupport::er_mass(s, 3, 0.3));
    deg0.push_back(degree_sequence(g3.decode(s))[0]);
    sorted0.push_back(sorted_degree_sequence(g3.decode(s))[0]);
  }
  CHECK(is_finitely_exchangeable(er, classes));
  const auto d = is_finitely_exchangeable(deg0, classes);
  CHECK_FALSE(d);
  REQUIRE(d.witness);
  CHECK(g3.decode(d.witness->first).edge_count() == g3.decode(d.witness->second).edge_count());
  CHECK(is_finitely_exchangeable(sorted0, classes));
}

TEST_CASE("relation invariance") {
  const StateSpace g3 = StateSpace::multigraph(3, 1);
  const auto classes = iso_classes(g3);
  std::vector<Permutation> comp(8, Permutation(8));
  for (auto& s : comp)
    for (StateIndex b = 0; b < 8; ++b) s[b] = ~b & 7u;
  CHECK(is_relation_invariant(PermutationFamily(comp), classes));
  CHECK(is_relation_invariant(builtin_family(FamilyKind::identity, g3), classes));

  auto adversarial = builtin_family(FamilyKind::identity, g3).members();
  std::swap(adversarial[5][0], adversarial[5][1]);
  const auto r = is_relation_invariant(PermutationFamily(adversarial), classes);
  CHECK_FALSE(r);
  CHECK(r.witness);
}

TEST_CASE("exchangeability transfer") {
  const StateSpace g3 = StateSpace::multigraph(3, 1);
  const auto classes = iso_classes(g3);
  const auto id = builtin_family(FamilyKind::identity, g3);
  std::vector<double> er;
  for (StateIndex s = 0; s < 8; ++s) er.push_back(testsupport::er_mass(s, 3, 0.3));
  const auto P = testsupport::build_matrix(8, [&](std::size_t, std::size_t b) { return er[b]; });
  const auto ok = exchangeability_transfer(P, id, Pmf(er), classes);
  CHECK(ok.mu_exchangeable);
  CHECK(ok.every_row);
  CHECK(ok.some_row);

  std::vector<double> lumpy(8, 0.05);
  lumpy[1] = 0.65;
  const auto Q = testsupport::build_matrix(8, [&](std::size_t, std::size_t b) { return lumpy[b]; });
  const auto bad = exchangeability_transfer(Q, id, Pmf(lumpy), classes);
  CHECK_FALSE(bad.mu_exchangeable);
  CHECK_FALSE(bad.every_row);
  CHECK_FALSE(bad.some_row);

  const StateSpace single = StateSpace::multigraph(1, 1);
  const auto one = exchangeability_transfer(StochasticMatrix::from_rows({{1.0}}), PermutationFamily(std::vector<Permutation>{{0}}), Pmf({1.0}),
                                            iso_classes(single));
  CHECK(one.mu_exchangeable);
  CHECK(one.every_row);

  CHECK_THROWS_AS(exchangeability_transfer(P, builtin_family(FamilyKind::stability, g3), Pmf(er), classes),
                  std::invalid_argument);
}
