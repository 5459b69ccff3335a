// Apache License, Version 2.0, refer to LICENSE.txt
#include <doctest.h>

#include <algorithm>

#include "support.hpp"

using namespace puchain;
using testsupport::build_matrix;
using testsupport::traj;

namespace {

void require_representation(const StochasticMatrix& P, const PuniformWitness& w) {
  for (std::size_t a = 0; a < P.size(); ++a) {
    for (std::size_t b = 0; b < P.size(); ++b) {
      const auto z = w.family().apply(static_cast<StateIndex>(a), static_cast<StateIndex>(b));
      REQUIRE(std::abs(P(a, b) - w.common_row()[z]) <= 1e-10);
    }
  }
}

}  // namespace

TEST_CASE("textbook two-state matrices") {
  for (double theta : {0.2, 0.7}) {
    const auto P = StochasticMatrix::from_rows({{theta, 1 - theta}, {1 - theta, theta}});
    const PermutationFamily swap({{0, 1}, {1, 0}});
    CHECK(check_puniform(P, swap));
    auto w = detect_puniform(P);
    REQUIRE(w);
    require_representation(P, *w);
  }
  const auto absorbing = StochasticMatrix::from_rows({{1, 0}, {1, 0}});
  CHECK(check_puniform(absorbing, PermutationFamily({{0, 1}, {0, 1}})));
  REQUIRE(detect_puniform(absorbing));

  const auto bad = StochasticMatrix::normalized_rows({{1, 2}, {3, 4}});
  const auto analysis = analyze_puniform(bad);
  CHECK_FALSE(analysis.witness);
  CHECK(analysis.violation);
}

TEST_CASE("check against a supplied family reports a violation") {
  const auto P = StochasticMatrix::from_rows({{0.2, 0.8}, {0.8, 0.2}});
  const PermutationFamily id({{0, 1}, {0, 1}});
  const auto c = check_puniform(P, id);
  CHECK_FALSE(c);
  REQUIRE(c.violation);
  CHECK(c.max_deviation == doctest::Approx(0.6));
}

TEST_CASE("gani matrix rows are not rearrangements of each other") {
  const auto cef = gani_cef();
  const ParamVector theta{2.0};
  std::vector<std::vector<double>> raw;
  for (std::size_t a = 0; a < 3; ++a) {
    std::vector<double> row;
    for (std::size_t b = 0; b < 3; ++b) row.push_back(cef.kappa(a, b) * std::pow(2.0, cef.tau(a, b)[0]));
    raw.push_back(row);
  }
  const auto P = StochasticMatrix::normalized_rows(raw);
  CHECK_FALSE(detect_puniform(P));
  const PermutationFamily id({{0, 1, 2}, {0, 1, 2}, {0, 1, 2}});
  CHECK_FALSE(check_puniform(P, id));
}

TEST_CASE("stability matrix detection recovers the ER row") {
  const int n = 3;
  const double p = 0.3;
  const auto P = build_matrix(8, [&](std::size_t a, std::size_t b) {
    return testsupport::er_mass(~(a ^ b) & 7u, 3, p);
  });
  auto w = detect_puniform(P);
  REQUIRE(w);
  require_representation(P, *w);
  std::vector<double> mu(w->common_row().values().begin(), w->common_row().values().end());
  std::vector<double> er;
  for (std::uint64_t g = 0; g < 8; ++g) er.push_back(testsupport::er_mass(g, num_dyads(n), p));
  std::sort(mu.begin(), mu.end());
  std::sort(er.begin(), er.end());
  CHECK(testsupport::max_abs_diff(mu, er) < 1e-12);
}

TEST_CASE("uniform matrix detects with the identity family") {
  const auto P = build_matrix(5, [](std::size_t, std::size_t) { return 0.2; });
  auto w = detect_puniform(P);
  REQUIRE(w);
  for (StateIndex a = 0; a < 5; ++a)
    for (StateIndex b = 0; b < 5; ++b) CHECK(w->family().apply(a, b) == b);
}

TEST_CASE("witness constructor rejects a wrong representation") {
  const auto P = StochasticMatrix::from_rows({{0.2, 0.8}, {0.8, 0.2}});
  const PermutationFamily id({{0, 1}, {0, 1}});
  CHECK_THROWS_AS(PuniformWitness(P, id, Pmf({0.2, 0.8})), std::invalid_argument);
}

TEST_CASE("detected witnesses reproduce random p-uniform matrices") {
  // Random rows of a common pmf placed through random permutations.
  const std::size_t n = 6;
  std::vector<double> mu{0.05, 0.1, 0.15, 0.2, 0.22, 0.28};
  for (std::uint64_t rep = 0; rep < 20; ++rep) {
    std::vector<Permutation> sigma(n);
    for (std::size_t a = 0; a < n; ++a) {
      sigma[a].resize(n);
      for (std::size_t i = 0; i < n; ++i) sigma[a][i] = static_cast<StateIndex>(i);
      for (std::size_t i = n - 1; i > 0; --i) {
        const auto j = counter_bits(rep, a, i) % (i + 1);
        std::swap(sigma[a][i], sigma[a][j]);
      }
    }
    const PermutationFamily fam(sigma);
    const auto P = build_matrix(n, [&](std::size_t a, std::size_t b) {
      return mu[fam.apply(static_cast<StateIndex>(a), static_cast<StateIndex>(b))];
    });
    auto w = detect_puniform(P);
    REQUIRE(w);
    require_representation(P, *w);
  }
}

TEST_CASE("modular companion sequence") {
  const auto fam = builtin_family(FamilyKind::modular, StateSpace::modular(3));
  const auto z = chain_to_iid(traj(3, {0, 1, 2, 0}), fam);
  CHECK(z == traj(3, {1, 1, 1}));
  CHECK(iid_to_chain(0, traj(3, {1, 1, 1}), fam) == traj(3, {0, 1, 2, 0}));
}

TEST_CASE("identity and stability companions") {
  const StateSpace g3 = StateSpace::multigraph(3, 1);
  const auto id = builtin_family(FamilyKind::identity, g3);
  const auto x = traj(8, {0, 3, 5, 7, 1});
  CHECK(chain_to_iid(x, id) == traj(8, {3, 5, 7, 1}));
  CHECK(iid_to_chain(0, traj(8, {3, 5, 7, 1}), id) == x);

  const auto stab = builtin_family(FamilyKind::stability, g3);
  const auto z = chain_to_iid(x, stab);
  for (std::size_t i = 1; i < x.size(); ++i) CHECK(z[i - 1] == (~(x[i - 1] ^ x[i]) & 7u));

  std::vector<StateIndex> zs;
  for (std::uint64_t i = 0; i < 50; ++i) zs.push_back(static_cast<StateIndex>(counter_bits(9, 0, i) % 8));
  const auto round = chain_to_iid(iid_to_chain(5, traj(8, zs), stab), stab);
  CHECK(round == traj(8, zs));
}

TEST_CASE("induced functions") {
  const auto mod = builtin_family(FamilyKind::modular, StateSpace::modular(3));
  CHECK(induced_function(mod, 1) == Permutation{1, 2, 0});
  CHECK(induced_maps_are_valid(mod));

  const StateSpace g3 = StateSpace::multigraph(3, 1);
  const auto id = builtin_family(FamilyKind::identity, g3);
  for (StateIndex z = 0; z < 8; ++z) CHECK(induced_function(id, z) == Permutation(8, z));

  const auto sd = builtin_family(FamilyKind::symdiff, g3);
  for (StateIndex z = 0; z < 8; ++z) {
    const auto f = induced_function(sd, z);
    for (StateIndex b = 0; b < 8; ++b) CHECK(f[b] == (b ^ z));
  }
  CHECK(induced_maps_are_valid(sd));
}

TEST_CASE("symmetry transfer") {
  const StateSpace g3 = StateSpace::multigraph(3, 1);
  const auto stab = builtin_family(FamilyKind::stability, g3);
  std::vector<double> mu;
  for (std::uint64_t g = 0; g < 8; ++g) mu.push_back(testsupport::er_mass(g, 3, 0.3));
  const auto P = build_matrix(8, [&](std::size_t a, std::size_t b) { return mu[~(a ^ b) & 7u]; });
  const auto r = symmetry_transfer_check(P, stab, Pmf(mu));
  CHECK(r.family_symmetric);
  CHECK(r.matrix_symmetric);

  const auto Q = StochasticMatrix::from_rows({{0.7, 0.3}, {0.3, 0.7}});
  const PermutationFamily swap({{0, 1}, {1, 0}});
  const auto s = symmetry_transfer_check(Q, swap, Pmf({0.7, 0.3}));
  CHECK(s.matrix_symmetric);
  CHECK(s.distinct_common_row);
  CHECK(s.family_symmetric);

  // Identity family with a non-symmetric P: nothing to transfer.
  const auto R = StochasticMatrix::from_rows({{0.6, 0.4}, {0.6, 0.4}});
  const auto v = symmetry_transfer_check(R, PermutationFamily({{0, 1}, {0, 1}}), Pmf({0.6, 0.4}));
  CHECK_FALSE(v.family_symmetric);
  CHECK_FALSE(v.matrix_symmetric);

  CHECK_THROWS_AS(symmetry_transfer_check(Q, PermutationFamily({{0, 1}, {0, 1}}), Pmf({0.7, 0.3})),
                  std::invalid_argument);
}
