// Apache License, Version 2.0, refer to LICENSE.txt
#include <doctest.h>

#include "support.hpp"

using namespace puchain;
using testsupport::traj;

namespace {

ExpFamilySpec er_natural(int n) { return erdos_renyi_family(n, ParameterMap::natural(1)); }

double gani_normalizer(double th) { return 3 * th + th * th * th; }

}  // namespace

TEST_CASE("log_sum_exp") {
  const std::vector<double> v{1000.0, 1000.0};
  CHECK(log_sum_exp(v) == doctest::Approx(1000.0 + std::log(2.0)));
  CHECK(std::isinf(log_sum_exp(std::vector<double>{})));
}

TEST_CASE("single state partition") {
  const ExpFamilySpec one(StateSpace::generic(1), {1.0}, 1, {0.0}, ParameterMap::natural(1));
  CHECK(log_partition(one, ParamVector{3.0}) == 0.0);
}

TEST_CASE("ER partition closed form") {
  const auto fam = er_natural(3);
  for (double g : {-2.0, -1.0, 0.0, 0.5, 3.0}) {
    CHECK(log_partition(fam, ParamVector{g}) == doctest::Approx(3 * std::log1p(std::exp(g / 2))).epsilon(1e-13));
  }
}

TEST_CASE("gani row 0 as a pmf family") {
  const ExpFamilySpec row0(StateSpace::generic(3), {2, 1, 1}, 1, {1, 1, 3}, ParameterMap::scalar_log());
  for (double th : {0.5, 1.0, 2.0}) {
    CHECK(log_partition(row0, ParamVector{th}) == doctest::Approx(std::log(gani_normalizer(th))).epsilon(1e-13));
  }
  const Pmf p = pmf(row0, ParamVector{1.0});
  CHECK(p[0] == doctest::Approx(0.5));
  CHECK(p[1] == doctest::Approx(0.25));
  CHECK(p[2] == doctest::Approx(0.25));
}

TEST_CASE("ER pmf under the density logit") {
  const auto fam = erdos_renyi_family(3, ParameterMap::density_logit(3));
  const Pmf p = pmf(fam, ParamVector{0.3});
  for (std::uint64_t g = 0; g < 8; ++g) CHECK(p[g] == doctest::Approx(testsupport::er_mass(g, 3, 0.3)).epsilon(1e-12));
  const Pmf u = pmf(er_natural(3), ParamVector{0.0});
  for (std::size_t g = 0; g < 8; ++g) CHECK(u[g] == doctest::Approx(0.125));
}

TEST_CASE("parameter maps") {
  const auto logit = ParameterMap::density_logit(4);
  CHECK(logit(ParamVector{0.5})[0] == doctest::Approx(0.0));
  CHECK(logit(ParamVector{0.3})[0] == doctest::Approx(3 * std::log(3.0 / 7)));
  CHECK_FALSE(logit.in_domain(ParamVector{1.0}));
  CHECK_THROWS(logit(ParamVector{1.0}));
  CHECK_THROWS(ParameterMap::scalar_log()(ParamVector{-1.0}));
  const auto table = ParameterMap::table({{{0.0}, {1.0, 2.0}}, {{1.0}, {3.0, 4.0}}});
  CHECK(table(ParamVector{1.0}) == ParamVector{3.0, 4.0});
  CHECK_THROWS(table(ParamVector{2.0}));
}

TEST_CASE("gani transition rows") {
  const auto cef = gani_cef();
  const auto P = cef_transition_matrix(cef.restrict_rows(2), ParamVector{1.0});
  CHECK(P(0, 0) == doctest::Approx(0.5));
  CHECK(P(0, 1) == doctest::Approx(0.25));
  CHECK(P(0, 2) == doctest::Approx(0.25));
  CHECK(P(1, 0) == doctest::Approx(1.0 / 12));
  CHECK(P(1, 1) == doctest::Approx(1.0 / 6));
  CHECK(P(1, 2) == doctest::Approx(0.75));
}

TEST_CASE("degenerate and density transition matrices") {
  const auto flat = CefSpec::tabulate(StateSpace::generic(4), 1, [](StateIndex, StateIndex, std::span<double> v) { v[0] = 0; },
                                      {}, ParameterMap::natural(1));
  const auto P = cef_transition_matrix(flat, ParamVector{1.7});
  for (double e : P.entries()) CHECK(e == doctest::Approx(0.25));

  const auto D = cef_transition_matrix(density_cef(3), ParamVector{0.5});
  for (double e : D.entries()) CHECK(e == doctest::Approx(0.125));
}

TEST_CASE("validate_cef flags the third gani row") {
  const std::vector<ParamVector> probes{{2.0}};
  const auto v = validate_cef(gani_cef(), probes);
  CHECK(v.raw_row_sums[0][0] == doctest::Approx(14.0));
  CHECK(v.raw_row_sums[0][1] == doctest::Approx(14.0));
  CHECK(v.raw_row_sums[0][2] == doctest::Approx(15.5));
  CHECK_FALSE(v.shared_normalizer);
  CHECK(v.rows_breaking_shared_normalizer[0] == std::vector<std::size_t>{2});

  const auto ok = validate_cef(gani_cef().restrict_rows(2), probes);
  CHECK(ok.shared_normalizer);

  const auto dens = validate_cef(density_cef(3), std::vector<ParamVector>{{0.3}});
  const double gamma = ParameterMap::density_logit(3)(ParamVector{0.3})[0];
  for (double s : dens.raw_row_sums[0]) CHECK(s == doctest::Approx(std::pow(1 + std::exp(gamma / 2), 3)));
}

TEST_CASE("mef_check") {
  CHECK(mef_check(gani_cef().restrict_rows(2), gani_cef().eta().default_probes()));
  CHECK_FALSE(mef_check(gani_cef(), std::vector<ParamVector>{{2.0}}));
  CHECK_FALSE(mef_check(transitivity_cef(4), std::vector<ParamVector>{{1.0}, {2.0}}));
  CHECK(mef_check(density_cef(3), density_cef(3).eta().default_probes()));
  CHECK_THROWS(MefSpec::by_construction(gani_cef()));
}

TEST_CASE("row value sets") {
  const auto g = gani_row_value_sets(gani_cef());
  CHECK(g.all_equal);
  for (const auto& s : g.sets) CHECK(s == std::vector<double>{1.0, 3.0});

  const auto c = CefSpec::tabulate(StateSpace::generic(3), 1, [](StateIndex, StateIndex, std::span<double> v) { v[0] = 2.5; },
                                   {}, ParameterMap::natural(1));
  const auto cs = gani_row_value_sets(c);
  CHECK(cs.all_equal);
  CHECK(cs.sets[0] == std::vector<double>{2.5});
}

TEST_CASE("transition counts") {
  const auto N = transition_counts(traj(3, {0, 1, 2, 0}));
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t b = 0; b < 3; ++b) CHECK(N(a, b) == ((b == (a + 1) % 3) ? 1u : 0u));
  const auto M = transition_counts(traj(3, {0, 0, 0}));
  CHECK(M(0, 0) == 2);
  CHECK(M.total() == 2);

  std::vector<StateIndex> x;
  for (std::uint64_t i = 0; i <= 100; ++i) x.push_back(static_cast<StateIndex>(counter_bits(3, 0, i) % 4));
  const auto R = transition_counts(traj(4, x));
  CHECK(R.total() == 100);
  std::uint64_t sum = 0;
  for (auto r : R.row_sums()) sum += r;
  CHECK(sum == 100);
}

TEST_CASE("joint log pmf from counts") {
  const auto flip = StochasticMatrix::from_rows({{0, 1}, {1, 0}});
  CHECK(joint_log_pmf_from_counts(flip, transition_counts(traj(2, {0, 1, 0}))).value == 0.0);
  const auto stay = joint_log_pmf_from_counts(flip, transition_counts(traj(2, {0, 0})));
  CHECK(stay.impossible);

  const auto U = testsupport::build_matrix(3, [](std::size_t, std::size_t) { return 1.0 / 3; });
  CHECK(joint_log_pmf_from_counts(U, transition_counts(traj(3, {0, 2, 1, 1, 0}))).value ==
        doctest::Approx(4 * std::log(1.0 / 3)));

  const auto cef = gani_cef().restrict_rows(2);
  const auto P = cef_transition_matrix(cef, ParamVector{1.5});
  // Rows 0-1 only: row 2 is not part of the fixture, so end anywhere but never leave from 2.
  const auto x = traj(3, {0, 1, 1, 2});
  const double direct = std::log(P(0, 1)) + std::log(P(1, 1)) + std::log(P(1, 2));
  CHECK(std::abs(joint_log_pmf_from_counts(P, transition_counts(x)).value - direct) < 1e-14);
}

TEST_CASE("mef joint log pmf agrees with counts") {
  const auto mef = MefSpec::by_construction(density_cef(3));
  const ParamVector theta{0.3};
  const auto P = cef_transition_matrix(mef.cef(), theta);
  for (StateIndex a = 0; a < 8; ++a) {
    const auto x = traj(8, {a, (a * 3 + 1) % 8});
    CHECK(mef_joint_log_pmf(mef, theta, x).value == doctest::Approx(std::log(P(x[0], x[1]))).epsilon(1e-12));
  }

  // A zero carrier on a visited transition is impossible on both paths.
  const auto zero = CefSpec::tabulate(StateSpace::generic(2), 1, [](StateIndex, StateIndex b, std::span<double> v) { v[0] = b; },
                                      [](StateIndex, StateIndex b) { return b == 0 ? 0.0 : 1.0; }, ParameterMap::natural(1));
  const auto zmef = MefSpec::by_construction(zero);
  const auto zx = traj(2, {1, 0});
  CHECK(mef_joint_log_pmf(zmef, ParamVector{1.0}, zx).impossible);
  CHECK(joint_log_pmf_from_counts(cef_transition_matrix(zero, ParamVector{1.0}), transition_counts(zx)).impossible);
}

TEST_CASE("mean parameter") {
  const auto sub = MefSpec::by_construction(gani_cef().restrict_rows(2));
  for (double th : {0.5, 1.0, 2.0}) {
    const auto m = mean_parameter(sub, ParamVector{th});
    const double expected = (3 * th + 3 * th * th * th) / gani_normalizer(th);
    for (const auto& r : m.per_row) CHECK(std::abs(r[0] - expected) < 1e-12);
  }
  CHECK(mean_parameter(sub, ParamVector{1.0}).mean[0] == doctest::Approx(1.5));

  const auto dens = MefSpec::by_construction(density_cef(4));
  const auto m = mean_parameter(dens, ParamVector{0.3});
  CHECK(m.mean[0] == doctest::Approx(0.6).epsilon(1e-12));
  REQUIRE(m.gradient_error);
  CHECK(*m.gradient_error < kGradientTolerance);

  const auto c = CefSpec::tabulate(StateSpace::generic(3), 1, [](StateIndex, StateIndex, std::span<double> v) { v[0] = 4.0; },
                                   {}, ParameterMap::natural(1));
  CHECK(mean_parameter(MefSpec::by_construction(c), ParamVector{-0.7}).mean[0] == doctest::Approx(4.0));

  CHECK_THROWS_AS(mean_parameter(MefSpec::check(gani_cef(), std::vector<ParamVector>{{2.0}}), ParamVector{2.0}), ModelError);
}

TEST_CASE("p-uniform cef to exponential family") {
  const StateSpace g3 = StateSpace::multigraph(3, 1);
  for (auto [cef, kind] : {std::pair{density_cef(3), FamilyKind::identity}, {stability_cef(3), FamilyKind::stability}}) {
    const auto fam = puniform_cef_to_expfam(cef, builtin_family(kind, g3));
    for (StateIndex b = 0; b < 8; ++b) {
      CHECK(fam.tau(b)[0] == doctest::Approx(testsupport::popcount(b) / 2.0));
      CHECK(fam.kappa(b) == 1.0);
    }
  }
  CHECK_THROWS_AS(puniform_cef_to_expfam(transitivity_cef(4), builtin_family(FamilyKind::identity, StateSpace::multigraph(4, 1))),
                  ModelError);
}

TEST_CASE("exponential family to mef") {
  const StateSpace g3 = StateSpace::multigraph(3, 1);
  const auto er = erdos_renyi_family(3, ParameterMap::density_logit(3));
  const ParamVector theta{0.3};
  const auto dens = cef_transition_matrix(expfam_to_mef(er, builtin_family(FamilyKind::identity, g3)).cef(), theta);
  const auto stab = cef_transition_matrix(expfam_to_mef(er, builtin_family(FamilyKind::stability, g3)).cef(), theta);
  for (std::size_t a = 0; a < 8; ++a) {
    for (std::size_t b = 0; b < 8; ++b) {
      CHECK(dens(a, b) == doctest::Approx(testsupport::er_mass(b, 3, 0.3)).epsilon(1e-12));
      CHECK(stab(a, b) == doctest::Approx(testsupport::er_mass(~(a ^ b) & 7u, 3, 0.3)).epsilon(1e-12));
    }
  }
  const ExpFamilySpec one(StateSpace::generic(1), {1.0}, 1, {0.0}, ParameterMap::natural(1));
  const auto single = cef_transition_matrix(expfam_to_mef(one, PermutationFamily(std::vector<Permutation>{{0}})).cef(), ParamVector{1.0});
  CHECK(single(0, 0) == 1.0);
}

TEST_CASE("kappa and tau p-uniformity") {
  const StateSpace g3 = StateSpace::multigraph(3, 1);
  const auto d = kappa_tau_puniformity(density_cef(3), builtin_family(FamilyKind::identity, g3));
  CHECK(d.kappa_puniform);
  CHECK(d.tau_puniform);
  const auto s = kappa_tau_puniformity(stability_cef(3), builtin_family(FamilyKind::stability, g3));
  CHECK(s.tau_puniform);
  for (bool m : s.matrix_puniform) CHECK(m);
  const auto t = kappa_tau_puniformity(transitivity_cef(4), builtin_family(FamilyKind::identity, StateSpace::multigraph(4, 1)));
  CHECK_FALSE(t.tau_puniform);
  CHECK(t.tau_violation);
  CHECK_FALSE(t.tau_rows_are_permutations);
}

TEST_CASE("affine independence") {
  CHECK(affinely_independent_entries(std::vector<ParamVector>{{0.0}, {1.0}}));
  CHECK_FALSE(affinely_independent_entries(std::vector<ParamVector>{{0, 0}, {1, 1}, {2, 2}}));
  CHECK(affinely_independent_entries(std::vector<ParamVector>{{0, 0}, {1, 0}, {0, 1}}));
}

TEST_CASE("pmf normalization across probes") {
  for (const auto& fam : {er_natural(3), er_natural(4), erdos_renyi_family(4, ParameterMap::density_logit(4))}) {
    for (const auto& theta : fam.eta().default_probes()) {
      const Pmf p = pmf(fam, theta);
      double s = 0.0;
      for (double v : p.values()) s += v;
      CHECK(std::abs(s - 1.0) < 1e-12);
    }
  }
}
