// Apache License, Version 2.0, refer to LICENSE.txt
#include <doctest.h>

#include "support.hpp"

using namespace puchain;

TEST_CASE("space and multigraph round trip") {
  for (const auto& s : {StateSpace::multigraph(4, 2), StateSpace::modular(5), StateSpace::generic(3),
                        StateSpace::generic(std::vector<std::string>{"a", "b"})}) {
    CHECK(space_from_json(to_json(s)) == s);
  }
  Multigraph g(4, 2);
  g.set(dyad_index(3, 1), 2);
  g.set(dyad_index(1, 0), 1);
  const json j = to_json(g);
  CHECK(multigraph_from_json(j) == g);
  CHECK(j.at("dyads").size() == 2);
  CHECK_THROWS_AS(multigraph_from_json(json::parse(R"({"n":3,"t":1,"dyads":[[1,1,1]]})")), FormatError);
}

TEST_CASE("families") {
  const StateSpace g3 = StateSpace::multigraph(3, 1);
  const auto stab = builtin_family(FamilyKind::stability, g3);
  CHECK(family_from_json(to_json(stab)) == stab);
  CHECK(family_from_json(json::parse(R"({"kind":"stability"})"), &g3) == stab);
  CHECK_THROWS(family_from_json(json::parse(R"({"sigma":[[0,0],[0,1]]})")));
}

TEST_CASE("matrices") {
  const auto P = matrix_from_json(json::parse(R"({"matrix":[[1,2],[3,4]],"normalize":true})"));
  CHECK(P(1, 1) == doctest::Approx(4.0 / 7));
  CHECK_THROWS(matrix_from_json(json::parse(R"([[1,2],[3,4]])")));
  const auto Q = StochasticMatrix::from_rows({{0.1, 0.9}, {1.0 / 3, 2.0 / 3}});
  const auto R = matrix_from_csv(matrix_to_csv(Q));
  for (std::size_t i = 0; i < 4; ++i) CHECK(R.entries()[i] == Q.entries()[i]);
  CHECK(matrix_from_json(to_json(Q)).entries()[2] == Q.entries()[2]);
  CHECK_THROWS_AS(matrix_from_csv("1,2\n3"), FormatError);
}

TEST_CASE("model documents") {
  const auto cef = cef_from_json(to_json(gani_cef()));
  CHECK(cef.num_rows() == 3);
  CHECK(cef.kappa(2, 0) == 2.75);
  CHECK(model_type(to_json(gani_cef())) == "cef");

  const auto er = erdos_renyi_family(3, ParameterMap::density_logit(3));
  const auto back = expfam_from_json(to_json(er));
  CHECK(log_partition(back, ParamVector{0.3}) == log_partition(er, ParamVector{0.3}));

  const auto m = ermgm_from_json(json::parse(
      R"({"type":"ermgm","n":3,"t":2,"eta":{"kind":"natural","dim":1},"tau_f":[[0],[1],[2]],"kappa_f":[1,1,1]})"));
  CHECK(fast_log_partition(m, ParamVector{1.0}) == doctest::Approx(3 * std::log(1 + M_E + M_E * M_E)));
  const auto named = ermgm_from_json(json::parse(R"({"model":"erdos_renyi","n":4,"t":1,"eta":{"kind":"density_logit","n":4}})"));
  CHECK(named.num_dyads() == 6);
  const auto again = ermgm_from_json(to_json(m));
  CHECK(fast_log_partition(again, ParamVector{0.4}) == fast_log_partition(m, ParamVector{0.4}));
  CHECK_THROWS_AS(ermgm_from_json(json::parse(R"({"type":"ermgm","n":3})")), FormatError);
}

TEST_CASE("parameter maps") {
  for (const auto& eta : {ParameterMap::natural(2), ParameterMap::scalar_log(), ParameterMap::density_logit(5)}) {
    const auto back = parameter_map_from_json(to_json(eta));
    CHECK(back.kind() == eta.kind());
    CHECK(back.param_dim() == eta.param_dim());
  }
}
