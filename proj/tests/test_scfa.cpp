#include "doctest.h"

#include "fixtures.hpp"
#include "strongcore/errors.hpp"
#include "strongcore/scfa.hpp"

using namespace strongcore;

TEST_CASE("H1 has an empty strong core") {
  const Instance h1 = fixtures::load("h1.json");
  const SolveResult r = solve_scfa(h1);
  CHECK_FALSE(r.allocation.has_value());
  REQUIRE(r.trace.rounds.size() == 1);
  CHECK(r.trace.rounds[0].iterations.back().removed.size() == 1);
  CHECK_FALSE(r.trace.empty_reason.empty());
  CHECK(enumerate_scfa_outputs(h1).empty());
}

TEST_CASE("T*-valid arcs") {
  const auto& h1 = fixtures::load("h1.json").market();
  const std::vector<Agent> abc{0, 1, 2};
  CHECK(tstar_valid_arcs(h1, abc, abc, {}) ==
        fixtures::arcs(h1, {{"a", "c"}, {"c", "a"}, {"b", "c"}, {"c", "b"}}));

  const auto& h2 = fixtures::load("h2.json").market();
  const std::vector<Agent> all{0, 1, 2, 3, 4};
  CHECK(tstar_valid_arcs(h2, abc, all, {}) ==
        fixtures::arcs(h2, {{"a", "b"}, {"b", "c"}, {"c", "a"}, {"a", "c"}, {"c", "b"}, {"b", "a"}}));
  // Forbidden arcs drop out of E_S.
  const ArcSet forbidden = fixtures::arcs(h2, {{"a", "b"}});
  CHECK(tstar_valid_arcs(h2, abc, all, forbidden) ==
        fixtures::arcs(h2, {{"b", "c"}, {"c", "a"}, {"a", "c"}, {"c", "b"}, {"b", "a"}}));
}

TEST_CASE("H2 yields the lexicographically least strong-core allocation") {
  const Instance h2 = fixtures::load("h2.json");
  const auto& m = h2.market();
  const SolveResult r = solve_scfa(h2);
  REQUIRE(r.allocation.has_value());
  CHECK(*r.allocation ==
        fixtures::allocation(m, {{"a", "b"}, {"b", "c"}, {"c", "a"}, {"d1", "d2"}, {"d2", "d1"}}));
  REQUIRE(r.trace.rounds.size() == 1);
  CHECK(r.trace.rounds[0].tstar.size() == 5);
  CHECK(r.trace.rounds[0].chosen.size() == 2);

  const auto outputs = enumerate_scfa_outputs(h2);
  REQUIRE(outputs.size() == 2);
  CHECK(outputs[0] == *r.allocation);
  CHECK(outputs[1] == fixtures::allocation(m, {{"a", "c"}, {"c", "b"}, {"b", "a"}, {"d1", "d2"}, {"d2", "d1"}}));
}

TEST_CASE("H6 admits a single SCFA output") {
  const Instance h6 = fixtures::load("h6.json");
  const auto& m = h6.market();
  const Allocation expected =
      fixtures::allocation(m, {{"a", "c"}, {"c", "b"}, {"b", "a"}, {"d1", "d2"}, {"d2", "d1"}});
  const SolveResult r = solve_scfa(h6);
  REQUIRE(r.allocation.has_value());
  CHECK(*r.allocation == expected);
  CHECK(enumerate_scfa_outputs(h6) == std::vector<Allocation>{expected});
}

TEST_CASE("single agent") {
  const HousingMarket m({"a"}, {PreferenceRelation(1)});
  CHECK(solve_scfa(m, {}).allocation == Allocation::identity(1));
  const SolveResult r = solve_scfa(m, ArcSet{{0, 0}});
  CHECK_FALSE(r.allocation.has_value());
  CHECK_FALSE(r.trace.empty_reason.empty());
}

TEST_CASE("forced arcs") {
  const Instance h2 = fixtures::load("h2.json");
  const auto& m = h2.market();

  const Instance forced_ac = fixtures::load("h2_forced_ac.json");
  CHECK(reduce_forced_arcs(forced_ac) == fixtures::arcs(m, {{"a", "a"}, {"a", "b"}, {"a", "d1"}}));
  const SolveResult r = solve_scffa(forced_ac);
  REQUIRE(r.allocation.has_value());
  CHECK(*r.allocation == fixtures::allocation(m, {{"a", "c"}, {"c", "b"}, {"b", "a"}, {"d1", "d2"}, {"d2", "d1"}}));

  CHECK_FALSE(solve_scffa(fixtures::load("h2_forced_empty.json")).allocation.has_value());

  // Without forced arcs the reduction changes nothing.
  CHECK(solve_scffa(h2).allocation == solve_scfa(h2).allocation);
  CHECK_THROWS_AS(solve_scfa(forced_ac), Error);
}

TEST_CASE("enumeration guard") {
  std::vector<std::string> names;
  for (int i = 0; i < 9; ++i) names.push_back(std::to_string(i));
  const HousingMarket big(names, std::vector<PreferenceRelation>(9, PreferenceRelation(9)));
  try {
    enumerate_scfa_outputs(big, ArcSet{});
    FAIL("expected InstanceTooLarge");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InstanceTooLarge);
  }
  CHECK(enumerate_scfa_outputs(big, ArcSet{}, 9).size() >= 1);
}
