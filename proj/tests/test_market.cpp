#include "doctest.h"

#include "fixtures.hpp"
#include "strongcore/errors.hpp"
#include "strongcore/market.hpp"

using namespace strongcore;

namespace {

std::size_t loops(const ArcSet& arcs) {
  std::size_t count = 0;
  for (const Arc& arc : arcs) count += arc.tail == arc.head ? 1 : 0;
  return count;
}

ErrorCode parse_error(const std::string& text) {
  try {
    parse_instance(text);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("document parsed without error");
  return ErrorCode::IoFailure;
}

}  // namespace

TEST_CASE("preference relation is closed transitively") {
  const std::vector<StrictPair> pairs{{0, 1}, {1, 2}};
  const auto r = PreferenceRelation::from_pairs(3, pairs);
  CHECK(r.prefers(0, 2));
  CHECK_FALSE(r.prefers(2, 0));
  CHECK(r.pair_count() == 3);
  CHECK(r.covering_pairs() == pairs);
  CHECK(r.indifferent(1, 1));
  CHECK(r.weakly_prefers(0, 0));
}

TEST_CASE("symmetric strict pairs are rejected") {
  const std::vector<StrictPair> pairs{{1, 2}, {2, 1}};
  CHECK_THROWS_AS(PreferenceRelation::from_pairs(3, pairs), Error);
  CHECK(parse_error(R"({"agents":["a","b","c"],"preferences":{"a":{"strict":[["b","c"],["c","b"]]}}})") ==
        ErrorCode::CycleInStrictRelation);
  CHECK(parse_error(R"({"agents":["a"],"preferences":{"a":{"strict":[["a","a"]]}}})") ==
        ErrorCode::CycleInStrictRelation);
}

TEST_CASE("H1 parses with 4 loops and 9 other arcs") {
  const Instance h1 = fixtures::load("h1.json");
  const ArcSet e = underlying_graph(h1.market());
  CHECK(h1.market().size() == 4);
  CHECK(loops(e) == 4);
  CHECK(e.size() - loops(e) == 9);
  CHECK(h1.market().arc_count() == 13);
}

TEST_CASE("H2 parses with 11 non-loop arcs") {
  const Instance h2 = fixtures::load("h2.json");
  const ArcSet e = underlying_graph(h2.market());
  CHECK(h2.market().size() == 5);
  CHECK(e.size() - loops(e) == 11);
}

TEST_CASE("undominated arcs") {
  SUBCASE("H1") {
    const auto& m = fixtures::load("h1.json").market();
    CHECK(undominated_arcs(m) ==
          fixtures::arcs(m, {{"a", "b"}, {"a", "c"}, {"b", "c"}, {"b", "a"}, {"c", "a"}, {"c", "b"}, {"d", "c"}}));
  }
  SUBCASE("H6 out of a, b, c") {
    const auto& m = fixtures::load("h6.json").market();
    ArcSet u = undominated_arcs(m);
    std::erase_if(u, [&](const Arc& arc) { return arc.tail > fixtures::agent(m, "c"); });
    CHECK(u == fixtures::arcs(m, {{"a", "c"}, {"b", "a"}, {"c", "b"}, {"a", "d1"}, {"b", "d1"}, {"c", "d1"}}));
  }
  SUBCASE("no strict pairs: everything including the loop") {
    const HousingMarket m({"a", "b"}, {PreferenceRelation(2), PreferenceRelation(2)});
    CHECK(undominated_arcs(m) == underlying_graph(m));
    CHECK(underlying_graph(m).size() == 4);
  }
}

TEST_CASE("single agent graph is its loop") {
  const HousingMarket m({"a"}, {PreferenceRelation(1)});
  CHECK(underlying_graph(m) == ArcSet{{0, 0}});
}

TEST_CASE("H6 underlying graph") {
  const auto& m = fixtures::load("h6.json").market();
  const ArcSet e = underlying_graph(m);
  CHECK(loops(e) == 5);
  CHECK(e.size() - 5 == 11);  // 3 agents x 3 others, plus the d1-d2 swap
}

TEST_CASE("restrict") {
  const auto& h1 = fixtures::load("h1.json").market();
  const std::vector<Agent> d{fixtures::agent(h1, "d")};
  const HousingMarket only_d = restrict(h1, d);
  CHECK(only_d.size() == 1);
  CHECK(only_d.name(0) == "d");
  CHECK(underlying_graph(only_d) == ArcSet{{0, 0}});

  const std::vector<Agent> all{0, 1, 2, 3};
  CHECK(restrict(h1, all) == h1);

  const auto& h2 = fixtures::load("h2.json").market();
  const std::vector<Agent> abc{0, 1, 2};
  const HousingMarket sub = restrict(h2, abc);
  CHECK(undominated_arcs(sub) ==
        fixtures::arcs(sub, {{"a", "b"}, {"b", "c"}, {"c", "a"}, {"a", "c"}, {"c", "b"}, {"b", "a"}}));
  CHECK_THROWS_AS(restrict(h2, std::vector<Agent>{}), Error);
}

TEST_CASE("instance restrictions are validated") {
  const std::string base = R"("agents":["a","b"],"preferences":{"a":{"strict":[["b","a"]]},"b":{"unacceptable":["a"]}})";
  CHECK(parse_error("{" + base + R"(,"forbidden":[["a","x"]]})") == ErrorCode::UnknownAgent);
  CHECK(parse_error("{" + base + R"(,"forbidden":[["b","a"]]})") == ErrorCode::NonEdgeRestriction);
  CHECK(parse_error("{" + base + R"(,"forbidden":[["a","b"]],"forced":[["a","b"]]})") ==
        ErrorCode::ConflictingRestriction);
  CHECK(parse_error("{" + base + R"(,"forced":[["a","b"],["a","a"]]})") == ErrorCode::ConflictingRestriction);
  CHECK(parse_error(fixtures::read("malformed.json")) == ErrorCode::MalformedDocument);
  CHECK(parse_error(R"({"agents":[]})") == ErrorCode::MalformedDocument);
  CHECK(parse_error(R"({"agents":["a","a"]})") == ErrorCode::MalformedDocument);
}

TEST_CASE("serialization round-trips") {
  for (const char* name : {"h1.json", "h2.json", "h3.json", "h6.json", "h2_forced_empty.json"}) {
    const Instance original = fixtures::load(name);
    const std::string text = serialize_instance(original);
    const Instance again = parse_instance(text);
    CHECK(again == original);
    CHECK(serialize_instance(again) == text);
  }
}

TEST_CASE("allocations") {
  const auto& h3 = fixtures::load("h3.json").market();
  CHECK_THROWS_AS(Allocation(std::vector<Agent>{0, 0, 1, 2}), Error);
  const Allocation keep = Allocation::identity(4);
  CHECK(is_allocation_of(h3, keep));
  // c may take a's house but a cannot take c's
  const Allocation bad(std::vector<Agent>{2, 1, 0, 3});
  CHECK_FALSE(is_allocation_of(h3, bad));
  CHECK_THROWS_AS(validate_allocation(h3, bad), Error);
  const Allocation x = fixtures::allocation(h3, {{"a", "b"}, {"b", "a"}, {"c", "d"}, {"d", "c"}});
  CHECK(x.arcs() == fixtures::arcs(h3, {{"a", "b"}, {"b", "a"}, {"c", "d"}, {"d", "c"}}));
}

TEST_CASE("market from acceptability lists") {
  const HousingMarket m = market_from_acceptability({"x", "y"}, {{1}, {}});
  CHECK(m.prefers(0, 1, 0));
  CHECK_FALSE(m.accepts(1, 0));
  CHECK(m.acceptable(1).size() == 1);
}
