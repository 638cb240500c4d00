#include "doctest.h"

#include "fixtures.hpp"
#include "strongcore/errors.hpp"
#include "strongcore/verification.hpp"

using namespace strongcore;

TEST_CASE("split graphs") {
  SUBCASE("everyone keeps their house, no strict pairs") {
    const HousingMarket m({"a", "b"}, {PreferenceRelation(2), PreferenceRelation(2)});
    const auto split = split_graphs(m, Allocation::identity(2));
    CHECK(split.better.empty());
    CHECK(split.weakly_better == underlying_graph(m));
  }
  SUBCASE("H1 with X1 and Xd") {
    const auto& m = fixtures::load("h1.json").market();
    const Allocation x = fixtures::allocation(m, {{"a", "b"}, {"b", "c"}, {"c", "a"}, {"d", "d"}});
    const auto split = split_graphs(m, x);
    CHECK(contains(split.indifferent, {0, 3}));
    CHECK(split.better == fixtures::arcs(m, {{"d", "c"}}));
    for (const Arc& arc : x.arcs()) CHECK(contains(split.indifferent, arc));
  }
  SUBCASE("H3 with the swap-swap allocation as literally printed") {
    const auto& m = fixtures::load("h3.json").market();
    const Allocation x = fixtures::allocation(m, {{"a", "b"}, {"b", "a"}, {"c", "c"}, {"d", "d"}});
    CHECK(split_graphs(m, x).better == fixtures::arcs(m, {{"c", "a"}, {"c", "d"}, {"d", "c"}}));
    CHECK(find_strict_blocking_cycle(m, x).cycle == Cycle{{2, 3}, {3, 2}});
  }
}

TEST_CASE("blocking cycles on H1") {
  const auto& m = fixtures::load("h1.json").market();
  const Allocation x1 = fixtures::allocation(m, {{"a", "b"}, {"b", "c"}, {"c", "a"}, {"d", "d"}});
  const Allocation x2 = fixtures::allocation(m, {{"a", "c"}, {"c", "b"}, {"b", "a"}, {"d", "d"}});
  const Certificate c1 = find_weak_blocking_cycle(m, x1);
  CHECK(c1.kind == CertificateKind::WeakBlockingCycle);
  CHECK(c1.cycle == Cycle{{0, 3}, {3, 2}, {2, 0}});
  const Certificate c2 = find_weak_blocking_cycle(m, x2);
  CHECK(c2.cycle == Cycle{{1, 3}, {3, 2}, {2, 1}});
  CHECK_FALSE(in_strong_core(m, x1));
  // Only d strictly improves on that cycle, so the core keeps X1 and Xd.
  CHECK(in_core(m, x1));
  CHECK_FALSE(check_peakset_characterization(m, x1).has_value());
  try {
    price_certificate(m, x1);
    FAIL("expected NotInStrongCore");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotInStrongCore);
  }
}

TEST_CASE("H3 allocations") {
  const auto& m = fixtures::load("h3.json").market();
  const Allocation x_orig = fixtures::allocation(m, {{"a", "b"}, {"b", "a"}, {"c", "d"}, {"d", "c"}});
  CHECK(find_weak_blocking_cycle(m, x_orig).kind == CertificateKind::None);
  CHECK(find_strict_blocking_cycle(m, x_orig).kind == CertificateKind::None);
  const auto split = split_graphs(m, x_orig);
  CHECK(split.better == fixtures::arcs(m, {{"c", "a"}}));
  CHECK(peak_sets(m, x_orig) == std::vector<std::vector<Agent>>{{0, 1}});

  const Certificate prices = price_certificate(m, x_orig);
  CHECK(prices.kind == CertificateKind::PriceVector);
  CHECK(prices.prices == std::vector<int>{2, 2, 1, 1});
  CHECK(prices_certify(m, x_orig, prices.prices));
  CHECK_FALSE(prices_certify(m, x_orig, std::vector<int>{1, 1, 1, 1}));

  const auto witness = check_peakset_characterization(m, x_orig);
  REQUIRE(witness.has_value());
  CHECK(witness->peak_set == std::vector<Agent>{0, 1});

  const Certificate keep = find_strict_blocking_cycle(m, Allocation::identity(4));
  CHECK(keep.cycle == Cycle{{0, 1}, {1, 0}});
}

TEST_CASE("peak sets and characterization on H2") {
  const auto& m = fixtures::load("h2.json").market();
  const Allocation x = fixtures::allocation(m, {{"a", "b"}, {"b", "c"}, {"c", "a"}, {"d1", "d2"}, {"d2", "d1"}});
  // (d1, c) is weakly better than d2 for d1, so only N itself is absorbing.
  CHECK(peak_sets(m, x) == std::vector<std::vector<Agent>>{{0, 1, 2, 3, 4}});
  const auto witness = check_peakset_characterization(m, x);
  REQUIRE(witness.has_value());
  CHECK(witness->outside.empty());
}

TEST_CASE("one agent") {
  const HousingMarket m({"a"}, {PreferenceRelation(1)});
  const Allocation x = Allocation::identity(1);
  CHECK(in_strong_core(m, x));
  CHECK(price_certificate(m, x).prices == std::vector<int>{1});
  const auto witness = check_peakset_characterization(m, x);
  REQUIRE(witness.has_value());
  CHECK(witness->peak_set == std::vector<Agent>{0});
}

TEST_CASE("incomparability audit") {
  const auto& m = fixtures::load("h2.json").market();
  const std::vector<Allocation> both{
      fixtures::allocation(m, {{"a", "b"}, {"b", "c"}, {"c", "a"}, {"d1", "d2"}, {"d2", "d1"}}),
      fixtures::allocation(m, {{"a", "c"}, {"c", "b"}, {"b", "a"}, {"d1", "d2"}, {"d2", "d1"}})};
  CHECK(incomparability_audit(m, both));
  CHECK(incomparability_audit(m, std::span(both.data(), 1)));
  const auto& h3 = fixtures::load("h3.json").market();
  const std::vector<Allocation> comparable{Allocation::identity(4),
                                           fixtures::allocation(h3, {{"a", "b"}, {"b", "a"}, {"c", "d"}, {"d", "c"}})};
  CHECK_FALSE(incomparability_audit(h3, comparable));
}
