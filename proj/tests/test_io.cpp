#include "doctest.h"

#include "fixtures.hpp"
#include "strongcore/io.hpp"

using namespace strongcore;

TEST_CASE("allocation documents") {
  const auto& m = fixtures::load("h3.json").market();
  const Allocation x = parse_allocation(m, fixtures::read("h3_x_orig.json"));
  CHECK(x == fixtures::allocation(m, {{"a", "b"}, {"b", "a"}, {"c", "d"}, {"d", "c"}}));
  CHECK(dump(allocation_to_json(m, x)) == fixtures::read("h3_x_orig.json"));
  CHECK(parse_allocation(m, R"([["a","b"],["b","a"],["c","d"],["d","c"]])") == x);
  CHECK(parse_allocation(m, R"({"allocation":{"a":"b","b":"a","c":"d","d":"c"}})") == x);

  const auto code = [&](const char* text) {
    try {
      parse_allocation(m, text);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::IoFailure;
  };
  CHECK(code(R"({"a":"b","b":"a","c":"d"})") == ErrorCode::InvalidAllocation);
  CHECK(code(R"({"a":"c","b":"b","c":"a","d":"d"})") == ErrorCode::InvalidAllocation);
  CHECK(code(R"({"a":"z","b":"a","c":"d","d":"c"})") == ErrorCode::UnknownAgent);
  CHECK(code("[1, 2") == ErrorCode::MalformedDocument);
}

TEST_CASE("certificate documents") {
  const auto& m = fixtures::load("h1.json").market();
  const Allocation x = parse_allocation(m, fixtures::read("h1_x1_xd.json"));
  const Json doc = certificate_to_json(m, find_weak_blocking_cycle(m, x));
  CHECK(doc.dump() == R"({"kind":"WeakBlockingCycle","cycle":[["a","d"],["d","c"],["c","a"]]})");

  const auto& h3 = fixtures::load("h3.json").market();
  const Allocation y = parse_allocation(h3, fixtures::read("h3_x_orig.json"));
  CHECK(certificate_to_json(h3, price_certificate(h3, y)).dump() ==
        R"({"kind":"PriceVector","prices":{"a":2,"b":2,"c":1,"d":1}})");
  CHECK(certificate_to_json(h3, Certificate{}).dump() == R"({"kind":"None"})");
}

TEST_CASE("trace documents name agents") {
  const Instance h1 = fixtures::load("h1.json");
  const Json doc = trace_to_json(h1.market(), solve_scfa(h1).trace);
  CHECK(doc["rounds"][0]["agents"] == Json::array({"a", "b", "c", "d"}));
  CHECK(doc.contains("empty_reason"));
}

TEST_CASE("improvement step documents") {
  const auto& m = fixtures::load("h3.json").market();
  const auto steps = parse_improvement_steps(m, R"([{"p":"c","q":"b","remove":[["b","c"],["a","c"]],"add":[["c","b"]]}])");
  REQUIRE(steps.size() == 1);
  CHECK(steps[0].p == 2);
  CHECK(steps[0].q == 1);
  CHECK(steps[0].remove.size() == 2);
  CHECK(steps[0].add == std::vector<StrictPair>{{2, 1}});
  CHECK_THROWS_AS(parse_improvement_steps(m, R"([{"p":"c"}])"), Error);
}
