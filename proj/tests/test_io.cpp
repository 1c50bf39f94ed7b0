#include "doctest.h"
#include "domlab/dominance.hpp"
#include "domlab/io.hpp"
#include "domlab/reproduce.hpp"
#include "fixtures.hpp"

using namespace domlab;

TEST_CASE("mechanism file round-trips") {
  const std::vector<Mechanism> ms{
      fx::hat(),
      dictatorial_mechanism(fx::two_agents(), fx::abc(), 1),
      star_mechanism(OutcomeSpace({"a", "b", "c", "d"}), {0, 1, 2},
                     fx::two_agents()),
      truncated_infinite_mechanism(fx::two_agents(), fx::abc(),
                                   fx::state("i1:b>a>c;i2:c>a>b"), 0, {.cap = 3})};
  for (const auto& m : ms) {
    const std::string text = serialize_mechanism(m);
    const Mechanism back = parse_mechanism(text);
    CHECK(back == m);
    CHECK(serialize_mechanism(back) == text);
  }
}

TEST_CASE("hat cell a,b in file form") {
  auto j = mechanism_to_json(fx::hat());
  CHECK(j["cells"]["a,b"]["a"] == "1/4");
  CHECK(j["cells"]["a,b"]["b"] == "3/4");
  CHECK_FALSE(j["cells"]["a,b"].contains("c"));
}

TEST_CASE("star cell b,c in file form") {
  auto m = star_mechanism(OutcomeSpace({"a", "b", "c", "d"}), {0, 1, 2},
                          fx::two_agents());
  auto cell = mechanism_to_json(m)["cells"]["b,c"];
  CHECK(cell["a"] == "1/2");
  CHECK(cell["b"] == "1/4");
  CHECK(cell["c"] == "1/4");
}

TEST_CASE("non-canonical input canonicalizes in one pass") {
  const std::string text = R"({"outcomes":["a","b"],"agents":["i1","i2"],
    "strategies":{"i2":["x"],"i1":["l","r"]},
    "cells":{"r,x":{"b":"2/2"},"l,x":{"a":"1/2","b":"2/4","c":"0"}}})";
  // "c" is not an outcome: rejected.
  CHECK_THROWS_AS(parse_mechanism(text), Error);
  const std::string ok = R"({"outcomes":["a","b"],"agents":["i1","i2"],
    "strategies":{"i2":["x"],"i1":["l","r"]},
    "cells":{"r,x":{"b":"2/2"},"l,x":{"a":"1/2","b":"2/4"}}})";
  const std::string once = serialize_mechanism(parse_mechanism(ok));
  CHECK(serialize_mechanism(parse_mechanism(once)) == once);
  CHECK(once.find("\"2/4\"") == std::string::npos);
}

TEST_CASE("malformed JSON reports line and column") {
  try {
    parse_json("{\n  \"a\": [1, 2\n}");
    FAIL("no throw");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
    CHECK(e.column() == 1);
  }
}

TEST_CASE("mechanism file errors") {
  auto base = mechanism_to_json(fx::hat());
  SUBCASE("mass not one") {
    auto j = base;
    j["cells"]["a,a"] = Json{{"a", "1/2"}};
    CHECK_THROWS_AS(mechanism_from_json(j), Error);
  }
  SUBCASE("missing cell") {
    auto j = base;
    j["cells"].erase("a,a");
    CHECK_THROWS_AS(mechanism_from_json(j), Error);
  }
  SUBCASE("unknown strategy") {
    auto j = base;
    j["cells"]["a,q"] = Json{{"a", "1/1"}};
    CHECK_THROWS_AS(mechanism_from_json(j), Error);
  }
  SUBCASE("float mass") {
    auto j = base;
    j["cells"]["a,a"] = Json{{"a", 1.0}};
    CHECK_THROWS_AS(mechanism_from_json(j), Error);
  }
}

TEST_CASE("problem file round-trips") {
  const auto p = fx::hat_problem();
  const auto back = problem_from_json(problem_to_json(p));
  CHECK(back.theta() == p.theta());
  CHECK(back.scf.choice == p.scf.choice);
  CHECK(back.omega.all_representations);
}

TEST_CASE("problem file with explicit omega") {
  const std::string text = R"({
    "agents": ["i1", "i2"], "outcomes": ["a", "b"],
    "domain": "STRICT_ALL",
    "scf": {"i1:a>b;i2:a>b": "a", "i1:a>b;i2:b>a": "a",
            "i1:b>a;i2:a>b": "b", "i1:b>a;i2:b>a": "b"},
    "omega": {"i1:a>b;i2:a>b": ["i1:a=1,b=0;i2:a=1,b=0"],
              "i1:a>b;i2:b>a": ["i1:a=1,b=0;i2:a=0,b=1"],
              "i1:b>a;i2:a>b": ["i1:a=0,b=1;i2:a=1,b=0"],
              "i1:b>a;i2:b>a": ["i1:a=0,b=3;i2:a=0,b=1", "i1:a=0,b=1;i2:a=0,b=1"]}
  })";
  const auto p = parse_problem(text);
  CHECK_FALSE(p.omega.all_representations);
  CHECK(p.omega.explicit_states[3].size() == 2);
  const auto again = parse_problem(problem_to_json(p).dump());
  CHECK(again.omega.explicit_states == p.omega.explicit_states);
}

TEST_CASE("problem file errors") {
  CHECK_THROWS_AS(parse_problem(R"({"agents":["i1","i2"],"outcomes":["a","b"],
    "domain":"NOPE","scf":{}})"), Error);
  // representation that does not match its state
  CHECK_THROWS_AS(parse_problem(R"({"agents":["i1","i2"],"outcomes":["a","b"],
    "domain":"CUSTOM","scf":{"i1:a>b;i2:a>b":"a"},
    "omega":{"i1:a>b;i2:a>b":["i1:a=0,b=1;i2:a=1,b=0"]}})"), Error);
  try {
    parse_problem(R"({"agents":["i1","i2"],"outcomes":["a","b"],
      "domain":"CUSTOM","scf":{"i1:a>b;i2:a>x":"a"}})");
    FAIL("no throw");
  } catch (const ParseError& e) {
    CHECK(e.column() > 1);
  }
}

TEST_CASE("trace table layout") {
  auto m = fx::hat();
  auto t = robust_udinf(m, fx::state("i1:b>a>c;i2:c>a>b"));
  const std::string table = render_trace_table(m, {"bar"}, {t}, 2);
  CHECK(table ==
        "       bar\n"
        "R1 i1  {a,b}\n"
        "R1 i2  {a,c}\n"
        "R2 i1  {a}\n"
        "R2 i2  {a}\n");
}

TEST_CASE("rendering is stable") {
  auto m = fx::hat();
  auto p = fx::hat_problem();
  auto a = render_verification_report(m, verify_udinf(m, p));
  auto b = render_verification_report(m, verify_udinf(m, p));
  CHECK(a == b);
  CHECK(reproduce_lemma5().table == reproduce_lemma5().table);
}

TEST_CASE("golden data checksums") {
  CHECK(golden_intact());
  CHECK(golden_checksum(lemma5_golden()) != golden_checksum(theorem4_golden()));
  std::string tampered = lemma5_golden();
  tampered[tampered.size() - 2] = 'b';
  CHECK(golden_checksum(tampered) != golden_checksum(lemma5_golden()));
}
