#include <set>

#include "doctest.h"
#include "fixtures.hpp"

using namespace domlab;

TEST_CASE("strict preference enumeration") {
  CHECK(enumerate_strict_preferences(2).size() == 2);
  CHECK(enumerate_strict_preferences(3).size() == 6);
  auto four = enumerate_strict_preferences(4);
  REQUIRE(four.size() == 24);
  CHECK(four.front() == Preference::strict({0, 1, 2, 3}));
  Caps tight;
  tight.max_outcomes = 3;
  try {
    enumerate_strict_preferences(4, tight);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kSizeLimit);
  }
}

TEST_CASE("unanimity states") {
  auto s = unanimity_strict_states(2, 3);
  CHECK(s.size() == 6);
  for (const auto& t : s) CHECK(t.is_unanimous());
  CHECK(unanimity_strict_states(3, 2).size() == 2);
  CHECK(strict_states(2, 2).size() == 4);
}

TEST_CASE("second-best pair predicate") {
  auto hat = fx::state("i1:b>a>c;i2:c>a>b");
  CHECK(is_second_best_pair_state(hat, 0, 1, 0));
  CHECK_FALSE(is_second_best_pair_state(hat, 0, 1, 1));
  auto una = fx::state("i1:a>b>c;i2:a>b>c");
  for (OutcomeId z = 0; z < 3; ++z) {
    CHECK_FALSE(is_second_best_pair_state(una, 0, 1, z));
  }
  auto tied = fx::state("i1:a=b>c;i2:c>a>b");
  try {
    is_second_best_pair_state(tied, 0, 1, 0);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kNotStrict);
  }
}

TEST_CASE("top") {
  CHECK(top(fx::pref("b>a>c")) == std::vector<OutcomeId>{1});
  CHECK(top(fx::pref("a=b>c")) == std::vector<OutcomeId>{0, 1});
  CHECK(top(fx::pref("c>b>a")) == std::vector<OutcomeId>{2});
}

TEST_CASE("canonical representation") {
  CHECK(canonical_utility(fx::pref("b>a>c")) ==
        fx::util({Rational(1, 2), 1, 0}));
  OutcomeSpace xy({"x", "y"});
  CHECK(canonical_utility(parse_preference("x>y", xy)) == fx::util({1, 0}));
  CHECK(canonical_utility(fx::pref("a=b>c")) == fx::util({1, 1, 0}));
}

TEST_CASE("sampled representations") {
  auto theta = fx::state("i1:b>a>c;i2:a=c>b");
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    CHECK(represents(sample_cardinal(theta, seed), theta));
  }
  CHECK(sample_cardinal(theta, 7) == sample_cardinal(theta, 7));
  std::set<Utility> distinct;
  auto p = fx::pref("b>a>c");
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    auto u = sample_utility(p, seed);
    REQUIRE(represents(u, p));
    distinct.insert(u);
  }
  CHECK(distinct.size() >= 2);
}

TEST_CASE("build_problem") {
  auto p = fx::hat_problem();
  CHECK(p.theta().size() == 7);
  auto hat_state = fx::state("i1:b>a>c;i2:c>a>b");
  CHECK(p.scf.at(hat_state) == OutcomeId{0});

  const OutcomeSpace xy({"x", "y"});
  const auto agents = fx::two_agents();
  DomainKind all{DomainTag::kStrictAll, {}};
  ScfTable dict;
  for (const auto& t : domain_states(all, 2, 2)) {
    dict.push_back({t, t.prefs[0].top().front()});
  }
  CHECK(build_problem(all, agents, xy, dict).theta().size() == 4);
  dict.pop_back();
  try {
    build_problem(all, agents, xy, dict);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kScfPartial);
  }
  DomainKind tied{DomainTag::kCustom, {fx::state("i1:a=b>c;i2:a>b>c")}};
  try {
    build_problem(tied, agents, fx::abc(), {{tied.extra_states[0], 0}});
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kDomainViolation);
  }
}

TEST_CASE("text parsing reports columns") {
  try {
    fx::state("i1:b>a>c;i2:c>q>b");
    FAIL("expected throw");
  } catch (const ParseError& e) {
    CHECK(e.column() == 15);
  }
  CHECK_THROWS_AS(fx::state("i1:b>a;i2:c>a>b"), ParseError);
  auto u = parse_cardinal("i1:a=1,b=1/2,c=0;i2:a=0,b=0,c=1", fx::two_agents(),
                          fx::abc());
  CHECK(u.utils[0][1] == Rational(1, 2));
  CHECK(u.utils[1][2] == Rational(1));
}

TEST_CASE("caps parsing") {
  Caps c;
  c.apply("outcomes=7,lp_rows=10");
  CHECK(c.max_outcomes == 7);
  CHECK(c.max_lp_rows == 10);
  CHECK_THROWS_AS(c.apply("bogus=1"), Error);
}
