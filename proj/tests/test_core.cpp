#include <stdexcept>

#include "doctest.h"
#include "fixtures.hpp"

using namespace domlab;

TEST_CASE("rational arithmetic stays normalized") {
  Rational x(2, 4);
  CHECK(x.num() == 1);
  CHECK(x.den() == 2);
  CHECK((Rational(1, 4) + Rational(3, 8)).str() == "5/8");
  CHECK(Rational(-3, -6) == Rational(1, 2));
  CHECK(Rational(3).str() == "3/1");
  CHECK(Rational::parse("-7/21") == Rational(-1, 3));
  CHECK(Rational(1, 3) < Rational(1, 2));
  CHECK_THROWS_AS(Rational(1, 0), std::exception);
  CHECK_THROWS_AS(Rational::parse("1/x"), std::invalid_argument);
  const Rational big(INT64_MAX);
  CHECK_THROWS_AS(big * Rational(2), std::overflow_error);
}

TEST_CASE("label sets") {
  auto z = fx::abc();
  CHECK(z.index("b") == 1);
  CHECK_FALSE(z.find("q").has_value());
  try {
    z.index("q");
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kUnknownOutcome);
  }
  CHECK_THROWS_AS(OutcomeSpace({"a", "a"}), Error);
  CHECK_THROWS_AS(OutcomeSpace({"a"}), Error);
  try {
    fx::two_agents().index("i9");
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kUnknownAgent);
  }
}

TEST_CASE("make_lottery") {
  auto z = fx::abc();
  CHECK(make_lottery(z, {{"a", 1}}).is_degenerate_on(0));
  auto y = make_lottery(z, {{"a", Rational(1, 4)}, {"b", Rational(3, 4)}});
  CHECK(y == fx::hat().outcome(Profile{0, 1}));
  CHECK(format_lottery(y, z) == "1/4a+3/4b");
  try {
    make_lottery(z, {{"a", Rational(1, 2)}, {"b", Rational(1, 3)}});
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kNonUnitMass);
  }
  try {
    make_lottery(z, {{"q", 1}});
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kUnknownOutcome);
  }
  CHECK_THROWS_AS(Lottery::from_masses({Rational(3, 2), Rational(-1, 2), 0}),
                  Error);
}

TEST_CASE("mix") {
  const auto a = Lottery::degenerate(3, 0);
  const auto b = Lottery::degenerate(3, 1);
  const auto c = Lottery::degenerate(3, 2);
  std::vector<Rational> one{1};
  std::vector<Lottery> la{a};
  CHECK(mix(one, la) == a);
  std::vector<Rational> halves{Rational(1, 2), Rational(1, 2)};
  std::vector<Lottery> ac{a, c};
  CHECK(mix(halves, ac) ==
        make_lottery(3, {{0, Rational(1, 2)}, {2, Rational(1, 2)}}));
  std::vector<Rational> w{Rational(1, 2), Rational(1, 4), Rational(1, 4)};
  std::vector<Lottery> abc{a, b, c};
  auto star = star_mechanism(OutcomeSpace({"a", "b", "c", "d"}), {0, 1, 2},
                             fx::two_agents());
  auto blend = mix(w, abc);
  CHECK(make_lottery(4, {{0, Rational(1, 2)}, {1, Rational(1, 4)},
                         {2, Rational(1, 4)}}) ==
        star.outcome(Profile{1, 2}));
  CHECK(blend.mass(0) == Rational(1, 2));
  std::vector<Rational> bad{Rational(1, 2), Rational(1, 4)};
  std::vector<Lottery> ab{a, b};
  try {
    mix(bad, ab);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kNonUnitMass);
  }
}

TEST_CASE("lottery_equal") {
  auto z = fx::abc();
  auto a = make_lottery(z, {{"a", 1}});
  CHECK(lottery_equal(a, a));
  CHECK(lottery_equal(
      make_lottery(z, {{"a", Rational(1, 2)}, {"b", Rational(1, 2)}}),
      make_lottery(z, {{"b", Rational(1, 2)}, {"a", Rational(1, 2)}})));
  CHECK_FALSE(lottery_equal(
      make_lottery(z, {{"a", Rational(1, 4)}, {"b", Rational(3, 4)}}),
      make_lottery(z, {{"a", Rational(1, 2)}, {"b", Rational(1, 2)}})));
}

TEST_CASE("preferences and states") {
  auto p = fx::pref("b>a>c");
  CHECK(p.is_strict());
  CHECK(p.top() == std::vector<OutcomeId>{1});
  CHECK(p.strictly_prefers(0, 2));
  CHECK(p.format(fx::abc()) == "b>a>c");
  auto tie = fx::pref("a=b>c");
  CHECK_FALSE(tie.is_strict());
  CHECK(tie.top().size() == 2);
  CHECK(tie.format(fx::abc()) == "a=b>c");
  auto theta = fx::state("i1:b>a>c;i2:c>a>b");
  CHECK(theta.is_strict());
  CHECK_FALSE(theta.is_unanimous());
  CHECK(theta.format(fx::two_agents(), fx::abc()) == "i1:b>a>c;i2:c>a>b");
  CHECK(represents(fx::util({1, 2, 0}), p));
  CHECK_FALSE(represents(fx::util({2, 1, 0}), p));
  CHECK_FALSE(represents(fx::util({1, 1, 0}), p));
  CHECK(represents(fx::util({1, 1, 0}), tie));
}

TEST_CASE("mechanism indexing") {
  auto m = fx::hat();
  CHECK(m.profile_count() == 9);
  CHECK(m.stride(0) == 3);
  CHECK(m.stride(1) == 1);
  CHECK(m.profile_at(5) == Profile{1, 2});
  CHECK(m.strategy_index(1, "c") == 2);
  try {
    m.strategy_index(0, "q");
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kUnknownStrategy);
  }
  CHECK_FALSE(m.is_deterministic());
  CHECK(dictatorial_mechanism(fx::two_agents(), fx::abc(), 0)
            .is_deterministic());
}

TEST_CASE("restriction products") {
  Restriction r{{{0, 2}, {1}, {0, 1}}};
  std::vector<Profile> seen;
  r.for_each_profile([&](const Profile& p) { seen.push_back(p); });
  REQUIRE(seen.size() == 4);
  CHECK(seen.front() == Profile{0, 1, 0});
  CHECK(seen.back() == Profile{2, 1, 1});
  CHECK(r.profile_count() == 4);
  CHECK(r.contains(0, 2));
  CHECK_FALSE(r.contains(1, 0));
}
