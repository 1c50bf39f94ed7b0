#include "doctest.h"
#include "domlab/dominance.hpp"
#include "fixtures.hpp"

using namespace domlab;

namespace {
const Rational kHalf(1, 2);
const Rational kQuarter(1, 4);
const OutcomeSpace kZ4({"a", "b", "c", "d"});
const OutcomeSpace kZ5({"a", "b", "c", "d", "e"});
}  // namespace

TEST_CASE("dictatorial mechanism") {
  auto m = dictatorial_mechanism(fx::two_agents(), fx::abc(), 0);
  CHECK(m.outcome(Profile{1, 0}).is_degenerate_on(1));
  CHECK(m.strategies(1) == std::vector<std::string>{kDummyStrategy});
  CHECK(m.is_deterministic());
  for (const auto& t : strict_states(2, 3)) {
    auto r = ud1_at(m, canonical_cardinal(t));
    CHECK(r.sets[0] == t.prefs[0].top());
  }
}

TEST_CASE("hat mechanism table") {
  auto m = fx::hat();
  auto z = fx::abc();
  auto at = [&](const char* s1, const char* s2) {
    return format_lottery(
        m.outcome(Profile{m.strategy_index(0, s1), m.strategy_index(1, s2)}),
        z);
  };
  CHECK(at("a", "a") == "a");
  CHECK(at("a", "b") == "1/4a+3/4b");
  CHECK(at("a", "c") == "1/2a+1/2b");
  CHECK(at("b", "a") == "1/2a+1/2c");
  CHECK(at("b", "b") == "b");
  CHECK(at("b", "c") == "1/2b+1/2c");
  CHECK(at("c", "a") == "1/4a+3/4c");
  CHECK(at("c", "b") == "1/2b+1/2c");
  CHECK(at("c", "c") == "c");
  CHECK_THROWS_AS(hat_mechanism("a", "a", "c"), Error);
}

TEST_CASE("star mechanism table") {
  auto m = star_mechanism(kZ5, {0, 1, 2}, fx::two_agents());
  auto at = [&](const char* s1, const char* s2) {
    return format_lottery(
        m.outcome(Profile{m.strategy_index(0, s1), m.strategy_index(1, s2)}),
        kZ5);
  };
  CHECK(at("b", "c") == "1/2a+1/4b+1/4c");
  CHECK(at("a", "c") == "3/4a+1/4b");
  CHECK(at("b", "a") == "3/4a+1/4c");
  CHECK(at("d", "d") == "d");
  CHECK(at("d", "e") == "1/2d+1/2e");
  CHECK(at("a", "d") == "1/2a+1/2d");
  CHECK(at("b", "d") == "1/2b+1/2d");
  CHECK(at("d", "a") == "1/2a+1/2d");
  CHECK(at("c", "b") == "1/2b+1/2c");
  try {
    star_mechanism(kZ4, {0, 0, 2}, fx::two_agents());
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kLabelClash);
  }
}

TEST_CASE("star and hat differ at three outcomes") {
  auto star = star_mechanism(fx::abc(), {0, 1, 2}, fx::two_agents());
  auto diffs = compare_mechanisms(star, fx::hat());
  CHECK_FALSE(diffs.empty());
  bool saw_ab = false;
  for (const auto& d : diffs) {
    if (d.profile == Profile{0, 1}) {
      saw_ab = true;
      CHECK(d.left == make_lottery(3, {{0, kHalf}, {1, kHalf}}));
      CHECK(d.right == make_lottery(3, {{0, kQuarter}, {1, Rational(3, 4)}}));
    }
  }
  CHECK(saw_ab);
}

TEST_CASE("star labels from a disagreement state") {
  auto theta = fx::state("i1:b>a>c>d;i2:c>a>b>d", kZ4);
  auto l = star_labels_from_state(theta, 0, 1, 0);
  CHECK(l.a == 0);
  CHECK(l.b == 1);
  CHECK(l.c == 2);
  CHECK_THROWS_AS(star_labels_from_state(theta, 0, 1, 3), Error);
}

TEST_CASE("sigma and gamma") {
  auto theta = fx::state("i1:b>a>c;i2:c>a>b");
  CHECK(sigma(0, 1, theta, 0) == std::vector<OutcomeId>{1});
  CHECK(sigma(0, 0, theta, 0) == std::vector<OutcomeId>{0, 1});
  CHECK(sigma(1, 2, theta, 0) == std::vector<OutcomeId>{2});
  try {
    sigma(0, 0, theta, 1);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kDictatorialCase);
  }
  CHECK(gamma({1, 2}, theta, 0).is_degenerate_on(0));
  CHECK(gamma({1, 1}, theta, 0).is_degenerate_on(1));
  CHECK(gamma({2, 1}, theta, 0) == Lottery::uniform(3));
  CHECK(sigma_products_disjoint(theta, 0));
  try {
    gamma({0, 0}, fx::state("i1:a>b>c;i2:a>b>c"), 1);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kDictatorialCase);
  }
}

TEST_CASE("truncated announcement mechanism") {
  auto theta = fx::state("i1:b>a>c;i2:c>a>b");
  auto m = truncated_infinite_mechanism(fx::two_agents(), fx::abc(), theta, 0,
                                        {3});
  CHECK(m.strategy_count(0) == 27);
  CHECK(m.strategy_label(0, encode_announcement({1, 2, 0}, 3, 3)) == "b:2:a");
  for (StrategyId id = 0; id < 27; ++id) {
    CHECK(encode_announcement(decode_announcement(id, 3, 3), 3, 3) == id);
  }
  auto s = [&](OutcomeId z, std::size_t n, OutcomeId zh) {
    return encode_announcement({z, n, zh}, 3, 3);
  };
  CHECK(m.outcome(Profile{s(1, 1, 2), s(2, 1, 0)}) == gamma({1, 2}, theta, 0));
  // n = (2, 1), z_hat_1 = b, gamma part = a.
  const auto a = Lottery::degenerate(3, 0);
  const auto unif = Lottery::uniform(3);
  std::vector<Rational> w{Rational(1, 8), Rational(1, 8), kQuarter, kQuarter,
                          kQuarter};
  std::vector<Lottery> parts{a, unif, Lottery::degenerate(3, 1), a, unif};
  CHECK(m.outcome(Profile{s(1, 2, 1), s(2, 1, 2)}) == mix(w, parts));
  for (const auto& y : m.cells()) {
    Rational total;
    for (const auto& p : y.masses()) total += p;
    CHECK(total == Rational(1));
  }
  CHECK_THROWS_AS(truncated_infinite_mechanism(fx::two_agents(), fx::abc(),
                                               theta, 0, {1}),
                  Error);
}

TEST_CASE("n_threshold") {
  auto p = fx::pref("a>b>c");
  CHECK(n_threshold(fx::util({1, Rational(9, 10), 0}), p) == 11);
  OutcomeSpace xy({"x", "y"});
  // (n-1)/n must beat UNIF's 1/2 strictly, so n = 2 ties and 3 is smallest.
  CHECK(n_threshold(fx::util({1, 0}), parse_preference("x>y", xy)) == 3);
  CHECK(n_threshold(fx::util({2, Rational(9, 5), 0}), p) == 11);
}
