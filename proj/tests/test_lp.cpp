#include "doctest.h"
#include "domlab/lp.hpp"

using namespace domlab;

TEST_CASE("contradiction is infeasible") {
  LinearSystem s(2);
  s.add_strict({1, -1});
  s.add_strict({-1, 1});
  CHECK_FALSE(lp_feasible(s));
}

TEST_CASE("chain with convexity row is feasible") {
  LinearSystem s(3);
  s.add_strict({1, -1, 0});
  s.add_strict({0, 1, -1});
  s.add_weak({1, -2, 1});
  auto x = lp_solve(s);
  REQUIRE(x.has_value());
  CHECK(lp_satisfies(s, *x));
  CHECK(lp_satisfies(s, {3, 1, 0}));
}

TEST_CASE("empty system is feasible") {
  CHECK(lp_feasible(LinearSystem(0)));
  CHECK(lp_feasible(LinearSystem(3)));
}

TEST_CASE("strict versus weak boundary") {
  LinearSystem weak(1);
  weak.add_weak({1}, 2);
  weak.add_weak({-1}, -2);
  auto x = lp_solve(weak);
  REQUIRE(x.has_value());
  CHECK((*x)[0] == Rational(2));
  LinearSystem strict(1);
  strict.add_strict({1}, 2);
  strict.add_weak({-1}, -2);
  CHECK_FALSE(lp_feasible(strict));
}

TEST_CASE("equalities and witnesses") {
  LinearSystem s(3);
  s.add_equal({1, 1, 1}, 1);
  s.add_strict({1, 0, 0});
  s.add_strict({0, 1, 0});
  s.add_strict({0, 0, 1});
  s.add_strict({1, -1, 0});
  auto x = lp_solve(s);
  REQUIRE(x.has_value());
  CHECK(lp_satisfies(s, *x));
}

TEST_CASE("caps raise timeout") {
  Caps c;
  c.max_lp_variables = 1;
  try {
    lp_solve(LinearSystem(2), c);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kTimeout);
  }
}

TEST_CASE("ragged rows are rejected") {
  LinearSystem s(2);
  s.add_weak({1});
  CHECK_THROWS_AS(lp_solve(s), Error);
}
