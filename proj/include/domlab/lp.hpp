#pragma once

#include <optional>
#include <string>
#include <vector>

#include "domlab/domains.hpp"
#include "domlab/rational.hpp"

namespace domlab {

struct LinearRow {
  std::vector<Rational> coeffs;
  Rational rhs;
};

// Conjunction of c.x >= r (weak) and c.x > r (strict) over rational x.
struct LinearSystem {
  std::vector<std::string> variables;
  std::vector<LinearRow> weak_rows;
  std::vector<LinearRow> strict_rows;

  explicit LinearSystem(std::size_t n = 0);
  explicit LinearSystem(std::vector<std::string> names)
      : variables(std::move(names)) {}

  std::size_t variable_count() const { return variables.size(); }
  void add_weak(std::vector<Rational> coeffs, Rational rhs = 0);
  void add_strict(std::vector<Rational> coeffs, Rational rhs = 0);
  void add_equal(std::vector<Rational> coeffs, Rational rhs = 0);
};

// Exact Fourier-Motzkin elimination. Returns a satisfying point or nullopt
// when the system is infeasible. Throws kTimeout when the row or variable
// caps are exceeded, kInvalidInput on ragged rows.
std::optional<std::vector<Rational>> lp_solve(const LinearSystem& sys,
                                              const Caps& caps = default_caps());

bool lp_feasible(const LinearSystem& sys, const Caps& caps = default_caps());

// True iff x satisfies every row of sys.
bool lp_satisfies(const LinearSystem& sys, const std::vector<Rational>& x);

}  // namespace domlab
