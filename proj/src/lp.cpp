#include "domlab/lp.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>

namespace domlab {
namespace {

struct Row {
  std::vector<Rational> c;
  Rational rhs;
  bool strict = false;
};

std::int64_t gcd64(std::int64_t a, std::int64_t b) {
  return std::gcd(a < 0 ? -a : a, b < 0 ? -b : b);
}

// Scales a row to coprime integer coefficients (positive multiple).
void normalize(Row& row) {
  std::int64_t l = 1;
  auto absorb = [&](const Rational& r) {
    if (r.is_zero()) return;
    std::int64_t step = r.den() / std::gcd(l, r.den());
    if (__builtin_mul_overflow(l, step, &l)) {
      throw std::overflow_error("row scaling overflow");
    }
  };
  for (const auto& v : row.c) absorb(v);
  absorb(row.rhs);
  std::int64_t g = 0;
  for (auto& v : row.c) {
    v *= Rational(l);
    g = gcd64(g, v.num());
  }
  row.rhs *= Rational(l);
  g = gcd64(g, row.rhs.num());
  if (g > 1) {
    for (auto& v : row.c) v /= Rational(g);
    row.rhs /= Rational(g);
  }
}

bool is_trivial(const Row& row) {
  return std::all_of(row.c.begin(), row.c.end(),
                     [](const Rational& v) { return v.is_zero(); });
}

// 0 >= rhs or 0 > rhs.
bool trivial_holds(const Row& row) {
  return row.strict ? row.rhs.is_negative() : !row.rhs.is_positive();
}

// Keeps only the tightest row per coefficient vector. Returns false when a
// trivial row is violated.
bool dedupe(std::vector<Row>& rows) {
  std::map<std::vector<Rational>, Row> best;
  for (auto& r : rows) {
    normalize(r);
    if (is_trivial(r)) {
      if (!trivial_holds(r)) return false;
      continue;
    }
    auto [it, inserted] = best.try_emplace(r.c, r);
    if (inserted) continue;
    Row& cur = it->second;
    if (r.rhs > cur.rhs || (r.rhs == cur.rhs && r.strict && !cur.strict)) {
      cur = r;
    }
  }
  rows.clear();
  for (auto& [k, r] : best) rows.push_back(std::move(r));
  return true;
}

struct Bound {
  std::optional<Rational> value;
  bool strict = false;
};

}  // namespace

LinearSystem::LinearSystem(std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) variables.push_back("x" + std::to_string(k + 1));
}

void LinearSystem::add_weak(std::vector<Rational> coeffs, Rational rhs) {
  weak_rows.push_back({std::move(coeffs), rhs});
}

void LinearSystem::add_strict(std::vector<Rational> coeffs, Rational rhs) {
  strict_rows.push_back({std::move(coeffs), rhs});
}

void LinearSystem::add_equal(std::vector<Rational> coeffs, Rational rhs) {
  std::vector<Rational> neg(coeffs.size());
  for (std::size_t k = 0; k < coeffs.size(); ++k) neg[k] = -coeffs[k];
  weak_rows.push_back({std::move(coeffs), rhs});
  weak_rows.push_back({std::move(neg), -rhs});
}

std::optional<std::vector<Rational>> lp_solve(const LinearSystem& sys,
                                              const Caps& caps) {
  const std::size_t n = sys.variable_count();
  if (n > caps.max_lp_variables) {
    throw Error(ErrorKind::kTimeout, "linear system exceeds the variable cap");
  }
  std::vector<Row> rows;
  auto load = [&](const std::vector<LinearRow>& src, bool strict) {
    for (const auto& r : src) {
      if (r.coeffs.size() != n) {
        throw Error(ErrorKind::kInvalidInput,
                    "row length does not match variable count");
      }
      rows.push_back({r.coeffs, r.rhs, strict});
    }
  };
  load(sys.weak_rows, false);
  load(sys.strict_rows, true);
  if (!dedupe(rows)) return std::nullopt;

  // Each elimination step stores the rows that bounded the eliminated
  // variable; they only mention variables eliminated later.
  std::vector<std::pair<std::size_t, std::vector<Row>>> stages;
  std::vector<bool> alive(n, true);
  for (std::size_t step = 0; step < n; ++step) {
    // Pick the live variable with the fewest generated rows.
    std::size_t var = n;
    std::size_t best_cost = 0;
    for (std::size_t v = 0; v < n; ++v) {
      if (!alive[v]) continue;
      std::size_t pos = 0, neg = 0;
      for (const auto& r : rows) {
        if (r.c[v].is_positive()) ++pos;
        else if (r.c[v].is_negative()) ++neg;
      }
      std::size_t cost = pos * neg;
      if (var == n || cost < best_cost) {
        var = v;
        best_cost = cost;
      }
    }
    alive[var] = false;
    std::vector<Row> lower, upper, rest;
    for (auto& r : rows) {
      if (r.c[var].is_positive()) lower.push_back(std::move(r));
      else if (r.c[var].is_negative()) upper.push_back(std::move(r));
      else rest.push_back(std::move(r));
    }
    if (rest.size() + lower.size() * upper.size() > caps.max_lp_rows) {
      throw Error(ErrorKind::kTimeout, "Fourier-Motzkin row cap exceeded");
    }
    for (const auto& lo : lower) {
      for (const auto& up : upper) {
        Rational a = lo.c[var];
        Rational b = -up.c[var];
        Row comb;
        comb.c.resize(n);
        for (std::size_t k = 0; k < n; ++k) comb.c[k] = b * lo.c[k] + a * up.c[k];
        comb.c[var] = 0;
        comb.rhs = b * lo.rhs + a * up.rhs;
        comb.strict = lo.strict || up.strict;
        rest.push_back(std::move(comb));
      }
    }
    std::vector<Row> bounding = std::move(lower);
    bounding.insert(bounding.end(), std::make_move_iterator(upper.begin()),
                    std::make_move_iterator(upper.end()));
    stages.emplace_back(var, std::move(bounding));
    rows = std::move(rest);
    if (!dedupe(rows)) return std::nullopt;
  }
  for (const auto& r : rows) {
    if (!trivial_holds(r)) return std::nullopt;
  }

  std::vector<Rational> x(n);
  for (auto it = stages.rbegin(); it != stages.rend(); ++it) {
    const std::size_t var = it->first;
    Bound lo, hi;
    for (const auto& r : it->second) {
      Rational rest = r.rhs;
      for (std::size_t k = 0; k < n; ++k) {
        if (k != var && !r.c[k].is_zero()) rest -= r.c[k] * x[k];
      }
      Rational v = rest / r.c[var];
      Bound& b = r.c[var].is_positive() ? lo : hi;
      const bool tighter =
          !b.value || (r.c[var].is_positive() ? v > *b.value : v < *b.value);
      if (tighter) {
        b.value = v;
        b.strict = r.strict;
      } else if (v == *b.value) {
        b.strict = b.strict || r.strict;
      }
    }
    if (lo.value && hi.value) {
      x[var] = (*lo.value == *hi.value) ? *lo.value
                                       : (*lo.value + *hi.value) / Rational(2);
    } else if (lo.value) {
      x[var] = lo.strict ? *lo.value + Rational(1) : *lo.value;
    } else if (hi.value) {
      x[var] = hi.strict ? *hi.value - Rational(1) : *hi.value;
    } else {
      x[var] = 0;
    }
  }
  return x;
}

bool lp_feasible(const LinearSystem& sys, const Caps& caps) {
  return lp_solve(sys, caps).has_value();
}

bool lp_satisfies(const LinearSystem& sys, const std::vector<Rational>& x) {
  auto dot = [&](const LinearRow& r) {
    Rational s;
    for (std::size_t k = 0; k < x.size(); ++k) s += r.coeffs[k] * x[k];
    return s;
  };
  for (const auto& r : sys.weak_rows) {
    if (dot(r) < r.rhs) return false;
  }
  for (const auto& r : sys.strict_rows) {
    if (!(dot(r) > r.rhs)) return false;
  }
  return true;
}

}  // namespace domlab
