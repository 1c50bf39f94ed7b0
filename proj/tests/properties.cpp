#include "properties.hpp"

#include <algorithm>
#include <numeric>

#include "domlab/dominance.hpp"
#include "domlab/domains.hpp"
#include "domlab/lp.hpp"

namespace props {

using namespace domlab;

namespace {

std::size_t pick(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

// Test-side expected utility, kept apart from the library's.
Rational eu(const Utility& u, const Lottery& y) {
  Rational t;
  for (std::size_t z = 0; z < u.size(); ++z) t += u[z] * y.mass(z);
  return t;
}

// Payoff of agent i at a profile.
Rational pay(const Mechanism& m, const CardinalState& u, AgentId i,
             const Profile& p) {
  return eu(u.utils[i], m.outcome(p));
}

// Every opponent profile of agent i inside r, with slot i left at 0.
std::vector<Profile> opponent_profiles(const Restriction& r, AgentId i) {
  std::vector<Profile> out{Profile(r.sets.size(), 0)};
  for (AgentId j = 0; j < r.sets.size(); ++j) {
    if (j == i) continue;
    std::vector<Profile> next;
    for (const auto& p : out) {
      for (StrategyId s : r.sets[j]) {
        auto q = p;
        q[j] = s;
        next.push_back(q);
      }
    }
    out = std::move(next);
  }
  return out;
}

bool beats(const Mechanism& m, const CardinalState& u, const Restriction& r,
           AgentId i, StrategyId d, StrategyId s) {
  for (auto p : opponent_profiles(r, i)) {
    p[i] = d;
    const Rational a = pay(m, u, i, p);
    p[i] = s;
    if (a <= pay(m, u, i, p)) return false;
  }
  return true;
}

// Random utility with integer values 0..9 (ties allowed).
CardinalState random_cardinal(std::mt19937_64& rng, std::size_t agents,
                              std::size_t outcomes) {
  CardinalState u;
  for (std::size_t i = 0; i < agents; ++i) {
    Utility ui;
    for (std::size_t z = 0; z < outcomes; ++z) {
      ui.push_back(Rational(static_cast<std::int64_t>(pick(rng, 0, 9))));
    }
    u.utils.push_back(ui);
  }
  return u;
}

Mechanism random_small(std::mt19937_64& rng, std::size_t max_agents,
                       std::size_t max_strategies) {
  const std::size_t n = pick(rng, 2, max_agents);
  std::vector<std::size_t> shape;
  for (std::size_t i = 0; i < n; ++i) shape.push_back(pick(rng, 1, max_strategies));
  return random_mechanism(rng, n, shape, pick(rng, 2, 4), pick(rng, 1, 4));
}

std::string describe(const Restriction& r) {
  std::string s;
  for (const auto& set : r.sets) {
    s += "{";
    for (auto x : set) s += std::to_string(x) + ",";
    s += "}";
  }
  return s;
}

}  // namespace

Lottery random_lottery(std::mt19937_64& rng, std::size_t outcomes,
                       std::size_t q) {
  std::vector<std::int64_t> units(outcomes, 0);
  for (std::size_t k = 0; k < q; ++k) ++units[pick(rng, 0, outcomes - 1)];
  std::vector<Rational> masses;
  for (auto u : units) masses.push_back(Rational(u, static_cast<std::int64_t>(q)));
  return Lottery::from_masses(masses);
}

Mechanism random_mechanism(std::mt19937_64& rng, std::size_t agents,
                           std::vector<std::size_t> strategies,
                           std::size_t outcomes, std::size_t q) {
  std::vector<std::string> zl, al;
  for (std::size_t z = 0; z < outcomes; ++z) zl.push_back(std::string(1, char('a' + z)));
  for (std::size_t i = 0; i < agents; ++i) al.push_back("i" + std::to_string(i + 1));
  std::vector<std::vector<std::string>> labels;
  for (auto k : strategies) {
    std::vector<std::string> l;
    for (std::size_t s = 0; s < k; ++s) l.push_back("s" + std::to_string(s + 1));
    labels.push_back(l);
  }
  return Mechanism::build(OutcomeSpace(zl), AgentSet(al), labels,
                          [&](const Profile&) { return random_lottery(rng, outcomes, q); });
}

Preference random_preference(std::mt19937_64& rng, std::size_t outcomes,
                             bool strict_only) {
  std::vector<OutcomeId> order(outcomes);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  if (strict_only) return Preference::strict(order);
  std::vector<std::vector<OutcomeId>> classes{{order[0]}};
  for (std::size_t k = 1; k < outcomes; ++k) {
    if (pick(rng, 0, 2) == 0) {
      classes.back().push_back(order[k]);
    } else {
      classes.push_back({order[k]});
    }
  }
  return Preference(classes, outcomes);
}

OrdinalState random_state(std::mt19937_64& rng, std::size_t agents,
                          std::size_t outcomes, bool strict_only) {
  OrdinalState th;
  for (std::size_t i = 0; i < agents; ++i) {
    th.prefs.push_back(random_preference(rng, outcomes, strict_only));
  }
  return th;
}

// Deleting one dominated strategy at a time in random order, with
// dominators from the current survivors, ends where round-synchronous
// deletion with full-set dominators ends.
SuiteResult order_independence(std::size_t cases, std::uint64_t seed) {
  SuiteResult res{"order independence"};
  std::mt19937_64 rng(seed);
  for (std::size_t c = 0; c < cases; ++c) {
    const Mechanism m = random_small(rng, 3, 4);
    const auto u = random_cardinal(rng, m.agent_count(), m.outcomes().size());
    const Restriction want = udinf_at(m, u).fixed_point();
    for (int order = 0; order < 3; ++order) {
      Restriction r = Restriction::full(m);
      for (;;) {
        std::vector<std::pair<AgentId, StrategyId>> cands;
        for (AgentId i = 0; i < m.agent_count(); ++i) {
          for (StrategyId s : r.sets[i]) {
            for (StrategyId d : r.sets[i]) {
              if (d != s && beats(m, u, r, i, d, s)) {
                cands.push_back({i, s});
                break;
              }
            }
          }
        }
        if (cands.empty()) break;
        auto [i, s] = cands[pick(rng, 0, cands.size() - 1)];
        auto& set = r.sets[i];
        set.erase(std::find(set.begin(), set.end(), s));
      }
      if (r != want) {
        res.fail("case " + std::to_string(c) + ": random order " + describe(r) +
                 " vs " + describe(want));
        break;
      }
    }
    ++res.cases;
  }
  return res;
}

SuiteResult monotonicity(std::size_t cases, std::uint64_t seed) {
  SuiteResult res{"UD^{k+1} within UD^k"};
  std::mt19937_64 rng(seed);
  for (std::size_t c = 0; c < cases; ++c) {
    const Mechanism m = random_small(rng, 3, 4);
    const auto th = random_state(rng, m.agent_count(), m.outcomes().size(), false);
    const auto u = sample_cardinal(th, rng());
    for (const auto& t : {udinf_at(m, u), robust_udinf(m, th)}) {
      Restriction prev = Restriction::full(m);
      for (std::size_t k = 1; k <= t.rounds.size(); ++k) {
        const Restriction& cur = t.survivors_at(k);
        if (!cur.subset_of(prev)) {
          res.fail("case " + std::to_string(c) + " round " + std::to_string(k));
        }
        prev = cur;
      }
    }
    ++res.cases;
  }
  return res;
}

SuiteResult nonemptiness(std::size_t cases, std::uint64_t seed) {
  SuiteResult res{"UD^inf nonempty"};
  std::mt19937_64 rng(seed);
  for (std::size_t c = 0; c < cases; ++c) {
    const Mechanism m = random_small(rng, 3, 4);
    const auto u = random_cardinal(rng, m.agent_count(), m.outcomes().size());
    const auto fp = udinf_at(m, u).fixed_point();
    for (const auto& set : fp.sets) {
      if (set.empty()) res.fail("case " + std::to_string(c));
    }
    ++res.cases;
  }
  return res;
}

// robust_geq / robust_gt against an LP over utility vectors representing
// the preference (independent of the upper-contour formulation), plus
// sampled representations on the positive side.
SuiteResult fosd_vs_oracle(std::size_t cases, std::uint64_t seed) {
  SuiteResult res{"FOSD vs sampling + LP"};
  std::mt19937_64 rng(seed);
  for (std::size_t c = 0; c < cases; ++c) {
    const std::size_t nz = pick(rng, 2, 4);
    const Preference pref = random_preference(rng, nz, pick(rng, 0, 1) == 0);
    const std::size_t q = pick(rng, 1, 4);
    const Lottery y = random_lottery(rng, nz, q);
    const Lottery y2 = pick(rng, 0, 3) == 0 ? y : random_lottery(rng, nz, q);

    // Representations: u ordered as pref, equal within classes.
    auto representing = [&](LinearSystem& sys) {
      const auto& cl = pref.classes();
      for (std::size_t k = 0; k < cl.size(); ++k) {
        for (std::size_t t = 1; t < cl[k].size(); ++t) {
          std::vector<Rational> row(nz);
          row[cl[k][0]] = 1;
          row[cl[k][t]] = -1;
          sys.add_equal(row);
        }
        if (k + 1 < cl.size()) {
          std::vector<Rational> row(nz);
          row[cl[k][0]] = 1;
          row[cl[k + 1][0]] = -1;
          sys.add_strict(row);
        }
      }
    };
    std::vector<Rational> diff(nz);
    for (std::size_t z = 0; z < nz; ++z) diff[z] = y.mass(z) - y2.mass(z);

    // geq fails iff some representation has EU(y) < EU(y2).
    LinearSystem lt(nz);
    representing(lt);
    std::vector<Rational> neg(nz);
    for (std::size_t z = 0; z < nz; ++z) neg[z] = -diff[z];
    lt.add_strict(neg);
    // gt fails iff some representation has EU(y) <= EU(y2).
    LinearSystem le(nz);
    representing(le);
    le.add_weak(neg);

    const bool geq = robust_geq(pref, y, y2);
    const bool gt = robust_gt(pref, y, y2);
    if (geq == lp_feasible(lt)) res.fail("geq case " + std::to_string(c));
    if (gt == lp_feasible(le)) res.fail("gt case " + std::to_string(c));
    for (int t = 0; t < 20; ++t) {
      const Utility u = sample_utility(pref, rng());
      const Rational a = eu(u, y), b = eu(u, y2);
      if ((geq && a < b) || (gt && a <= b)) {
        res.fail("sampled case " + std::to_string(c));
        break;
      }
    }
    ++res.cases;
  }
  return res;
}

SuiteResult robust_superset(std::size_t cases, std::uint64_t seed) {
  SuiteResult res{"robust superset"};
  std::mt19937_64 rng(seed);
  for (std::size_t c = 0; c < cases; ++c) {
    const Mechanism m = random_small(rng, 3, 4);
    const auto th = random_state(rng, m.agent_count(), m.outcomes().size(), false);
    const auto robust = robust_udinf(m, th);
    for (int t = 0; t < 10; ++t) {
      const auto trace = udinf_at(m, sample_cardinal(th, rng()));
      const std::size_t k_max = std::max(trace.rounds.size(), robust.rounds.size());
      bool ok = true;
      for (std::size_t k = 1; k <= k_max && ok; ++k) {
        ok = trace.survivors_at(k).subset_of(robust.survivors_at(k));
      }
      if (!ok) {
        res.fail("case " + std::to_string(c));
        break;
      }
    }
    ++res.cases;
  }
  return res;
}

// Every product subset with the non-domination property lies inside UD^inf.
SuiteResult non_domination_maximality(std::size_t cases, std::uint64_t seed) {
  SuiteResult res{"non-domination maximality"};
  std::mt19937_64 rng(seed);
  for (std::size_t c = 0; c < cases; ++c) {
    const std::size_t k = c % 2 == 0 ? 2 : 3;
    const Mechanism m = random_mechanism(rng, 2, {k, k}, pick(rng, 2, 3), pick(rng, 1, 4));
    const auto u = random_cardinal(rng, 2, m.outcomes().size());
    const Restriction fp = udinf_at(m, u).fixed_point();
    if (!has_non_domination_property(m, fp, u)) res.fail("fixed point, case " + std::to_string(c));
    const unsigned full = (1u << k) - 1;
    for (unsigned a = 1; a <= full; ++a) {
      for (unsigned b = 1; b <= full; ++b) {
        Restriction r;
        r.sets.resize(2);
        for (StrategyId s = 0; s < k; ++s) {
          if (a >> s & 1) r.sets[0].push_back(s);
          if (b >> s & 1) r.sets[1].push_back(s);
        }
        // Independent evaluation of the property.
        bool holds = true;
        for (AgentId i = 0; i < 2 && holds; ++i) {
          for (StrategyId s : r.sets[i]) {
            for (StrategyId d = 0; d < k; ++d) {
              if (d != s && beats(m, u, r, i, d, s)) holds = false;
            }
          }
        }
        if (holds != has_non_domination_property(m, r, u)) {
          res.fail("predicate mismatch, case " + std::to_string(c));
        }
        if (holds && !r.subset_of(fp)) {
          res.fail("not maximal, case " + std::to_string(c) + " " + describe(r));
        }
      }
    }
    ++res.cases;
  }
  return res;
}

SuiteResult ud1_locality(std::size_t cases, std::uint64_t seed) {
  SuiteResult res{"ud1 per-agent locality"};
  std::mt19937_64 rng(seed);
  for (std::size_t c = 0; c < cases; ++c) {
    const Mechanism m = random_small(rng, 3, 4);
    const auto th = random_state(rng, m.agent_count(), m.outcomes().size(), false);
    const auto u = sample_cardinal(th, rng());
    const auto base = ud1_at(m, u);
    auto other = sample_cardinal(th, rng());
    for (AgentId i = 0; i < m.agent_count(); ++i) {
      CardinalState mixed = other;
      mixed.utils[i] = u.utils[i];
      if (ud1_at(m, mixed).sets[i] != base.sets[i]) {
        res.fail("case " + std::to_string(c) + " agent " + std::to_string(i));
      }
    }
    ++res.cases;
  }
  return res;
}

std::vector<SuiteResult> all_suites(std::size_t cases) {
  return {order_independence(cases, 101),   monotonicity(cases, 202),
          nonemptiness(cases, 303),         fosd_vs_oracle(cases, 404),
          robust_superset(cases, 505),      non_domination_maximality(cases, 606),
          ud1_locality(cases, 707)};
}

}  // namespace props
