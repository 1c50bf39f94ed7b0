#include "domlab/dominance.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "domlab/lp.hpp"

namespace domlab {
namespace {

// Cell offsets of every opponent profile in R_-i, canonical order.
std::vector<std::size_t> opponent_offsets(const Mechanism& m,
                                          const Restriction& r, AgentId i) {
  std::vector<std::size_t> offs{0};
  for (AgentId j = 0; j < m.agent_count(); ++j) {
    if (j == i) continue;
    std::vector<std::size_t> next;
    next.reserve(offs.size() * r.sets[j].size());
    for (std::size_t o : offs) {
      for (StrategyId s : r.sets[j]) next.push_back(o + s * m.stride(j));
    }
    offs = std::move(next);
  }
  return offs;
}

void check_strategy(const Mechanism& m, AgentId i, StrategyId s) {
  if (i >= m.agent_count() || s >= m.strategy_count(i)) {
    throw Error(ErrorKind::kUnknownStrategy,
                "strategy " + std::to_string(s) + " of agent " +
                    std::to_string(i) + " is out of range");
  }
}

// Proper upper-contour masses: entry j is the mass of classes 0..j.
std::vector<Rational> upper_masses(const Preference& pref, const Lottery& y) {
  const std::size_t k = pref.class_count();
  std::vector<Rational> out(k > 0 ? k - 1 : 0);
  Rational acc;
  for (std::size_t j = 0; j + 1 < k; ++j) {
    for (OutcomeId z : pref.classes()[j]) acc += y.mass(z);
    out[j] = acc;
  }
  return out;
}

bool all_geq(const std::vector<Rational>& a, const std::vector<Rational>& b) {
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (a[j] < b[j]) return false;
  }
  return true;
}

bool strictly_above(const std::vector<Rational>& a,
                    const std::vector<Rational>& b) {
  bool some = false;
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (a[j] < b[j]) return false;
    if (a[j] > b[j]) some = true;
  }
  return some;
}

// Round-synchronous deletion where better(i, cell_a, cell_b) says agent i
// strictly prefers cell a to cell b.
template <class Better>
DeletionTrace iterate_deletion(const Mechanism& m, Better&& better,
                               std::size_t max_rounds) {
  DeletionTrace trace;
  Restriction cur = Restriction::full(m);
  for (std::size_t round = 0; round < max_rounds; ++round) {
    DeletionRound dr;
    for (AgentId i = 0; i < m.agent_count(); ++i) {
      const auto offs = opponent_offsets(m, cur, i);
      const std::size_t stride = m.stride(i);
      for (StrategyId s : cur.sets[i]) {
        for (StrategyId d = 0; d < m.strategy_count(i); ++d) {
          if (d == s) continue;
          bool dominated = true;
          for (std::size_t o : offs) {
            if (!better(i, d * stride + o, s * stride + o)) {
              dominated = false;
              break;
            }
          }
          if (dominated) {
            dr.deletions.push_back({i, s, d});
            break;
          }
        }
      }
    }
    dr.survivors = cur;
    for (const auto& del : dr.deletions) {
      auto& set = dr.survivors.sets[del.agent];
      set.erase(std::find(set.begin(), set.end(), del.deleted));
    }
    const bool done = dr.deletions.empty();
    cur = dr.survivors;
    trace.rounds.push_back(std::move(dr));
    if (done) break;
  }
  return trace;
}

std::vector<std::vector<Rational>> payoff_table(const Mechanism& m,
                                                const CardinalState& u) {
  if (u.utils.size() != m.agent_count()) {
    throw Error(ErrorKind::kInvalidInput,
                "cardinal state has the wrong number of agents");
  }
  std::vector<std::vector<Rational>> pay(m.agent_count());
  for (AgentId i = 0; i < m.agent_count(); ++i) {
    pay[i].reserve(m.profile_count());
    for (const auto& y : m.cells()) pay[i].push_back(expected_utility(u.utils[i], y));
  }
  return pay;
}

constexpr std::size_t kUnbounded = static_cast<std::size_t>(-1);

}  // namespace

Rational expected_utility(const Utility& u, const Lottery& y) {
  if (u.size() != y.size()) {
    throw Error(ErrorKind::kInvalidInput, "utility and lottery sizes differ");
  }
  Rational total;
  for (OutcomeId z = 0; z < u.size(); ++z) {
    if (!y.mass(z).is_zero()) total += y.mass(z) * u[z];
  }
  return total;
}

bool dominates_at(const Mechanism& m, const Restriction& r, AgentId i,
                  StrategyId dominator, StrategyId s, const Utility& u_i) {
  check_strategy(m, i, dominator);
  check_strategy(m, i, s);
  if (dominator == s) return false;
  const std::size_t stride = m.stride(i);
  for (std::size_t o : opponent_offsets(m, r, i)) {
    if (expected_utility(u_i, m.cell(dominator * stride + o)) <=
        expected_utility(u_i, m.cell(s * stride + o))) {
      return false;
    }
  }
  return true;
}

Restriction ud1_at(const Mechanism& m, const CardinalState& u) {
  const auto pay = payoff_table(m, u);
  auto trace = iterate_deletion(
      m,
      [&](AgentId i, std::size_t a, std::size_t b) {
        return pay[i][a] > pay[i][b];
      },
      1);
  return trace.rounds.front().survivors;
}

DeletionTrace udinf_at(const Mechanism& m, const CardinalState& u) {
  const auto pay = payoff_table(m, u);
  return iterate_deletion(
      m,
      [&](AgentId i, std::size_t a, std::size_t b) {
        return pay[i][a] > pay[i][b];
      },
      kUnbounded);
}

bool robust_geq(const Preference& pref, const Lottery& y, const Lottery& y2) {
  return all_geq(upper_masses(pref, y), upper_masses(pref, y2));
}

bool robust_gt(const Preference& pref, const Lottery& y, const Lottery& y2) {
  return strictly_above(upper_masses(pref, y), upper_masses(pref, y2));
}

bool robustly_dominates(const Mechanism& m, const Restriction& r, AgentId i,
                        StrategyId dominator, StrategyId s,
                        const Preference& pref_i) {
  check_strategy(m, i, dominator);
  check_strategy(m, i, s);
  if (dominator == s) return false;
  const std::size_t stride = m.stride(i);
  for (std::size_t o : opponent_offsets(m, r, i)) {
    if (!robust_gt(pref_i, m.cell(dominator * stride + o),
                   m.cell(s * stride + o))) {
      return false;
    }
  }
  return true;
}

DeletionTrace robust_udinf(const Mechanism& m, const OrdinalState& theta) {
  if (theta.prefs.size() != m.agent_count()) {
    throw Error(ErrorKind::kInvalidInput,
                "ordinal state has the wrong number of agents");
  }
  std::vector<std::vector<std::vector<Rational>>> upper(m.agent_count());
  for (AgentId i = 0; i < m.agent_count(); ++i) {
    upper[i].reserve(m.profile_count());
    for (const auto& y : m.cells()) upper[i].push_back(upper_masses(theta.prefs[i], y));
  }
  return iterate_deletion(
      m,
      [&](AgentId i, std::size_t a, std::size_t b) {
        return strictly_above(upper[i][a], upper[i][b]);
      },
      kUnbounded);
}

PossiblyUndominated possibly_undominated(const Mechanism& m,
                                         const Restriction& r, AgentId i,
                                         const Preference& pref_i,
                                         const Caps& caps, std::uint64_t seed,
                                         std::size_t fallback_samples) {
  PossiblyUndominated out;
  const std::size_t vars = pref_i.class_count() - 1;
  const std::size_t stride = m.stride(i);
  const auto offs = opponent_offsets(m, r, i);

  // Utility from class gaps: u(z) = sum of gaps below z's class.
  auto to_utility = [&](const std::vector<Rational>& gaps) {
    Utility u(pref_i.outcome_count());
    for (OutcomeId z = 0; z < u.size(); ++z) {
      for (std::size_t j = pref_i.rank(z); j < vars; ++j) u[z] += gaps[j];
    }
    return u;
  };
  LinearSystem base(vars);
  for (std::size_t j = 0; j < vars; ++j) {
    std::vector<Rational> e(vars);
    e[j] = 1;
    base.add_strict(std::move(e));
  }

  std::vector<std::vector<Rational>> upper(m.profile_count());
  for (std::size_t c = 0; c < m.profile_count(); ++c) {
    upper[c] = upper_masses(pref_i, m.cell(c));
  }

  for (StrategyId s : r.sets.at(i)) {
    // One admissible-row family per dominator that can possibly bind.
    std::vector<std::vector<std::vector<Rational>>> families;
    bool robustly_beaten = false;
    for (StrategyId d = 0; d < m.strategy_count(i) && !robustly_beaten; ++d) {
      if (d == s) continue;
      std::set<std::vector<Rational>> rows;
      bool free = false;
      for (std::size_t o : offs) {
        const auto& us = upper[s * stride + o];
        const auto& ud = upper[d * stride + o];
        if (all_geq(us, ud)) {
          free = true;
          break;
        }
        if (strictly_above(ud, us)) continue;
        std::vector<Rational> diff(vars);
        for (std::size_t j = 0; j < vars; ++j) diff[j] = us[j] - ud[j];
        rows.insert(std::move(diff));
      }
      if (free) continue;
      if (rows.empty()) {
        robustly_beaten = true;
        break;
      }
      families.emplace_back(rows.begin(), rows.end());
    }
    if (robustly_beaten) continue;

    std::sort(families.begin(), families.end(),
              [](const auto& a, const auto& b) { return a.size() < b.size(); });
    std::uint64_t combos = 1;
    bool over_cap = false;
    for (const auto& f : families) {
      if (combos > caps.max_choice_functions / f.size()) {
        over_cap = true;
        break;
      }
      combos *= f.size();
    }
    if (combos > caps.max_choice_functions) over_cap = true;

    if (over_cap) {
      out.exact = false;
      for (std::size_t t = 0; t < fallback_samples; ++t) {
        Utility u = sample_utility(pref_i, derive_seed(seed, i * 7919 + s, t));
        bool undominated = true;
        for (StrategyId d = 0; d < m.strategy_count(i) && undominated; ++d) {
          if (d != s && dominates_at(m, r, i, d, s, u)) undominated = false;
        }
        if (undominated) {
          out.strategies.push_back(s);
          out.witnesses.push_back(std::move(u));
          break;
        }
      }
      continue;
    }

    // Depth-first over choice functions, pruning infeasible prefixes.
    std::optional<std::vector<Rational>> found;
    LinearSystem sys = base;
    std::function<bool(std::size_t)> dfs = [&](std::size_t depth) -> bool {
      auto point = lp_solve(sys, caps);
      if (!point) return false;
      if (depth == families.size()) {
        found = std::move(point);
        return true;
      }
      for (const auto& row : families[depth]) {
        sys.add_weak(row);
        const bool ok = dfs(depth + 1);
        sys.weak_rows.pop_back();
        if (ok) return true;
      }
      return false;
    };
    if (dfs(0)) {
      out.strategies.push_back(s);
      out.witnesses.push_back(to_utility(*found));
    }
  }
  return out;
}

bool has_non_domination_property(const Mechanism& m, const Restriction& r,
                                 const CardinalState& u) {
  const auto pay = payoff_table(m, u);
  for (AgentId i = 0; i < m.agent_count(); ++i) {
    const auto offs = opponent_offsets(m, r, i);
    const std::size_t stride = m.stride(i);
    for (StrategyId s : r.sets[i]) {
      for (StrategyId d = 0; d < m.strategy_count(i); ++d) {
        if (d == s) continue;
        bool dominated = true;
        for (std::size_t o : offs) {
          if (pay[i][d * stride + o] <= pay[i][s * stride + o]) {
            dominated = false;
            break;
          }
        }
        if (dominated) return false;
      }
    }
  }
  return true;
}

}  // namespace domlab
