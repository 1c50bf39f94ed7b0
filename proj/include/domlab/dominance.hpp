#pragma once

// Strict dominance by pure strategies, one-shot and iterated deletion at a
// cardinal state, and the representation-free counterparts that quantify
// over every cardinal representation of an ordinal state.
//
// Dominators always range over the agent's full strategy set, also when the
// opponents are restricted.

#include <cstdint>
#include <optional>
#include <vector>

#include "domlab/core.hpp"
#include "domlab/domains.hpp"

namespace domlab {

Rational expected_utility(const Utility& u, const Lottery& y);

// U_i[g(dominator, s_-i)] > U_i[g(s, s_-i)] for every s_-i in R_-i.
// Throws kUnknownStrategy.
bool dominates_at(const Mechanism& m, const Restriction& r, AgentId i,
                  StrategyId dominator, StrategyId s, const Utility& u_i);

// UD^1: per agent, the strategies not strictly dominated on the full set.
Restriction ud1_at(const Mechanism& m, const CardinalState& u);

// Round-synchronous iterated deletion to the fixed point.
DeletionTrace udinf_at(const Mechanism& m, const CardinalState& u);

// Weak / strict expected-utility comparison valid for every representation
// of pref: upper-contour masses of y weakly above those of y', and for the
// strict form above on at least one proper upper contour set.
bool robust_geq(const Preference& pref, const Lottery& y, const Lottery& y2);
bool robust_gt(const Preference& pref, const Lottery& y, const Lottery& y2);

// robust_gt(pref_i, g(dominator, s_-i), g(s, s_-i)) for every s_-i in R_-i.
bool robustly_dominates(const Mechanism& m, const Restriction& r, AgentId i,
                        StrategyId dominator, StrategyId s,
                        const Preference& pref_i);

// Iterated deletion of robustly dominated strategies. For every
// representation u of theta, udinf_at(m, u).fixed_point() is contained in
// the result's fixed point.
DeletionTrace robust_udinf(const Mechanism& m, const OrdinalState& theta);

struct PossiblyUndominated {
  // Strategies of R_i undominated on R under some representation.
  std::vector<StrategyId> strategies;
  // A representation witnessing each member (parallel to strategies).
  std::vector<Utility> witnesses;
  // False when the choice-function cap forced the sampling fallback, which
  // under-approximates the set.
  bool exact = true;
};

// Decides, per strategy of R_i, whether some representation of pref_i leaves
// it undominated on R. Exact via linear feasibility over choice functions;
// beyond caps.max_choice_functions falls back to sampling `fallback_samples`
// representations seeded from `seed`.
PossiblyUndominated possibly_undominated(const Mechanism& m,
                                         const Restriction& r, AgentId i,
                                         const Preference& pref_i,
                                         const Caps& caps = default_caps(),
                                         std::uint64_t seed = 0,
                                         std::size_t fallback_samples = 200);

// No member of R is strictly dominated on R (by any full-set strategy) at u.
bool has_non_domination_property(const Mechanism& m, const Restriction& r,
                                 const CardinalState& u);

}  // namespace domlab
