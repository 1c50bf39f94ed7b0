#pragma once

#include "domlab/constructions.hpp"
#include "domlab/domains.hpp"

namespace fx {

using namespace domlab;

inline OutcomeSpace abc() { return OutcomeSpace({"a", "b", "c"}); }
inline AgentSet two_agents() { return AgentSet({"i1", "i2"}); }

inline Mechanism hat() { return hat_mechanism("a", "b", "c"); }

inline OrdinalState state(const std::string& text,
                          const OutcomeSpace& z = abc(),
                          const AgentSet& agents = two_agents()) {
  return parse_state(text, agents, z);
}

inline Preference pref(const std::string& text,
                       const OutcomeSpace& z = abc()) {
  return parse_preference(text, z);
}

inline Utility util(std::initializer_list<Rational> values) {
  return Utility(values);
}

inline Restriction singleton(const std::vector<StrategyId>& profile) {
  Restriction r;
  for (StrategyId s : profile) r.sets.push_back({s});
  return r;
}

// The seven-state problem: unanimity states plus b>a>c / c>a>b with f = a.
inline ImplementationProblem hat_problem() {
  const auto z = abc();
  const auto agents = two_agents();
  DomainKind kind{DomainTag::kUnanimityStrict,
                  {parse_state("i1:b>a>c;i2:c>a>b", agents, z)}};
  ScfTable table{{kind.extra_states[0], 0}};
  return build_problem(kind, agents, z, table,
                       {.require_strict = true,
                        .unanimity_respecting = true,
                        .fill_unanimity_tops = true});
}

}  // namespace fx
