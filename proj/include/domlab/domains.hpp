#pragma once

#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

#include "domlab/core.hpp"

namespace domlab {

// Enumeration and search caps. Defaults can be overridden through the
// DOMLAB_CAPS environment variable, e.g. "outcomes=7,agents=5".
struct Caps {
  std::size_t max_outcomes = 6;
  std::size_t max_agents = 4;
  std::uint64_t max_choice_functions = 1'000'000;
  std::uint64_t max_scfs = 50'000'000;
  std::uint64_t max_mechanisms = std::uint64_t{1} << 62;
  std::size_t max_lp_rows = 20'000;
  std::size_t max_lp_variables = 16;

  // Applies "key=value,..." overrides; throws kInvalidInput on bad keys.
  void apply(std::string_view text);
  static Caps from_env();
};

const Caps& default_caps();

// All |Z|! strict orders, lexicographic in the ranking sequence.
std::vector<Preference> enumerate_strict_preferences(
    std::size_t outcome_count, const Caps& caps = default_caps());

// One state per strict order, shared by every agent.
std::vector<OrdinalState> unanimity_strict_states(
    std::size_t agent_count, std::size_t outcome_count,
    const Caps& caps = default_caps());

// Every strict profile, lexicographic by agent.
std::vector<OrdinalState> strict_states(std::size_t agent_count,
                                        std::size_t outcome_count,
                                        const Caps& caps = default_caps());

// z is second-best for both agents and their tops differ. Throws kNotStrict.
bool is_second_best_pair_state(const OrdinalState& theta, AgentId i1,
                               AgentId i2, OutcomeId z);

inline const std::vector<OutcomeId>& top(const Preference& pref) {
  return pref.top();
}

// Class j (1 = best) of k gets (k - j) / (k - 1); a single class gets 0.
Utility canonical_utility(const Preference& pref);
CardinalState canonical_cardinal(const OrdinalState& theta);

inline constexpr std::int64_t kSampleDenominator = 1'000'000;

// Deterministic in seed; values are multiples of 1/kSampleDenominator in
// [0, 1], equal within a class and strictly decreasing across classes.
CardinalState sample_cardinal(const OrdinalState& theta, std::uint64_t seed);
Utility sample_utility(const Preference& pref, std::uint64_t seed);

// splitmix64 mixing of a root seed with two stream coordinates.
std::uint64_t derive_seed(std::uint64_t root, std::uint64_t a,
                          std::uint64_t b = 0);

enum class DomainTag { kStrictAll, kUnanimityStrict, kCustom };

const char* domain_tag_name(DomainTag tag);
DomainTag parse_domain_tag(std::string_view text);

struct DomainKind {
  DomainTag tag = DomainTag::kUnanimityStrict;
  std::vector<OrdinalState> extra_states;
};

// STRICT_ALL: every strict state. UNANIMITY_STRICT: unanimity states followed
// by the extra states. CUSTOM: the extra states only.
std::vector<OrdinalState> domain_states(const DomainKind& kind,
                                        std::size_t agent_count,
                                        std::size_t outcome_count,
                                        const Caps& caps = default_caps());

using ScfTable = std::vector<std::pair<OrdinalState, OutcomeId>>;

struct BuildOptions {
  bool require_strict = true;
  // Check f(theta) = shared top at unanimity states.
  bool unanimity_respecting = false;
  // Fill unanimity states missing from the table with their shared top.
  bool fill_unanimity_tops = false;
};

// Errors: kDomainViolation, kScfPartial.
ImplementationProblem build_problem(const DomainKind& kind,
                                    const AgentSet& agents,
                                    const OutcomeSpace& outcomes,
                                    const ScfTable& table,
                                    const BuildOptions& options = {});

// Text forms: "a>b=c" for a preference, "i1:b>a>c;i2:c>a>b" for a state.
// Throw ParseError with the 1-based column of the offending token.
Preference parse_preference(std::string_view text, const OutcomeSpace& space,
                            int column_offset = 0);
OrdinalState parse_state(std::string_view text, const AgentSet& agents,
                         const OutcomeSpace& space);
// "i1:a=1,b=1/2,c=0;i2:..." utilities per agent.
CardinalState parse_cardinal(std::string_view text, const AgentSet& agents,
                             const OutcomeSpace& space);

}  // namespace domlab
