#pragma once

// File formats and text rendering. Mechanisms and problems are JSON with
// rationals as "p/q" strings; serialization is canonical (declaration order
// for agents, outcomes and strategies, canonical profile order for cells,
// zero masses omitted) so parse -> serialize is a fixed point.

#include <string>
#include <string_view>
#include <vector>

#include "domlab/core.hpp"
#include "domlab/search.hpp"
#include "domlab/verify.hpp"
#include "json.hpp"

namespace domlab {

using Json = nlohmann::ordered_json;

// Throws ParseError (with line and column) on malformed JSON and Error for
// well-formed documents that do not describe a valid object.
Json parse_json(std::string_view text);

Json mechanism_to_json(const Mechanism& m);
Mechanism mechanism_from_json(const Json& j);
std::string serialize_mechanism(const Mechanism& m);
Mechanism parse_mechanism(std::string_view text);

// {"agents", "outcomes", "domain": {"kind", "extra_states"},
//  "omega": "ALL" | {"<state>": ["<cardinal>", ...]},
//  "scf": {"<state>": "<outcome>"}, "fill_unanimity_tops": bool}
Json problem_to_json(const ImplementationProblem& p);
ImplementationProblem problem_from_json(const Json& j);
ImplementationProblem parse_problem(std::string_view text);

std::string format_strategy_set(const Mechanism& m, AgentId i,
                                const std::vector<StrategyId>& set);
std::string format_profile(const Mechanism& m, const Profile& p);
std::string format_cardinal(const CardinalState& u, const AgentSet& agents,
                            const OutcomeSpace& space);

// One column per trace, one row per round and agent ("R1 i1", "R1 i2", ...).
// Rounds past a trace's fixed point repeat the fixed point.
std::string render_trace_table(const Mechanism& m,
                               const std::vector<std::string>& headers,
                               const std::vector<DeletionTrace>& traces,
                               std::size_t rounds);

// Plain text table with left-aligned columns.
std::string render_table(const std::vector<std::vector<std::string>>& rows);

Json trace_to_json(const Mechanism& m, const DeletionTrace& t);
Json verification_report_to_json(const Mechanism& m,
                                 const VerificationReport& r);
std::string render_verification_report(const Mechanism& m,
                                       const VerificationReport& r);

Json search_report_to_json(const SearchReport& r);
std::string render_search_report(const SearchReport& r);

}  // namespace domlab
