#pragma once

// Implementation checks: does a mechanism's surviving set map to f(theta) at
// every admitted representation of every state? Plus the structural lemmas
// used as falsifiers on concrete mechanisms.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "domlab/core.hpp"
#include "domlab/domains.hpp"

namespace domlab {

enum class Notion { kUD, kUDInf };
const char* notion_name(Notion n);
Notion parse_notion(std::string_view text);  // "ud" / "udinf", any case

inline constexpr std::uint64_t kDefaultSeed = 20240607;

// sets[i][z]: strategies of agent i that force the degenerate lottery z
// against some opponent profile.
using StrategySets = std::vector<std::vector<std::vector<StrategyId>>>;
StrategySets s_z_sets(const Mechanism& m);

// Per outcome: g maps the product of S_i^z onto {z} (true when the product
// is empty). Throws kInvalidInput when f is not surjective and
// kEmptyWitness when some S_i^z is empty.
std::vector<bool> check_lemma1(const Mechanism& m,
                               const ImplementationProblem& problem);

struct NestingViolation {
  AgentId agent;
  OutcomeId z;
  OutcomeId z2;
  friend bool operator==(const NestingViolation&,
                         const NestingViolation&) = default;
};
// Triples with S_i^z a subset of S_i^z2 other than S_i^z = S_i^z2 = S_i.
std::vector<NestingViolation> check_lemma2(const Mechanism& m);

// The intersection of S_i^z over Z is nonempty. Throws kWrongArity unless
// |Z| = 2 and kInvalidInput when f is not surjective.
bool check_lemma4(const Mechanism& m, const ImplementationProblem& problem,
                  AgentId i);

bool is_dictator(const ImplementationProblem& problem, AgentId i);
std::optional<AgentId> find_dictator(const ImplementationProblem& problem);
bool is_surjective(const Scf& scf, std::size_t outcome_count);
// Surjective f on a strict domain containing every strict unanimity state.
bool is_qualifying(const ImplementationProblem& problem);

struct VerifyOptions {
  std::uint64_t seed = kDefaultSeed;
  std::size_t samples = 200;  // representations per state on fallbacks
  Caps caps = default_caps();
  bool diagnostics = true;
};

struct StateReport {
  OrdinalState state;
  OutcomeId target = 0;
  Verdict verdict;
  // ALL mode: the robust trace (UDINF) or the one-round robust trace (UD).
  std::optional<DeletionTrace> robust_trace;
  // ALL mode, UD: the exact union of UD sets over representations.
  std::optional<Restriction> possible;
  bool exact = true;
  // Explicit mode: one trace per listed representation.
  std::vector<DeletionTrace> cardinal_traces;
  std::size_t samples_tried = 0;
};

struct Diagnostics {
  // Strategies deleted by robust dominance in round one versus strategies
  // that are not possibly undominated (UD) or deleted at the robust fixed
  // point (UDINF), summed over states and agents.
  std::size_t robust_deletions = 0;
  std::size_t exact_deletions = 0;
  // Post-certification: g maps the product of S_i^z onto {z} for every z.
  std::optional<bool> product_check;
  // Certified qualifying UD instance has a dictatorial f.
  std::optional<bool> dictatorship_check;
  std::vector<std::string> notes;
};

struct VerificationReport {
  Notion notion = Notion::kUD;
  bool all_representations = true;
  Status status = Status::kInconclusive;
  std::vector<StateReport> states;
  Diagnostics diagnostics;
};

// Throws kInvalidInput when the mechanism and problem disagree on outcomes
// or agents.
VerificationReport verify_ud(const Mechanism& m,
                             const ImplementationProblem& problem,
                             const VerifyOptions& options = {});
VerificationReport verify_udinf(const Mechanism& m,
                                const ImplementationProblem& problem,
                                const VerifyOptions& options = {});
VerificationReport verify(const Mechanism& m,
                          const ImplementationProblem& problem, Notion notion,
                          const VerifyOptions& options = {});

// Re-runs the witness through ud1_at / udinf_at: the profile survives at the
// witness representation, which represents the state, and maps to
// something other than the degenerate f(theta).
bool replay_witness(const Mechanism& m, Notion notion, const Witness& w,
                    OutcomeId target);

// Every surviving profile maps to the degenerate target. Otherwise *bad is
// the offending profile with least mass on the target.
bool maps_to(const Mechanism& m, const Restriction& r, OutcomeId target,
             Profile* bad = nullptr);

}  // namespace domlab
