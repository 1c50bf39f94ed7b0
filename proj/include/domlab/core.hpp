#pragma once

// Foundational value types: outcomes, agents, lotteries, preferences,
// ordinal and cardinal states, mechanisms, social choice functions,
// implementation problems, deletion traces and verdicts.
//
// Everything is indexed: an outcome is its position in the OutcomeSpace, an
// agent its position in the AgentSet, a strategy its position in the agent's
// strategy list. Label order is the canonical iteration order.

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "domlab/errors.hpp"
#include "domlab/rational.hpp"

namespace domlab {

using OutcomeId = std::size_t;
using AgentId = std::size_t;
using StrategyId = std::size_t;
using Profile = std::vector<StrategyId>;

class LabelSet {
 public:
  std::size_t size() const { return labels_.size(); }
  const std::string& label(std::size_t i) const { return labels_.at(i); }
  const std::vector<std::string>& labels() const { return labels_; }
  std::optional<std::size_t> find(std::string_view label) const;

  friend bool operator==(const LabelSet&, const LabelSet&) = default;

 protected:
  LabelSet() = default;
  explicit LabelSet(std::vector<std::string> labels)
      : labels_(std::move(labels)) {}
  static void validate(const std::vector<std::string>& labels,
                       const char* what);

  std::vector<std::string> labels_;
};

class OutcomeSpace : public LabelSet {
 public:
  OutcomeSpace() = default;
  // At least two pairwise distinct, nonempty labels.
  explicit OutcomeSpace(std::vector<std::string> labels);

  // Throws kUnknownOutcome.
  OutcomeId index(std::string_view label) const;
};

class AgentSet : public LabelSet {
 public:
  AgentSet() = default;
  explicit AgentSet(std::vector<std::string> labels);

  // Throws kUnknownAgent.
  AgentId index(std::string_view label) const;
};

// Probability distribution over an outcome space, stored densely by outcome
// index. Zero-mass entries carry no information, so equality is plain
// component-wise equality.
class Lottery {
 public:
  Lottery() = default;

  static Lottery degenerate(std::size_t outcome_count, OutcomeId z);
  static Lottery uniform(std::size_t outcome_count);
  // Masses must be non-negative and sum to exactly one.
  static Lottery from_masses(std::vector<Rational> masses);

  std::size_t size() const { return mass_.size(); }
  const Rational& mass(OutcomeId z) const { return mass_.at(z); }
  const std::vector<Rational>& masses() const { return mass_; }

  // The outcome carrying all mass, if any.
  std::optional<OutcomeId> degenerate_outcome() const;
  bool is_degenerate_on(OutcomeId z) const;

  friend bool operator==(const Lottery&, const Lottery&) = default;

 private:
  explicit Lottery(std::vector<Rational> m) : mass_(std::move(m)) {}
  std::vector<Rational> mass_;
};

Lottery make_lottery(const OutcomeSpace& space,
                     const std::vector<std::pair<std::string, Rational>>& pairs);
Lottery make_lottery(std::size_t outcome_count,
                     const std::vector<std::pair<OutcomeId, Rational>>& pairs);

// Convex combination; coefficients non-negative, summing to one.
Lottery mix(std::span<const Rational> coeffs, std::span<const Lottery> lotteries);

bool lottery_equal(const Lottery& x, const Lottery& y);

// "1/4a+3/4b"; a degenerate lottery renders as the bare label.
std::string format_lottery(const Lottery& y, const OutcomeSpace& space);

// Weak order over outcomes as a list of indifference classes, best first.
class Preference {
 public:
  Preference() = default;
  // Classes must partition {0..outcome_count-1}.
  Preference(std::vector<std::vector<OutcomeId>> classes,
             std::size_t outcome_count);
  static Preference strict(const std::vector<OutcomeId>& order);

  std::size_t outcome_count() const { return rank_.size(); }
  std::size_t class_count() const { return classes_.size(); }
  const std::vector<std::vector<OutcomeId>>& classes() const {
    return classes_;
  }
  const std::vector<OutcomeId>& top() const { return classes_.front(); }
  std::size_t rank(OutcomeId z) const { return rank_.at(z); }
  bool is_strict() const { return classes_.size() == rank_.size(); }
  bool weakly_prefers(OutcomeId z, OutcomeId w) const {
    return rank_.at(z) <= rank_.at(w);
  }
  bool strictly_prefers(OutcomeId z, OutcomeId w) const {
    return rank_.at(z) < rank_.at(w);
  }
  // Outcomes in preference order (ties broken by label order).
  std::vector<OutcomeId> order() const;

  std::string format(const OutcomeSpace& space) const;

  friend bool operator==(const Preference& a, const Preference& b) {
    return a.rank_ == b.rank_;
  }
  friend auto operator<=>(const Preference& a, const Preference& b) {
    return a.rank_ <=> b.rank_;
  }

 private:
  std::vector<std::vector<OutcomeId>> classes_;
  std::vector<std::size_t> rank_;
};

struct OrdinalState {
  std::vector<Preference> prefs;  // indexed by agent

  bool is_strict() const;
  bool is_unanimous() const;
  std::string format(const AgentSet& agents, const OutcomeSpace& space) const;

  friend bool operator==(const OrdinalState&, const OrdinalState&) = default;
  friend auto operator<=>(const OrdinalState& a, const OrdinalState& b) {
    return a.prefs <=> b.prefs;
  }
};

using Utility = std::vector<Rational>;  // indexed by outcome

struct CardinalState {
  std::vector<Utility> utils;  // indexed by agent

  friend bool operator==(const CardinalState&, const CardinalState&) = default;
};

// u(z) >= u(z') iff z is weakly preferred to z', for every pair.
bool represents(const Utility& u, const Preference& pref);
bool represents(const CardinalState& u, const OrdinalState& theta);

// M = <S, g>. Profiles are stored row-major with agent 0 most significant.
class Mechanism {
 public:
  using OutcomeFn = std::function<Lottery(const Profile&)>;

  Mechanism() = default;
  Mechanism(OutcomeSpace outcomes, AgentSet agents,
            std::vector<std::vector<std::string>> strategies,
            std::vector<Lottery> cells);
  static Mechanism build(OutcomeSpace outcomes, AgentSet agents,
                         std::vector<std::vector<std::string>> strategies,
                         const OutcomeFn& g);

  const OutcomeSpace& outcomes() const { return outcomes_; }
  const AgentSet& agents() const { return agents_; }
  std::size_t agent_count() const { return agents_.size(); }
  std::size_t strategy_count(AgentId i) const { return strategies_.at(i).size(); }
  const std::vector<std::string>& strategies(AgentId i) const {
    return strategies_.at(i);
  }
  const std::string& strategy_label(AgentId i, StrategyId s) const {
    return strategies_.at(i).at(s);
  }
  // Throws kUnknownStrategy.
  StrategyId strategy_index(AgentId i, std::string_view label) const;

  std::size_t profile_count() const { return cells_.size(); }
  std::size_t cell_index(std::span<const StrategyId> profile) const;
  Profile profile_at(std::size_t cell) const;
  std::size_t stride(AgentId i) const { return strides_.at(i); }

  const Lottery& outcome(std::span<const StrategyId> profile) const {
    return cells_[cell_index(profile)];
  }
  const Lottery& cell(std::size_t index) const { return cells_.at(index); }
  const std::vector<Lottery>& cells() const { return cells_; }

  bool is_deterministic() const;

  friend bool operator==(const Mechanism&, const Mechanism&) = default;

 private:
  OutcomeSpace outcomes_;
  AgentSet agents_;
  std::vector<std::vector<std::string>> strategies_;
  std::vector<Lottery> cells_;
  std::vector<std::size_t> strides_;
};

struct Scf {
  std::vector<OrdinalState> domain;
  std::vector<OutcomeId> choice;  // parallel to domain

  std::optional<OutcomeId> at(const OrdinalState& theta) const;
};

struct OmegaSpec {
  bool all_representations = true;
  // When explicit: one list of cardinal states per element of the domain.
  std::vector<std::vector<CardinalState>> explicit_states;
};

struct ImplementationProblem {
  OutcomeSpace outcomes;
  AgentSet agents;
  Scf scf;
  OmegaSpec omega;

  const std::vector<OrdinalState>& theta() const { return scf.domain; }
  // Checks scf totality/consistency and every explicit representation.
  void validate() const;
};

// Product subset of strategy profiles; each set sorted and nonempty.
struct Restriction {
  std::vector<std::vector<StrategyId>> sets;

  static Restriction full(const Mechanism& m);
  bool contains(AgentId i, StrategyId s) const;
  bool subset_of(const Restriction& other) const;
  std::size_t profile_count() const;
  // Calls fn(profile) for every profile in the product, canonical order.
  void for_each_profile(const std::function<void(const Profile&)>& fn) const;

  friend bool operator==(const Restriction&, const Restriction&) = default;
};

struct Deletion {
  AgentId agent;
  StrategyId deleted;
  StrategyId dominator;

  friend bool operator==(const Deletion&, const Deletion&) = default;
};

struct DeletionRound {
  Restriction survivors;  // after this round's deletions
  std::vector<Deletion> deletions;
};

// rounds[k-1].survivors is UD^k; the last round deletes nothing.
struct DeletionTrace {
  std::vector<DeletionRound> rounds;

  // UD^k for k >= 1, saturating at the fixed point.
  const Restriction& survivors_at(std::size_t k) const;
  const Restriction& fixed_point() const { return rounds.back().survivors; }
  // Number of rounds that deleted something.
  std::size_t active_rounds() const;
};

enum class Status { kVerified, kRefuted, kInconclusive };

const char* status_name(Status s);

struct Witness {
  OrdinalState state;
  CardinalState cardinal;
  Profile profile;
  Lottery lottery;
};

struct Verdict {
  Status status = Status::kInconclusive;
  std::optional<Witness> witness;
};

}  // namespace domlab
