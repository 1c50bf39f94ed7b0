#pragma once

// Mechanisms built from the possibility and impossibility arguments: the
// i-dictatorial mechanism, the 3x3 hat mechanism, its |Z| >= 4 star
// generalization, and a finite truncation of the announcement mechanism with
// strategies Z x N x Z.

#include <string>
#include <vector>

#include "domlab/core.hpp"

namespace domlab {

inline const std::string kDummyStrategy = "dummy";

// S_i = Z, every other agent has the single strategy "dummy";
// g = degenerate lottery on the dictator's announcement.
Mechanism dictatorial_mechanism(const AgentSet& agents,
                                const OutcomeSpace& outcomes, AgentId dictator);

// a = f at the disagreement state, b = first agent's top, c = second's.
struct StarLabels {
  OutcomeId a;
  OutcomeId b;
  OutcomeId c;
};

// Reads (a, b, c) off a disagreement state; throws kLabelClash unless a is
// second-best for both agents and their tops differ.
StarLabels star_labels_from_state(const OrdinalState& theta_bar, AgentId i1,
                                  AgentId i2, OutcomeId f_bar);

// 3x3 table over strategies {a, b, c} (in that order) for agents i1, i2;
// other agents get a dummy strategy. Throws kLabelClash on repeated labels.
Mechanism hat_mechanism(const OutcomeSpace& outcomes, const StarLabels& labels,
                        const AgentSet& agents, AgentId i1 = 0, AgentId i2 = 1);
// Convenience: outcomes {a, b, c} and agents {i1, i2}.
Mechanism hat_mechanism(const std::string& a, const std::string& b,
                        const std::string& c);

// S_i1 = S_i2 = Z, diagonal degenerate, off-diagonal cells per the
// three-row table keyed on s_i1 in {a, b, other} and s_i2 in {a, c, other}.
// Accepts |Z| >= 3 so the |Z| = 3 instance can be compared with the hat
// mechanism.
Mechanism star_mechanism(const OutcomeSpace& outcomes, const StarLabels& labels,
                         const AgentSet& agents, AgentId i1 = 0,
                         AgentId i2 = 1);

struct CellDifference {
  Profile profile;
  Lottery left;
  Lottery right;
};

// Cells where two same-shaped mechanisms disagree (after matching strategy
// labels position by position).
std::vector<CellDifference> compare_mechanisms(const Mechanism& left,
                                               const Mechanism& right);

// Top outcome of agent i at a strict state.
OutcomeId strict_top(const OrdinalState& theta, AgentId i);

// {z} when z != f_bar, {z, top_i(theta_bar)} when z == f_bar. Throws
// kDictatorialCase when f_bar is agent i's top.
std::vector<OutcomeId> sigma(AgentId i, OutcomeId z,
                             const OrdinalState& theta_bar, OutcomeId f_bar);

// z when announcements lie in the sigma-product of z, else UNIF[Z].
// Throws kDictatorialCase when theta_bar is a strict unanimity state or f_bar
// is some agent's top there.
Lottery gamma(const std::vector<OutcomeId>& announcements,
              const OrdinalState& theta_bar, OutcomeId f_bar);

// The sigma-products of distinct outcomes are pairwise disjoint.
bool sigma_products_disjoint(const OrdinalState& theta_bar, OutcomeId f_bar);

struct TruncationParams {
  std::size_t cap = 2;  // N: the integer coordinate ranges over 1..N
};

struct AnnouncementStrategy {
  OutcomeId z;
  std::size_t n;
  OutcomeId z_hat;

  friend bool operator==(const AnnouncementStrategy&,
                         const AnnouncementStrategy&) = default;
};

// Strategy indices enumerate (z, n, z_hat) lexicographically.
StrategyId encode_announcement(const AnnouncementStrategy& s,
                               std::size_t outcome_count, std::size_t cap);
AnnouncementStrategy decode_announcement(StrategyId id,
                                         std::size_t outcome_count,
                                         std::size_t cap);

// S_i = Z x {1..N} x Z with labels "z:n:zhat". All n_i = 1 gives gamma of
// the first coordinates; otherwise the average over agents of
// 1/(2n_i) gamma + 1/(2n_i) UNIF[Z] + (n_i - 1)/n_i z_hat_i.
Mechanism truncated_infinite_mechanism(const AgentSet& agents,
                                       const OutcomeSpace& outcomes,
                                       const OrdinalState& theta_bar,
                                       OutcomeId f_bar,
                                       const TruncationParams& params);

// Smallest n with min_z U[(1/n) z + ((n-1)/n) top] strictly above the
// utility of every non-top outcome and of UNIF[Z]. pref_i must be strict and
// represented by u_i.
std::size_t n_threshold(const Utility& u_i, const Preference& pref_i);

}  // namespace domlab
