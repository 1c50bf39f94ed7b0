#include "domlab/constructions.hpp"

#include <algorithm>

#include "domlab/dominance.hpp"

namespace domlab {
namespace {

std::vector<std::vector<std::string>> two_player_strategies(
    const AgentSet& agents, AgentId i1, AgentId i2,
    const std::vector<std::string>& labels) {
  if (i1 == i2 || i1 >= agents.size() || i2 >= agents.size()) {
    throw Error(ErrorKind::kInvalidInput, "need two distinct agents");
  }
  std::vector<std::vector<std::string>> out(agents.size(), {kDummyStrategy});
  out[i1] = labels;
  out[i2] = labels;
  return out;
}

void check_distinct(const StarLabels& l, std::size_t outcome_count) {
  if (l.a == l.b || l.a == l.c || l.b == l.c) {
    throw Error(ErrorKind::kLabelClash, "labels a, b, c must be distinct");
  }
  if (l.a >= outcome_count || l.b >= outcome_count || l.c >= outcome_count) {
    throw Error(ErrorKind::kUnknownOutcome, "label outside the outcome space");
  }
}

Lottery pair_mix(std::size_t n, OutcomeId x, Rational px, OutcomeId y,
                 Rational py) {
  return make_lottery(n, {{x, px}, {y, py}});
}

}  // namespace

Mechanism dictatorial_mechanism(const AgentSet& agents,
                                const OutcomeSpace& outcomes,
                                AgentId dictator) {
  if (dictator >= agents.size()) {
    throw Error(ErrorKind::kUnknownAgent, "dictator out of range");
  }
  std::vector<std::vector<std::string>> strategies(agents.size(),
                                                   {kDummyStrategy});
  strategies[dictator] = outcomes.labels();
  const std::size_t n = outcomes.size();
  return Mechanism::build(outcomes, agents, std::move(strategies),
                          [&](const Profile& p) {
                            return Lottery::degenerate(n, p[dictator]);
                          });
}

StarLabels star_labels_from_state(const OrdinalState& theta_bar, AgentId i1,
                                  AgentId i2, OutcomeId f_bar) {
  bool ok = false;
  try {
    ok = is_second_best_pair_state(theta_bar, i1, i2, f_bar);
  } catch (const Error&) {
    ok = false;
  }
  if (!ok) {
    throw Error(ErrorKind::kLabelClash,
                "f(theta_bar) is not second-best for both agents with "
                "distinct tops");
  }
  return {f_bar, strict_top(theta_bar, i1), strict_top(theta_bar, i2)};
}

Mechanism hat_mechanism(const OutcomeSpace& outcomes, const StarLabels& l,
                        const AgentSet& agents, AgentId i1, AgentId i2) {
  check_distinct(l, outcomes.size());
  const std::size_t n = outcomes.size();
  const std::vector<OutcomeId> ids{l.a, l.b, l.c};
  auto strategies = two_player_strategies(
      agents, i1, i2,
      {outcomes.label(l.a), outcomes.label(l.b), outcomes.label(l.c)});
  const Rational q(1, 4), h(1, 2), tq(3, 4);
  return Mechanism::build(
      outcomes, agents, std::move(strategies), [&](const Profile& p) {
        const OutcomeId s1 = ids[p[i1]];
        const OutcomeId s2 = ids[p[i2]];
        if (s1 == s2) return Lottery::degenerate(n, s1);
        if (s1 == l.a && s2 == l.b) return pair_mix(n, l.a, q, l.b, tq);
        if (s1 == l.a && s2 == l.c) return pair_mix(n, l.a, h, l.b, h);
        if (s1 == l.b && s2 == l.a) return pair_mix(n, l.a, h, l.c, h);
        if (s1 == l.b && s2 == l.c) return pair_mix(n, l.b, h, l.c, h);
        if (s1 == l.c && s2 == l.a) return pair_mix(n, l.a, q, l.c, tq);
        return pair_mix(n, l.b, h, l.c, h);  // (c, b)
      });
}

Mechanism hat_mechanism(const std::string& a, const std::string& b,
                        const std::string& c) {
  OutcomeSpace outcomes({a, b, c});
  return hat_mechanism(outcomes, {0, 1, 2}, AgentSet({"i1", "i2"}));
}

Mechanism star_mechanism(const OutcomeSpace& outcomes, const StarLabels& l,
                         const AgentSet& agents, AgentId i1, AgentId i2) {
  check_distinct(l, outcomes.size());
  const std::size_t n = outcomes.size();
  auto strategies = two_player_strategies(agents, i1, i2, outcomes.labels());
  const Rational q(1, 4), h(1, 2), tq(3, 4);
  return Mechanism::build(
      outcomes, agents, std::move(strategies), [&](const Profile& p) {
        const OutcomeId s1 = p[i1];
        const OutcomeId s2 = p[i2];
        if (s1 == s2) return Lottery::degenerate(n, s1);
        if (s1 == l.a) {
          if (s2 == l.c) return pair_mix(n, l.a, tq, l.b, q);
          return pair_mix(n, l.a, h, s2, h);
        }
        if (s1 == l.b) {
          if (s2 == l.a) return pair_mix(n, l.a, tq, l.c, q);
          if (s2 == l.c) return make_lottery(n, {{l.a, h}, {l.b, q}, {l.c, q}});
          return pair_mix(n, l.b, h, s2, h);
        }
        return pair_mix(n, s1, h, s2, h);
      });
}

std::vector<CellDifference> compare_mechanisms(const Mechanism& left,
                                               const Mechanism& right) {
  if (left.agent_count() != right.agent_count() ||
      left.outcomes() != right.outcomes()) {
    throw Error(ErrorKind::kInvalidInput, "mechanisms are not comparable");
  }
  for (AgentId i = 0; i < left.agent_count(); ++i) {
    if (left.strategies(i) != right.strategies(i)) {
      throw Error(ErrorKind::kInvalidInput,
                  "strategy labels differ for agent " + std::to_string(i));
    }
  }
  std::vector<CellDifference> out;
  for (std::size_t c = 0; c < left.profile_count(); ++c) {
    if (left.cell(c) != right.cell(c)) {
      out.push_back({left.profile_at(c), left.cell(c), right.cell(c)});
    }
  }
  return out;
}

OutcomeId strict_top(const OrdinalState& theta, AgentId i) {
  const auto& t = theta.prefs.at(i).top();
  if (t.size() != 1) throw Error(ErrorKind::kNotStrict, "tie at the top");
  return t.front();
}

std::vector<OutcomeId> sigma(AgentId i, OutcomeId z,
                             const OrdinalState& theta_bar, OutcomeId f_bar) {
  const OutcomeId tau = strict_top(theta_bar, i);
  if (tau == f_bar) {
    throw Error(ErrorKind::kDictatorialCase,
                "f(theta_bar) is the top of agent " + std::to_string(i));
  }
  if (z != f_bar) return {z};
  return z < tau ? std::vector<OutcomeId>{z, tau}
                 : std::vector<OutcomeId>{tau, z};
}

namespace {

void check_nondictatorial(const OrdinalState& theta_bar, OutcomeId f_bar) {
  if (theta_bar.is_strict() && theta_bar.is_unanimous()) {
    throw Error(ErrorKind::kDictatorialCase,
                "theta_bar is a strict unanimity state");
  }
  for (AgentId i = 0; i < theta_bar.prefs.size(); ++i) {
    if (strict_top(theta_bar, i) == f_bar) {
      throw Error(ErrorKind::kDictatorialCase,
                  "f(theta_bar) is the top of agent " + std::to_string(i));
    }
  }
}

bool in_sigma_product(const std::vector<OutcomeId>& ann, OutcomeId z,
                      const OrdinalState& theta_bar, OutcomeId f_bar) {
  for (AgentId i = 0; i < ann.size(); ++i) {
    auto s = sigma(i, z, theta_bar, f_bar);
    if (std::find(s.begin(), s.end(), ann[i]) == s.end()) return false;
  }
  return true;
}

}  // namespace

Lottery gamma(const std::vector<OutcomeId>& announcements,
              const OrdinalState& theta_bar, OutcomeId f_bar) {
  check_nondictatorial(theta_bar, f_bar);
  if (announcements.size() != theta_bar.prefs.size()) {
    throw Error(ErrorKind::kInvalidInput, "one announcement per agent");
  }
  const std::size_t n = theta_bar.prefs.front().outcome_count();
  for (OutcomeId z = 0; z < n; ++z) {
    if (in_sigma_product(announcements, z, theta_bar, f_bar)) {
      return Lottery::degenerate(n, z);
    }
  }
  return Lottery::uniform(n);
}

bool sigma_products_disjoint(const OrdinalState& theta_bar, OutcomeId f_bar) {
  check_nondictatorial(theta_bar, f_bar);
  const std::size_t agents = theta_bar.prefs.size();
  const std::size_t n = theta_bar.prefs.front().outcome_count();
  // Enumerate every announcement profile and count matching outcomes.
  std::vector<OutcomeId> ann(agents, 0);
  while (true) {
    int hits = 0;
    for (OutcomeId z = 0; z < n; ++z) {
      if (in_sigma_product(ann, z, theta_bar, f_bar)) ++hits;
    }
    if (hits > 1) return false;
    std::size_t k = agents;
    while (true) {
      if (k == 0) return true;
      --k;
      if (++ann[k] < n) break;
      ann[k] = 0;
    }
  }
}

StrategyId encode_announcement(const AnnouncementStrategy& s,
                               std::size_t outcome_count, std::size_t cap) {
  return (s.z * cap + (s.n - 1)) * outcome_count + s.z_hat;
}

AnnouncementStrategy decode_announcement(StrategyId id,
                                         std::size_t outcome_count,
                                         std::size_t cap) {
  AnnouncementStrategy s;
  s.z_hat = id % outcome_count;
  id /= outcome_count;
  s.n = id % cap + 1;
  s.z = id / cap;
  return s;
}

Mechanism truncated_infinite_mechanism(const AgentSet& agents,
                                       const OutcomeSpace& outcomes,
                                       const OrdinalState& theta_bar,
                                       OutcomeId f_bar,
                                       const TruncationParams& params) {
  if (params.cap < 2) {
    throw Error(ErrorKind::kInvalidInput, "truncation cap must be at least 2");
  }
  check_nondictatorial(theta_bar, f_bar);
  if (!sigma_products_disjoint(theta_bar, f_bar)) {
    throw Error(ErrorKind::kInvalidInput,
                "sigma-products overlap; gamma is ill-defined");
  }
  const std::size_t nz = outcomes.size();
  const std::size_t cap = params.cap;
  std::vector<std::string> labels;
  for (StrategyId id = 0; id < nz * cap * nz; ++id) {
    auto s = decode_announcement(id, nz, cap);
    labels.push_back(outcomes.label(s.z) + ":" + std::to_string(s.n) + ":" +
                     outcomes.label(s.z_hat));
  }
  const Lottery unif = Lottery::uniform(nz);
  const Rational agent_weight(1, static_cast<std::int64_t>(agents.size()));
  std::vector<std::vector<std::string>> strategies(agents.size(), labels);
  return Mechanism::build(
      outcomes, agents, std::move(strategies), [&](const Profile& p) {
        std::vector<AnnouncementStrategy> s;
        std::vector<OutcomeId> ann;
        bool all_one = true;
        for (StrategyId id : p) {
          s.push_back(decode_announcement(id, nz, cap));
          ann.push_back(s.back().z);
          all_one = all_one && s.back().n == 1;
        }
        const Lottery g = gamma(ann, theta_bar, f_bar);
        if (all_one) return g;
        std::vector<Rational> coeffs;
        std::vector<Lottery> parts;
        for (const auto& si : s) {
          const auto n = static_cast<std::int64_t>(si.n);
          coeffs.push_back(agent_weight * Rational(1, 2 * n));
          parts.push_back(g);
          coeffs.push_back(agent_weight * Rational(1, 2 * n));
          parts.push_back(unif);
          coeffs.push_back(agent_weight * Rational(n - 1, n));
          parts.push_back(Lottery::degenerate(nz, si.z_hat));
        }
        return mix(coeffs, parts);
      });
}

std::size_t n_threshold(const Utility& u_i, const Preference& pref_i) {
  if (!pref_i.is_strict()) {
    throw Error(ErrorKind::kNotStrict, "threshold needs a strict preference");
  }
  if (!represents(u_i, pref_i)) {
    throw Error(ErrorKind::kInvalidInput,
                "utility does not represent the preference");
  }
  const std::size_t nz = u_i.size();
  const OutcomeId tau = pref_i.top().front();
  const Rational top = u_i[tau];
  Rational rival = expected_utility(u_i, Lottery::uniform(nz));
  Rational worst = top;
  for (OutcomeId z = 0; z < nz; ++z) {
    worst = std::min(worst, u_i[z]);
    if (z != tau) rival = std::max(rival, u_i[z]);
  }
  for (std::int64_t n = 1;; ++n) {
    Rational lhs = Rational(1, n) * worst + Rational(n - 1, n) * top;
    if (lhs > rival) return static_cast<std::size_t>(n);
  }
}

}  // namespace domlab
