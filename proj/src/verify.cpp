#include "domlab/verify.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <stdexcept>

#include "domlab/dominance.hpp"

namespace domlab {
namespace {

void check_compatible(const Mechanism& m, const ImplementationProblem& p) {
  if (m.outcomes() != p.outcomes) {
    throw Error(ErrorKind::kInvalidInput,
                "mechanism and problem use different outcome spaces");
  }
  if (m.agents() != p.agents) {
    throw Error(ErrorKind::kInvalidInput,
                "mechanism and problem use different agents");
  }
  p.validate();
}

void require_surjective(const ImplementationProblem& p) {
  if (!is_surjective(p.scf, p.outcomes.size())) {
    throw Error(ErrorKind::kInvalidInput, "f is not surjective");
  }
}

bool product_maps_to_z(const Mechanism& m, const StrategySets& sz,
                       OutcomeId z) {
  Restriction r;
  for (AgentId i = 0; i < m.agent_count(); ++i) {
    if (sz[i][z].empty()) return true;
    r.sets.push_back(sz[i][z]);
  }
  return maps_to(m, r, z);
}

Status combine(const std::vector<StateReport>& states) {
  bool any_inconclusive = false;
  for (const auto& s : states) {
    if (s.verdict.status == Status::kRefuted) return Status::kRefuted;
    if (s.verdict.status == Status::kInconclusive) any_inconclusive = true;
  }
  return any_inconclusive ? Status::kInconclusive : Status::kVerified;
}

std::size_t restriction_size(const Restriction& r) {
  std::size_t n = 0;
  for (const auto& s : r.sets) n += s.size();
  return n;
}

std::size_t strategy_total(const Mechanism& m) {
  std::size_t n = 0;
  for (AgentId i = 0; i < m.agent_count(); ++i) n += m.strategy_count(i);
  return n;
}

Witness make_witness(const Mechanism& m, const OrdinalState& theta,
                     CardinalState u, Profile profile) {
  Lottery y = m.outcome(profile);
  return {theta, std::move(u), std::move(profile), std::move(y)};
}

// Sets a refuted verdict after mandatory replay.
void refute(StateReport& s, const Mechanism& m, Notion notion, Witness w) {
  if (!replay_witness(m, notion, w, s.target)) {
    throw std::logic_error("refutation witness failed to replay");
  }
  s.verdict.status = Status::kRefuted;
  s.verdict.witness = std::move(w);
}

// Explicit representations, exact for both notions.
void verify_explicit(const Mechanism& m, Notion notion,
                     const std::vector<CardinalState>& reps, StateReport& s) {
  s.verdict.status = Status::kVerified;
  for (const auto& u : reps) {
    auto trace = udinf_at(m, u);
    const Restriction& r =
        notion == Notion::kUD ? trace.survivors_at(1) : trace.fixed_point();
    Profile bad;
    const bool ok = maps_to(m, r, s.target, &bad);
    s.cardinal_traces.push_back(std::move(trace));
    if (!ok) {
      refute(s, m, notion, make_witness(m, s.state, u, bad));
      return;
    }
  }
}

// Seeks a representation whose surviving set leaves the target.
bool sample_refutation(const Mechanism& m, Notion notion, std::size_t index,
                       const VerifyOptions& opt, StateReport& s) {
  std::vector<CardinalState> candidates{canonical_cardinal(s.state)};
  for (std::size_t t = 0; t < opt.samples; ++t) {
    candidates.push_back(
        sample_cardinal(s.state, derive_seed(opt.seed, index, t)));
  }
  for (auto& u : candidates) {
    ++s.samples_tried;
    const Restriction r = notion == Notion::kUD
                              ? ud1_at(m, u)
                              : udinf_at(m, u).fixed_point();
    Profile bad;
    if (!maps_to(m, r, s.target, &bad)) {
      refute(s, m, notion, make_witness(m, s.state, std::move(u), bad));
      return true;
    }
  }
  return false;
}

void post_certification(const Mechanism& m, const ImplementationProblem& p,
                        VerificationReport& rep) {
  if (rep.status != Status::kVerified) return;
  auto& d = rep.diagnostics;
  if (is_surjective(p.scf, p.outcomes.size())) {
    const auto sz = s_z_sets(m);
    bool ok = true;
    for (OutcomeId z = 0; z < p.outcomes.size(); ++z) {
      ok = ok && product_maps_to_z(m, sz, z);
    }
    d.product_check = ok;
    if (!ok) d.notes.push_back("product of S_i^z does not map onto {z}");
  }
  if (rep.notion == Notion::kUD && is_qualifying(p)) {
    d.dictatorship_check = find_dictator(p).has_value();
    if (!*d.dictatorship_check) {
      d.notes.push_back("certified qualifying UD instance without a dictator");
    }
  }
}

}  // namespace

const char* notion_name(Notion n) { return n == Notion::kUD ? "UD" : "UDINF"; }

Notion parse_notion(std::string_view text) {
  std::string t(text);
  for (auto& c : t) c = static_cast<char>(std::tolower(c));
  if (t == "ud") return Notion::kUD;
  if (t == "udinf" || t == "ud_inf" || t == "udinfinity") return Notion::kUDInf;
  throw Error(ErrorKind::kInvalidInput, "unknown notion '" + t + "'");
}

StrategySets s_z_sets(const Mechanism& m) {
  const std::size_t nz = m.outcomes().size();
  StrategySets out(m.agent_count(),
                   std::vector<std::vector<StrategyId>>(nz));
  for (std::size_t c = 0; c < m.profile_count(); ++c) {
    auto z = m.cell(c).degenerate_outcome();
    if (!z) continue;
    const Profile p = m.profile_at(c);
    for (AgentId i = 0; i < m.agent_count(); ++i) out[i][*z].push_back(p[i]);
  }
  for (auto& per_agent : out) {
    for (auto& set : per_agent) {
      std::sort(set.begin(), set.end());
      set.erase(std::unique(set.begin(), set.end()), set.end());
    }
  }
  return out;
}

std::vector<bool> check_lemma1(const Mechanism& m,
                               const ImplementationProblem& problem) {
  check_compatible(m, problem);
  require_surjective(problem);
  const auto sz = s_z_sets(m);
  std::vector<bool> out;
  for (OutcomeId z = 0; z < problem.outcomes.size(); ++z) {
    for (AgentId i = 0; i < m.agent_count(); ++i) {
      if (sz[i][z].empty()) {
        throw Error(ErrorKind::kEmptyWitness,
                    "S_" + m.agents().label(i) + "^" +
                        problem.outcomes.label(z) + " is empty");
      }
    }
    out.push_back(product_maps_to_z(m, sz, z));
  }
  return out;
}

std::vector<NestingViolation> check_lemma2(const Mechanism& m) {
  const auto sz = s_z_sets(m);
  const std::size_t nz = m.outcomes().size();
  std::vector<NestingViolation> out;
  for (AgentId i = 0; i < m.agent_count(); ++i) {
    for (OutcomeId z = 0; z < nz; ++z) {
      for (OutcomeId z2 = 0; z2 < nz; ++z2) {
        if (z == z2) continue;
        const auto& a = sz[i][z];
        const auto& b = sz[i][z2];
        if (!std::includes(b.begin(), b.end(), a.begin(), a.end())) continue;
        const bool everything = a == b && a.size() == m.strategy_count(i);
        if (!everything) out.push_back({i, z, z2});
      }
    }
  }
  return out;
}

bool check_lemma4(const Mechanism& m, const ImplementationProblem& problem,
                  AgentId i) {
  if (problem.outcomes.size() != 2) {
    throw Error(ErrorKind::kWrongArity, "the intersection check needs |Z| = 2");
  }
  check_compatible(m, problem);
  require_surjective(problem);
  if (i >= m.agent_count()) {
    throw Error(ErrorKind::kUnknownAgent, "agent out of range");
  }
  const auto sz = s_z_sets(m);
  std::vector<StrategyId> both;
  std::set_intersection(sz[i][0].begin(), sz[i][0].end(), sz[i][1].begin(),
                        sz[i][1].end(), std::back_inserter(both));
  return !both.empty();
}

bool is_dictator(const ImplementationProblem& problem, AgentId i) {
  const auto& dom = problem.scf.domain;
  for (std::size_t k = 0; k < dom.size(); ++k) {
    const auto& t = dom[k].prefs.at(i).top();
    if (t.size() != 1 || t.front() != problem.scf.choice[k]) return false;
  }
  return true;
}

std::optional<AgentId> find_dictator(const ImplementationProblem& problem) {
  for (AgentId i = 0; i < problem.agents.size(); ++i) {
    if (is_dictator(problem, i)) return i;
  }
  return std::nullopt;
}

bool is_surjective(const Scf& scf, std::size_t outcome_count) {
  std::vector<bool> hit(outcome_count, false);
  for (OutcomeId z : scf.choice) hit.at(z) = true;
  return std::all_of(hit.begin(), hit.end(), [](bool b) { return b; });
}

bool is_qualifying(const ImplementationProblem& problem) {
  if (!is_surjective(problem.scf, problem.outcomes.size())) return false;
  const auto& dom = problem.scf.domain;
  for (const auto& t : dom) {
    if (!t.is_strict()) return false;
  }
  for (const auto& u : unanimity_strict_states(problem.agents.size(),
                                               problem.outcomes.size())) {
    if (std::find(dom.begin(), dom.end(), u) == dom.end()) return false;
  }
  return true;
}

bool maps_to(const Mechanism& m, const Restriction& r, OutcomeId target,
             Profile* bad) {
  // With bad requested, report the profile placing least mass on the target
  // (first in canonical order on ties).
  bool ok = true;
  Rational least(2);
  r.for_each_profile([&](const Profile& p) {
    if (!ok && (!bad || least.is_zero())) return;
    const Lottery& y = m.outcome(p);
    if (y.is_degenerate_on(target)) return;
    ok = false;
    if (bad && y.mass(target) < least) {
      least = y.mass(target);
      *bad = p;
    }
  });
  return ok;
}

bool replay_witness(const Mechanism& m, Notion notion, const Witness& w,
                    OutcomeId target) {
  if (!represents(w.cardinal, w.state)) return false;
  const Restriction r = notion == Notion::kUD
                            ? ud1_at(m, w.cardinal)
                            : udinf_at(m, w.cardinal).fixed_point();
  for (AgentId i = 0; i < m.agent_count(); ++i) {
    if (!r.contains(i, w.profile.at(i))) return false;
  }
  return m.outcome(w.profile) == w.lottery &&
         !w.lottery.is_degenerate_on(target);
}

VerificationReport verify_ud(const Mechanism& m,
                             const ImplementationProblem& problem,
                             const VerifyOptions& opt) {
  check_compatible(m, problem);
  VerificationReport rep;
  rep.notion = Notion::kUD;
  rep.all_representations = problem.omega.all_representations;
  // possibly_undominated depends only on (agent, preference).
  std::map<std::pair<AgentId, Preference>, PossiblyUndominated> cache;

  for (std::size_t k = 0; k < problem.theta().size(); ++k) {
    StateReport s;
    s.state = problem.theta()[k];
    s.target = problem.scf.choice[k];
    if (!rep.all_representations) {
      verify_explicit(m, Notion::kUD, problem.omega.explicit_states[k], s);
      rep.states.push_back(std::move(s));
      continue;
    }
    try {
      Restriction possible;
      std::vector<const PossiblyUndominated*> per_agent;
      for (AgentId i = 0; i < m.agent_count(); ++i) {
        const Preference& pref = s.state.prefs[i];
        auto it = cache.find({i, pref});
        if (it == cache.end()) {
          auto pu = possibly_undominated(m, Restriction::full(m), i, pref,
                                         opt.caps, derive_seed(opt.seed, i),
                                         opt.samples);
          it = cache.emplace(std::make_pair(i, pref), std::move(pu)).first;
        }
        per_agent.push_back(&it->second);
        possible.sets.push_back(it->second.strategies);
        s.exact = s.exact && it->second.exact;
      }
      if (opt.diagnostics) {
        auto robust = robust_udinf(m, s.state);
        rep.diagnostics.robust_deletions +=
            strategy_total(m) - restriction_size(robust.survivors_at(1));
        rep.diagnostics.exact_deletions +=
            strategy_total(m) - restriction_size(possible);
        robust.rounds.resize(1);
        s.robust_trace = std::move(robust);
      }
      s.possible = possible;
      const bool nonempty = std::all_of(
          possible.sets.begin(), possible.sets.end(),
          [](const auto& set) { return !set.empty(); });
      Profile bad;
      if (nonempty && !maps_to(m, possible, s.target, &bad)) {
        // Per-agent witnesses combine: UD_i depends on u_i alone.
        CardinalState u;
        for (AgentId i = 0; i < m.agent_count(); ++i) {
          const auto& pu = *per_agent[i];
          auto pos = std::find(pu.strategies.begin(), pu.strategies.end(),
                               bad[i]) -
                     pu.strategies.begin();
          u.utils.push_back(pu.witnesses[pos]);
        }
        refute(s, m, Notion::kUD, make_witness(m, s.state, u, bad));
      } else if (s.exact) {
        s.verdict.status = Status::kVerified;
      } else if (!sample_refutation(m, Notion::kUD, k, opt, s)) {
        s.verdict.status = Status::kInconclusive;
      }
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kTimeout) throw;
      s.exact = false;
      rep.diagnostics.notes.push_back(s.state.format(m.agents(), m.outcomes()) +
                                      ": " + e.what());
      if (!sample_refutation(m, Notion::kUD, k, opt, s)) {
        s.verdict.status = Status::kInconclusive;
      }
    }
    rep.states.push_back(std::move(s));
  }
  rep.status = combine(rep.states);
  if (opt.diagnostics) post_certification(m, problem, rep);
  return rep;
}

VerificationReport verify_udinf(const Mechanism& m,
                                const ImplementationProblem& problem,
                                const VerifyOptions& opt) {
  check_compatible(m, problem);
  VerificationReport rep;
  rep.notion = Notion::kUDInf;
  rep.all_representations = problem.omega.all_representations;
  for (std::size_t k = 0; k < problem.theta().size(); ++k) {
    StateReport s;
    s.state = problem.theta()[k];
    s.target = problem.scf.choice[k];
    if (!rep.all_representations) {
      verify_explicit(m, Notion::kUDInf, problem.omega.explicit_states[k], s);
      rep.states.push_back(std::move(s));
      continue;
    }
    auto robust = robust_udinf(m, s.state);
    rep.diagnostics.robust_deletions +=
        strategy_total(m) - restriction_size(robust.survivors_at(1));
    rep.diagnostics.exact_deletions +=
        strategy_total(m) - restriction_size(robust.fixed_point());
    const bool certified = maps_to(m, robust.fixed_point(), s.target);
    s.robust_trace = std::move(robust);
    if (certified) {
      s.verdict.status = Status::kVerified;
    } else {
      s.exact = false;
      if (!sample_refutation(m, Notion::kUDInf, k, opt, s)) {
        s.verdict.status = Status::kInconclusive;
      }
    }
    rep.states.push_back(std::move(s));
  }
  rep.status = combine(rep.states);
  if (opt.diagnostics) post_certification(m, problem, rep);
  return rep;
}

VerificationReport verify(const Mechanism& m,
                          const ImplementationProblem& problem, Notion notion,
                          const VerifyOptions& options) {
  return notion == Notion::kUD ? verify_ud(m, problem, options)
                               : verify_udinf(m, problem, options);
}

}  // namespace domlab
