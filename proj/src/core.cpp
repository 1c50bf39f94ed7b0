#include "domlab/core.hpp"

#include <algorithm>
#include <set>

namespace domlab {

const char* error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kNonUnitMass: return "NonUnitMass";
    case ErrorKind::kUnknownOutcome: return "UnknownOutcome";
    case ErrorKind::kUnknownAgent: return "UnknownAgent";
    case ErrorKind::kUnknownStrategy: return "UnknownStrategy";
    case ErrorKind::kInvalidInput: return "InvalidInput";
    case ErrorKind::kSizeLimit: return "SizeLimit";
    case ErrorKind::kNotStrict: return "NotStrict";
    case ErrorKind::kDomainViolation: return "DomainViolation";
    case ErrorKind::kScfPartial: return "ScfPartial";
    case ErrorKind::kTimeout: return "Timeout";
    case ErrorKind::kDictatorialCase: return "DictatorialCase";
    case ErrorKind::kLabelClash: return "LabelClash";
    case ErrorKind::kEmptyWitness: return "EmptyWitness";
    case ErrorKind::kWrongArity: return "WrongArity";
    case ErrorKind::kParse: return "ParseError";
  }
  return "Error";
}

const char* status_name(Status s) {
  switch (s) {
    case Status::kVerified: return "verified";
    case Status::kRefuted: return "refuted";
    case Status::kInconclusive: return "inconclusive";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Label sets

std::optional<std::size_t> LabelSet::find(std::string_view label) const {
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] == label) return i;
  }
  return std::nullopt;
}

void LabelSet::validate(const std::vector<std::string>& labels,
                        const char* what) {
  if (labels.size() < 2) {
    throw Error(ErrorKind::kInvalidInput,
                std::string("need at least two ") + what);
  }
  std::set<std::string> seen;
  for (const auto& l : labels) {
    if (l.empty()) {
      throw Error(ErrorKind::kInvalidInput, std::string("empty ") + what);
    }
    if (!seen.insert(l).second) {
      throw Error(ErrorKind::kInvalidInput,
                  std::string("duplicate ") + what + " '" + l + "'");
    }
  }
}

OutcomeSpace::OutcomeSpace(std::vector<std::string> labels)
    : LabelSet(std::move(labels)) {
  validate(labels_, "outcome labels");
}

OutcomeId OutcomeSpace::index(std::string_view label) const {
  if (auto i = find(label)) return *i;
  throw Error(ErrorKind::kUnknownOutcome,
              "unknown outcome '" + std::string(label) + "'");
}

AgentSet::AgentSet(std::vector<std::string> labels)
    : LabelSet(std::move(labels)) {
  validate(labels_, "agent identifiers");
}

AgentId AgentSet::index(std::string_view label) const {
  if (auto i = find(label)) return *i;
  throw Error(ErrorKind::kUnknownAgent,
              "unknown agent '" + std::string(label) + "'");
}

// ---------------------------------------------------------------------------
// Lotteries

Lottery Lottery::degenerate(std::size_t outcome_count, OutcomeId z) {
  std::vector<Rational> m(outcome_count);
  m.at(z) = 1;
  return Lottery(std::move(m));
}

Lottery Lottery::uniform(std::size_t outcome_count) {
  return Lottery(std::vector<Rational>(
      outcome_count, Rational(1, static_cast<std::int64_t>(outcome_count))));
}

Lottery Lottery::from_masses(std::vector<Rational> masses) {
  Rational total;
  for (const auto& m : masses) {
    if (m.is_negative()) {
      throw Error(ErrorKind::kInvalidInput, "negative probability " + m.str());
    }
    total += m;
  }
  if (total != Rational(1)) {
    throw Error(ErrorKind::kNonUnitMass, "masses sum to " + total.str());
  }
  return Lottery(std::move(masses));
}

std::optional<OutcomeId> Lottery::degenerate_outcome() const {
  for (OutcomeId z = 0; z < mass_.size(); ++z) {
    if (mass_[z] == Rational(1)) return z;
  }
  return std::nullopt;
}

bool Lottery::is_degenerate_on(OutcomeId z) const {
  return z < mass_.size() && mass_[z] == Rational(1);
}

Lottery make_lottery(const OutcomeSpace& space,
                     const std::vector<std::pair<std::string, Rational>>& pairs) {
  std::vector<std::pair<OutcomeId, Rational>> indexed;
  indexed.reserve(pairs.size());
  for (const auto& [label, p] : pairs) indexed.emplace_back(space.index(label), p);
  return make_lottery(space.size(), indexed);
}

Lottery make_lottery(std::size_t outcome_count,
                     const std::vector<std::pair<OutcomeId, Rational>>& pairs) {
  std::vector<Rational> m(outcome_count);
  for (const auto& [z, p] : pairs) {
    if (z >= outcome_count) {
      throw Error(ErrorKind::kUnknownOutcome,
                  "outcome index " + std::to_string(z) + " out of range");
    }
    m[z] += p;
  }
  return Lottery::from_masses(std::move(m));
}

Lottery mix(std::span<const Rational> coeffs,
            std::span<const Lottery> lotteries) {
  if (coeffs.size() != lotteries.size() || coeffs.empty()) {
    throw Error(ErrorKind::kInvalidInput,
                "mix needs one coefficient per lottery");
  }
  const std::size_t n = lotteries.front().size();
  std::vector<Rational> m(n);
  Rational total;
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    if (coeffs[k].is_negative()) {
      throw Error(ErrorKind::kInvalidInput, "negative mixing weight");
    }
    if (lotteries[k].size() != n) {
      throw Error(ErrorKind::kInvalidInput, "lotteries over different spaces");
    }
    total += coeffs[k];
    if (coeffs[k].is_zero()) continue;
    for (OutcomeId z = 0; z < n; ++z) m[z] += coeffs[k] * lotteries[k].mass(z);
  }
  if (total != Rational(1)) {
    throw Error(ErrorKind::kNonUnitMass,
                "mixing weights sum to " + total.str());
  }
  return Lottery::from_masses(std::move(m));
}

bool lottery_equal(const Lottery& x, const Lottery& y) { return x == y; }

std::string format_lottery(const Lottery& y, const OutcomeSpace& space) {
  if (auto z = y.degenerate_outcome()) return space.label(*z);
  std::string out;
  for (OutcomeId z = 0; z < y.size(); ++z) {
    const Rational& p = y.mass(z);
    if (p.is_zero()) continue;
    if (!out.empty()) out += "+";
    out += p.str() + space.label(z);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Preferences and states

Preference::Preference(std::vector<std::vector<OutcomeId>> classes,
                       std::size_t outcome_count)
    : classes_(std::move(classes)), rank_(outcome_count, outcome_count) {
  for (std::size_t c = 0; c < classes_.size(); ++c) {
    if (classes_[c].empty()) {
      throw Error(ErrorKind::kInvalidInput, "empty indifference class");
    }
    for (OutcomeId z : classes_[c]) {
      if (z >= outcome_count || rank_[z] != outcome_count) {
        throw Error(ErrorKind::kInvalidInput,
                    "indifference classes do not partition the outcomes");
      }
      rank_[z] = c;
    }
    std::sort(classes_[c].begin(), classes_[c].end());
  }
  for (std::size_t r : rank_) {
    if (r == outcome_count) {
      throw Error(ErrorKind::kInvalidInput,
                  "preference leaves an outcome unranked");
    }
  }
}

Preference Preference::strict(const std::vector<OutcomeId>& order) {
  std::vector<std::vector<OutcomeId>> classes;
  classes.reserve(order.size());
  for (OutcomeId z : order) classes.push_back({z});
  return Preference(std::move(classes), order.size());
}

std::vector<OutcomeId> Preference::order() const {
  std::vector<OutcomeId> out;
  out.reserve(rank_.size());
  for (const auto& c : classes_) out.insert(out.end(), c.begin(), c.end());
  return out;
}

std::string Preference::format(const OutcomeSpace& space) const {
  std::string out;
  for (std::size_t c = 0; c < classes_.size(); ++c) {
    if (c > 0) out += ">";
    for (std::size_t k = 0; k < classes_[c].size(); ++k) {
      if (k > 0) out += "=";
      out += space.label(classes_[c][k]);
    }
  }
  return out;
}

bool OrdinalState::is_strict() const {
  return std::all_of(prefs.begin(), prefs.end(),
                     [](const Preference& p) { return p.is_strict(); });
}

bool OrdinalState::is_unanimous() const {
  return std::all_of(prefs.begin(), prefs.end(),
                     [&](const Preference& p) { return p == prefs.front(); });
}

std::string OrdinalState::format(const AgentSet& agents,
                                 const OutcomeSpace& space) const {
  std::string out;
  for (AgentId i = 0; i < prefs.size(); ++i) {
    if (i > 0) out += ";";
    out += agents.label(i) + ":" + prefs[i].format(space);
  }
  return out;
}

bool represents(const Utility& u, const Preference& pref) {
  if (u.size() != pref.outcome_count()) return false;
  for (OutcomeId z = 0; z < u.size(); ++z) {
    for (OutcomeId w = 0; w < u.size(); ++w) {
      if ((u[z] >= u[w]) != pref.weakly_prefers(z, w)) return false;
    }
  }
  return true;
}

bool represents(const CardinalState& u, const OrdinalState& theta) {
  if (u.utils.size() != theta.prefs.size()) return false;
  for (AgentId i = 0; i < u.utils.size(); ++i) {
    if (!represents(u.utils[i], theta.prefs[i])) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Mechanisms

Mechanism::Mechanism(OutcomeSpace outcomes, AgentSet agents,
                     std::vector<std::vector<std::string>> strategies,
                     std::vector<Lottery> cells)
    : outcomes_(std::move(outcomes)),
      agents_(std::move(agents)),
      strategies_(std::move(strategies)),
      cells_(std::move(cells)) {
  if (strategies_.size() != agents_.size()) {
    throw Error(ErrorKind::kInvalidInput,
                "need one strategy list per agent");
  }
  strides_.assign(agents_.size(), 1);
  std::size_t total = 1;
  for (std::size_t k = agents_.size(); k-- > 0;) {
    const auto& list = strategies_[k];
    if (list.empty()) {
      throw Error(ErrorKind::kInvalidInput,
                  "agent '" + agents_.label(k) + "' has no strategies");
    }
    std::set<std::string> seen(list.begin(), list.end());
    if (seen.size() != list.size()) {
      throw Error(ErrorKind::kInvalidInput,
                  "duplicate strategy label for agent '" + agents_.label(k) +
                      "'");
    }
    strides_[k] = total;
    total *= list.size();
  }
  if (cells_.size() != total) {
    throw Error(ErrorKind::kInvalidInput,
                "outcome map is not total: expected " + std::to_string(total) +
                    " cells, got " + std::to_string(cells_.size()));
  }
  for (const auto& y : cells_) {
    if (y.size() != outcomes_.size()) {
      throw Error(ErrorKind::kInvalidInput,
                  "cell lottery over a different outcome space");
    }
  }
}

Mechanism Mechanism::build(OutcomeSpace outcomes, AgentSet agents,
                           std::vector<std::vector<std::string>> strategies,
                           const OutcomeFn& g) {
  std::size_t total = 1;
  for (const auto& list : strategies) total *= list.size();
  std::vector<Lottery> cells;
  cells.reserve(total);
  Profile p(strategies.size(), 0);
  for (std::size_t c = 0; c < total; ++c) {
    cells.push_back(g(p));
    for (std::size_t k = p.size(); k-- > 0;) {
      if (++p[k] < strategies[k].size()) break;
      p[k] = 0;
    }
  }
  return Mechanism(std::move(outcomes), std::move(agents),
                   std::move(strategies), std::move(cells));
}

StrategyId Mechanism::strategy_index(AgentId i, std::string_view label) const {
  const auto& list = strategies_.at(i);
  for (StrategyId s = 0; s < list.size(); ++s) {
    if (list[s] == label) return s;
  }
  throw Error(ErrorKind::kUnknownStrategy,
              "agent '" + agents_.label(i) + "' has no strategy '" +
                  std::string(label) + "'");
}

std::size_t Mechanism::cell_index(std::span<const StrategyId> profile) const {
  std::size_t idx = 0;
  for (std::size_t k = 0; k < profile.size(); ++k) {
    idx += profile[k] * strides_[k];
  }
  return idx;
}

Profile Mechanism::profile_at(std::size_t cell) const {
  Profile p(agents_.size());
  for (std::size_t k = 0; k < p.size(); ++k) {
    p[k] = cell / strides_[k];
    cell %= strides_[k];
  }
  return p;
}

bool Mechanism::is_deterministic() const {
  return std::all_of(cells_.begin(), cells_.end(), [](const Lottery& y) {
    return y.degenerate_outcome().has_value();
  });
}

// ---------------------------------------------------------------------------
// SCFs and problems

std::optional<OutcomeId> Scf::at(const OrdinalState& theta) const {
  for (std::size_t k = 0; k < domain.size(); ++k) {
    if (domain[k] == theta) return choice[k];
  }
  return std::nullopt;
}

void ImplementationProblem::validate() const {
  if (scf.domain.empty()) {
    throw Error(ErrorKind::kInvalidInput, "empty ordinal domain");
  }
  if (scf.choice.size() != scf.domain.size()) {
    throw Error(ErrorKind::kScfPartial, "social choice function not total");
  }
  std::set<OrdinalState> seen;
  for (std::size_t k = 0; k < scf.domain.size(); ++k) {
    const auto& theta = scf.domain[k];
    if (theta.prefs.size() != agents.size()) {
      throw Error(ErrorKind::kInvalidInput,
                  "ordinal state with wrong number of agents");
    }
    for (const auto& p : theta.prefs) {
      if (p.outcome_count() != outcomes.size()) {
        throw Error(ErrorKind::kInvalidInput,
                    "preference over a different outcome space");
      }
    }
    if (!seen.insert(theta).second) {
      throw Error(ErrorKind::kInvalidInput,
                  "duplicate ordinal state " + theta.format(agents, outcomes));
    }
    if (scf.choice[k] >= outcomes.size()) {
      throw Error(ErrorKind::kUnknownOutcome, "scf value out of range");
    }
  }
  if (!omega.all_representations) {
    if (omega.explicit_states.size() != scf.domain.size()) {
      throw Error(ErrorKind::kInvalidInput,
                  "explicit omega needs one list per ordinal state");
    }
    for (std::size_t k = 0; k < scf.domain.size(); ++k) {
      if (omega.explicit_states[k].empty()) {
        throw Error(ErrorKind::kInvalidInput,
                    "empty omega at " +
                        scf.domain[k].format(agents, outcomes));
      }
      for (const auto& u : omega.explicit_states[k]) {
        if (!represents(u, scf.domain[k])) {
          throw Error(ErrorKind::kInvalidInput,
                      "cardinal state does not represent " +
                          scf.domain[k].format(agents, outcomes));
        }
      }
    }
  }
}

// ---------------------------------------------------------------------------
// Restrictions and traces

Restriction Restriction::full(const Mechanism& m) {
  Restriction r;
  r.sets.resize(m.agent_count());
  for (AgentId i = 0; i < m.agent_count(); ++i) {
    r.sets[i].resize(m.strategy_count(i));
    for (StrategyId s = 0; s < r.sets[i].size(); ++s) r.sets[i][s] = s;
  }
  return r;
}

bool Restriction::contains(AgentId i, StrategyId s) const {
  return std::binary_search(sets.at(i).begin(), sets.at(i).end(), s);
}

bool Restriction::subset_of(const Restriction& other) const {
  if (sets.size() != other.sets.size()) return false;
  for (AgentId i = 0; i < sets.size(); ++i) {
    if (!std::includes(other.sets[i].begin(), other.sets[i].end(),
                       sets[i].begin(), sets[i].end())) {
      return false;
    }
  }
  return true;
}

std::size_t Restriction::profile_count() const {
  std::size_t n = 1;
  for (const auto& s : sets) n *= s.size();
  return n;
}

void Restriction::for_each_profile(
    const std::function<void(const Profile&)>& fn) const {
  for (const auto& s : sets) {
    if (s.empty()) return;
  }
  std::vector<std::size_t> pos(sets.size(), 0);
  Profile p(sets.size());
  while (true) {
    for (std::size_t k = 0; k < sets.size(); ++k) p[k] = sets[k][pos[k]];
    fn(p);
    std::size_t k = sets.size();
    while (true) {
      if (k == 0) return;
      --k;
      if (++pos[k] < sets[k].size()) break;
      pos[k] = 0;
    }
  }
}

const Restriction& DeletionTrace::survivors_at(std::size_t k) const {
  if (k == 0) throw Error(ErrorKind::kInvalidInput, "rounds start at 1");
  if (k > rounds.size()) return rounds.back().survivors;
  return rounds[k - 1].survivors;
}

std::size_t DeletionTrace::active_rounds() const {
  std::size_t n = 0;
  for (const auto& r : rounds) {
    if (!r.deletions.empty()) ++n;
  }
  return n;
}

}  // namespace domlab
