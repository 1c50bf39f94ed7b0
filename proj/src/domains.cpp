#include "domlab/domains.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <numeric>
#include <random>
#include <set>
#include <string>

namespace domlab {
namespace {

std::uint64_t factorial_capped(std::size_t n) {
  std::uint64_t f = 1;
  for (std::size_t k = 2; k <= n; ++k) f *= k;
  return f;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  return s;
}

// Splits on sep, recording the 0-based start offset of each piece.
std::vector<std::pair<std::string_view, int>> split(std::string_view s,
                                                    char sep) {
  std::vector<std::pair<std::string_view, int>> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.emplace_back(s.substr(start), static_cast<int>(start));
      return out;
    }
    out.emplace_back(s.substr(start, pos - start), static_cast<int>(start));
    start = pos + 1;
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Caps

void Caps::apply(std::string_view text) {
  for (auto [item, off] : split(text, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    auto eq = item.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorKind::kInvalidInput,
                  "caps entry '" + std::string(item) + "' lacks '='");
    }
    std::string key(trim(item.substr(0, eq)));
    std::string_view val = trim(item.substr(eq + 1));
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(val.data(), val.data() + val.size(), v);
    if (ec != std::errc() || ptr != val.data() + val.size()) {
      throw Error(ErrorKind::kInvalidInput,
                  "caps value for '" + key + "' is not an integer");
    }
    if (key == "outcomes") max_outcomes = v;
    else if (key == "agents") max_agents = v;
    else if (key == "choices") max_choice_functions = v;
    else if (key == "scfs") max_scfs = v;
    else if (key == "mechanisms") max_mechanisms = v;
    else if (key == "lp_rows") max_lp_rows = v;
    else if (key == "lp_vars") max_lp_variables = v;
    else throw Error(ErrorKind::kInvalidInput, "unknown caps key '" + key + "'");
  }
}

Caps Caps::from_env() {
  Caps caps;
  if (const char* env = std::getenv("DOMLAB_CAPS")) caps.apply(env);
  return caps;
}

const Caps& default_caps() {
  static const Caps caps = Caps::from_env();
  return caps;
}

// ---------------------------------------------------------------------------
// Enumeration

std::vector<Preference> enumerate_strict_preferences(std::size_t outcome_count,
                                                     const Caps& caps) {
  if (outcome_count > caps.max_outcomes) {
    throw Error(ErrorKind::kSizeLimit,
                std::to_string(outcome_count) + "! strict orders exceed the " +
                    std::to_string(caps.max_outcomes) + "-outcome cap");
  }
  std::vector<OutcomeId> order(outcome_count);
  std::iota(order.begin(), order.end(), OutcomeId{0});
  std::vector<Preference> out;
  out.reserve(factorial_capped(outcome_count));
  do {
    out.push_back(Preference::strict(order));
  } while (std::next_permutation(order.begin(), order.end()));
  return out;
}

std::vector<OrdinalState> unanimity_strict_states(std::size_t agent_count,
                                                  std::size_t outcome_count,
                                                  const Caps& caps) {
  if (agent_count > caps.max_agents) {
    throw Error(ErrorKind::kSizeLimit, "agent count exceeds cap");
  }
  std::vector<OrdinalState> out;
  for (auto& p : enumerate_strict_preferences(outcome_count, caps)) {
    out.push_back(OrdinalState{std::vector<Preference>(agent_count, p)});
  }
  return out;
}

std::vector<OrdinalState> strict_states(std::size_t agent_count,
                                        std::size_t outcome_count,
                                        const Caps& caps) {
  if (agent_count > caps.max_agents) {
    throw Error(ErrorKind::kSizeLimit, "agent count exceeds cap");
  }
  auto prefs = enumerate_strict_preferences(outcome_count, caps);
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < agent_count; ++i) {
    total *= prefs.size();
    if (total > caps.max_scfs) {
      throw Error(ErrorKind::kSizeLimit, "strict domain too large");
    }
  }
  std::vector<OrdinalState> out;
  out.reserve(total);
  std::vector<std::size_t> idx(agent_count, 0);
  for (std::uint64_t n = 0; n < total; ++n) {
    OrdinalState s;
    for (std::size_t i = 0; i < agent_count; ++i) s.prefs.push_back(prefs[idx[i]]);
    out.push_back(std::move(s));
    for (std::size_t k = agent_count; k-- > 0;) {
      if (++idx[k] < prefs.size()) break;
      idx[k] = 0;
    }
  }
  return out;
}

bool is_second_best_pair_state(const OrdinalState& theta, AgentId i1,
                               AgentId i2, OutcomeId z) {
  if (i1 == i2) {
    throw Error(ErrorKind::kInvalidInput, "agents must be distinct");
  }
  const Preference& p1 = theta.prefs.at(i1);
  const Preference& p2 = theta.prefs.at(i2);
  if (!p1.is_strict() || !p2.is_strict()) {
    throw Error(ErrorKind::kNotStrict, "state has ties");
  }
  if (p1.outcome_count() < 2) return false;
  return p1.rank(z) == 1 && p2.rank(z) == 1 && p1.top() != p2.top();
}

// ---------------------------------------------------------------------------
// Cardinal representations

Utility canonical_utility(const Preference& pref) {
  const std::size_t k = pref.class_count();
  Utility u(pref.outcome_count());
  if (k < 2) return u;
  for (OutcomeId z = 0; z < u.size(); ++z) {
    u[z] = Rational(static_cast<std::int64_t>(k - 1 - pref.rank(z)),
                    static_cast<std::int64_t>(k - 1));
  }
  return u;
}

CardinalState canonical_cardinal(const OrdinalState& theta) {
  CardinalState u;
  for (const auto& p : theta.prefs) u.utils.push_back(canonical_utility(p));
  return u;
}

std::uint64_t derive_seed(std::uint64_t root, std::uint64_t a,
                          std::uint64_t b) {
  auto mix = [](std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  };
  return mix(mix(mix(root) ^ a) ^ (b * 0x632be59bd9b4e019ULL));
}

namespace {

Utility sample_with(const Preference& pref, std::mt19937_64& rng) {
  const std::size_t k = pref.class_count();
  std::set<std::int64_t> values;
  while (values.size() < k) {
    values.insert(static_cast<std::int64_t>(
        rng() % static_cast<std::uint64_t>(kSampleDenominator + 1)));
  }
  std::vector<std::int64_t> desc(values.rbegin(), values.rend());
  Utility u(pref.outcome_count());
  for (OutcomeId z = 0; z < u.size(); ++z) {
    u[z] = Rational(desc[pref.rank(z)], kSampleDenominator);
  }
  return u;
}

}  // namespace

Utility sample_utility(const Preference& pref, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return sample_with(pref, rng);
}

CardinalState sample_cardinal(const OrdinalState& theta, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  CardinalState u;
  for (const auto& p : theta.prefs) u.utils.push_back(sample_with(p, rng));
  return u;
}

// ---------------------------------------------------------------------------
// Domains and problems

const char* domain_tag_name(DomainTag tag) {
  switch (tag) {
    case DomainTag::kStrictAll: return "STRICT_ALL";
    case DomainTag::kUnanimityStrict: return "UNANIMITY_STRICT";
    case DomainTag::kCustom: return "CUSTOM";
  }
  return "?";
}

DomainTag parse_domain_tag(std::string_view text) {
  if (text == "STRICT_ALL") return DomainTag::kStrictAll;
  if (text == "UNANIMITY_STRICT") return DomainTag::kUnanimityStrict;
  if (text == "CUSTOM") return DomainTag::kCustom;
  throw Error(ErrorKind::kInvalidInput,
              "unknown domain kind '" + std::string(text) + "'");
}

std::vector<OrdinalState> domain_states(const DomainKind& kind,
                                        std::size_t agent_count,
                                        std::size_t outcome_count,
                                        const Caps& caps) {
  std::vector<OrdinalState> out;
  switch (kind.tag) {
    case DomainTag::kStrictAll:
      out = strict_states(agent_count, outcome_count, caps);
      break;
    case DomainTag::kUnanimityStrict:
      out = unanimity_strict_states(agent_count, outcome_count, caps);
      break;
    case DomainTag::kCustom:
      break;
  }
  for (const auto& extra : kind.extra_states) {
    if (std::find(out.begin(), out.end(), extra) == out.end()) {
      out.push_back(extra);
    }
  }
  return out;
}

ImplementationProblem build_problem(const DomainKind& kind,
                                    const AgentSet& agents,
                                    const OutcomeSpace& outcomes,
                                    const ScfTable& table,
                                    const BuildOptions& options) {
  ImplementationProblem problem;
  problem.outcomes = outcomes;
  problem.agents = agents;
  problem.scf.domain = domain_states(kind, agents.size(), outcomes.size());
  for (const auto& theta : problem.scf.domain) {
    if (options.require_strict && !theta.is_strict()) {
      throw Error(ErrorKind::kDomainViolation,
                  "state " + theta.format(agents, outcomes) +
                      " is not strict");
    }
    std::optional<OutcomeId> value;
    for (const auto& [state, z] : table) {
      if (state == theta) {
        value = z;
        break;
      }
    }
    if (!value && options.fill_unanimity_tops && theta.is_unanimous() &&
        theta.prefs.front().top().size() == 1) {
      value = theta.prefs.front().top().front();
    }
    if (!value) {
      throw Error(ErrorKind::kScfPartial,
                  "no choice for state " + theta.format(agents, outcomes));
    }
    if (options.unanimity_respecting && theta.is_unanimous()) {
      const auto& t = theta.prefs.front().top();
      if (std::find(t.begin(), t.end(), *value) == t.end()) {
        throw Error(ErrorKind::kDomainViolation,
                    "choice at unanimity state " +
                        theta.format(agents, outcomes) +
                        " is not the shared top");
      }
    }
    problem.scf.choice.push_back(*value);
  }
  for (const auto& [state, z] : table) {
    if (std::find(problem.scf.domain.begin(), problem.scf.domain.end(),
                  state) == problem.scf.domain.end()) {
      throw Error(ErrorKind::kDomainViolation,
                  "table state " + state.format(agents, outcomes) +
                      " lies outside the domain");
    }
  }
  problem.validate();
  return problem;
}

// ---------------------------------------------------------------------------
// Text forms

Preference parse_preference(std::string_view text, const OutcomeSpace& space,
                            int column_offset) {
  std::vector<std::vector<OutcomeId>> classes;
  std::set<OutcomeId> seen;
  for (auto [cls, off] : split(text, '>')) {
    std::vector<OutcomeId> members;
    for (auto [label, off2] : split(cls, '=')) {
      const int column = column_offset + off + off2 + 1;
      auto z = space.find(trim(label));
      if (!z) {
        throw ParseError("unknown outcome '" + std::string(trim(label)) + "'",
                         1, column);
      }
      if (!seen.insert(*z).second) {
        throw ParseError("outcome '" + std::string(trim(label)) +
                             "' ranked twice",
                         1, column);
      }
      members.push_back(*z);
    }
    classes.push_back(std::move(members));
  }
  if (seen.size() != space.size()) {
    throw ParseError("preference does not rank every outcome", 1,
                     column_offset + 1);
  }
  return Preference(std::move(classes), space.size());
}

OrdinalState parse_state(std::string_view text, const AgentSet& agents,
                         const OutcomeSpace& space) {
  std::vector<std::optional<Preference>> prefs(agents.size());
  for (auto [part, off] : split(text, ';')) {
    auto colon = part.find(':');
    if (colon == std::string_view::npos) {
      throw ParseError("expected 'agent:preference'", 1, off + 1);
    }
    auto name = trim(part.substr(0, colon));
    auto i = agents.find(name);
    if (!i) {
      throw ParseError("unknown agent '" + std::string(name) + "'", 1, off + 1);
    }
    if (prefs[*i]) {
      throw ParseError("agent '" + std::string(name) + "' given twice", 1,
                       off + 1);
    }
    prefs[*i] = parse_preference(part.substr(colon + 1), space,
                                 off + static_cast<int>(colon) + 1);
  }
  OrdinalState theta;
  for (AgentId i = 0; i < agents.size(); ++i) {
    if (!prefs[i]) {
      throw ParseError("no preference for agent '" + agents.label(i) + "'", 1,
                       static_cast<int>(text.size()) + 1);
    }
    theta.prefs.push_back(*prefs[i]);
  }
  return theta;
}

CardinalState parse_cardinal(std::string_view text, const AgentSet& agents,
                             const OutcomeSpace& space) {
  CardinalState u;
  u.utils.assign(agents.size(), Utility{});
  std::vector<bool> given(agents.size(), false);
  for (auto [part, off] : split(text, ';')) {
    auto colon = part.find(':');
    if (colon == std::string_view::npos) {
      throw ParseError("expected 'agent:outcome=value,...'", 1, off + 1);
    }
    auto i = agents.find(trim(part.substr(0, colon)));
    if (!i || given[*i]) {
      throw ParseError("unknown or repeated agent", 1, off + 1);
    }
    given[*i] = true;
    Utility ui(space.size());
    std::vector<bool> set(space.size(), false);
    for (auto [entry, off2] : split(part.substr(colon + 1), ',')) {
      const int column = off + static_cast<int>(colon) + 1 + off2 + 1;
      auto eq = entry.find('=');
      if (eq == std::string_view::npos) {
        throw ParseError("expected 'outcome=value'", 1, column);
      }
      auto z = space.find(trim(entry.substr(0, eq)));
      if (!z || set[*z]) throw ParseError("unknown or repeated outcome", 1, column);
      try {
        ui[*z] = Rational::parse(trim(entry.substr(eq + 1)));
      } catch (const std::exception&) {
        throw ParseError("malformed rational", 1, column);
      }
      set[*z] = true;
    }
    if (std::find(set.begin(), set.end(), false) != set.end()) {
      throw ParseError("utility missing for some outcome", 1, off + 1);
    }
    u.utils[*i] = std::move(ui);
  }
  if (std::find(given.begin(), given.end(), false) != given.end()) {
    throw ParseError("utilities missing for some agent", 1,
                     static_cast<int>(text.size()) + 1);
  }
  return u;
}

}  // namespace domlab
