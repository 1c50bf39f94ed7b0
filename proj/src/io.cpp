#include "domlab/io.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>

#include "domlab/domains.hpp"

namespace domlab {
namespace {

Error invalid(const std::string& what) {
  return Error(ErrorKind::kInvalidInput, what);
}

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw invalid(std::string("missing field '") + key + "'");
  }
  return j.at(key);
}

std::vector<std::string> string_list(const Json& j, const char* what) {
  if (!j.is_array()) throw invalid(std::string(what) + " must be an array");
  std::vector<std::string> out;
  for (const auto& v : j) {
    if (!v.is_string()) {
      throw invalid(std::string(what) + " entries must be strings");
    }
    out.push_back(v.get<std::string>());
  }
  return out;
}

Rational rational_field(const Json& v) {
  if (!v.is_string()) throw invalid("masses and utilities must be \"p/q\" strings");
  try {
    return Rational::parse(v.get<std::string>());
  } catch (const std::invalid_argument&) {
    throw invalid("malformed rational '" + v.get<std::string>() + "'");
  }
}

std::string cell_key(const Mechanism& m, const Profile& p) {
  std::string key;
  for (AgentId i = 0; i < p.size(); ++i) {
    if (i) key += ",";
    key += m.strategy_label(i, p[i]);
  }
  return key;
}

Json lottery_json(const Lottery& y, const OutcomeSpace& z) {
  Json out = Json::object();
  for (OutcomeId k = 0; k < y.size(); ++k) {
    if (!y.mass(k).is_zero()) out[z.label(k)] = y.mass(k).str();
  }
  return out;
}

Json set_json(const Mechanism& m, AgentId i,
              const std::vector<StrategyId>& set) {
  Json out = Json::array();
  for (StrategyId s : set) out.push_back(m.strategy_label(i, s));
  return out;
}

}  // namespace

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    int line = 1, column = 1;
    const std::size_t stop = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0,
                                                   text.size());
    for (std::size_t k = 0; k < stop; ++k) {
      if (text[k] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    std::string msg = e.what();
    // Drop the library's own prefix; the position is reported separately.
    if (auto pos = msg.find(": "); pos != std::string::npos) {
      msg = msg.substr(pos + 2);
    }
    throw ParseError("malformed JSON (" + msg + ")", line, column);
  }
}

Json mechanism_to_json(const Mechanism& m) {
  Json j;
  j["agents"] = m.agents().labels();
  j["outcomes"] = m.outcomes().labels();
  Json strategies = Json::object();
  for (AgentId i = 0; i < m.agent_count(); ++i) {
    strategies[m.agents().label(i)] = m.strategies(i);
  }
  j["strategies"] = strategies;
  Json cells = Json::object();
  for (std::size_t c = 0; c < m.profile_count(); ++c) {
    cells[cell_key(m, m.profile_at(c))] = lottery_json(m.cell(c), m.outcomes());
  }
  j["cells"] = cells;
  return j;
}

Mechanism mechanism_from_json(const Json& j) {
  AgentSet agents(string_list(field(j, "agents"), "agents"));
  OutcomeSpace outcomes(string_list(field(j, "outcomes"), "outcomes"));
  const Json& sj = field(j, "strategies");
  if (!sj.is_object()) throw invalid("strategies must be an object keyed by agent");
  std::vector<std::vector<std::string>> strategies;
  for (AgentId i = 0; i < agents.size(); ++i) {
    const auto& label = agents.label(i);
    if (!sj.contains(label)) throw invalid("no strategies for agent " + label);
    auto list = string_list(sj.at(label), "strategies");
    for (const auto& s : list) {
      if (s.find(',') != std::string::npos) {
        throw invalid("strategy label '" + s + "' contains a comma");
      }
    }
    strategies.push_back(std::move(list));
  }
  for (const auto& [key, value] : sj.items()) {
    agents.index(key);  // unknown agents are an error
  }
  // Index the cells by key; every profile must be present.
  const Json& cj = field(j, "cells");
  if (!cj.is_object()) throw invalid("cells must be an object");
  Mechanism shape = Mechanism::build(
      outcomes, agents, strategies,
      [&](const Profile&) { return Lottery::degenerate(outcomes.size(), 0); });
  std::vector<Lottery> cells(shape.profile_count());
  std::vector<bool> seen(shape.profile_count(), false);
  for (const auto& [key, value] : cj.items()) {
    Profile p;
    std::size_t start = 0;
    for (AgentId i = 0; i < agents.size(); ++i) {
      const std::size_t comma =
          i + 1 < agents.size() ? key.find(',', start) : key.size();
      if (comma == std::string::npos) {
        throw invalid("cell key '" + key + "' has too few strategies");
      }
      p.push_back(shape.strategy_index(i, key.substr(start, comma - start)));
      start = comma + 1;
    }
    if (!value.is_object()) throw invalid("cell '" + key + "' must be an object");
    std::vector<std::pair<std::string, Rational>> pairs;
    for (const auto& [z, mass] : value.items()) {
      pairs.emplace_back(z, rational_field(mass));
    }
    const std::size_t c = shape.cell_index(p);
    if (seen[c]) throw invalid("cell '" + key + "' given twice");
    seen[c] = true;
    cells[c] = make_lottery(outcomes, pairs);
  }
  for (std::size_t c = 0; c < seen.size(); ++c) {
    if (!seen[c]) {
      throw invalid("missing cell '" + cell_key(shape, shape.profile_at(c)) + "'");
    }
  }
  return Mechanism(outcomes, agents, strategies, std::move(cells));
}

std::string serialize_mechanism(const Mechanism& m) {
  return mechanism_to_json(m).dump(2) + "\n";
}

Mechanism parse_mechanism(std::string_view text) {
  return mechanism_from_json(parse_json(text));
}

Json problem_to_json(const ImplementationProblem& p) {
  Json j;
  j["agents"] = p.agents.labels();
  j["outcomes"] = p.outcomes.labels();
  // Stored as a custom domain so the file lists every state explicitly.
  Json states = Json::array();
  for (const auto& t : p.theta()) states.push_back(t.format(p.agents, p.outcomes));
  j["domain"] = Json{{"kind", domain_tag_name(DomainTag::kCustom)},
                     {"extra_states", states}};
  if (p.omega.all_representations) {
    j["omega"] = "ALL";
  } else {
    Json om = Json::object();
    for (std::size_t k = 0; k < p.theta().size(); ++k) {
      Json list = Json::array();
      for (const auto& u : p.omega.explicit_states[k]) {
        list.push_back(format_cardinal(u, p.agents, p.outcomes));
      }
      om[p.theta()[k].format(p.agents, p.outcomes)] = list;
    }
    j["omega"] = om;
  }
  Json scf = Json::object();
  for (std::size_t k = 0; k < p.theta().size(); ++k) {
    scf[p.theta()[k].format(p.agents, p.outcomes)] =
        p.outcomes.label(p.scf.choice[k]);
  }
  j["scf"] = scf;
  return j;
}

ImplementationProblem problem_from_json(const Json& j) {
  AgentSet agents(string_list(field(j, "agents"), "agents"));
  OutcomeSpace outcomes(string_list(field(j, "outcomes"), "outcomes"));
  const Json& dj = field(j, "domain");
  DomainKind kind;
  if (dj.is_string()) {
    kind.tag = parse_domain_tag(dj.get<std::string>());
  } else {
    kind.tag = parse_domain_tag(field(dj, "kind").get<std::string>());
    if (dj.contains("extra_states")) {
      for (const auto& s : string_list(dj.at("extra_states"), "extra_states")) {
        kind.extra_states.push_back(parse_state(s, agents, outcomes));
      }
    }
  }
  ScfTable table;
  const Json& sj = field(j, "scf");
  if (!sj.is_object()) throw invalid("scf must be an object keyed by state");
  for (const auto& [state, z] : sj.items()) {
    if (!z.is_string()) throw invalid("scf values must be outcome labels");
    table.push_back({parse_state(state, agents, outcomes),
                     outcomes.index(z.get<std::string>())});
  }
  BuildOptions opts;
  opts.require_strict = j.value("require_strict", true);
  opts.fill_unanimity_tops = j.value("fill_unanimity_tops", false);
  opts.unanimity_respecting = j.value("unanimity_respecting", false);
  auto problem = build_problem(kind, agents, outcomes, table, opts);
  const Json om = j.value("omega", Json("ALL"));
  if (om.is_string()) {
    if (om.get<std::string>() != "ALL") throw invalid("omega must be \"ALL\" or an object");
  } else if (om.is_object()) {
    problem.omega.all_representations = false;
    problem.omega.explicit_states.assign(problem.theta().size(), {});
    for (const auto& [state, list] : om.items()) {
      auto theta = parse_state(state, agents, outcomes);
      auto it = std::find(problem.theta().begin(), problem.theta().end(), theta);
      if (it == problem.theta().end()) {
        throw invalid("omega lists a state outside the domain: " + state);
      }
      auto& reps = problem.omega.explicit_states[it - problem.theta().begin()];
      for (const auto& u : string_list(list, "omega entries")) {
        reps.push_back(parse_cardinal(u, agents, outcomes));
      }
    }
    for (std::size_t k = 0; k < problem.theta().size(); ++k) {
      if (problem.omega.explicit_states[k].empty()) {
        throw invalid("no representation listed for state " +
                      problem.theta()[k].format(agents, outcomes));
      }
    }
    problem.validate();
  } else {
    throw invalid("omega must be \"ALL\" or an object");
  }
  return problem;
}

ImplementationProblem parse_problem(std::string_view text) {
  return problem_from_json(parse_json(text));
}

std::string format_strategy_set(const Mechanism& m, AgentId i,
                                const std::vector<StrategyId>& set) {
  std::string out = "{";
  for (std::size_t k = 0; k < set.size(); ++k) {
    if (k) out += ",";
    out += m.strategy_label(i, set[k]);
  }
  return out + "}";
}

std::string format_profile(const Mechanism& m, const Profile& p) {
  return "(" + cell_key(m, p) + ")";
}

std::string format_cardinal(const CardinalState& u, const AgentSet& agents,
                            const OutcomeSpace& space) {
  std::string out;
  for (AgentId i = 0; i < u.utils.size(); ++i) {
    if (i) out += ";";
    out += agents.label(i) + ":";
    for (OutcomeId z = 0; z < space.size(); ++z) {
      if (z) out += ",";
      const Rational& v = u.utils[i][z];
      out += space.label(z) + "=" +
             (v.den() == 1 ? std::to_string(v.num()) : v.str());
    }
  }
  return out;
}

std::string render_table(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width;
  for (const auto& r : rows) {
    if (width.size() < r.size()) width.resize(r.size(), 0);
    for (std::size_t c = 0; c < r.size(); ++c) {
      width[c] = std::max(width[c], r[c].size());
    }
  }
  std::ostringstream os;
  for (const auto& r : rows) {
    std::string line;
    for (std::size_t c = 0; c < r.size(); ++c) {
      line += r[c];
      if (c + 1 < r.size()) line += std::string(width[c] - r[c].size() + 2, ' ');
    }
    os << line << "\n";
  }
  return os.str();
}

std::string render_trace_table(const Mechanism& m,
                               const std::vector<std::string>& headers,
                               const std::vector<DeletionTrace>& traces,
                               std::size_t rounds) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> head{""};
  head.insert(head.end(), headers.begin(), headers.end());
  rows.push_back(head);
  for (std::size_t k = 1; k <= rounds; ++k) {
    for (AgentId i = 0; i < m.agent_count(); ++i) {
      std::vector<std::string> row{"R" + std::to_string(k) + " " +
                                   m.agents().label(i)};
      for (const auto& t : traces) {
        row.push_back(format_strategy_set(m, i, t.survivors_at(k).sets[i]));
      }
      rows.push_back(std::move(row));
    }
  }
  return render_table(rows);
}

Json trace_to_json(const Mechanism& m, const DeletionTrace& t) {
  Json rounds = Json::array();
  for (const auto& r : t.rounds) {
    Json survivors = Json::object();
    for (AgentId i = 0; i < m.agent_count(); ++i) {
      survivors[m.agents().label(i)] = set_json(m, i, r.survivors.sets[i]);
    }
    Json deletions = Json::array();
    for (const auto& d : r.deletions) {
      deletions.push_back(Json{{"agent", m.agents().label(d.agent)},
                               {"deleted", m.strategy_label(d.agent, d.deleted)},
                               {"by", m.strategy_label(d.agent, d.dominator)}});
    }
    rounds.push_back(Json{{"survivors", survivors}, {"deletions", deletions}});
  }
  return rounds;
}

Json verification_report_to_json(const Mechanism& m,
                                 const VerificationReport& r) {
  Json j;
  j["notion"] = notion_name(r.notion);
  j["omega"] = r.all_representations ? "ALL" : "EXPLICIT";
  j["status"] = status_name(r.status);
  Json states = Json::array();
  for (const auto& s : r.states) {
    Json sj;
    sj["state"] = s.state.format(m.agents(), m.outcomes());
    sj["target"] = m.outcomes().label(s.target);
    sj["status"] = status_name(s.verdict.status);
    sj["exact"] = s.exact;
    if (s.verdict.witness) {
      const auto& w = *s.verdict.witness;
      sj["witness"] = Json{
          {"representation", format_cardinal(w.cardinal, m.agents(), m.outcomes())},
          {"profile", format_profile(m, w.profile)},
          {"lottery", format_lottery(w.lottery, m.outcomes())}};
    }
    if (s.possible) {
      Json p = Json::object();
      for (AgentId i = 0; i < m.agent_count(); ++i) {
        p[m.agents().label(i)] = set_json(m, i, s.possible->sets[i]);
      }
      sj["possibly_undominated"] = p;
    }
    if (s.robust_trace) sj["robust_trace"] = trace_to_json(m, *s.robust_trace);
    if (!s.cardinal_traces.empty()) {
      Json ts = Json::array();
      for (const auto& t : s.cardinal_traces) ts.push_back(trace_to_json(m, t));
      sj["cardinal_traces"] = ts;
    }
    if (s.samples_tried) sj["samples_tried"] = s.samples_tried;
    states.push_back(sj);
  }
  j["states"] = states;
  const auto& d = r.diagnostics;
  Json dj{{"robust_deletions", d.robust_deletions},
          {"exact_deletions", d.exact_deletions}};
  if (d.product_check) dj["product_check"] = *d.product_check;
  if (d.dictatorship_check) dj["dictatorship_check"] = *d.dictatorship_check;
  dj["notes"] = d.notes;
  j["diagnostics"] = dj;
  return j;
}

std::string render_verification_report(const Mechanism& m,
                                       const VerificationReport& r) {
  std::vector<std::vector<std::string>> rows{{"state", "f", "status", "detail"}};
  for (const auto& s : r.states) {
    std::string detail;
    if (s.verdict.witness) {
      const auto& w = *s.verdict.witness;
      detail = "profile " + format_profile(m, w.profile) + " -> " +
               format_lottery(w.lottery, m.outcomes()) + " at " +
               format_cardinal(w.cardinal, m.agents(), m.outcomes());
    } else if (s.possible) {
      for (AgentId i = 0; i < m.agent_count(); ++i) {
        detail += (i ? " x " : "") + format_strategy_set(m, i, s.possible->sets[i]);
      }
    } else if (s.robust_trace) {
      for (AgentId i = 0; i < m.agent_count(); ++i) {
        detail += (i ? " x " : "") +
                  format_strategy_set(m, i, s.robust_trace->fixed_point().sets[i]);
      }
    }
    rows.push_back({s.state.format(m.agents(), m.outcomes()),
                    m.outcomes().label(s.target), status_name(s.verdict.status),
                    detail});
  }
  std::ostringstream os;
  os << notion_name(r.notion) << " ("
     << (r.all_representations ? "all representations" : "listed representations")
     << "): " << status_name(r.status) << "\n"
     << render_table(rows);
  const auto& d = r.diagnostics;
  os << "robust deletions: " << d.robust_deletions
     << ", exact deletions: " << d.exact_deletions << "\n";
  if (d.product_check) {
    os << "S^z product check: " << (*d.product_check ? "holds" : "FAILS") << "\n";
  }
  if (d.dictatorship_check) {
    os << "dictator present: " << (*d.dictatorship_check ? "yes" : "NO") << "\n";
  }
  for (const auto& n : d.notes) os << "note: " << n << "\n";
  return os.str();
}

Json search_report_to_json(const SearchReport& r) {
  const auto& t = r.tallies;
  Json hits = Json::array();
  for (const auto& h : r.hits) {
    hits.push_back(Json{{"index", h.index},
                        {"mechanism", mechanism_to_json(h.mechanism)},
                        {"problem", problem_to_json(h.problem)},
                        {"reverification",
                         verification_report_to_json(h.mechanism, h.reverification)}});
  }
  return Json{{"spaces", r.spaces},
              {"mechanisms_tested", t.mechanisms_tested},
              {"mechanisms_pruned", t.mechanisms_pruned},
              {"scfs_tested", t.scfs_tested},
              {"counterexamples", t.counterexamples},
              {"unresolved_hits", t.unresolved_hits},
              {"inconclusive_states", t.inconclusive_states},
              {"cursor_begin", r.cursor_begin},
              {"cursor_end", r.cursor_end},
              {"cursor", r.cursor},
              {"complete", r.complete},
              {"unresolved_indices", r.unresolved_indices},
              {"hits", hits}};
}

std::string render_search_report(const SearchReport& r) {
  std::ostringstream os;
  for (const auto& s : r.spaces) os << "space " << s << "\n";
  const auto& t = r.tallies;
  os << render_table({{"mechanisms tested", std::to_string(t.mechanisms_tested)},
                      {"mechanisms pruned", std::to_string(t.mechanisms_pruned)},
                      {"qualifying SCF pairs", t.scfs_tested == ~std::uint64_t{0} ? std::string(">= 2^64 (saturated)") : std::to_string(t.scfs_tested)},
                      {"counterexamples", std::to_string(t.counterexamples)},
                      {"unresolved hits", std::to_string(t.unresolved_hits)},
                      {"inconclusive states", std::to_string(t.inconclusive_states)},
                      {"cursor", std::to_string(r.cursor) + " of [" +
                                     std::to_string(r.cursor_begin) + ", " +
                                     std::to_string(r.cursor_end) + ")"},
                      {"complete", r.complete ? "yes" : "no"}});
  for (const auto& h : r.hits) {
    os << "\ncounterexample at index " << h.index << " ("
       << status_name(h.reverification.status) << " on re-verification)\n";
    const auto& m = h.mechanism;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> head{m.agents().label(0) + "\\" + m.agents().label(1)};
    if (m.agent_count() == 2) {
      for (const auto& s : m.strategies(1)) head.push_back(s);
      rows.push_back(head);
      for (StrategyId a = 0; a < m.strategy_count(0); ++a) {
        std::vector<std::string> row{m.strategy_label(0, a)};
        for (StrategyId b = 0; b < m.strategy_count(1); ++b) {
          row.push_back(format_lottery(m.outcome(Profile{a, b}), m.outcomes()));
        }
        rows.push_back(row);
      }
      os << render_table(rows);
    }
    for (std::size_t k = 0; k < h.problem.theta().size(); ++k) {
      if (h.problem.theta()[k].is_unanimous()) continue;
      os << "  f(" << h.problem.theta()[k].format(m.agents(), m.outcomes())
         << ") = " << m.outcomes().label(h.problem.scf.choice[k]) << "\n";
    }
  }
  return os.str();
}

}  // namespace domlab
