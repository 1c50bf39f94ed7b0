// domlab: trace, reproduce, verify, search, construct.
//
// Exit codes: 0 ok / verified, 1 refuted or golden mismatch, 2 parse error,
// 3 validation error or invalid flags, 4 inconclusive, 5 counterexamples.

#include <charconv>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "domlab/constructions.hpp"
#include "domlab/dominance.hpp"
#include "domlab/domains.hpp"
#include "domlab/io.hpp"
#include "domlab/reproduce.hpp"
#include "domlab/search.hpp"
#include "domlab/verify.hpp"

using namespace domlab;

namespace {

enum Exit { kOk = 0, kFail = 1, kParse = 2, kInvalid = 3, kInconclusive = 4, kFound = 5 };

struct Globals {
  std::uint64_t seed = kDefaultSeed;
  std::string out;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kInvalidInput, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Writes the report to --out when given; stdout always gets the rendering.
void emit(const Globals& g, const std::string& text, const std::string& file_text) {
  std::cout << text;
  if (!g.out.empty()) {
    std::ofstream f(g.out);
    if (!f) throw Error(ErrorKind::kInvalidInput, "cannot write " + g.out);
    f << file_text;
  }
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(item);
  return out;
}

std::size_t to_size(const std::string& s, const char* what) {
  std::size_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) {
    throw Error(ErrorKind::kInvalidInput, std::string("bad ") + what + " '" + s + "'");
  }
  return v;
}

// ---------------------------------------------------------------- trace

struct TraceArgs {
  std::string mechanism, state, mode = "robust";
};

int cmd_trace(const Globals& g, const TraceArgs& a) {
  const Mechanism m = parse_mechanism(read_file(a.mechanism));
  const OrdinalState theta = parse_state(a.state, m.agents(), m.outcomes());
  DeletionTrace t;
  if (a.mode == "robust") {
    t = robust_udinf(m, theta);
  } else if (a.mode.rfind("cardinal:", 0) == 0) {
    const CardinalState u =
        parse_cardinal(a.mode.substr(9), m.agents(), m.outcomes());
    if (!represents(u, theta)) {
      throw Error(ErrorKind::kInvalidInput, "utilities do not represent the state");
    }
    t = udinf_at(m, u);
  } else {
    throw Error(ErrorKind::kInvalidInput, "mode must be robust or cardinal:<utilities>");
  }
  const std::size_t rounds = std::max<std::size_t>(1, t.active_rounds());
  emit(g, render_trace_table(m, {a.state}, {t}, rounds),
       trace_to_json(m, t).dump(2) + "\n");
  return kOk;
}

// ------------------------------------------------------------ reproduce

struct ReproduceArgs {
  std::string target;
  std::size_t samples = 0;
};

int cmd_reproduce(const Globals& g, const ReproduceArgs& a) {
  ReproduceResult r;
  std::string title;
  if (a.target == "lemma5") {
    title = "hat mechanism, seven-state domain";
    r = reproduce_lemma5();
  } else if (a.target.rfind("theorem4:", 0) == 0) {
    const std::size_t n = to_size(a.target.substr(9), "outcome count");
    title = "star mechanism, |Z| = " + std::to_string(n);
    r = reproduce_theorem4(n);
  } else if (a.target.rfind("theorem5:", 0) == 0) {
    const std::size_t n = to_size(a.target.substr(9), "cap");
    title = "truncated announcement mechanism, N = " + std::to_string(n) +
            ", canonical + " + std::to_string(a.samples) + " sampled representations";
    r = reproduce_theorem5(n, a.samples, g.seed);
  } else if (a.target == "star-vs-hat") {
    // The star construction restricted to three outcomes is not the hat one.
    const OutcomeSpace z({"a", "b", "c"});
    const AgentSet agents({"i1", "i2"});
    const auto diff = compare_mechanisms(hat_mechanism(z, {0, 1, 2}, agents),
                                         star_mechanism(z, {0, 1, 2}, agents));
    std::vector<std::vector<std::string>> rows{{"cell", "hat", "star"}};
    for (const auto& d : diff) {
      rows.push_back({z.label(d.profile[0]) + "," + z.label(d.profile[1]),
                      format_lottery(d.left, z), format_lottery(d.right, z)});
    }
    title = "hat vs star at |Z| = 3: " + std::to_string(diff.size()) + " cells differ";
    r.table = render_table(rows);
    // Both on the seven-state problem, UD-infinity, all representations.
    const OrdinalState bar = parse_state("i1:b>a>c;i2:c>a>b", agents, z);
    const auto problem = build_problem({DomainTag::kUnanimityStrict, {bar}}, agents, z,
                                       {{bar, 0}}, {.fill_unanimity_tops = true});
    VerifyOptions vo;
    vo.seed = g.seed;
    for (const auto& [name, m] : {std::pair{"hat", hat_mechanism(z, {0, 1, 2}, agents)},
                                  std::pair{"star", star_mechanism(z, {0, 1, 2}, agents)}}) {
      r.table += std::string(name) + " on the seven-state problem (UDINF, ALL): " +
                 status_name(verify_udinf(m, problem, vo).status) + "\n";
    }
    r.pass = true;
  } else {
    throw Error(ErrorKind::kInvalidInput, "unknown target '" + a.target + "'");
  }
  std::ostringstream os;
  os << title << "\n" << r.table;
  for (const auto& m : r.mismatches) os << "MISMATCH " << m << "\n";
  os << (r.pass ? "PASS" : "FAIL") << "\n";
  emit(g, os.str(), os.str());
  std::cerr << "elapsed " << r.seconds << " s\n";
  return r.pass ? kOk : kFail;
}

// --------------------------------------------------------------- verify

struct VerifyArgs {
  std::string mechanism, problem, notion = "udinf";
  std::size_t samples = 200;
};

int cmd_verify(const Globals& g, const VerifyArgs& a) {
  const Mechanism m = parse_mechanism(read_file(a.mechanism));
  const ImplementationProblem p = parse_problem(read_file(a.problem));
  VerifyOptions vo;
  vo.seed = g.seed;
  vo.samples = a.samples;
  vo.caps = default_caps();
  const auto report = verify(m, p, parse_notion(a.notion), vo);
  emit(g, render_verification_report(m, report),
       verification_report_to_json(m, report).dump(2) + "\n");
  switch (report.status) {
    case Status::kVerified: return kOk;
    case Status::kRefuted: return kFail;
    default: return kInconclusive;
  }
}

// --------------------------------------------------------------- search

struct SearchArgs {
  std::size_t agents = 2, outcomes = 2, grid = 4, jobs = 1, samples = 20;
  std::string strategies = "2,2", notion = "ud", shard, resume, checkpoint;
  bool deterministic = false, prune = false, stop_first = false, sweep = false;
};

int cmd_search(const Globals& g, const SearchArgs& a) {
  SearchSpace base;
  base.agents = a.agents;
  base.outcomes = a.outcomes;
  base.strategies.clear();
  for (auto& s : split_list(a.strategies)) base.strategies.push_back(to_size(s, "strategy count"));
  base.grid = a.grid;
  base.deterministic_only = a.deterministic;
  base.notion = parse_notion(a.notion);

  SearchOptions opt;
  opt.seed = g.seed;
  opt.samples = a.samples;
  opt.prune_product = a.prune;
  opt.stop_at_first = a.stop_first;
  opt.caps = default_caps();
  if (!a.shard.empty()) {
    const auto slash = a.shard.find('/');
    if (slash == std::string::npos) throw Error(ErrorKind::kInvalidInput, "shard must be k/n");
    opt.shard = to_size(a.shard.substr(0, slash), "shard");
    opt.shards = to_size(a.shard.substr(slash + 1), "shard count");
    if (opt.shards == 0 || opt.shard >= opt.shards) {
      throw Error(ErrorKind::kInvalidInput, "shard index out of range");
    }
    if (a.jobs > 1) throw Error(ErrorKind::kInvalidInput, "--shard and --jobs are exclusive");
  }
  if (!a.resume.empty()) {
    opt.checkpoint_path = a.resume;
    opt.resume = true;
  } else if (!a.checkpoint.empty()) {
    opt.checkpoint_path = a.checkpoint;
  }

  // --sweep: every shape up to the given one and every grid q up to --grid.
  std::vector<SearchSpace> spaces;
  if (a.sweep) {
    if (base.agents != 2) throw Error(ErrorKind::kInvalidInput, "--sweep needs two agents");
    if (opt.checkpoint_path) throw Error(ErrorKind::kInvalidInput, "--sweep does not checkpoint");
    for (std::size_t s1 = 1; s1 <= base.strategies.at(0); ++s1) {
      for (std::size_t s2 = 1; s2 <= base.strategies.at(1); ++s2) {
        for (std::size_t q = 1; q <= (base.deterministic_only ? 1 : base.grid); ++q) {
          SearchSpace s = base;
          s.strategies = {s1, s2};
          s.grid = q;
          spaces.push_back(s);
        }
      }
    }
  } else {
    spaces.push_back(base);
  }

  std::vector<SearchReport> parts;
  for (auto& s : spaces) {
    s.validate(opt.caps);
    parts.push_back(a.jobs > 1 ? mine_parallel(s, a.jobs, opt) : mine(s, opt));
  }
  SearchReport rep = parts[0];
  if (parts.size() > 1) {
    rep = SearchReport{};
    rep.complete = true;
    for (auto& p : parts) {
      rep.spaces.insert(rep.spaces.end(), p.spaces.begin(), p.spaces.end());
      rep.tallies += p.tallies;
      rep.seconds += p.seconds;
      rep.complete = rep.complete && p.complete;
      for (auto& h : p.hits) rep.hits.push_back(h);
      rep.unresolved_indices.insert(rep.unresolved_indices.end(),
                                    p.unresolved_indices.begin(),
                                    p.unresolved_indices.end());
    }
  }
  emit(g, render_search_report(rep), search_report_to_json(rep).dump(2) + "\n");
  if (!rep.hits.empty()) return kFound;
  if (rep.tallies.unresolved_hits > 0) return kInconclusive;
  return kOk;
}

// ------------------------------------------------------------ construct

struct ConstructArgs {
  std::string type, outcomes, agents = "i1,i2", state, f;
};

int cmd_construct(const Globals& g, const ConstructArgs& a) {
  const auto colon = a.type.find(':');
  if (colon == std::string::npos) {
    throw Error(ErrorKind::kInvalidInput, "type must be kind:argument");
  }
  const std::string kind = a.type.substr(0, colon);
  const std::string arg = a.type.substr(colon + 1);
  const AgentSet agents(split_list(a.agents));

  // Context for star and infinite: the disagreement state and f there.
  // Defaults: i1 ranks the second label first, i2 the third, both put the
  // first label second; f is the first label.
  auto context = [&](const OutcomeSpace& z) {
    OrdinalState bar;
    if (!a.state.empty()) {
      bar = parse_state(a.state, agents, z);
    } else {
      if (agents.size() != 2 || z.size() < 3) {
        throw Error(ErrorKind::kInvalidInput, "default state needs two agents and three outcomes");
      }
      std::vector<OutcomeId> o1{1, 0, 2}, o2{2, 0, 1};
      for (OutcomeId k = 3; k < z.size(); ++k) {
        o1.push_back(k);
        o2.push_back(k);
      }
      bar.prefs = {Preference::strict(o1), Preference::strict(o2)};
    }
    const OutcomeId f = a.f.empty() ? 0 : z.index(a.f);
    return std::pair{bar, f};
  };

  Mechanism m;
  if (kind == "dictatorial") {
    const OutcomeSpace z(split_list(a.outcomes.empty() ? "a,b" : a.outcomes));
    m = dictatorial_mechanism(agents, z, agents.index(arg));
  } else if (kind == "hat") {
    const auto l = split_list(arg);
    if (l.size() != 3) throw Error(ErrorKind::kInvalidInput, "hat needs three labels");
    m = hat_mechanism(l[0], l[1], l[2]);
  } else if (kind == "star") {
    const OutcomeSpace z(split_list(arg));
    auto [bar, f] = context(z);
    m = star_mechanism(z, star_labels_from_state(bar, 0, 1, f), agents);
  } else if (kind == "infinite") {
    const OutcomeSpace z(split_list(a.outcomes.empty() ? "a,b,c" : a.outcomes));
    auto [bar, f] = context(z);
    m = truncated_infinite_mechanism(agents, z, bar, f, {.cap = to_size(arg, "cap")});
  } else {
    throw Error(ErrorKind::kInvalidInput, "unknown construction '" + kind + "'");
  }
  const std::string text = serialize_mechanism(m);
  emit(g, text, text);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Iterated-dominance implementation toolkit"};
  app.require_subcommand(1);
  app.fallthrough();  // --seed / --out after the subcommand too
  Globals g;
  app.add_option("--seed", g.seed, "root seed for sampled representations");
  app.add_option("--out", g.out, "also write the report (JSON for trace/verify/search) here");

  TraceArgs ta;
  auto* trace = app.add_subcommand("trace", "round-by-round deletion table");
  trace->add_option("mechanism", ta.mechanism)->required();
  trace->add_option("state", ta.state)->required();
  trace->add_option("--mode", ta.mode, "robust | cardinal:<i1:a=..,b=..;i2:...>");

  ReproduceArgs ra;
  auto* repro = app.add_subcommand("reproduce", "rebuild a reference table and compare");
  repro->add_option("target", ra.target, "lemma5 | theorem4:<|Z|> | theorem5:<N> | star-vs-hat")
      ->required();
  repro->add_option("--samples", ra.samples, "sampled representations per state (theorem5)");

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "check an implementation problem");
  verify->add_option("mechanism", va.mechanism)->required();
  verify->add_option("problem", va.problem)->required();
  verify->add_option("--notion", va.notion, "ud | udinf");
  verify->add_option("--samples", va.samples, "fallback representations per state");

  SearchArgs sa;
  auto* search = app.add_subcommand("search", "exhaustive counterexample mining");
  search->add_option("--agents", sa.agents);
  search->add_option("--outcomes", sa.outcomes);
  search->add_option("--strategies", sa.strategies, "per-agent counts, e.g. 3,3");
  search->add_option("--grid", sa.grid, "lottery masses in multiples of 1/q");
  search->add_option("--notion", sa.notion, "ud | udinf");
  search->add_flag("--deterministic", sa.deterministic);
  search->add_option("--shard", sa.shard, "k/n");
  search->add_option("--resume", sa.resume, "checkpoint file to resume from and update");
  search->add_option("--checkpoint", sa.checkpoint, "checkpoint file to write");
  search->add_option("--samples", sa.samples, "representations for unresolved states");
  search->add_option("--jobs", sa.jobs, "parallel shards");
  search->add_flag("--prune", sa.prune, "skip subtrees violating the product condition");
  search->add_flag("--stop-first", sa.stop_first);
  search->add_flag("--sweep", sa.sweep, "all smaller shapes and grids too");

  ConstructArgs ca;
  auto* construct = app.add_subcommand("construct", "emit a mechanism file");
  construct->add_option("type", ca.type,
                        "dictatorial:<agent> | hat:a,b,c | star:<labels> | infinite:<N>")
      ->required();
  construct->add_option("--outcomes", ca.outcomes);
  construct->add_option("--agents", ca.agents);
  construct->add_option("--state", ca.state, "disagreement state for star / infinite");
  construct->add_option("--f", ca.f, "outcome chosen at that state");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInvalid;
  }

  try {
    if (*trace) return cmd_trace(g, ta);
    if (*repro) return cmd_reproduce(g, ra);
    if (*verify) return cmd_verify(g, va);
    if (*search) return cmd_search(g, sa);
    if (*construct) return cmd_construct(g, ca);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kParse;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  }
  return kInvalid;
}
