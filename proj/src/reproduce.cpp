#include "domlab/reproduce.hpp"

#include <algorithm>
#include <chrono>
#include <sstream>

#include "domlab/constructions.hpp"
#include "domlab/dominance.hpp"
#include "domlab/domains.hpp"
#include "domlab/io.hpp"

namespace domlab {

namespace {

// state | R1 i1 | R1 i2 | R2 i1 | R2 i2
const std::string kLemma5 =
    "i1:b>a>c;i2:c>a>b|a,b|a,c|a|a\n"
    "i1:a>b>c;i2:a>b>c|a|a,b|a|a\n"
    "i1:a>c>b;i2:a>c>b|a,c|a|a|a\n"
    "i1:b>a>c;i2:b>a>c|a,b|b|b|b\n"
    "i1:b>c>a;i2:b>c>a|b,c|b|b|b\n"
    "i1:c>a>b;i2:c>a>b|c|a,c|c|c\n"
    "i1:c>b>a;i2:c>b>a|c|b,c|c|c\n";
constexpr std::uint64_t kLemma5Sum = 0x8b5e7df5ad9126ceULL;

// group | R1 i1 | R1 i2 | R2 i1 | R2 i2 | R3 i1 | R3 i2
// Supersets of the robust survivors; z is the state's top, Z everything.
const std::string kTheorem4 =
    "bar|a,b|a,c|a|a|a|a\n"
    "a-top b>c|a|Z|a|a|a|a\n"
    "a-top c>b|Z|a|a|a|a|a\n"
    "b-top|Z|b|b|b|b|b\n"
    "c-top|c|Z|c|c|c|c\n"
    "z-top b>c|Z|a,z|a,z|a,z|z|z\n"
    "z-top c>b|a,z|Z|a,z|a,z|z|z\n";
constexpr std::uint64_t kTheorem4Sum = 0x6789e24a289a7805ULL;

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  return out;
}

std::vector<std::vector<std::string>> rows_of(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  for (auto& line : split(text, '\n')) {
    if (!line.empty()) rows.push_back(split(line, '|'));
  }
  return rows;
}

// Strategy labels of the hat and star mechanisms are outcome labels.
std::vector<StrategyId> strategies_named(const Mechanism& m, AgentId i,
                                         const std::string& cell,
                                         OutcomeId state_top) {
  std::vector<StrategyId> out;
  if (cell == "Z") {
    for (StrategyId s = 0; s < m.strategy_count(i); ++s) out.push_back(s);
    return out;
  }
  for (auto& tok : split(cell, ',')) {
    const std::string label =
        tok == "z" ? m.outcomes().label(state_top) : tok;
    out.push_back(m.strategy_index(i, label));
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool subset(const std::vector<StrategyId>& a, const std::vector<StrategyId>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

std::string fmt(const Mechanism& m, AgentId i, const std::vector<StrategyId>& s) {
  return format_strategy_set(m, i, s);
}

}  // namespace

const std::string& lemma5_golden() { return kLemma5; }
const std::string& theorem4_golden() { return kTheorem4; }

std::uint64_t golden_checksum(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

bool golden_intact() {
  return golden_checksum(kLemma5) == kLemma5Sum &&
         golden_checksum(kTheorem4) == kTheorem4Sum;
}

ReproduceResult reproduce_lemma5() {
  const auto t0 = Clock::now();
  ReproduceResult res;
  if (!golden_intact()) {
    res.mismatches.push_back("golden data checksum mismatch");
    return res;
  }
  const Mechanism m = hat_mechanism("a", "b", "c");
  const AgentSet& agents = m.agents();
  const OutcomeSpace& z = m.outcomes();

  std::vector<std::string> headers;
  std::vector<DeletionTrace> traces;
  for (const auto& row : rows_of(kLemma5)) {
    const OrdinalState theta = parse_state(row[0], agents, z);
    const std::string name =
        theta.is_unanimous() ? theta.prefs[0].format(z) : "bar";
    const OutcomeId target =
        theta.is_unanimous() ? theta.prefs[0].top().front() : 0;
    auto robust = robust_udinf(m, theta);
    auto canon = udinf_at(m, canonical_cardinal(theta));
    headers.push_back(name);
    traces.push_back(robust);

    for (std::size_t k = 1; k <= 2; ++k) {
      for (AgentId i = 0; i < 2; ++i) {
        auto want = strategies_named(m, i, row[1 + 2 * (k - 1) + i], target);
        const auto& r = robust.survivors_at(k).sets[i];
        const auto& c = canon.survivors_at(k).sets[i];
        const std::string where = name + " R" + std::to_string(k) + " " +
                                  agents.label(i);
        if (r != want) {
          res.mismatches.push_back(where + " robust " + fmt(m, i, r) +
                                   " != " + fmt(m, i, want));
        }
        if (c != want) {
          res.mismatches.push_back(where + " canonical " + fmt(m, i, c) +
                                   " != " + fmt(m, i, want));
        }
        if (k == 1) {
          auto pu = possibly_undominated(m, Restriction::full(m), i,
                                         theta.prefs[i]);
          if (!pu.exact || pu.strategies != want) {
            res.mismatches.push_back(where + " possibly undominated " +
                                     fmt(m, i, pu.strategies) +
                                     (pu.exact ? "" : " (inexact)"));
          }
        }
      }
    }
    if (!maps_to(m, robust.fixed_point(), target)) {
      res.mismatches.push_back(name + " fixed point does not map to " +
                               z.label(target));
    }
  }
  res.table = render_trace_table(m, headers, traces, 2);
  res.pass = res.mismatches.empty();
  res.seconds = since(t0);
  return res;
}

ReproduceResult reproduce_theorem4(std::size_t outcome_count) {
  const auto t0 = Clock::now();
  ReproduceResult res;
  if (outcome_count < 4) {
    throw Error(ErrorKind::kInvalidInput, "theorem4 needs at least 4 outcomes");
  }
  if (!golden_intact()) {
    res.mismatches.push_back("golden data checksum mismatch");
    return res;
  }
  const OutcomeSpace z = [&] {
    std::vector<std::string> labels;
    for (std::size_t k = 0; k < outcome_count; ++k) {
      labels.push_back(std::string(1, static_cast<char>('a' + k)));
    }
    return OutcomeSpace(labels);
  }();
  const AgentSet agents({"i1", "i2"});
  // i1: b>a>c>d>...  i2: c>a>b>d>...  f = a
  std::vector<OutcomeId> o1{1, 0, 2}, o2{2, 0, 1};
  for (OutcomeId k = 3; k < outcome_count; ++k) {
    o1.push_back(k);
    o2.push_back(k);
  }
  const OrdinalState bar{{Preference::strict(o1), Preference::strict(o2)}};
  const StarLabels l = star_labels_from_state(bar, 0, 1, 0);
  const Mechanism m = star_mechanism(z, l, agents);

  const auto rows = rows_of(kTheorem4);
  auto group_of = [&](const OrdinalState& th) -> std::size_t {
    if (!th.is_unanimous()) return 0;
    const Preference& p = th.prefs[0];
    const OutcomeId t = p.top().front();
    const bool bc = p.strictly_prefers(l.b, l.c);
    if (t == l.a) return bc ? 1 : 2;
    if (t == l.b) return 3;
    if (t == l.c) return 4;
    return bc ? 5 : 6;
  };

  std::vector<OrdinalState> states{bar};
  for (auto& s : unanimity_strict_states(2, outcome_count)) states.push_back(s);
  std::vector<std::size_t> members(rows.size(), 0), ok(rows.size(), 0);
  for (const auto& th : states) {
    const std::size_t g = group_of(th);
    const OutcomeId top = th.prefs[0].top().front();
    const OutcomeId target = g == 0 ? l.a : top;
    const DeletionTrace t = robust_udinf(m, th);
    bool good = true;
    const std::string name =
        g == 0 ? "bar" : th.prefs[0].format(z);
    for (std::size_t k = 1; k <= 3; ++k) {
      for (AgentId i = 0; i < 2; ++i) {
        auto bound = strategies_named(m, i, rows[g][1 + 2 * (k - 1) + i], top);
        const auto& got = t.survivors_at(k).sets[i];
        if (!subset(got, bound)) {
          good = false;
          res.mismatches.push_back(name + " R" + std::to_string(k) + " " +
                                   agents.label(i) + " " + fmt(m, i, got) +
                                   " not within " + fmt(m, i, bound));
        }
      }
    }
    const Restriction& r3 = t.survivors_at(3);
    for (AgentId i = 0; i < 2; ++i) {
      if (r3.sets[i] != std::vector<StrategyId>{target}) {
        good = false;
        res.mismatches.push_back(name + " UD^3 " + agents.label(i) + " " +
                                 fmt(m, i, r3.sets[i]) + " != {" +
                                 z.label(target) + "}");
      }
    }
    ++members[g];
    if (good) ++ok[g];
  }

  DomainKind kind{DomainTag::kUnanimityStrict, {bar}};
  auto problem = build_problem(kind, agents, z, {{bar, l.a}},
                               {.fill_unanimity_tops = true});
  VerifyOptions vo;
  vo.diagnostics = false;
  const auto report = verify_udinf(m, problem, vo);
  if (report.status != Status::kVerified) {
    res.mismatches.push_back(std::string("UD-infinity verification: ") +
                             status_name(report.status));
  }

  std::vector<std::vector<std::string>> table{{"round"}};
  for (auto& row : rows) table[0].push_back(row[0]);
  for (std::size_t k = 1; k <= 3; ++k) {
    for (AgentId i = 0; i < 2; ++i) {
      std::vector<std::string> line{"R" + std::to_string(k) + " " +
                                    agents.label(i)};
      for (auto& row : rows) {
        const std::string& cell = row[1 + 2 * (k - 1) + i];
        line.push_back(cell == "Z" ? "\u2286 Z" : "\u2286 {" + cell + "}");
      }
      table.push_back(line);
    }
  }
  std::vector<std::string> tally{"states ok"};
  for (std::size_t g = 0; g < rows.size(); ++g) {
    tally.push_back(std::to_string(ok[g]) + "/" + std::to_string(members[g]));
  }
  table.push_back(tally);
  res.table = render_table(table) + "UD-infinity verification (ALL): " +
              status_name(report.status) + "\n";
  res.pass = res.mismatches.empty();
  res.seconds = since(t0);
  return res;
}

ReproduceResult reproduce_theorem5(std::size_t cap, std::size_t samples,
                                   std::uint64_t seed,
                                   TruncationCounts* counts_out) {
  const auto t0 = Clock::now();
  ReproduceResult res;
  if (cap < 3) {
    throw Error(ErrorKind::kInvalidInput, "theorem5 needs a cap of at least 3");
  }
  const OutcomeSpace z({"a", "b", "c"});
  const AgentSet agents({"i1", "i2"});
  const std::size_t nz = z.size();
  const OrdinalState bar = parse_state("i1:b>a>c;i2:c>a>b", agents, z);
  const OutcomeId f_bar = 0;
  const Mechanism m =
      truncated_infinite_mechanism(agents, z, bar, f_bar, {.cap = cap});
  auto enc = [&](OutcomeId a, std::size_t n, OutcomeId h) {
    return encode_announcement({a, n, h}, nz, cap);
  };

  TruncationCounts c;
  std::vector<OrdinalState> states{bar};
  for (auto& s : unanimity_strict_states(2, nz)) states.push_back(s);
  std::vector<std::vector<std::string>> table{
      {"state", "reps", "step fail", "threshold fail", "beyond cap",
       "projection fail"}};
  auto note = [&](std::string msg) {
    if (res.mismatches.size() < 50) res.mismatches.push_back(std::move(msg));
  };

  for (std::size_t si = 0; si < states.size(); ++si) {
    const OrdinalState& th = states[si];
    const std::string name =
        si == 0 ? "bar" : th.prefs[0].format(z);
    const TruncationCounts before = c;
    for (std::size_t t = 0; t <= samples; ++t) {
      const CardinalState u = t == 0 ? canonical_cardinal(th)
                                     : sample_cardinal(th, derive_seed(seed, si, t));
      const std::string rep = name + (t == 0 ? " canonical" : " sample " + std::to_string(t));
      const Restriction ud1 = ud1_at(m, u);
      for (AgentId i = 0; i < 2; ++i) {
        // Strict dominance against every opponent strategy, payoffs cached.
        std::vector<Rational> pay(m.profile_count());
        for (std::size_t k = 0; k < pay.size(); ++k) {
          pay[k] = expected_utility(u.utils[i], m.cell(k));
        }
        auto beats = [&](StrategyId d, StrategyId s) {
          Profile pd(2), ps(2);
          pd[i] = d;
          ps[i] = s;
          for (StrategyId t = 0; t < m.strategy_count(1 - i); ++t) {
            pd[1 - i] = ps[1 - i] = t;
            if (pay[m.cell_index(pd)] <= pay[m.cell_index(ps)]) return false;
          }
          return true;
        };
        const OutcomeId tau = strict_top(th, i);
        const auto allowed = sigma(i, tau, bar, f_bar);
        for (OutcomeId a = 0; a < nz; ++a) {
          for (std::size_t n = 2; n < cap; ++n) {
            for (OutcomeId h = 0; h < nz; ++h) {
              ++c.step_checks;
              if (!beats(enc(a, n + 1, tau), enc(a, n, h))) {
                ++c.step_failures;
                note(rep + " " + agents.label(i) + ": step at " +
                     m.strategy_label(i, enc(a, n, h)));
              }
            }
          }
        }
        const std::size_t nt = n_threshold(u.utils[i], th.prefs[i]);
        const bool within = nt <= cap;
        if (!within) {
          ++c.threshold_beyond_cap;
        } else {
          for (OutcomeId a = 0; a < nz; ++a) {
            if (std::count(allowed.begin(), allowed.end(), a)) continue;
            for (OutcomeId h = 0; h < nz; ++h) {
              ++c.threshold_checks;
              if (!beats(enc(a, nt, tau), enc(a, 1, h))) {
                ++c.threshold_failures;
                note(rep + " " + agents.label(i) + ": threshold n=" +
                     std::to_string(nt) + " at " +
                     m.strategy_label(i, enc(a, 1, h)));
              }
            }
          }
          // Survivors away from the cap are allowed x {1} x Z.
          std::vector<StrategyId> got, want;
          for (StrategyId s : ud1.sets[i]) {
            if (decode_announcement(s, nz, cap).n < cap) got.push_back(s);
          }
          for (OutcomeId a : allowed) {
            for (OutcomeId h = 0; h < nz; ++h) want.push_back(enc(a, 1, h));
          }
          std::sort(want.begin(), want.end());
          ++c.projection_checks;
          if (got != want) {
            ++c.projection_failures;
            note(rep + " " + agents.label(i) + ": survivors below cap " +
                 format_strategy_set(m, i, got));
          }
        }
      }
    }
    table.push_back({name, std::to_string(samples + 1),
                     std::to_string(c.step_failures - before.step_failures),
                     std::to_string(c.threshold_failures - before.threshold_failures),
                     std::to_string(c.threshold_beyond_cap - before.threshold_beyond_cap),
                     std::to_string(c.projection_failures - before.projection_failures)});
  }
  table.push_back({"total", "", std::to_string(c.step_failures) + "/" + std::to_string(c.step_checks),
                   std::to_string(c.threshold_failures) + "/" + std::to_string(c.threshold_checks),
                   std::to_string(c.threshold_beyond_cap),
                   std::to_string(c.projection_failures) + "/" + std::to_string(c.projection_checks)});
  res.table = render_table(table);
  res.pass = c.step_failures == 0 && c.threshold_failures == 0 &&
             c.projection_failures == 0;
  if (counts_out) *counts_out = c;
  res.seconds = since(t0);
  return res;
}

}  // namespace domlab
