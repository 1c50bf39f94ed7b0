#include "domlab/search.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "domlab/dominance.hpp"
#include "json.hpp"

namespace domlab {
namespace {

using Json = nlohmann::ordered_json;

bool is_dictator_vector(const std::vector<OrdinalState>& theta,
                        const std::vector<OutcomeId>& f, AgentId i) {
  for (std::size_t k = 0; k < theta.size(); ++k) {
    const auto& t = theta[k].prefs[i].top();
    if (t.size() != 1 || t.front() != f[k]) return false;
  }
  return true;
}

bool passes(const std::vector<OrdinalState>& theta, std::size_t n,
            const std::vector<OutcomeId>& f, const ScfFilter& filter) {
  if (filter.unanimity_respecting) {
    for (std::size_t k = 0; k < theta.size(); ++k) {
      if (!theta[k].is_unanimous()) continue;
      const auto& t = theta[k].prefs.front().top();
      if (std::find(t.begin(), t.end(), f[k]) == t.end()) return false;
    }
  }
  if (filter.surjective) {
    std::vector<bool> hit(n, false);
    for (OutcomeId z : f) hit[z] = true;
    if (std::find(hit.begin(), hit.end(), false) != hit.end()) return false;
  }
  if (filter.nondictatorial && !theta.empty()) {
    for (AgentId i = 0; i < theta.front().prefs.size(); ++i) {
      if (is_dictator_vector(theta, f, i)) return false;
    }
  }
  return true;
}

std::uint64_t checked_pow(std::uint64_t base, std::uint64_t exp,
                          std::uint64_t cap, const char* what) {
  std::uint64_t out = 1;
  for (std::uint64_t k = 0; k < exp; ++k) {
    if (base != 0 && out > cap / base) {
      throw Error(ErrorKind::kSizeLimit, std::string(what) + " exceeds cap");
    }
    out *= base;
  }
  if (out > cap) throw Error(ErrorKind::kSizeLimit, std::string(what) + " exceeds cap");
  return out;
}

// The single degenerate outcome g maps every profile of r to, if any.
std::optional<OutcomeId> single_value(const Mechanism& m, const Restriction& r) {
  std::optional<OutcomeId> value;
  bool ok = true;
  r.for_each_profile([&](const Profile& p) {
    if (!ok) return;
    auto z = m.outcome(p).degenerate_outcome();
    if (!z || (value && *value != *z)) {
      ok = false;
      return;
    }
    value = z;
  });
  return ok ? value : std::nullopt;
}

bool robust_is_exact(const OrdinalState& theta) {
  return std::all_of(theta.prefs.begin(), theta.prefs.end(),
                     [](const Preference& p) { return p.class_count() <= 2; });
}

// Per-mechanism evaluator; caches the per-agent exact UD sets.
class Evaluator {
 public:
  Evaluator(const Mechanism& m, Notion notion, std::size_t samples,
            std::uint64_t seed, const Caps& caps)
      : m_(m), notion_(notion), samples_(samples), seed_(seed), caps_(caps) {}

  StateValue operator()(const OrdinalState& theta, std::size_t index) {
    if (notion_ == Notion::kUD) return ud(theta, index);
    return udinf(theta, index);
  }

 private:
  StateValue ud(const OrdinalState& theta, std::size_t index) {
    Restriction product;
    bool exact = true;
    try {
      for (AgentId i = 0; i < m_.agent_count(); ++i) {
        const auto& pu = possible(i, theta.prefs[i]);
        exact = exact && pu.exact;
        product.sets.push_back(pu.strategies);
      }
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kTimeout) throw;
      exact = false;
    }
    if (exact) {
      auto v = single_value(m_, product);
      return v ? StateValue{ValueKind::kCertified, *v} : StateValue{};
    }
    return sampled(theta, index);
  }

  StateValue udinf(const OrdinalState& theta, std::size_t index) {
    auto trace = robust_udinf(m_, theta);
    if (auto v = single_value(m_, trace.fixed_point())) {
      return {ValueKind::kCertified, *v};
    }
    if (robust_is_exact(theta)) return {};
    return sampled(theta, index);
  }

  // Canonical plus sampled representations; any inconsistency refutes.
  StateValue sampled(const OrdinalState& theta, std::size_t index) {
    std::optional<OutcomeId> value;
    for (std::size_t t = 0; t <= samples_; ++t) {
      const CardinalState u =
          t == 0 ? canonical_cardinal(theta)
                 : sample_cardinal(theta, derive_seed(seed_, index, t));
      const Restriction r = notion_ == Notion::kUD
                                ? ud1_at(m_, u)
                                : udinf_at(m_, u).fixed_point();
      auto v = single_value(m_, r);
      if (!v || (value && *value != *v)) return {};
      value = v;
    }
    return {ValueKind::kUnresolved, *value};
  }

  const PossiblyUndominated& possible(AgentId i, const Preference& pref) {
    auto key = std::make_pair(i, pref);
    auto it = cache_.find(key);
    if (it == cache_.end()) {
      it = cache_
               .emplace(key, possibly_undominated(m_, Restriction::full(m_), i,
                                                  pref, caps_,
                                                  derive_seed(seed_, i),
                                                  samples_))
               .first;
    }
    return it->second;
  }

  const Mechanism& m_;
  Notion notion_;
  std::size_t samples_;
  std::uint64_t seed_;
  const Caps& caps_;
  std::map<std::pair<AgentId, Preference>, PossiblyUndominated> cache_;
};

// Partial product condition: among assigned cells, a profile whose every
// coordinate can force z (per the assigned degenerate cells) must map to z.
class ProductPruner {
 public:
  ProductPruner(const MechanismStream& stream, const SearchSpace& space)
      : stream_(stream), nz_(space.outcomes), counts_(space.strategies) {
    for (const auto& y : stream.grid()) {
      auto z = y.degenerate_outcome();
      degenerate_.push_back(z ? static_cast<int>(*z) : -1);
    }
    const std::size_t cells = stream.cell_count();
    profiles_.resize(cells);
    for (std::size_t c = 0; c < cells; ++c) {
      std::size_t rest = c;
      profiles_[c].resize(counts_.size());
      for (std::size_t i = counts_.size(); i-- > 0;) {
        profiles_[c][i] = rest % counts_[i];
        rest /= counts_[i];
      }
    }
  }

  // Smallest depth whose prefix is inconsistent, if any.
  std::optional<std::size_t> first_violation() const {
    const std::size_t cells = stream_.cell_count();
    for (std::size_t d = 0; d < cells; ++d) {
      if (!consistent(d + 1)) return d;
    }
    return std::nullopt;
  }

  // Every outcome is forced by some strategy of every agent.
  bool covers_all() const {
    for (std::size_t z = 0; z < nz_; ++z) {
      bool found = false;
      for (std::size_t dgt : stream_.digits()) {
        if (degenerate_[dgt] == static_cast<int>(z)) found = true;
      }
      if (!found) return false;
    }
    return true;
  }

 private:
  bool consistent(std::size_t assigned) const {
    const auto& digits = stream_.digits();
    const std::size_t agents = counts_.size();
    for (std::size_t z = 0; z < nz_; ++z) {
      // known[i] is a bitmask of agent i's strategies that force z.
      std::vector<std::uint64_t> known(agents, 0);
      bool any = false;
      for (std::size_t c = 0; c < assigned; ++c) {
        if (degenerate_[digits[c]] != static_cast<int>(z)) continue;
        any = true;
        for (std::size_t i = 0; i < agents; ++i) {
          known[i] |= std::uint64_t{1} << profiles_[c][i];
        }
      }
      if (!any) continue;
      for (std::size_t c = 0; c < assigned; ++c) {
        bool inside = true;
        for (std::size_t i = 0; i < agents && inside; ++i) {
          inside = (known[i] >> profiles_[c][i]) & 1;
        }
        if (inside && degenerate_[digits[c]] != static_cast<int>(z)) {
          return false;
        }
      }
    }
    return true;
  }

  const MechanismStream& stream_;
  std::size_t nz_;
  std::vector<std::size_t> counts_;
  std::vector<int> degenerate_;
  std::vector<std::vector<std::size_t>> profiles_;
};

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

Json tallies_json(const SearchTallies& t) {
  return Json{{"mechanisms_tested", t.mechanisms_tested},
              {"mechanisms_pruned", t.mechanisms_pruned},
              {"scfs_tested", t.scfs_tested},
              {"counterexamples", t.counterexamples},
              {"unresolved_hits", t.unresolved_hits},
              {"inconclusive_states", t.inconclusive_states}};
}

SearchTallies tallies_from_json(const Json& j) {
  SearchTallies t;
  t.mechanisms_tested = j.at("mechanisms_tested").get<std::uint64_t>();
  t.mechanisms_pruned = j.at("mechanisms_pruned").get<std::uint64_t>();
  t.scfs_tested = j.at("scfs_tested").get<std::uint64_t>();
  t.counterexamples = j.at("counterexamples").get<std::uint64_t>();
  t.unresolved_hits = j.at("unresolved_hits").get<std::uint64_t>();
  t.inconclusive_states = j.at("inconclusive_states").get<std::uint64_t>();
  return t;
}

// Mining of one cursor range.
class Miner {
 public:
  Miner(const SearchSpace& space, const SearchOptions& opt)
      : space_(space),
        opt_(opt),
        stream_(space, opt.caps),
        outcomes_(default_outcomes(space.outcomes)),
        agents_(default_agents(space.agents)) {
    if (space.domain_family()) {
      for (const auto& t : strict_states(space.agents, space.outcomes, opt.caps)) {
        (t.is_unanimous() ? unanimous_ : disagreement_).push_back(t);
      }
      all_states_ = unanimous_;
      all_states_.insert(all_states_.end(), disagreement_.begin(),
                         disagreement_.end());
      scfs_per_mechanism_ =
          count_qualifying_scfs(all_states_, space.outcomes, space.filter, opt.caps);
    } else {
      all_states_ = domain_states(space.domain, space.agents, space.outcomes,
                                  opt.caps);
      scfs_per_mechanism_ =
          count_qualifying_scfs(all_states_, space.outcomes, space.filter, opt.caps);
    }
  }

  SearchReport run() {
    const auto t0 = std::chrono::steady_clock::now();
    SearchReport rep;
    rep.spaces.push_back(space_.descriptor());
    if (opt_.shards == 0 || opt_.shard >= opt_.shards) {
      throw Error(ErrorKind::kInvalidInput, "shard index out of range");
    }
    const unsigned __int128 total = stream_.size();
    rep.cursor_begin =
        static_cast<std::uint64_t>(total * opt_.shard / opt_.shards);
    rep.cursor_end =
        static_cast<std::uint64_t>(total * (opt_.shard + 1) / opt_.shards);
    std::uint64_t cursor = rep.cursor_begin;
    std::vector<std::uint64_t> hit_indices;
    if (opt_.resume && opt_.checkpoint_path) {
      load_checkpoint(rep, cursor, hit_indices);
    }
    for (std::uint64_t idx : hit_indices) rep.hits.push_back(rebuild_hit(idx));

    ProductPruner pruner(stream_, space_);
    std::uint64_t since_checkpoint = 0;
    stream_.seek(cursor);
    while (!stream_.done() && stream_.cursor() < rep.cursor_end) {
      if (opt_.prune_product) {
        if (auto d = pruner.first_violation()) {
          const std::uint64_t from = stream_.cursor();
          stream_.skip_subtree(*d);
          const std::uint64_t to = std::min(stream_.cursor(), rep.cursor_end);
          rep.tallies.mechanisms_pruned += to - from;
          continue;
        }
        if (space_.filter.surjective && !pruner.covers_all()) {
          ++rep.tallies.mechanisms_pruned;
          stream_.advance();
          continue;
        }
      }
      const std::uint64_t idx = stream_.cursor();
      Mechanism m = stream_.current();
      ++rep.tallies.mechanisms_tested;
      rep.tallies.scfs_tested = saturating_add(rep.tallies.scfs_tested, scfs_per_mechanism_);
      auto outcome = evaluate(m, rep.tallies);
      if (outcome == Outcome::kHit) {
        ++rep.tallies.counterexamples;
        rep.hits.push_back(make_hit(idx, std::move(m)));
      } else if (outcome == Outcome::kUnresolvedHit) {
        ++rep.tallies.unresolved_hits;
        rep.unresolved_indices.push_back(idx);
      }
      stream_.advance();
      if (opt_.checkpoint_path && ++since_checkpoint >= opt_.checkpoint_every) {
        since_checkpoint = 0;
        rep.cursor = stream_.cursor();
        save_checkpoint(rep);
      }
      if (outcome == Outcome::kHit && opt_.stop_at_first) break;
    }
    rep.cursor = std::min(stream_.cursor(), rep.cursor_end);
    rep.complete = rep.cursor >= rep.cursor_end;
    if (opt_.checkpoint_path) save_checkpoint(rep);
    rep.seconds = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
    return rep;
  }

 private:
  enum class Outcome { kMiss, kHit, kUnresolvedHit };

  Outcome evaluate(const Mechanism& m, SearchTallies& tallies) {
    Evaluator eval(m, space_.notion, opt_.samples, opt_.seed, opt_.caps);
    auto note = [&](const StateValue& v) {
      if (v.kind == ValueKind::kUnresolved) ++tallies.inconclusive_states;
    };
    if (space_.domain_family()) {
      bool all_certified = true;
      for (std::size_t k = 0; k < unanimous_.size(); ++k) {
        auto v = eval(unanimous_[k], k);
        note(v);
        if (v.kind == ValueKind::kRefuted ||
            v.value != unanimous_[k].prefs.front().top().front()) {
          return Outcome::kMiss;
        }
        all_certified = all_certified && v.kind == ValueKind::kCertified;
      }
      const std::size_t n = space_.agents;
      std::vector<bool> broken_certified(n, false), broken_any(n, false);
      auto all = [](const std::vector<bool>& b) {
        return std::all_of(b.begin(), b.end(), [](bool x) { return x; });
      };
      if (!space_.filter.nondictatorial) {
        broken_certified.assign(n, true);
        broken_any.assign(n, true);
      }
      for (std::size_t k = 0; k < disagreement_.size(); ++k) {
        if (all_certified && all(broken_certified)) break;
        const auto& theta = disagreement_[k];
        auto v = eval(theta, unanimous_.size() + k);
        note(v);
        if (v.kind == ValueKind::kRefuted) continue;
        for (AgentId i = 0; i < n; ++i) {
          if (theta.prefs[i].top().front() == v.value) continue;
          broken_any[i] = true;
          if (v.kind == ValueKind::kCertified) broken_certified[i] = true;
        }
      }
      if (all_certified && all(broken_certified)) return Outcome::kHit;
      return all(broken_any) ? Outcome::kUnresolvedHit : Outcome::kMiss;
    }
    std::vector<OutcomeId> f;
    bool all_certified = true;
    for (std::size_t k = 0; k < all_states_.size(); ++k) {
      auto v = eval(all_states_[k], k);
      note(v);
      if (v.kind == ValueKind::kRefuted) return Outcome::kMiss;
      all_certified = all_certified && v.kind == ValueKind::kCertified;
      f.push_back(v.value);
    }
    if (!passes(all_states_, space_.outcomes, f, space_.filter)) {
      return Outcome::kMiss;
    }
    return all_certified ? Outcome::kHit : Outcome::kUnresolvedHit;
  }

  // The implemented SCF on the largest domain where every state is
  // certified, re-verified standalone.
  Counterexample make_hit(std::uint64_t idx, Mechanism m) {
    Evaluator eval(m, space_.notion, opt_.samples, opt_.seed, opt_.caps);
    DomainKind kind = space_.domain;
    ScfTable table;
    if (space_.domain_family()) {
      for (std::size_t k = 0; k < unanimous_.size(); ++k) {
        table.push_back({unanimous_[k], eval(unanimous_[k], k).value});
      }
      for (std::size_t k = 0; k < disagreement_.size(); ++k) {
        auto v = eval(disagreement_[k], unanimous_.size() + k);
        if (v.kind != ValueKind::kCertified) continue;
        kind.extra_states.push_back(disagreement_[k]);
        table.push_back({disagreement_[k], v.value});
      }
    } else {
      for (std::size_t k = 0; k < all_states_.size(); ++k) {
        table.push_back({all_states_[k], eval(all_states_[k], k).value});
      }
    }
    Counterexample hit;
    hit.index = idx;
    hit.problem = build_problem(kind, agents_, outcomes_, table,
                                {.require_strict = false});
    VerifyOptions vo;
    vo.seed = opt_.seed;
    vo.samples = opt_.reverify_samples;
    vo.caps = opt_.caps;
    hit.reverification = verify(m, hit.problem, space_.notion, vo);
    if (hit.reverification.status != Status::kVerified) {
      throw std::logic_error("mined counterexample failed re-verification");
    }
    hit.mechanism = std::move(m);
    return hit;
  }

  Counterexample rebuild_hit(std::uint64_t idx) {
    return make_hit(idx, stream_.at(idx));
  }

  void save_checkpoint(const SearchReport& rep) const {
    Json hits = Json::array();
    for (const auto& h : rep.hits) hits.push_back(h.index);
    Json j{{"space", space_.descriptor()},
           {"hash", space_.hash()},
           {"shard", opt_.shard},
           {"shards", opt_.shards},
           {"cursor", rep.cursor},
           {"end", rep.cursor_end},
           {"tallies", tallies_json(rep.tallies)},
           {"hits", hits},
           {"unresolved", rep.unresolved_indices}};
    const std::string tmp = *opt_.checkpoint_path + ".tmp";
    {
      std::ofstream out(tmp);
      out << j.dump(2) << "\n";
      if (!out) throw std::runtime_error("cannot write checkpoint " + tmp);
    }
    std::rename(tmp.c_str(), opt_.checkpoint_path->c_str());
  }

  void load_checkpoint(SearchReport& rep, std::uint64_t& cursor,
                       std::vector<std::uint64_t>& hits) const {
    std::ifstream in(*opt_.checkpoint_path);
    if (!in) return;
    Json j;
    try {
      j = Json::parse(in);
    } catch (const Json::exception& e) {
      throw Error(ErrorKind::kInvalidInput,
                  std::string("unreadable checkpoint: ") + e.what());
    }
    if (j.at("hash").get<std::uint64_t>() != space_.hash() ||
        j.at("shard").get<std::size_t>() != opt_.shard ||
        j.at("shards").get<std::size_t>() != opt_.shards) {
      throw Error(ErrorKind::kInvalidInput,
                  "checkpoint belongs to a different space or shard");
    }
    cursor = j.at("cursor").get<std::uint64_t>();
    rep.tallies = tallies_from_json(j.at("tallies"));
    hits = j.at("hits").get<std::vector<std::uint64_t>>();
    rep.unresolved_indices =
        j.at("unresolved").get<std::vector<std::uint64_t>>();
  }

  const SearchSpace& space_;
  const SearchOptions& opt_;
  MechanismStream stream_;
  OutcomeSpace outcomes_;
  AgentSet agents_;
  std::vector<OrdinalState> unanimous_;
  std::vector<OrdinalState> disagreement_;
  std::vector<OrdinalState> all_states_;
  std::uint64_t scfs_per_mechanism_ = 0;
};

}  // namespace

std::vector<Scf> enumerate_scfs(const std::vector<OrdinalState>& theta,
                                std::size_t outcome_count,
                                const ScfFilter& filter, const Caps& caps) {
  checked_pow(outcome_count, theta.size(), caps.max_scfs, "SCF count");
  std::vector<Scf> out;
  std::vector<OutcomeId> f(theta.size(), 0);
  while (true) {
    if (passes(theta, outcome_count, f, filter)) out.push_back({theta, f});
    std::size_t k = f.size();
    while (true) {
      if (k == 0) return out;
      --k;
      if (++f[k] < outcome_count) break;
      f[k] = 0;
    }
  }
}

std::uint64_t count_qualifying_scfs(const std::vector<OrdinalState>& theta,
                                    std::size_t outcome_count,
                                    const ScfFilter& filter,
                                    const Caps& caps) {
  const bool all_strict = std::all_of(theta.begin(), theta.end(),
                                      [](const auto& t) { return t.is_strict(); });
  bool has_unanimity = false;
  if (all_strict && !theta.empty()) {
    has_unanimity = true;
    for (const auto& u : unanimity_strict_states(theta.front().prefs.size(),
                                                 outcome_count, caps)) {
      if (std::find(theta.begin(), theta.end(), u) == theta.end()) {
        has_unanimity = false;
      }
    }
  }
  if (!(filter.unanimity_respecting && has_unanimity)) {
    return enumerate_scfs(theta, outcome_count, filter, caps).size();
  }
  // Unanimity fixes f there and makes it surjective; the rest is free.
  std::size_t free = 0;
  for (const auto& t : theta) free += t.is_unanimous() ? 0 : 1;
  std::uint64_t total =
      checked_pow(outcome_count, free, ~std::uint64_t{0}, "SCF count");
  if (filter.nondictatorial) {
    std::set<std::vector<OutcomeId>> dictators;
    for (AgentId i = 0; i < theta.front().prefs.size(); ++i) {
      std::vector<OutcomeId> v;
      for (const auto& t : theta) {
        if (!t.is_unanimous()) v.push_back(t.prefs[i].top().front());
      }
      dictators.insert(v);
    }
    total -= dictators.size();
  }
  return total;
}

std::string SearchSpace::descriptor() const {
  std::ostringstream os;
  os << "agents=" << agents << ";outcomes=" << outcomes << ";strategies=";
  for (std::size_t i = 0; i < strategies.size(); ++i) {
    os << (i ? "x" : "") << strategies[i];
  }
  os << ";grid=" << (deterministic_only ? std::string("det") : std::to_string(grid))
     << ";notion=" << notion_name(notion)
     << ";domain=" << (domain_family() ? "FAMILY" : domain_tag_name(domain.tag));
  if (!domain.extra_states.empty()) {
    const auto z = default_outcomes(outcomes);
    const auto a = default_agents(agents);
    os << "[";
    for (std::size_t k = 0; k < domain.extra_states.size(); ++k) {
      os << (k ? "|" : "") << domain.extra_states[k].format(a, z);
    }
    os << "]";
  }
  os << ";filter=" << filter.surjective << filter.nondictatorial
     << filter.unanimity_respecting;
  return os.str();
}

std::uint64_t SearchSpace::hash() const { return fnv1a(descriptor()); }

void SearchSpace::validate(const Caps& caps) const {
  if (agents < 2 || strategies.size() != agents) {
    throw Error(ErrorKind::kInvalidInput,
                "one strategy count per agent is required");
  }
  if (agents > caps.max_agents) {
    throw Error(ErrorKind::kSizeLimit, "too many agents");
  }
  if (outcomes < 2 || outcomes > caps.max_outcomes) {
    throw Error(ErrorKind::kSizeLimit, "outcome count out of range");
  }
  for (std::size_t s : strategies) {
    if (s < 1 || s > 64) {
      throw Error(ErrorKind::kInvalidInput, "strategy counts must be 1..64");
    }
  }
  if (!deterministic_only && grid < 1) {
    throw Error(ErrorKind::kInvalidInput, "grid denominator must be positive");
  }
}

OutcomeSpace default_outcomes(std::size_t n) {
  std::vector<std::string> labels;
  for (std::size_t k = 0; k < n; ++k) {
    labels.push_back(k < 26 ? std::string(1, static_cast<char>('a' + k))
                            : "o" + std::to_string(k));
  }
  return OutcomeSpace(labels);
}

AgentSet default_agents(std::size_t n) {
  std::vector<std::string> labels;
  for (std::size_t k = 0; k < n; ++k) labels.push_back("i" + std::to_string(k + 1));
  return AgentSet(labels);
}

std::vector<Lottery> grid_lotteries(std::size_t n, std::optional<std::size_t> q) {
  std::vector<Lottery> out;
  if (!q) {
    for (OutcomeId z = 0; z < n; ++z) out.push_back(Lottery::degenerate(n, z));
    return out;
  }
  const auto den = static_cast<std::int64_t>(*q);
  std::vector<std::size_t> parts(n, 0);
  // Descending lexicographic compositions of q into n parts.
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t k,
                                                          std::size_t left) {
    if (k + 1 == n) {
      parts[k] = left;
      std::vector<Rational> masses;
      for (std::size_t p : parts) {
        masses.push_back(Rational(static_cast<std::int64_t>(p), den));
      }
      out.push_back(Lottery::from_masses(std::move(masses)));
      return;
    }
    for (std::size_t v = left + 1; v-- > 0;) {
      parts[k] = v;
      rec(k + 1, left - v);
    }
  };
  rec(0, *q);
  return out;
}

MechanismStream::MechanismStream(const SearchSpace& space, const Caps& caps)
    : outcomes_(default_outcomes(space.outcomes)),
      agents_(default_agents(space.agents)) {
  space.validate(caps);
  for (std::size_t i = 0; i < space.agents; ++i) {
    std::vector<std::string> l;
    for (std::size_t s = 0; s < space.strategies[i]; ++s) {
      l.push_back("s" + std::to_string(s + 1));
    }
    labels_.push_back(std::move(l));
  }
  grid_ = grid_lotteries(space.outcomes,
                         space.deterministic_only
                             ? std::nullopt
                             : std::optional<std::size_t>(space.grid));
  cells_ = 1;
  for (std::size_t s : space.strategies) cells_ *= s;
  size_ = checked_pow(grid_.size(), cells_, caps.max_mechanisms,
                      "mechanism count");
  digits_.assign(cells_, 0);
}

void MechanismStream::set_digits() {
  std::uint64_t rest = cursor_;
  const std::uint64_t radix = grid_.size();
  for (std::size_t c = cells_; c-- > 0;) {
    digits_[c] = rest % radix;
    rest /= radix;
  }
}

void MechanismStream::seek(std::uint64_t cursor) {
  cursor_ = std::min(cursor, size_);
  set_digits();
}

void MechanismStream::advance() {
  ++cursor_;
  for (std::size_t c = cells_; c-- > 0;) {
    if (++digits_[c] < grid_.size()) return;
    digits_[c] = 0;
  }
}

void MechanismStream::skip_subtree(std::size_t depth) {
  std::uint64_t block = 1;
  for (std::size_t c = depth + 1; c < cells_; ++c) block *= grid_.size();
  seek((cursor_ / block + 1) * block);
}

Mechanism MechanismStream::current() const {
  std::vector<Lottery> cells;
  cells.reserve(cells_);
  for (std::size_t d : digits_) cells.push_back(grid_[d]);
  return Mechanism(outcomes_, agents_, labels_, std::move(cells));
}

Mechanism MechanismStream::at(std::uint64_t cursor) const {
  MechanismStream copy = *this;
  copy.seek(cursor);
  return copy.current();
}

std::uint64_t MechanismStream::index_of(const Mechanism& m) const {
  if (m.outcomes().size() != outcomes_.size() ||
      m.agent_count() != agents_.size()) {
    throw Error(ErrorKind::kInvalidInput, "mechanism shape differs from space");
  }
  for (AgentId i = 0; i < m.agent_count(); ++i) {
    if (m.strategy_count(i) != labels_[i].size()) {
      throw Error(ErrorKind::kInvalidInput,
                  "strategy counts differ from the space");
    }
  }
  std::uint64_t idx = 0;
  for (const auto& y : m.cells()) {
    auto it = std::find(grid_.begin(), grid_.end(), y);
    if (it == grid_.end()) {
      throw Error(ErrorKind::kInvalidInput, "cell lottery is off the grid");
    }
    idx = idx * grid_.size() + static_cast<std::uint64_t>(it - grid_.begin());
  }
  return idx;
}

std::vector<Mechanism> enumerate_mechanisms(const SearchSpace& space,
                                            const Caps& caps) {
  MechanismStream stream(space, caps);
  std::vector<Mechanism> out;
  for (; !stream.done(); stream.advance()) out.push_back(stream.current());
  return out;
}

SearchTallies& SearchTallies::operator+=(const SearchTallies& o) {
  mechanisms_tested += o.mechanisms_tested;
  mechanisms_pruned += o.mechanisms_pruned;
  scfs_tested = saturating_add(scfs_tested, o.scfs_tested);
  counterexamples += o.counterexamples;
  unresolved_hits += o.unresolved_hits;
  inconclusive_states += o.inconclusive_states;
  return *this;
}

StateValue evaluate_state(const Mechanism& m, const OrdinalState& theta,
                          Notion notion, std::size_t samples,
                          std::uint64_t seed, const Caps& caps) {
  Evaluator eval(m, notion, samples, seed, caps);
  return eval(theta, 0);
}

SearchReport mine(const SearchSpace& space, const SearchOptions& options) {
  Miner miner(space, options);
  return miner.run();
}

SearchReport mine_parallel(const SearchSpace& space, std::size_t jobs,
                           SearchOptions options) {
  if (jobs <= 1) return mine(space, options);
  std::vector<SearchReport> parts(jobs);
  std::vector<SearchOptions> opts(jobs, options);
  std::vector<std::thread> threads;
  std::vector<std::exception_ptr> errors(jobs);
  for (std::size_t k = 0; k < jobs; ++k) {
    opts[k].shard = k;
    opts[k].shards = jobs;
    if (options.checkpoint_path) {
      opts[k].checkpoint_path = *options.checkpoint_path + "." + std::to_string(k);
    }
    threads.emplace_back([&, k] {
      try {
        parts[k] = mine(space, opts[k]);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return merge_reports(std::move(parts));
}

SearchReport merge_reports(std::vector<SearchReport> parts) {
  SearchReport out;
  if (parts.empty()) return out;
  std::sort(parts.begin(), parts.end(), [](const auto& a, const auto& b) {
    return a.cursor_begin < b.cursor_begin;
  });
  out.spaces = parts.front().spaces;
  out.cursor_begin = parts.front().cursor_begin;
  out.cursor_end = parts.front().cursor_end;
  out.cursor = parts.front().cursor;
  out.complete = true;
  for (auto& p : parts) {
    for (const auto& s : p.spaces) {
      if (std::find(out.spaces.begin(), out.spaces.end(), s) == out.spaces.end()) {
        out.spaces.push_back(s);
      }
    }
    out.tallies += p.tallies;
    for (auto& h : p.hits) out.hits.push_back(std::move(h));
    out.unresolved_indices.insert(out.unresolved_indices.end(),
                                  p.unresolved_indices.begin(),
                                  p.unresolved_indices.end());
    out.cursor_begin = std::min(out.cursor_begin, p.cursor_begin);
    out.cursor_end = std::max(out.cursor_end, p.cursor_end);
    out.cursor = std::max(out.cursor, p.cursor);
    out.complete = out.complete && p.complete;
    out.seconds = std::max(out.seconds, p.seconds);
  }
  std::stable_sort(out.hits.begin(), out.hits.end(),
                   [](const auto& a, const auto& b) { return a.index < b.index; });
  std::sort(out.unresolved_indices.begin(), out.unresolved_indices.end());
  return out;
}

}  // namespace domlab
