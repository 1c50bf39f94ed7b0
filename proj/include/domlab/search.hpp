#pragma once

// Exhaustive enumeration of small discretized mechanism spaces. Cell
// lotteries range over a grid with masses in multiples of 1/q (or over
// degenerate lotteries only), and every mechanism is checked against every
// qualifying social choice function.
//
// A mechanism can implement at most one SCF on a given domain: at each
// state the surviving set must map to a single degenerate lottery, which
// fixes f there. Mining therefore evaluates each mechanism state by state
// and reads the implemented SCF off the result.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "domlab/core.hpp"
#include "domlab/domains.hpp"
#include "domlab/verify.hpp"

namespace domlab {

struct ScfFilter {
  bool surjective = true;
  bool nondictatorial = true;
  bool unanimity_respecting = true;
};

// All f: theta -> Z passing the filter, in lexicographic order of the choice
// vector. Throws kSizeLimit when |Z|^|theta| exceeds caps.max_scfs.
std::vector<Scf> enumerate_scfs(const std::vector<OrdinalState>& theta,
                                std::size_t outcome_count,
                                const ScfFilter& filter,
                                const Caps& caps = default_caps());

// Number of SCFs passing the filter. Closed form when the domain holds every
// strict unanimity state and unanimity is required; enumeration otherwise.
std::uint64_t count_qualifying_scfs(const std::vector<OrdinalState>& theta,
                                    std::size_t outcome_count,
                                    const ScfFilter& filter,
                                    const Caps& caps = default_caps());

struct SearchSpace {
  std::size_t agents = 2;
  std::size_t outcomes = 2;
  std::vector<std::size_t> strategies{2, 2};
  std::size_t grid = 4;  // q
  bool deterministic_only = false;
  Notion notion = Notion::kUD;
  // UNANIMITY_STRICT without extra states stands for the whole family of
  // domains between the strict unanimity states and all strict states.
  DomainKind domain;
  ScfFilter filter;

  bool domain_family() const {
    return domain.tag == DomainTag::kUnanimityStrict &&
           domain.extra_states.empty();
  }
  // Canonical one-line description; the checkpoint hash is taken over it.
  std::string descriptor() const;
  std::uint64_t hash() const;
  // Throws kInvalidInput / kSizeLimit.
  void validate(const Caps& caps = default_caps()) const;
};

OutcomeSpace default_outcomes(std::size_t n);  // a, b, c, ...
AgentSet default_agents(std::size_t n);        // i1, i2, ...

// Compositions of q into |Z| parts as lotteries, lexicographically
// descending in the mass vector; degenerate lotteries when q is absent.
std::vector<Lottery> grid_lotteries(std::size_t outcome_count,
                                    std::optional<std::size_t> q);

// Mixed-radix stream over cell assignments, cell 0 most significant.
class MechanismStream {
 public:
  explicit MechanismStream(const SearchSpace& space,
                           const Caps& caps = default_caps());

  std::uint64_t size() const { return size_; }
  std::uint64_t cursor() const { return cursor_; }
  bool done() const { return cursor_ >= size_; }
  void seek(std::uint64_t cursor);
  // Builds the mechanism at the cursor without advancing.
  Mechanism current() const;
  Mechanism at(std::uint64_t cursor) const;
  void advance();
  // Moves past every mechanism sharing digits 0..depth with the current one.
  void skip_subtree(std::size_t depth);

  const std::vector<std::size_t>& digits() const { return digits_; }
  const std::vector<Lottery>& grid() const { return grid_; }
  std::size_t cell_count() const { return cells_; }
  // Inverse of at(); throws kInvalidInput when m lies outside the space.
  std::uint64_t index_of(const Mechanism& m) const;

 private:
  void set_digits();

  OutcomeSpace outcomes_;
  AgentSet agents_;
  std::vector<std::vector<std::string>> labels_;
  std::vector<Lottery> grid_;
  std::size_t cells_ = 0;
  std::uint64_t size_ = 0;
  std::uint64_t cursor_ = 0;
  std::vector<std::size_t> digits_;
};

// Collects every mechanism of a (small) space.
std::vector<Mechanism> enumerate_mechanisms(const SearchSpace& space,
                                            const Caps& caps = default_caps());

enum class ValueKind { kCertified, kUnresolved, kRefuted };

// What a mechanism does at one state for the chosen notion: certified
// value z, a value z consistent with every tried representation but not
// certified, or refuted for every candidate f(theta).
struct StateValue {
  ValueKind kind = ValueKind::kRefuted;
  OutcomeId value = 0;
};

struct SearchOptions {
  std::uint64_t seed = kDefaultSeed;
  // Representations tried on states that robust deletion leaves open.
  std::size_t samples = 20;
  // Shard k of n over the cursor range.
  std::size_t shard = 0;
  std::size_t shards = 1;
  // Skip subtrees whose assigned cells already violate the S^z product
  // condition. Only sound when a hit must also satisfy that condition.
  bool prune_product = false;
  bool stop_at_first = false;
  std::optional<std::string> checkpoint_path;
  std::uint64_t checkpoint_every = 200'000;
  bool resume = false;
  // Re-verification sample budget for each hit.
  std::size_t reverify_samples = 200;
  Caps caps = default_caps();
};

struct Counterexample {
  std::uint64_t index = 0;
  Mechanism mechanism;
  ImplementationProblem problem;
  VerificationReport reverification;
};

// The SCF tally saturates: the family domain at |Z| = 3 alone allows about
// 3^30 choice functions per mechanism.
inline std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b) {
  return a > ~std::uint64_t{0} - b ? ~std::uint64_t{0} : a + b;
}

struct SearchTallies {
  std::uint64_t mechanisms_tested = 0;
  std::uint64_t mechanisms_pruned = 0;
  std::uint64_t scfs_tested = 0;  // qualifying SCFs x mechanisms tested, saturating
  std::uint64_t counterexamples = 0;
  std::uint64_t unresolved_hits = 0;
  std::uint64_t inconclusive_states = 0;

  SearchTallies& operator+=(const SearchTallies& o);
  friend bool operator==(const SearchTallies&, const SearchTallies&) = default;
};

struct SearchReport {
  std::vector<std::string> spaces;
  SearchTallies tallies;
  std::vector<Counterexample> hits;
  std::vector<std::uint64_t> unresolved_indices;
  std::uint64_t cursor_begin = 0;
  std::uint64_t cursor_end = 0;
  std::uint64_t cursor = 0;  // next unvisited position
  bool complete = false;
  double seconds = 0;
};

// Value of a mechanism at one state.
StateValue evaluate_state(const Mechanism& m, const OrdinalState& theta,
                          Notion notion, std::size_t samples,
                          std::uint64_t seed, const Caps& caps = default_caps());

SearchReport mine(const SearchSpace& space, const SearchOptions& options = {});

// Runs every shard in its own thread and merges.
SearchReport mine_parallel(const SearchSpace& space, std::size_t jobs,
                           SearchOptions options = {});

// Concatenates shard reports: tallies add, hits are ordered by index.
SearchReport merge_reports(std::vector<SearchReport> parts);

}  // namespace domlab
