#include <cstdio>
#include <filesystem>

#include "doctest.h"
#include "domlab/search.hpp"
#include "fixtures.hpp"

using namespace domlab;

namespace {

SearchSpace small(std::size_t nz, std::size_t s1, std::size_t s2,
                  std::size_t q, Notion notion) {
  SearchSpace sp;
  sp.outcomes = nz;
  sp.strategies = {s1, s2};
  sp.grid = q;
  sp.notion = notion;
  return sp;
}

}  // namespace

TEST_CASE("enumerate_scfs") {
  auto theta = strict_states(2, 2);
  auto qualifying = enumerate_scfs(theta, 2, {});
  CHECK(qualifying.size() == 2);
  CHECK(enumerate_scfs(theta, 2, {false, false, false}).size() == 16);
  for (const auto& f : enumerate_scfs(theta, 2, {false, true, false})) {
    for (AgentId i = 0; i < 2; ++i) {
      bool dictator = true;
      for (std::size_t k = 0; k < theta.size(); ++k) {
        dictator = dictator && theta[k].prefs[i].top().front() == f.choice[k];
      }
      CHECK_FALSE(dictator);
    }
  }
  Caps tight;
  tight.max_scfs = 10;
  try {
    enumerate_scfs(theta, 2, {}, tight);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kSizeLimit);
  }
  CHECK(count_qualifying_scfs(theta, 2, {}) == 2);
  auto hat_domain = fx::hat_problem().theta();
  CHECK(count_qualifying_scfs(hat_domain, 3, {}) ==
        enumerate_scfs(hat_domain, 3, {}).size());
}

TEST_CASE("grid lotteries") {
  CHECK(grid_lotteries(2, 2).size() == 3);
  CHECK(grid_lotteries(3, 4).size() == 15);
  CHECK(grid_lotteries(3, 4).front().is_degenerate_on(0));
  CHECK(grid_lotteries(3, std::nullopt).size() == 3);
}

TEST_CASE("mechanism stream counts and cursor") {
  CHECK(enumerate_mechanisms(small(2, 2, 2, 2, Notion::kUD)).size() == 81);
  auto det = small(2, 2, 2, 4, Notion::kUD);
  det.deterministic_only = true;
  CHECK(enumerate_mechanisms(det).size() == 16);

  auto sp = small(2, 2, 2, 2, Notion::kUD);
  auto all = enumerate_mechanisms(sp);
  MechanismStream s(sp);
  s.seek(40);
  for (std::size_t k = 40; k < all.size(); ++k, s.advance()) {
    REQUIRE_FALSE(s.done());
    CHECK(s.current() == all[k]);
    CHECK(s.index_of(all[k]) == k);
  }
  CHECK(s.done());
  s.seek(9);
  s.skip_subtree(1);
  CHECK(s.cursor() == 18);
}

TEST_CASE("hat mechanism lies in the q = 4 grid") {
  MechanismStream s(small(3, 3, 3, 4, Notion::kUDInf));
  auto idx = s.index_of(fx::hat());
  auto back = s.at(idx);
  CHECK(back.cells() == fx::hat().cells());
}

TEST_CASE("state evaluation") {
  auto theta = fx::state("i1:b>a>c;i2:c>a>b");
  auto v = evaluate_state(fx::hat(), theta, Notion::kUDInf, 5, 1);
  CHECK(v.kind == ValueKind::kCertified);
  CHECK(v.value == 0);
  CHECK(evaluate_state(fx::hat(), theta, Notion::kUD, 5, 1).kind ==
        ValueKind::kRefuted);
}

TEST_CASE("small mines find nothing") {
  for (auto notion : {Notion::kUD, Notion::kUDInf}) {
    auto rep = mine(small(2, 2, 2, 2, notion));
    CHECK(rep.complete);
    CHECK(rep.tallies.mechanisms_tested == 81);
    CHECK(rep.tallies.counterexamples == 0);
    CHECK(rep.tallies.scfs_tested == 81 * 2);
  }
}

TEST_CASE("shards merge to the monolithic run") {
  auto sp = small(2, 2, 3, 2, Notion::kUDInf);
  auto whole = mine(sp);
  std::vector<SearchReport> parts;
  for (std::size_t k = 0; k < 3; ++k) {
    SearchOptions o;
    o.shard = k;
    o.shards = 3;
    parts.push_back(mine(sp, o));
  }
  auto merged = merge_reports(parts);
  CHECK(merged.tallies == whole.tallies);
  CHECK(merged.complete);
  CHECK(mine_parallel(sp, 2).tallies == whole.tallies);
}

TEST_CASE("checkpoint and resume") {
  auto sp = small(2, 2, 2, 3, Notion::kUD);
  const auto path =
      (std::filesystem::temp_directory_path() / "domlab_ckpt_test.json")
          .string();
  std::remove(path.c_str());
  SearchOptions first;
  first.checkpoint_path = path;
  first.checkpoint_every = 50;
  first.shards = 2;
  auto half = mine(sp, first);
  SearchOptions again = first;
  again.resume = true;
  auto resumed = mine(sp, again);
  CHECK(resumed.tallies == half.tallies);
  std::remove(path.c_str());
}

TEST_CASE("rediscovery on a narrowed space") {
  // Fix the hat mechanism's diagonal and search only over cell (i1=a, i2=b).
  auto sp = small(3, 3, 3, 4, Notion::kUDInf);
  MechanismStream s(sp);
  const auto hat_idx = s.index_of(fx::hat());
  SearchOptions o;
  // Shard so that the hat lands inside a small window.
  const std::uint64_t total = s.size();
  o.shards = total / 15;
  o.shard = hat_idx / 15;
  o.stop_at_first = true;
  auto rep = mine(sp, o);
  REQUIRE(rep.tallies.counterexamples >= 1);
  const auto& hit = rep.hits.front();
  CHECK(hit.reverification.status == Status::kVerified);
  CHECK_FALSE(find_dictator(hit.problem).has_value());
}
