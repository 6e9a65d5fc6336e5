#include "evodyn/game_tree.hpp"

#include <set>
#include <stdexcept>

#include "doctest.h"

using namespace evodyn;

TEST_CASE("example game validates and has the expected shape") {
  GameTree g = build_example_game();
  CHECK(validate_game(g).ok());
  CHECK(g.num_nodes() == 9);
  int decisions = 0, terminals = 0;
  std::set<int> infosets;
  for (const auto& n : g.nodes) {
    if (n.kind == NodeKind::decision) {
      ++decisions;
      infosets.insert(n.infoset);
    } else {
      ++terminals;
    }
  }
  CHECK(decisions == 4);
  CHECK(terminals == 5);
  CHECK(infosets == std::set<int>{0, 1, 2, 3});
  CHECK(full_plan_count(g, 0) == 8);
  CHECK(full_plan_count(g, 1) == 2);
}

TEST_CASE("validation catches structural defects") {
  SUBCASE("dangling child") {
    GameTree g = build_example_game();
    g.nodes[0].children[0] = 99;
    CHECK_FALSE(validate_game(g).ok());
  }
  SUBCASE("node reachable twice") {
    GameTree g = build_example_game();
    g.nodes[0].children[0] = g.nodes[0].children[1];
    CHECK_FALSE(validate_game(g).ok());
  }
  SUBCASE("infoset shared across agents") {
    GameTree g = build_example_game();
    for (auto& n : g.nodes)
      if (n.kind == NodeKind::decision && n.agent == 1) n.infoset = 0;
    CHECK_FALSE(validate_game(g).ok());
  }
  SUBCASE("action labels differ within an infoset") {
    GameTree g = build_example_game();
    // merge 1.2 and 1.3 into one infoset but keep their distinct labels
    int last = -1;
    for (auto& n : g.nodes)
      if (n.kind == NodeKind::decision && n.agent == 0 && n.infoset >= 2) {
        n.infoset = 2;
        last = static_cast<int>(&n - g.nodes.data());
      }
    REQUIRE(last >= 0);
    CHECK_FALSE(validate_game(g).ok());
  }
  SUBCASE("perfect recall violation") {
    GameTree g = build_example_game();
    // merge the root with 1.2: same agent and labels, but the own-action
    // histories differ (empty vs R1)
    for (auto& n : g.nodes)
      if (n.kind == NodeKind::decision && n.agent == 0 && n.infoset == 2) {
        n.infoset = 0;
        n.actions = g.nodes[static_cast<std::size_t>(g.root)].actions;
      }
    CHECK_FALSE(validate_game(g).ok());
  }
}

TEST_CASE("own action histories") {
  GameTree g = build_example_game();
  // node named 1.2 sits after own action R1 (infoset 0, action index 1)
  int n12 = -1;
  for (int i = 0; i < g.num_nodes(); ++i)
    if (g.node(i).name == "1.2") n12 = i;
  REQUIRE(n12 >= 0);
  auto h1 = own_action_history(g, n12, 0);
  REQUIRE(h1.size() == 1);
  CHECK(h1[0] == std::pair<int, int>{0, 1});
  auto h2 = own_action_history(g, n12, 1);
  REQUIRE(h2.size() == 1);
  CHECK(h2[0].second == 0);  // agent 2 played l
}

TEST_CASE("random games are deterministic, valid and respect the plan cap") {
  for (int depth = 1; depth <= 4; ++depth)
    for (int branching = 2; branching <= 3; ++branching)
      for (double merge : {0.0, 0.5}) {
        RandomGameSpec spec;
        spec.depth = depth;
        spec.branching = branching;
        spec.merge_prob = merge;
        spec.payoff_min = 1.0;
        spec.payoff_max = 10.0;
        spec.seed = 1000 + static_cast<std::uint64_t>(depth * 10 + branching);
        spec.plan_cap = 1'000'000'000'000'000'000LL;  // plans are never enumerated here
        GameTree a = random_game(spec);
        GameTree b = random_game(spec);
        CHECK(validate_game(a).ok());
        REQUIRE(a.num_nodes() == b.num_nodes());
        for (int i = 0; i < a.num_nodes(); ++i) {
          CHECK(a.node(i).infoset == b.node(i).infoset);
          CHECK(a.node(i).payoffs == b.node(i).payoffs);
        }
      }
  RandomGameSpec big;
  big.depth = 8;
  big.branching = 3;
  big.plan_cap = 1000;
  CHECK_THROWS_AS(random_game(big), std::invalid_argument);
}

TEST_CASE("benchmark family counts") {
  for (int units : {1, 3, 5}) {
    GameTree g = bench_family_game(units, 2, 9);
    CHECK(validate_game(g).ok());
    CHECK(g.num_nodes() == 1 + units + 2 * units);
    CHECK(full_plan_count(g, 0) == (1LL << units));
    CHECK(full_plan_count(g, 1) == units);
    for (const auto& n : g.nodes)
      if (n.kind == NodeKind::terminal) {
        CHECK(n.payoffs[0] >= 1.0);
        CHECK(n.payoffs[0] <= 2.0);
      }
  }
}
