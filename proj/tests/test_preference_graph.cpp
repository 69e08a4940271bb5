#include <doctest.h>

#include <random>
#include <set>

#include "sinkatlas/corpus.hpp"
#include "sinkatlas/preference_graph.hpp"
#include "test_util.hpp"

using namespace sinkatlas;

namespace {

Game coordination_2x2() {
  // Payoff 1 on the diagonal for both players, 0 off it, perturbed so no
  // comparable pair ties.
  return Game({2, 2}, {{1, 0.1, 0, 1.1}, {1, 0, 0.1, 1.1}});
}

/// Reachability oracle: Floyd-Warshall transitive closure.
std::vector<std::vector<bool>> closure(const PreferenceGraph& pg, int n) {
  std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
  for (int i = 0; i < n; ++i) reach[i][i] = true;
  for (const Arc& a : pg.arcs()) reach[a.from][a.to] = true;
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (reach[i][k] && reach[k][j]) reach[i][j] = true;
      }
    }
  }
  return reach;
}

}  // namespace

TEST_CASE("2x2 coordination game: four arcs into the two diagonal profiles") {
  Game g = coordination_2x2();
  PreferenceGraph pg = build_graph(g);
  CHECK(pg.arcs().size() == 4);
  ProfileId d0 = g.flatten(Profile{0, 0});
  ProfileId d1 = g.flatten(Profile{1, 1});
  for (const Arc& a : pg.arcs()) {
    CHECK((a.to == d0 || a.to == d1));
  }
  CHECK(pg.is_sink(d0));
  CHECK(pg.is_sink(d1));
}

TEST_CASE("comparable pair count matches the closed form") {
  std::mt19937_64 rng(3);
  for (auto shape : {std::vector<int>{2, 2}, {3, 3}, {4, 2}, {2, 2, 3}}) {
    Game g = random_game(shape, RandomGameClass::Generic, rng());
    PreferenceGraph pg = build_graph(g);
    long long expected = 0;
    for (int m : shape) expected += m - 1;
    expected = expected * g.num_profiles() / 2;
    CHECK(static_cast<long long>(pg.arcs().size() +
                                 pg.degenerate_pairs().size()) == expected);
  }
}

TEST_CASE("ties land in degenerate_pairs and block sink computation") {
  // u1 ties on the first column pair (player 0 deviating).
  Game g({2, 2}, {{1, 0.5, 1, 0}, {0, 1, 1, 0}});
  PreferenceGraph pg = build_graph(g);
  REQUIRE(pg.degenerate_pairs().size() > 0);
  CHECK_THROWS_AS(sink_equilibria(pg, g), GenericityError);
  try {
    sink_equilibria(pg, g);
  } catch (const GenericityError& e) {
    CHECK(std::string(e.what()).find("player") != std::string::npos);
  }
}

TEST_CASE("scc decomposition") {
  SUBCASE("acyclic 2x2 gives four singletons in topological order") {
    Game g({2, 2}, {{3, 1, 2, 0}, {1, 2, 0, 3}});
    // u1 column arcs point up (3>2, 1>0); u2 row arcs: (0,0)->(0,1),
    // (1,1)<-(1,0)? u2 row1: 0 vs 3 -> toward (1,1). Let's just require 4
    // singleton SCCs (no 2x2 game with distinct line payoffs can have a
    // 2-cycle; a 4-cycle is excluded by this payoff choice).
    auto sccs = scc_decomposition(build_graph(g));
    CHECK(sccs.size() == 4);
  }
  SUBCASE("matching pennies is one four-cycle") {
    Game mp({2, 2}, {{1, -1, -1, 1}, {-1, 1, 1, -1}});
    auto sccs = scc_decomposition(build_graph(mp));
    REQUIRE(sccs.size() == 1);
    CHECK(sccs[0].size() == 4);
  }
  SUBCASE("order is canonical: smallest profile id first among ready SCCs") {
    std::mt19937_64 rng(211);
    for (int trial = 0; trial < 10; ++trial) {
      Game g = random_game({3, 3}, RandomGameClass::Generic, rng());
      PreferenceGraph pg = build_graph(g);
      auto sccs = scc_decomposition(pg);

      // Replay the canonical rule with a plain scan: repeatedly release the
      // zero-indegree component with the smallest contained profile.
      std::vector<int> comp(g.num_profiles());
      for (size_t c = 0; c < sccs.size(); ++c) {
        for (ProfileId p : sccs[c]) comp[p] = static_cast<int>(c);
      }
      std::vector<std::set<int>> succ(sccs.size());
      std::vector<int> indeg(sccs.size(), 0);
      for (const Arc& a : pg.arcs()) {
        if (comp[a.from] != comp[a.to] &&
            succ[comp[a.from]].insert(comp[a.to]).second) {
          ++indeg[comp[a.to]];
        }
      }
      std::vector<char> done(sccs.size(), 0);
      for (size_t step = 0; step < sccs.size(); ++step) {
        int pick = -1;
        for (size_t c = 0; c < sccs.size(); ++c) {
          if (!done[c] && indeg[c] == 0 &&
              (pick < 0 || sccs[c].front() < sccs[pick].front())) {
            pick = static_cast<int>(c);
          }
        }
        REQUIRE(pick == static_cast<int>(step));  // returned order == replay
        done[pick] = 1;
        for (int s : succ[pick]) --indeg[s];
      }
    }
  }
  SUBCASE("matches a transitive-closure oracle on random games") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 25; ++trial) {
      Game g = random_game({3, 3}, RandomGameClass::Generic, rng());
      PreferenceGraph pg = build_graph(g);
      auto reach = closure(pg, g.num_profiles());
      auto sccs = scc_decomposition(pg);

      // Partition property: same component iff mutually reachable.
      std::vector<int> comp(g.num_profiles(), -1);
      for (size_t c = 0; c < sccs.size(); ++c) {
        for (ProfileId p : sccs[c]) comp[p] = static_cast<int>(c);
      }
      for (int i = 0; i < g.num_profiles(); ++i) {
        for (int j = 0; j < g.num_profiles(); ++j) {
          CHECK((comp[i] == comp[j]) == (reach[i][j] && reach[j][i]));
        }
      }
      // Topological property: arcs never point to an earlier component.
      for (const Arc& a : pg.arcs()) {
        CHECK(comp[a.from] <= comp[a.to]);
      }
    }
  }
}

TEST_CASE("sink equilibria") {
  SUBCASE("potential games: sinks are exactly the pure equilibria") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 10; ++trial) {
      Game g = random_game({3, 2, 2}, RandomGameClass::Potential, rng());
      PreferenceGraph pg = build_graph(g);
      auto sinks = sink_equilibria(pg, g);
      CHECK(sinks.size() >= 1);
      for (const auto& s : sinks) {
        CHECK(s.is_singleton_pne);
        CHECK(pg.is_sink(s.profiles[0]));
      }
      // Acyclic: every SCC is a singleton.
      CHECK(scc_decomposition(pg).size() ==
            static_cast<size_t>(g.num_profiles()));
    }
  }
  SUBCASE("every random generic game has at least one sink") {
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 30; ++trial) {
      Game g = random_game({3, 3}, RandomGameClass::Generic, rng());
      CHECK(sink_equilibria(build_graph(g), g).size() >= 1);
    }
  }
  SUBCASE("shapley has a unique six-profile sink") {
    NamedGame ng = make_shapley();
    auto sinks = sink_equilibria(build_graph(ng.game), ng.game);
    REQUIRE(sinks.size() == 1);
    CHECK(sinks[0].profiles.size() == 6);
    CHECK_FALSE(sinks[0].is_subgame);
  }
  SUBCASE("the two-player fixture has two sinks") {
    NamedGame ng = make_two_player();
    auto sinks = sink_equilibria(build_graph(ng.game), ng.game);
    REQUIRE(sinks.size() == 2);
    ProfileId a = ng.game.flatten(ng.landmarks.at("a"));
    ProfileId b = ng.game.flatten(ng.landmarks.at("b"));
    CHECK(sinks[0].profile_set().count(a) == 1);
    CHECK(sinks[1].profile_set().count(b) == 1);
  }
}

TEST_CASE("has_path") {
  NamedGame tp = make_three_player();
  PreferenceGraph pg = build_graph(tp.game);
  ProfileId a = tp.game.flatten(tp.landmarks.at("a"));
  ProfileId b = tp.game.flatten(tp.landmarks.at("b"));
  CHECK(pg.has_path(a, a));
  CHECK_FALSE(pg.has_path(a, b));
  CHECK(pg.has_path(tp.game.flatten(Profile{1, 1, 0}), b));

  SUBCASE("in two-player games every source reaches every sink") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 25; ++trial) {
      Game g = random_game({3, 4}, RandomGameClass::Generic, rng());
      PreferenceGraph g_pg = build_graph(g);
      for (ProfileId s = 0; s < g.num_profiles(); ++s) {
        if (!g_pg.is_source(s)) continue;
        for (ProfileId t = 0; t < g.num_profiles(); ++t) {
          if (g_pg.is_sink(t)) CHECK(g_pg.has_path(s, t));
        }
      }
    }
  }
}

TEST_CASE("induced subgraph") {
  SUBCASE("full subgame is the identity") {
    Game g = random_game({2, 3}, RandomGameClass::Generic, 2);
    PreferenceGraph pg = build_graph(g);
    PreferenceGraph ind = induced_subgraph(pg, Subgame::full(g.strategy_counts()));
    CHECK(ind.arcs().size() == pg.arcs().size());
    CHECK(ind.nodes().size() == pg.nodes().size());
  }
  SUBCASE("cog square: a is a source of the induced graph") {
    NamedGame ng = make_cog();
    PreferenceGraph square =
        induced_subgraph(build_graph(ng.game), ng.subgames.at("square"));
    CHECK(square.is_source(ng.game.flatten(ng.landmarks.at("a"))));
    CHECK(square.nodes().size() == 4);
    CHECK(square.arcs().size() == 4);
  }
  SUBCASE("commutes with building the restricted game") {
    std::mt19937_64 rng(37);
    for (int trial = 0; trial < 15; ++trial) {
      Game g = random_game({3, 3, 2}, RandomGameClass::Generic, rng());
      Subgame y({{0, 2}, {0, 1, 2}, {0, 1}});
      RestrictedGame r = restrict(g, y);
      PreferenceGraph direct = build_graph(r.game);
      PreferenceGraph induced = induced_subgraph(build_graph(g), y);
      REQUIRE(direct.arcs().size() == induced.arcs().size());
      for (const Arc& a : direct.arcs()) {
        ProfileId from = r.parent_profile(g, a.from);
        ProfileId to = r.parent_profile(g, a.to);
        auto w = induced.signed_weight(to, from);
        REQUIRE(w.has_value());
        CHECK(*w == doctest::Approx(a.weight).epsilon(1e-15));
      }
    }
  }
}

TEST_CASE("is_source / is_sink") {
  Game g = coordination_2x2();
  PreferenceGraph pg = build_graph(g);
  CHECK(pg.is_sink(g.flatten(Profile{0, 0})));
  CHECK_FALSE(pg.is_source(g.flatten(Profile{0, 0})));

  NamedGame sh = make_shapley();
  PreferenceGraph spg = build_graph(sh.game);
  // Interior cycle node: one arc out (along the cycle), several in.
  ProfileId cyc = sh.game.flatten(Profile{0, 0});
  CHECK_FALSE(spg.is_source(cyc));
  CHECK_FALSE(spg.is_sink(cyc));

  NamedGame tp = make_three_player();
  PreferenceGraph cube =
      induced_subgraph(build_graph(tp.game), tp.subgames.at("cube"));
  CHECK(cube.is_source(tp.game.flatten(tp.landmarks.at("a"))));
}

TEST_CASE("antisymmetry of signed weights on comparable pairs") {
  std::mt19937_64 rng(41);
  Game g = random_game({3, 3}, RandomGameClass::Generic, rng());
  PreferenceGraph pg = build_graph(g);
  for (const Arc& a : pg.arcs()) {
    auto fwd = pg.signed_weight(a.to, a.from);
    auto bwd = pg.signed_weight(a.from, a.to);
    REQUIRE(fwd.has_value());
    REQUIRE(bwd.has_value());
    CHECK(*fwd == doctest::Approx(-*bwd).epsilon(1e-15));
    CHECK(*fwd > 0);
  }
}

TEST_CASE("negation reverses every arc") {
  Game g = random_game({3, 2}, RandomGameClass::Generic, 43);
  PreferenceGraph pg = build_graph(g);
  PreferenceGraph npg = build_graph(g.negated());
  REQUIRE(pg.arcs().size() == npg.arcs().size());
  for (const Arc& a : pg.arcs()) {
    auto w = npg.signed_weight(a.from, a.to);  // reversed direction
    REQUIRE(w.has_value());
    CHECK(*w == doctest::Approx(a.weight).epsilon(1e-15));
  }
  // Sinks of the negation are sources of the original.
  auto nsinks = sink_equilibria(npg, g.negated());
  for (const auto& s : nsinks) {
    if (s.is_singleton_pne) CHECK(pg.is_source(s.profiles[0]));
  }
}

TEST_CASE("export_dot") {
  NamedGame sh = make_shapley();
  PreferenceGraph pg = build_graph(sh.game);
  auto sinks = sink_equilibria(pg, sh.game);
  std::string dot = export_dot(pg, sh.game, {sinks[0].profiles});

  int nodes = 0, edges = 0, filled = 0;
  size_t pos = 0;
  while ((pos = dot.find("->", pos)) != std::string::npos) {
    ++edges;
    pos += 2;
  }
  pos = 0;
  while ((pos = dot.find("fillcolor", pos)) != std::string::npos) {
    ++filled;
    pos += 9;
  }
  for (ProfileId p : pg.nodes()) {
    if (dot.find("\"" + sh.game.profile_label(p) + "\"") != std::string::npos) {
      ++nodes;
    }
  }
  CHECK(nodes == 9);
  CHECK(edges == 18);
  CHECK(filled == 6);

  SUBCASE("byte-identical for identical input") {
    CHECK(export_dot(pg, sh.game, {sinks[0].profiles}) == dot);
  }
  SUBCASE("no highlights yields a plain graph") {
    std::string plain = export_dot(pg, sh.game);
    CHECK(plain.find("fillcolor") == std::string::npos);
  }
}

TEST_CASE("graph report json is stable and complete") {
  Game g = random_game({2, 2}, RandomGameClass::Generic, 47);
  PreferenceGraph pg = build_graph(g);
  auto j = graph_report_json(pg, g);
  CHECK(j["arcs"].size() == pg.arcs().size());
  CHECK(j["nodes"].size() == 4);
  CHECK(j["sccs"].size() == scc_decomposition(pg).size());
  CHECK(graph_report_json(pg, g).dump() == j.dump());
}
