#include <doctest.h>

#include <random>

#include "sinkatlas/corpus.hpp"
#include "sinkatlas/stability.hpp"
#include "test_util.hpp"

using namespace sinkatlas;

TEST_CASE("every fixture constructs and passes its built-in verification") {
  for (const auto& id : corpus_ids()) {
    CHECK_NOTHROW(make_named(id));
  }
  CHECK_THROWS_AS(make_named("nope"), InputError);
}

TEST_CASE("gadget classification flips exactly at equal crossing points") {
  // Bisection on the sign of z_x - z_y: below the flip yhat is the
  // quasi-strict equilibrium, above it xhat is. Hitting the flip exactly
  // makes construction refuse (continuum of equilibria), which pins it too.
  auto xhat_is_nash = [](double zx) -> int {
    try {
      NamedGame ng = make_gadget_2x3({zx, 0.45});
      auto fx = fixed_point_2x2(ng.game, Subgame({{0, 1}, {0, 1}}));
      REQUIRE(fx.has_value());
      return is_quasi_strict_nash(ng.game, *fx).quasi_strict ? 1 : 0;
    } catch (const InputError&) {
      return -1;
    }
  };
  CHECK(xhat_is_nash(0.2) == 0);
  CHECK(xhat_is_nash(0.7) == 1);
  double lo = 0.2, hi = 0.7;
  double flip = -1;
  for (int it = 0; it < 25; ++it) {
    double mid = 0.5 * (lo + hi);
    int verdict = xhat_is_nash(mid);
    if (verdict < 0) {
      flip = mid;  // landed on the degenerate boundary itself
      break;
    }
    (verdict == 1 ? hi : lo) = mid;
  }
  if (flip < 0) flip = 0.5 * (lo + hi);
  CHECK(flip == doctest::Approx(0.45).epsilon(1e-4));
}

TEST_CASE("gadget construction rejects bad weights") {
  CHECK_THROWS_AS(make_gadget_2x3({0.0, 0.6}), InputError);
  CHECK_THROWS_AS(make_gadget_2x3({0.4, 1.0}), InputError);
  // Equal crossings would give a continuum of equilibria.
  CHECK_THROWS_AS(make_gadget_2x3({0.5, 0.5}), InputError);
}

TEST_CASE("gadget verdicts are invariant under positive affine rescaling") {
  NamedGame base = make_gadget_2x3();
  // u -> a*u + b per player keeps every payoff comparison.
  std::vector<std::vector<double>> utils(2);
  for (int pl = 0; pl < 2; ++pl) {
    double a = pl == 0 ? 3.5 : 0.25;
    double b = pl == 0 ? -2.0 : 10.0;
    utils[pl].resize(base.game.num_profiles());
    for (ProfileId p = 0; p < base.game.num_profiles(); ++p) {
      utils[pl][p] = a * base.game.utility(pl, p) + b;
    }
  }
  Game scaled(base.game.strategy_counts(), utils);

  PreferenceGraph pg = build_graph(base.game);
  PreferenceGraph spg = build_graph(scaled);
  REQUIRE(pg.arcs().size() == spg.arcs().size());
  for (size_t k = 0; k < pg.arcs().size(); ++k) {
    CHECK(pg.arcs()[k].from == spg.arcs()[k].from);
    CHECK(pg.arcs()[k].to == spg.arcs()[k].to);
  }

  auto fx = fixed_point_2x2(scaled, Subgame({{0, 1}, {0, 1}}));
  auto fy = fixed_point_2x2(scaled, Subgame({{0, 1}, {1, 2}}));
  REQUIRE(fx.has_value());
  REQUIRE(fy.has_value());
  CHECK_FALSE(is_quasi_strict_nash(scaled, *fx).quasi_strict);
  CHECK(is_quasi_strict_nash(scaled, *fy).quasi_strict);
}

TEST_CASE("random games are deterministic per seed") {
  for (auto cls : {RandomGameClass::Generic, RandomGameClass::ZeroSum,
                   RandomGameClass::Potential}) {
    std::vector<int> shape =
        cls == RandomGameClass::ZeroSum ? std::vector<int>{3, 3}
                                        : std::vector<int>{2, 3, 2};
    Game a = random_game(shape, cls, 999);
    Game b = random_game(shape, cls, 999);
    Game c = random_game(shape, cls, 1000);
    bool same = true, diff = false;
    for (int pl = 0; pl < a.num_players(); ++pl) {
      for (ProfileId p = 0; p < a.num_profiles(); ++p) {
        same = same && a.utility(pl, p) == b.utility(pl, p);
        diff = diff || a.utility(pl, p) != c.utility(pl, p);
      }
    }
    CHECK(same);
    CHECK(diff);
  }
  CHECK_THROWS_AS(random_game({2, 2, 2}, RandomGameClass::ZeroSum, 1),
                  InputError);
}

TEST_CASE("zero-sum generator really is zero-sum") {
  Game g = random_game({4, 4}, RandomGameClass::ZeroSum, 7);
  for (ProfileId p = 0; p < g.num_profiles(); ++p) {
    CHECK(g.utility(0, p) + g.utility(1, p) == 0.0);
  }
}
