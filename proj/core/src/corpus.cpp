#include "sinkatlas/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "sinkatlas/stability.hpp"

namespace sinkatlas {

namespace {

[[noreturn]] void corpus_fail(const std::string& id, const std::string& what) {
  throw std::logic_error("corpus fixture '" + id + "' failed verification: " +
                         what);
}

void require(bool ok, const std::string& id, const std::string& what) {
  if (!ok) corpus_fail(id, what);
}

ProfileSet to_set(const Game& g, const std::vector<Profile>& profiles) {
  ProfileSet s;
  for (const Profile& p : profiles) s.insert(g.flatten(p));
  return s;
}

/// Shared skeleton: non-degenerate graph whose sinks match expectations.
std::vector<SinkEquilibrium> verify_sinks(const NamedGame& ng) {
  PreferenceGraph pg = build_graph(ng.game);
  require(pg.degenerate_pairs().empty(), ng.id, "graph has tied payoffs");
  auto sinks = sink_equilibria(pg, ng.game);
  require(sinks.size() == ng.expected_sinks.size(), ng.id,
          "unexpected number of sink equilibria");
  for (size_t k = 0; k < sinks.size(); ++k) {
    require(sinks[k].profile_set() == ng.expected_sinks[k], ng.id,
            "sink equilibrium " + std::to_string(k) +
                " has unexpected profiles");
  }
  return sinks;
}

bool close(double a, double b, double tol = 1e-9) {
  return std::abs(a - b) <= tol;
}

bool profiles_close(const MixedProfile& a, const MixedProfile& b,
                    double tol = 1e-9) {
  if (a.num_players() != b.num_players()) return false;
  for (int i = 0; i < a.num_players(); ++i) {
    if (a.dist(i).size() != b.dist(i).size()) return false;
    for (size_t s = 0; s < a.dist(i).size(); ++s) {
      if (!close(a.dist(i)[s], b.dist(i)[s], tol)) return false;
    }
  }
  return true;
}

}  // namespace

NamedGame make_shapley() {
  // Rotationally symmetric perturbation of the classic bimatrix; the -0.5
  // entries break its payoff ties without touching the unit cycle weights.
  std::vector<std::vector<double>> u1_rows = {
      {1, 0, -0.5}, {-0.5, 1, 0}, {0, -0.5, 1}};
  std::vector<std::vector<double>> u2_rows = {
      {0, 1, -0.5}, {-0.5, 0, 1}, {1, -0.5, 0}};
  std::vector<double> u1, u2;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) {
      u1.push_back(u1_rows[r][c]);
      u2.push_back(u2_rows[r][c]);
    }
  }
  NamedGame ng{
      "shapley",
      "Shapley's 3x3 game (tie-broken): unique six-cycle sink equilibrium",
      Game({3, 3}, {u1, u2}),
      {},
      {},
      {},
      {}};
  ng.expected_sinks = {to_set(
      ng.game, {{0, 0}, {0, 1}, {1, 1}, {1, 2}, {2, 2}, {2, 0}})};

  auto sinks = verify_sinks(ng);
  PreferenceGraph pg = build_graph(ng.game);
  require(pg.arcs().size() == 18, ng.id, "expected 18 arcs");
  // The sink must be a simple cycle with unit weights: every sink node has
  // exactly one outgoing arc staying inside the sink, and its weight is 1.
  for (ProfileId p : sinks[0].profiles) {
    int within = 0;
    for (int arc_id : pg.out_arc_ids(p)) {
      const Arc& a = pg.arcs()[arc_id];
      if (ng.expected_sinks[0].count(a.to)) {
        ++within;
        require(close(a.weight, 1.0), ng.id, "cycle arc weight must be 1");
      }
    }
    require(within == 1, ng.id, "cycle node must have one arc along the cycle");
  }
  for (const Profile& corner : {Profile{1, 0}, Profile{2, 1}, Profile{0, 2}}) {
    require(pg.is_source(ng.game.flatten(corner)), ng.id,
            "off-cycle profile should be a source");
  }
  return ng;
}

NamedGame make_cog() {
  std::vector<std::vector<double>> u1_rows = {{0, 1, 2}, {1, 0, 1}, {2, 2, 0}};
  std::vector<std::vector<double>> u2_rows = {{1, 2, 0}, {1, 0, 2}, {0, 1, 2}};
  std::vector<double> u1, u2;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) {
      u1.push_back(u1_rows[r][c]);
      u2.push_back(u2_rows[r][c]);
    }
  }
  NamedGame ng{"cog_fig2",
               "3x3 game whose unique sink has a local source at corner a",
               Game({3, 3}, {u1, u2}),
               {},
               {},
               {},
               {}};
  ng.landmarks["a"] = {0, 0};
  ng.landmarks["out"] = {1, 1};  // the one profile outside the sink
  ng.subgames["square"] = Subgame({{0, 1}, {0, 1}});
  ng.expected_sinks = {to_set(ng.game, {{0, 0},
                                        {0, 1},
                                        {0, 2},
                                        {1, 0},
                                        {1, 2},
                                        {2, 0},
                                        {2, 1},
                                        {2, 2}})};
  ng.fixed_points.emplace(
      "xhat", MixedProfile({{0.5, 0.5, 0.0}, {0.5, 0.5, 0.0}}));

  verify_sinks(ng);
  PreferenceGraph pg = build_graph(ng.game);
  ProfileId a = ng.game.flatten(ng.landmarks["a"]);
  PreferenceGraph square = induced_subgraph(pg, ng.subgames["square"]);
  require(square.is_source(a), ng.id, "a must be a source of the square");
  auto fp = fixed_point_2x2(ng.game, ng.subgames["square"]);
  require(fp && profiles_close(*fp, ng.fixed_points.at("xhat")), ng.id,
          "square must have its interior fixed point at the barycenter");
  return ng;
}

NamedGame make_three_player() {
  // Coordinates (i, j, k): players have 3, 3 and 2 strategies. Inside the
  // cube {0,1}^3 every payoff is the parity of the coordinate sum, so each
  // cube edge points from an even to an odd vertex with weight 1.
  const int shape[3] = {3, 3, 2};
  auto idx = [&](int i, int j, int k) { return (i * 3 + j) * 2 + k; };
  std::vector<double> u1(18), u2(18), u3(18);

  // Per-line payoff values; each set* call fixes one player's comparison
  // line (the deviating player's index varies, the context stays put).
  auto set1 = [&](int j, int k, double a0, double a1, double a2) {
    u1[idx(0, j, k)] = a0;
    u1[idx(1, j, k)] = a1;
    u1[idx(2, j, k)] = a2;
  };
  auto set2 = [&](int i, int k, double a0, double a1, double a2) {
    u2[idx(i, 0, k)] = a0;
    u2[idx(i, 1, k)] = a1;
    u2[idx(i, 2, k)] = a2;
  };
  auto set3 = [&](int i, int j, double a0, double a1) {
    u3[idx(i, j, 0)] = a0;
    u3[idx(i, j, 1)] = a1;
  };

  set1(0, 0, 0, 1, -1);
  set1(1, 0, 1, 0, 2);
  set1(2, 0, 1, 0, -1);
  set1(0, 1, 1, 0, -1);
  set1(1, 1, 0, 1, -1);
  set1(2, 1, 1, 0, -1);

  set2(0, 0, 0, 1, -1);
  set2(1, 0, 1, 0, 2);
  set2(2, 0, 1, 0, -1);
  set2(0, 1, 1, 0, 2);
  set2(1, 1, 0, 1, -1);
  set2(2, 1, 1, 0, -1);

  set3(0, 0, 0, 1);
  set3(1, 0, 1, 0);
  set3(2, 0, 0, -1);
  set3(0, 1, 1, 0);
  set3(1, 1, 0, 1);
  set3(2, 1, 0, -1);
  set3(0, 2, 0, -1);
  set3(1, 2, 0, -1);
  set3(2, 2, 0, -1);

  NamedGame ng{"three_player_fig3",
               "3x3x2 game: two sink equilibria whose contents are joined by "
               "replicator orbits through the interior of a 2x2x2 subgame",
               Game({shape[0], shape[1], shape[2]}, {u1, u2, u3}),
               {},
               {},
               {},
               {}};
  ng.landmarks["a"] = {0, 0, 0};
  ng.landmarks["b"] = {1, 1, 1};
  ng.subgames["cube"] = Subgame({{0, 1}, {0, 1}, {0, 1}});
  ng.expected_sinks = {to_set(ng.game, {{0, 0, 0},
                                        {1, 0, 0},
                                        {0, 1, 0},
                                        {0, 0, 1},
                                        {1, 2, 0},
                                        {0, 2, 0},
                                        {2, 1, 0},
                                        {2, 0, 0},
                                        {0, 2, 1}}),
                       to_set(ng.game, {{1, 1, 1}})};
  ng.fixed_points.emplace(
      "xhat",
      MixedProfile({{0.5, 0.5, 0.0}, {0.5, 0.5, 0.0}, {0.5, 0.5}}));

  verify_sinks(ng);
  PreferenceGraph pg = build_graph(ng.game);
  ProfileId a = ng.game.flatten(ng.landmarks["a"]);
  ProfileId b = ng.game.flatten(ng.landmarks["b"]);
  require(!pg.has_path(a, b), ng.id, "graph must have no path from a to b");

  // Parity payoffs on the cube: 1 at its sinks, 0 at its sources, everyone.
  RestrictedGame cube = restrict(ng.game, ng.subgames["cube"]);
  for (ProfileId p = 0; p < cube.game.num_profiles(); ++p) {
    int parity = 0;
    for (int i = 0; i < 3; ++i) parity ^= cube.game.coord(p, i) & 1;
    for (int pl = 0; pl < 3; ++pl) {
      require(close(cube.game.utility(pl, p), parity), ng.id,
              "cube payoffs must equal coordinate parity");
    }
  }
  PreferenceGraph cube_graph = induced_subgraph(pg, ng.subgames["cube"]);
  require(cube_graph.is_source(a), ng.id, "a must be a source of the cube");
  require(cube_graph.is_sink(b), ng.id, "b must be a sink of the cube");
  return ng;
}

NamedGame make_two_player() {
  // Row player utilities by [row][col]; column player below. Columns 0-2 of
  // rows 0-1 form the first gadget (fixed points xhat on columns {0,1}, yhat
  // on {1,2}); rows 0-2 of columns 1-2 form the transposed second gadget
  // (zhat on rows {0,2}); row 3 and column 4 close the sink containing a;
  // the exit saddle c = (2,2) hands the orbit to the opposite sink b = (2,3).
  std::vector<std::vector<double>> A = {{1, 3, 0, 0.5, 2},
                                        {2, 0, 3, 0, 3},
                                        {0, 1.8, 2.8, 2, 0},
                                        {0.5, -1, 4, 1, 1}};
  std::vector<std::vector<double>> B = {{2, 3, 1.5, 1, 4},
                                        {1.2, 0.5, 2, 0, 1},
                                        {0, 2, 3, 4, 1},
                                        {4, 1, 3, 0, 2}};
  std::vector<double> u1, u2;
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 5; ++c) {
      u1.push_back(A[r][c]);
      u2.push_back(B[r][c]);
    }
  }
  NamedGame ng{"two_player_fig4",
               "4x5 two-player game: two sink equilibria, one attractor",
               Game({4, 5}, {u1, u2}),
               {},
               {},
               {},
               {}};
  ng.landmarks["a"] = {0, 0};
  ng.landmarks["b"] = {2, 3};
  ng.landmarks["c"] = {2, 2};
  ng.subgames["square"] = Subgame({{0, 1}, {0, 1}});
  ng.subgames["gadget"] = Subgame({{0, 1}, {0, 1, 2}});
  ng.subgames["gadget2"] = Subgame({{0, 1, 2}, {1, 2}});
  ng.expected_sinks = {to_set(ng.game, {{0, 0},
                                        {0, 1},
                                        {0, 4},
                                        {1, 0},
                                        {1, 2},
                                        {1, 4},
                                        {3, 0},
                                        {3, 2}}),
                       to_set(ng.game, {{2, 3}})};
  const double zx = 7.0 / 17.0;
  ng.fixed_points.emplace(
      "xhat", MixedProfile({{zx, 1.0 - zx, 0, 0}, {0.75, 0.25, 0, 0, 0}}));
  ng.fixed_points.emplace(
      "yhat", MixedProfile({{0.5, 0.5, 0, 0}, {0, 0.5, 0.5, 0, 0}}));
  ng.fixed_points.emplace(
      "zhat", MixedProfile({{0.4, 0, 0.6, 0}, {0, 0.7, 0.3, 0, 0}}));

  verify_sinks(ng);
  PreferenceGraph pg = build_graph(ng.game);
  ProfileId a = ng.game.flatten(ng.landmarks["a"]);
  ProfileId b = ng.game.flatten(ng.landmarks["b"]);
  ProfileId c = ng.game.flatten(ng.landmarks["c"]);
  require(!pg.has_path(a, b), ng.id, "graph must have no path from a to b");
  auto wc = pg.signed_weight(b, c);
  require(wc && *wc > 0, ng.id, "exit profile c must have an arc to b");

  // The three chain fixed points, at their exact coordinates.
  auto check_fp = [&](const std::string& name, const Subgame& square) {
    auto fp = fixed_point_2x2(ng.game, square);
    require(fp && profiles_close(*fp, ng.fixed_points.at(name)), ng.id,
            name + " is not where it should be");
  };
  check_fp("xhat", Subgame({{0, 1}, {0, 1}}));
  check_fp("yhat", Subgame({{0, 1}, {1, 2}}));
  check_fp("zhat", Subgame({{0, 2}, {1, 2}}));

  // Escape structure: xhat escapes into column 2 inside the first gadget and
  // yhat is the gadget's quasi-strict equilibrium; one level up, yhat escapes
  // into row 2 and zhat is quasi-strict; from zhat's square the orbit exits
  // at c.
  RestrictedGame g1 = restrict(ng.game, ng.subgames["gadget"]);
  require(!is_quasi_strict_nash(g1.game,
                                project(ng.fixed_points.at("xhat"),
                                        ng.subgames["gadget"]))
               .is_nash,
          ng.id, "xhat must not be Nash in the first gadget");
  require(is_quasi_strict_nash(g1.game,
                               project(ng.fixed_points.at("yhat"),
                                       ng.subgames["gadget"]))
              .quasi_strict,
          ng.id, "yhat must be quasi-strict in the first gadget");
  RestrictedGame g2 = restrict(ng.game, ng.subgames["gadget2"]);
  require(!is_quasi_strict_nash(g2.game,
                                project(ng.fixed_points.at("yhat"),
                                        ng.subgames["gadget2"]))
               .is_nash,
          ng.id, "yhat must not be Nash in the second gadget");
  require(is_quasi_strict_nash(g2.game,
                               project(ng.fixed_points.at("zhat"),
                                       ng.subgames["gadget2"]))
              .quasi_strict,
          ng.id, "zhat must be quasi-strict in the second gadget");
  return ng;
}

NamedGame make_gadget_2x3(const GadgetWeights& weights) {
  const double zx = weights.z_x;
  const double zy = weights.z_y;
  if (!(zx > 0 && zx < 1 && zy > 0 && zy < 1)) {
    throw InputError("gadget weights must lie strictly in (0, 1)");
  }
  // Column payoffs are linear in the row player's top-row mass z. Column 0 is
  // the slow baseline; column 1 crosses it at z_x, column 2 crosses column 1
  // at z_y.
  auto uc0 = [&](double z) { return 0.9 + 0.2 * z; };
  auto uc1 = [&](double z) { return uc0(zx) + 1.2 * (z - zx); };
  auto uc2 = [&](double z) { return uc1(zy) - 1.2 * (z - zy); };

  std::vector<double> u1 = {0, 1, 0, 1, 0, 1};
  std::vector<double> u2 = {uc0(1), uc1(1), uc2(1), uc0(0), uc1(0), uc2(0)};
  NamedGame ng{"gadget_2x3_fig4b",
               "2x3 gadget: two boundary fixed points, exactly one of them a "
               "quasi-strict Nash equilibrium",
               Game({2, 3}, {u1, u2}),
               {},
               {},
               {},
               {}};
  ng.landmarks["s1"] = {0, 1};
  ng.landmarks["s2"] = {1, 2};
  ng.landmarks["r1"] = {0, 2};
  ng.landmarks["r2"] = {1, 1};
  ng.subgames["gadget"] = Subgame({{0, 1}, {0, 1, 2}});
  ng.expected_sinks = {to_set(ng.game, {{0, 1}}), to_set(ng.game, {{1, 2}})};
  ng.fixed_points.emplace(
      "xhat", MixedProfile({{zx, 1 - zx}, {0.5, 0.5, 0}}));
  ng.fixed_points.emplace(
      "yhat", MixedProfile({{zy, 1 - zy}, {0, 0.5, 0.5}}));

  // Graph shape first: the required per-line orders, no ties.
  PreferenceGraph pg = build_graph(ng.game);
  if (!pg.degenerate_pairs().empty()) {
    throw InputError("gadget weights produce tied payoffs");
  }
  auto ordered = [&](const Profile& lo, const Profile& hi) {
    auto w = pg.signed_weight(ng.game.flatten(hi), ng.game.flatten(lo));
    return w && *w > 0;
  };
  bool shape_ok = ordered({0, 0}, {0, 1}) && ordered({0, 2}, {0, 0}) &&
                  ordered({1, 1}, {1, 0}) && ordered({1, 0}, {1, 2}) &&
                  ordered({0, 0}, {1, 0}) && ordered({1, 1}, {0, 1}) &&
                  ordered({0, 2}, {1, 2});
  if (!shape_ok) {
    throw InputError("gadget weights do not realize the 2x3 gadget graph");
  }
  verify_sinks(ng);

  auto fx = fixed_point_2x2(ng.game, Subgame({{0, 1}, {0, 1}}));
  auto fy = fixed_point_2x2(ng.game, Subgame({{0, 1}, {1, 2}}));
  require(fx && profiles_close(*fx, ng.fixed_points.at("xhat")), ng.id,
          "xhat is not where it should be");
  require(fy && profiles_close(*fy, ng.fixed_points.at("yhat")), ng.id,
          "yhat is not where it should be");
  bool x_nash = is_quasi_strict_nash(ng.game, *fx).quasi_strict;
  bool y_nash = is_quasi_strict_nash(ng.game, *fy).quasi_strict;
  if (x_nash == y_nash) {
    throw InputError(
        "gadget weights must make exactly one of xhat/yhat a quasi-strict "
        "Nash equilibrium");
  }
  // The top-row-mass rule: the fixed point with the larger top-row mass wins.
  require(x_nash == (zx > zy), ng.id,
          "Nash classification disagrees with the top-row-mass rule");
  return ng;
}

NamedGame make_dominance_2x3() {
  std::vector<double> u1 = {1, 0, 0, 0, 1, 1};
  std::vector<double> u2 = {0, 2, 1, 2, 1, 0};
  NamedGame ng{"dominance_fig6",
               "2x3 game: column 1 strictly dominates column 2, yet the "
               "whole graph is one strongly connected component",
               Game({2, 3}, {u1, u2}),
               {},
               {},
               {},
               {}};
  ng.subgames["face"] = Subgame({{0, 1}, {0, 1}});
  ng.expected_sinks = {to_set(
      ng.game, {{0, 0}, {0, 1}, {0, 2}, {1, 0}, {1, 1}, {1, 2}})};

  verify_sinks(ng);
  auto sccs = scc_decomposition(build_graph(ng.game));
  require(sccs.size() == 1, ng.id, "graph must be a single SCC");
  for (int r = 0; r < 2; ++r) {
    require(ng.game.utility(1, Profile{r, 1}) >
                ng.game.utility(1, Profile{r, 2}),
            ng.id, "column 1 must strictly dominate column 2");
  }
  return ng;
}

std::vector<std::string> corpus_ids() {
  return {"shapley",          "cog_fig2",          "three_player_fig3",
          "two_player_fig4",  "gadget_2x3_fig4b",  "dominance_fig6"};
}

std::string corpus_description(const std::string& id) {
  return make_named(id).description;
}

NamedGame make_named(const std::string& id) {
  if (id == "shapley") return make_shapley();
  if (id == "cog_fig2") return make_cog();
  if (id == "three_player_fig3") return make_three_player();
  if (id == "two_player_fig4") return make_two_player();
  if (id == "gadget_2x3_fig4b") return make_gadget_2x3();
  if (id == "dominance_fig6") return make_dominance_2x3();
  throw InputError("unknown corpus id: " + id);
}

RandomGameClass random_game_class_from_string(const std::string& name) {
  if (name == "generic") return RandomGameClass::Generic;
  if (name == "zero_sum") return RandomGameClass::ZeroSum;
  if (name == "potential") return RandomGameClass::Potential;
  throw InputError("unknown game class: " + name +
                   " (expected generic, zero_sum or potential)");
}

Game random_game(const std::vector<int>& shape, RandomGameClass cls,
                 std::uint64_t seed) {
  if (shape.empty()) throw InputError("shape must have >= 1 player");
  for (int m : shape) {
    if (m < 1) throw InputError("shape entries must be >= 1");
  }
  if (cls == RandomGameClass::ZeroSum && shape.size() != 2) {
    throw InputError("zero_sum games need exactly 2 players");
  }
  std::mt19937_64 rng(seed);
  auto uniform = [&rng]() {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
  };
  long long n = 1;
  for (int m : shape) n *= m;

  std::vector<std::vector<double>> utils;
  switch (cls) {
    case RandomGameClass::Generic: {
      utils.resize(shape.size());
      for (auto& u : utils) {
        u.resize(static_cast<size_t>(n));
        for (double& v : u) v = uniform();
      }
      break;
    }
    case RandomGameClass::ZeroSum: {
      std::vector<double> u1(static_cast<size_t>(n));
      for (double& v : u1) v = uniform();
      std::vector<double> u2(u1.size());
      for (size_t i = 0; i < u1.size(); ++i) u2[i] = -u1[i];
      utils = {std::move(u1), std::move(u2)};
      break;
    }
    case RandomGameClass::Potential: {
      std::vector<double> phi(static_cast<size_t>(n));
      for (double& v : phi) v = uniform();
      utils.assign(shape.size(), phi);
      break;
    }
  }
  return Game(shape, std::move(utils));
}

}  // namespace sinkatlas
