#include "sinkatlas/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <sstream>

#include "sinkatlas/dynamics.hpp"
#include "sinkatlas/stability.hpp"

namespace sinkatlas {

namespace {

constexpr double kWaypointRadius = 1e-2;  // "passes near" for shadowed orbits

std::string fmt(double v) {
  std::ostringstream out;
  out.precision(6);
  out << v;
  return out.str();
}

void add(std::vector<CheckResult>& out, const std::string& name, bool pass,
         const std::string& detail) {
  out.push_back({name, pass, detail});
}

double sup_dist(const MixedProfile& a, const MixedProfile& b) {
  double d = 0.0;
  for (int i = 0; i < a.num_players(); ++i) {
    for (size_t s = 0; s < a.dist(i).size(); ++s) {
      d = std::max(d, std::abs(a.dist(i)[s] - b.dist(i)[s]));
    }
  }
  return d;
}

double min_observable(const TrajectoryRecord& tr, const std::string& name) {
  double best = std::numeric_limits<double>::infinity();
  for (double v : tr.observables.at(name)) best = std::min(best, v);
  return best;
}

MixedProfile blend_states(const MixedProfile& a, const MixedProfile& b,
                          double lambda) {
  std::vector<std::vector<double>> d(a.num_players());
  for (int i = 0; i < a.num_players(); ++i) {
    d[i].resize(a.dist(i).size());
    for (size_t s = 0; s < d[i].size(); ++s) {
      d[i][s] = (1.0 - lambda) * a.dist(i)[s] + lambda * b.dist(i)[s];
    }
  }
  return MixedProfile(std::move(d));
}

/// Closest approach to `target` along orbits of the start family, minimized
/// over the family parameter. The connecting orbit lives on the boundary
/// between the basins of the two poles; bisecting the family between basins
/// shadows the boundary, and once double precision of the parameter is
/// exhausted the search is re-anchored on a fresh transverse segment spanned
/// by the last flanking orbits at the latest time they still agree.
double shoot_separatrix(const Game& g,
                        std::function<MixedProfile(double)> family,
                        const MixedProfile& target, const MixedProfile& pole_a,
                        const MixedProfile& pole_b, double goal,
                        double t_max = 500.0) {
  auto run = [&](const MixedProfile& x0) {
    IntegrateOptions o;
    o.step = 1e-3;
    o.t_max = t_max;
    o.record_stride = 10;
    o.stops = {StopCondition::proximity_to(pole_a, 0.05),
               StopCondition::proximity_to(pole_b, 0.05)};
    o.observables = {ObservableSpec::distance_to("target", target)};
    return integrate(g, x0, o);
  };

  // Overshoot the requested radius so the reported pass has margin.
  goal *= 0.3;
  double best = std::numeric_limits<double>::infinity();

  // Stage 0 brackets the basin switch on a coarse grid; later stages span a
  // segment between flanking orbits, so their endpoints already disagree.
  const int grid = 12;
  double lo = 0.0, hi = 1.0;
  int out_lo = -1;
  TrajectoryRecord lo_tr, hi_tr;
  {
    int prev_out = -2;
    double prev_lam = 0.0;
    TrajectoryRecord prev_tr;
    bool found = false;
    for (int k = 0; k <= grid && !found; ++k) {
      double lam = static_cast<double>(k) / grid;
      TrajectoryRecord tr = run(family(lam));
      best = std::min(best, min_observable(tr, "target"));
      if (best <= goal) return best;
      if (k > 0 && prev_out >= 0 && tr.stop_index >= 0 &&
          tr.stop_index != prev_out) {
        lo = prev_lam;
        hi = lam;
        out_lo = prev_out;
        lo_tr = std::move(prev_tr);
        hi_tr = tr;
        found = true;
      }
      prev_out = tr.stop_index;
      prev_lam = lam;
      prev_tr = std::move(tr);
    }
    if (!found) return best;
  }

  for (int stage = 0; stage < 8; ++stage) {
    for (int iter = 0; iter < 64 && best > goal; ++iter) {
      double mid = 0.5 * (lo + hi);
      if (mid == lo || mid == hi) break;  // parameter resolution exhausted
      TrajectoryRecord tr = run(family(mid));
      best = std::min(best, min_observable(tr, "target"));
      if (tr.stop_index == out_lo) {
        lo = mid;
        lo_tr = std::move(tr);
      } else {
        hi = mid;
        hi_tr = std::move(tr);
      }
    }
    if (best <= goal) return best;

    // Re-anchor on the latest record where the flanking orbits still agree.
    size_t n = std::min(lo_tr.num_records(), hi_tr.num_records());
    size_t anchor = 0;
    bool have_anchor = false;
    for (size_t k = 0; k < n; ++k) {
      if (sup_dist(lo_tr.state(k), hi_tr.state(k)) <= 1e-3) {
        anchor = k;
        have_anchor = true;
      }
    }
    if (!have_anchor || anchor == 0) return best;
    MixedProfile a = lo_tr.state(anchor);
    MixedProfile b = hi_tr.state(anchor);
    if (sup_dist(a, b) == 0.0) return best;  // nothing left to split
    family = [a, b](double lam) { return blend_states(a, b, lam); };
    TrajectoryRecord new_lo = run(family(0.0));
    TrajectoryRecord new_hi = run(family(1.0));
    best = std::min(best, min_observable(new_lo, "target"));
    best = std::min(best, min_observable(new_hi, "target"));
    if (best <= goal) return best;
    if (new_lo.stop_index < 0 || new_hi.stop_index < 0 ||
        new_lo.stop_index == new_hi.stop_index) {
      return best;
    }
    lo = 0.0;
    hi = 1.0;
    out_lo = new_lo.stop_index;
    lo_tr = std::move(new_lo);
    hi_tr = std::move(new_hi);
  }
  return best;
}

/// Start family for shadowing an orbit out of a 2x2-support fixed point: the
/// perturbation has fixed magnitude but sweeps its direction from "+shift
/// inside the support square" through "pure escape coordinate" to "-shift",
/// which brackets the basin boundary transversally.
MixedProfile cone_start(const MixedProfile& fp, int shift_player,
                        int shift_strategy, int esc_player, int esc_strategy,
                        double magnitude, double lambda) {
  double theta = lambda * 3.14159265358979323846;
  double mu = magnitude * std::cos(theta);
  double esc = magnitude * std::max(std::sin(theta), 0.01);
  std::vector<std::vector<double>> d(fp.num_players());
  for (int i = 0; i < fp.num_players(); ++i) d[i] = fp.dist(i);
  // Escape coordinate gets `esc`, its player's support scales down.
  for (double& v : d[esc_player]) v *= 1.0 - esc;
  d[esc_player][esc_strategy] += esc;
  // In-square shift: move mu from the complementary support strategy.
  auto& sd = d[shift_player];
  sd[shift_strategy] += mu;
  for (size_t s = 0; s < sd.size(); ++s) {
    if (static_cast<int>(s) != shift_strategy && sd[s] > magnitude) {
      sd[s] -= mu;
      break;
    }
  }
  double norm = 0.0;
  for (double v : sd) norm += v;
  for (double& v : sd) v /= norm;
  return MixedProfile(std::move(d));
}

// ---------------------------------------------------------------------------

std::vector<CheckResult> verify_shapley(std::uint64_t seed) {
  std::vector<CheckResult> out;
  NamedGame ng = make_shapley();
  PreferenceGraph pg = build_graph(ng.game);
  auto sinks = sink_equilibria(pg, ng.game);

  add(out, "unique sink of six profiles",
      sinks.size() == 1 && sinks[0].profiles.size() == 6,
      "sinks=" + std::to_string(sinks.size()));

  bool weights_ok = true;
  for (ProfileId p : sinks[0].profiles) {
    for (int arc_id : pg.out_arc_ids(p)) {
      const Arc& a = pg.arcs()[arc_id];
      if (ng.expected_sinks[0].count(a.to) &&
          std::abs(a.weight - 1.0) > 1e-12) {
        weights_ok = false;
      }
    }
  }
  add(out, "all cycle arc weights equal 1", weights_ok, "");

  auto rep = is_pseudoconvex_sink(ng.game, pg, sinks[0]);
  add(out, "pseudoconvex (non-strict default)", rep.verdict,
      "cavities=" + std::to_string(rep.num_cavities));
  add(out, "every cavity is the one-in-one-out kind",
      rep.num_one_in_one_out == rep.num_cavities,
      "one_in_one_out=" + std::to_string(rep.num_one_in_one_out));

  auto certs = find_local_sources(ng.game, pg, sinks[0]);
  add(out, "no local source found in the searched families", certs.empty(),
      "certificates=" + std::to_string(certs.size()));

  std::mt19937_64 rng(seed);
  ProductMatrix m = product_matrix(ng.game);
  int positive = 0;
  const int samples = 100;
  for (int k = 0; k < samples; ++k) {
    MixedProfile x =
        sample_near_content(ng.game, sinks[0].profiles, 0.999, 1.0, rng);
    double dz =
        lyapunov_zH_derivative(m, sinks[0].profiles, correlated_state(ng.game, x));
    if (dz > 0) ++positive;
  }
  add(out, "dzH/dt > 0 at 100 states with zH in [0.999, 1)",
      positive == samples, std::to_string(positive) + "/100 positive");
  return out;
}

std::vector<CheckResult> verify_cog(std::uint64_t) {
  std::vector<CheckResult> out;
  NamedGame ng = make_cog();
  PreferenceGraph pg = build_graph(ng.game);
  auto sinks = sink_equilibria(pg, ng.game);
  ProfileId a = ng.game.flatten(ng.landmarks.at("a"));

  add(out, "unique sink equilibrium of eight profiles",
      sinks.size() == 1 && sinks[0].profiles.size() == 8, "");

  auto rep = is_pseudoconvex_sink(ng.game, pg, sinks[0]);
  bool has_ls_cavity_at_a = false;
  for (const Cavity& c : rep.failing) {
    if (c.kind == Cavity::Kind::LocalSource && c.diag == a) {
      has_ls_cavity_at_a = true;
    }
  }
  add(out, "not pseudoconvex, with a local-source cavity at a",
      !rep.verdict && has_ls_cavity_at_a,
      "failing=" + std::to_string(rep.failing.size()));

  auto certs = find_local_sources(ng.game, pg, sinks[0]);
  bool pure_at_a = certs.size() == 1 &&
                   certs[0].kind == LocalSourceCertificate::Kind::Pure &&
                   content_mass(ng.game, {a}, certs[0].point) > 0.5;
  add(out, "exactly one certificate: pure local source at a", pure_at_a,
      "certificates=" + std::to_string(certs.size()));

  // Escape: seed 1e-4 into the square's interior and watch the mass on H.
  const double d = 1e-4;
  MixedProfile start({{1 - d / 2, d / 2, 0}, {1 - d / 2, d / 2, 0}});
  IntegrateOptions o;
  o.step = 1e-3;
  o.t_max = 100;
  o.record_stride = 10;
  o.observables = {ObservableSpec::content_mass("zH", sinks[0].profile_set())};
  o.stops = {StopCondition::content_mass_at_most(sinks[0].profile_set(), 0.9)};
  TrajectoryRecord tr = integrate(ng.game, start, o);
  double zmin = min_observable(tr, "zH");
  add(out, "trajectory seeded at the local source escapes content(H)",
      zmin < 0.99, "min zH = " + fmt(zmin));
  return out;
}

std::vector<CheckResult> verify_three_player(std::uint64_t) {
  std::vector<CheckResult> out;
  NamedGame ng = make_three_player();
  PreferenceGraph pg = build_graph(ng.game);
  auto sinks = sink_equilibria(pg, ng.game);
  ProfileId a = ng.game.flatten(ng.landmarks.at("a"));
  ProfileId b = ng.game.flatten(ng.landmarks.at("b"));

  add(out, "two sink equilibria", sinks.size() == 2,
      "sinks=" + std::to_string(sinks.size()));

  RestrictedGame cube = restrict(ng.game, ng.subgames.at("cube"));
  bool parity_ok = true;
  for (ProfileId p = 0; p < cube.game.num_profiles(); ++p) {
    int parity = 0;
    for (int i = 0; i < 3; ++i) parity ^= cube.game.coord(p, i) & 1;
    for (int pl = 0; pl < 3; ++pl) {
      if (std::abs(cube.game.utility(pl, p) - parity) > 0) parity_ok = false;
    }
  }
  add(out, "cube payoffs: 1 at its sinks, 0 at its sources, for everyone",
      parity_ok, "");

  PreferenceGraph cube_graph = induced_subgraph(pg, ng.subgames.at("cube"));
  add(out, "a is a source and b a sink of the cube subgraph",
      cube_graph.is_source(a) && cube_graph.is_sink(b), "");
  add(out, "no path from a to b in the preference graph", !pg.has_path(a, b),
      "");

  // Diagonal reduction: every coordinate derivative equals w(1-w)(2w-1)^2.
  double max_err = 0.0;
  for (int k = 1; k < 1000; ++k) {
    double w = k / 1000.0;
    MixedProfile x({{1 - w, w}, {1 - w, w}, {1 - w, w}});
    auto dx = replicator_vector_field(cube.game, x);
    double expect = w * (1 - w) * (2 * w - 1) * (2 * w - 1);
    for (int i = 0; i < 3; ++i) {
      max_err = std::max(max_err, std::abs(dx[i][1] - expect));
    }
  }
  add(out, "diagonal vector field matches w(1-w)(2w-1)^2 to 1e-10",
      max_err <= 1e-10, "max err = " + fmt(max_err));

  // Shadowed chain a -> xhat -> b: the first leg ends inside the waypoint
  // radius of the interior saddle; the second restarts on the diagonal just
  // past it. Total time must stay within the budget.
  MixedProfile xhat({{0.5, 0.5}, {0.5, 0.5}, {0.5, 0.5}});
  MixedProfile bvert = MixedProfile::point_mass(cube.game.strategy_counts(),
                                                Profile{1, 1, 1});
  IntegrateOptions o1;
  o1.step = 1e-3;
  o1.t_max = kDefaultTMax;
  o1.record_stride = 100;
  o1.stops = {StopCondition::proximity_to(xhat, kWaypointRadius)};
  TrajectoryRecord leg1 =
      integrate(cube.game, MixedProfile({{0.99, 0.01}, {0.99, 0.01}, {0.99, 0.01}}), o1);
  bool leg1_ok = leg1.stop_index == 0;

  double w2 = 0.5 + kWaypointRadius;
  IntegrateOptions o2 = o1;
  o2.stops = {StopCondition::proximity_to(bvert, 1e-3)};
  TrajectoryRecord leg2 = integrate(
      cube.game, MixedProfile({{1 - w2, w2}, {1 - w2, w2}, {1 - w2, w2}}), o2);
  bool leg2_ok = leg2.stop_index == 0;
  double total_t = leg1.final_time + leg2.final_time;
  add(out,
      "diagonal orbit from (0.01,0.01,0.01) passes within 1e-2 of the saddle "
      "and, restarted across it, ends within 1e-3 of b in total time <= 1e4",
      leg1_ok && leg2_ok && total_t <= kDefaultTMax,
      "t1 = " + fmt(leg1.final_time) + ", t2 = " + fmt(leg2.final_time));
  return out;
}

std::vector<CheckResult> verify_two_player(std::uint64_t) {
  std::vector<CheckResult> out;
  NamedGame ng = make_two_player();
  PreferenceGraph pg = build_graph(ng.game);
  auto sinks = sink_equilibria(pg, ng.game);
  ProfileId a = ng.game.flatten(ng.landmarks.at("a"));
  ProfileId b = ng.game.flatten(ng.landmarks.at("b"));

  add(out, "two sink equilibria", sinks.size() == 2, "");
  add(out, "no path from a to b", !pg.has_path(a, b), "");

  auto certs = find_local_sources(ng.game, pg, sinks[0]);
  bool pure_at_a = false, gadget_at_xhat = false;
  const MixedProfile& xhat = ng.fixed_points.at("xhat");
  for (const auto& c : certs) {
    if (c.kind == LocalSourceCertificate::Kind::Pure &&
        content_mass(ng.game, {a}, c.point) > 0.5) {
      pure_at_a = true;
    }
    if (c.kind == LocalSourceCertificate::Kind::Gadget &&
        sup_dist(c.point, xhat) < 1e-9) {
      gadget_at_xhat = true;
    }
  }
  add(out, "certificates: pure local source at a, gadget fixed point xhat",
      pure_at_a && gadget_at_xhat,
      "certificates=" + std::to_string(certs.size()));

  // Escape from the certified direction at xhat (new column of the gadget).
  const double d = 1e-4;
  MixedProfile esc({{xhat.prob(0, 0), xhat.prob(0, 1), 0, 0},
                    {xhat.prob(1, 0) * (1 - d), xhat.prob(1, 1) * (1 - d), d,
                     0, 0}});
  IntegrateOptions oe;
  oe.step = 1e-3;
  oe.t_max = 100;
  oe.record_stride = 10;
  oe.observables = {ObservableSpec::content_mass("zH", sinks[0].profile_set())};
  oe.stops = {StopCondition::content_mass_at_most(sinks[0].profile_set(), 0.9)};
  double zmin = min_observable(integrate(ng.game, esc, oe), "zH");
  add(out, "trajectory seeded at xhat escapes content(H)", zmin < 0.99,
      "min zH = " + fmt(zmin));

  // Orbit chain xhat -> yhat -> zhat -> c -> b, shadowed leg by leg in the
  // invariant faces that host each connecting orbit.
  const MixedProfile& yhat = ng.fixed_points.at("yhat");
  const MixedProfile& zhat = ng.fixed_points.at("zhat");

  RestrictedGame g1 = restrict(ng.game, ng.subgames.at("gadget"));
  MixedProfile xhat_g1 = project(xhat, ng.subgames.at("gadget"));
  auto leg1_start = [&](double lam) {
    return cone_start(xhat_g1, /*shift*/ 0, 0, /*escape*/ 1, 2, d, lam);
  };
  double best1 = shoot_separatrix(
      g1.game, leg1_start, project(yhat, ng.subgames.at("gadget")),
      MixedProfile::point_mass(g1.game.strategy_counts(), {0, 1}),
      MixedProfile::point_mass(g1.game.strategy_counts(), {1, 2}),
      kWaypointRadius);
  add(out, "orbit from xhat passes within 1e-2 of yhat", best1 <= kWaypointRadius,
      "closest = " + fmt(best1));

  RestrictedGame g2 = restrict(ng.game, ng.subgames.at("gadget2"));
  MixedProfile yhat_g2 = project(yhat, ng.subgames.at("gadget2"));
  auto leg2_start = [&](double lam) {
    return cone_start(yhat_g2, /*shift*/ 1, 0, /*escape*/ 0, 2, d, lam);
  };
  double best2 = shoot_separatrix(
      g2.game, leg2_start, project(zhat, ng.subgames.at("gadget2")),
      MixedProfile::point_mass(g2.game.strategy_counts(), {0, 0}),
      MixedProfile::point_mass(g2.game.strategy_counts(), {1, 1}),
      kWaypointRadius);
  add(out, "orbit from yhat passes within 1e-2 of zhat", best2 <= kWaypointRadius,
      "closest = " + fmt(best2));

  // zhat's square is a coordination game; nudging both coordinates toward
  // the exit corner c lands in c's basin.
  Subgame square({{0, 2}, {1, 2}});
  RestrictedGame sq = restrict(ng.game, square);
  MixedProfile leg3_start(
      {{0.4 - d, 0.6 + d}, {0.7 - d, 0.3 + d}});
  IntegrateOptions o3;
  o3.step = 1e-3;
  o3.t_max = 500;
  o3.record_stride = 10;
  o3.stops = {StopCondition::proximity_to(
      MixedProfile::point_mass(sq.game.strategy_counts(), {1, 1}),
      kWaypointRadius)};
  TrajectoryRecord leg3 = integrate(sq.game, leg3_start, o3);
  add(out, "orbit from zhat reaches the exit corner c", leg3.stop_index == 0,
      "t = " + fmt(leg3.final_time));

  // Final edge: from next to c the orbit runs along the arc c -> b.
  MixedProfile leg4_start({{0, 0, 1, 0}, {0, 0, 1 - d, d, 0}});
  IntegrateOptions o4;
  o4.step = 1e-3;
  o4.t_max = 500;
  o4.record_stride = 10;
  o4.stops = {StopCondition::proximity_to(
      MixedProfile::point_mass(ng.game.strategy_counts(), {2, 3}), 1e-3)};
  TrajectoryRecord leg4 = integrate(ng.game, leg4_start, o4);
  add(out, "edge orbit from c ends within 1e-3 of b", leg4.stop_index == 0,
      "t = " + fmt(leg4.final_time));
  return out;
}

std::vector<CheckResult> verify_gadget(std::uint64_t) {
  std::vector<CheckResult> out;
  NamedGame ng = make_gadget_2x3();
  PreferenceGraph pg = build_graph(ng.game);
  auto sinks = sink_equilibria(pg, ng.game);

  add(out, "two pure sinks and two sources",
      sinks.size() == 2 && sinks[0].is_singleton_pne &&
          sinks[1].is_singleton_pne &&
          pg.is_source(ng.game.flatten(ng.landmarks.at("r1"))) &&
          pg.is_source(ng.game.flatten(ng.landmarks.at("r2"))),
      "");

  auto fx = fixed_point_2x2(ng.game, Subgame({{0, 1}, {0, 1}}));
  auto fy = fixed_point_2x2(ng.game, Subgame({{0, 1}, {1, 2}}));
  bool x_nash = fx && is_quasi_strict_nash(ng.game, *fx).quasi_strict;
  bool y_nash = fy && is_quasi_strict_nash(ng.game, *fy).quasi_strict;
  add(out, "exactly one of xhat/yhat is a quasi-strict Nash equilibrium",
      fx && fy && (x_nash != y_nash), "");
  bool rule = fx && fy &&
              ((fx->prob(0, 0) > fy->prob(0, 0)) ? (x_nash && !y_nash)
                                                 : (y_nash && !x_nash));
  add(out, "the larger top-row mass picks the Nash fixed point", rule,
      "xhat_r = " + fmt(fx->prob(0, 0)) + ", yhat_r = " + fmt(fy->prob(0, 0)));

  // Orbit started 1e-4 off the non-Nash fixed point passes near the Nash one.
  const MixedProfile& from = x_nash ? *fy : *fx;
  const MixedProfile& to = x_nash ? *fx : *fy;
  const double d = 1e-4;
  int unused_col = from.prob(1, 0) > 0 ? 2 : 0;  // escape column of `from`
  auto start = [&](double lam) {
    return cone_start(from, /*shift*/ 0, 0, /*escape*/ 1, unused_col, d, lam);
  };
  double best = shoot_separatrix(
      ng.game, start, to,
      MixedProfile::point_mass(ng.game.strategy_counts(), {0, 1}),
      MixedProfile::point_mass(ng.game.strategy_counts(), {1, 2}),
      kWaypointRadius);
  add(out,
      "orbit from the non-Nash fixed point passes within 1e-2 of the Nash one",
      best <= kWaypointRadius, "closest = " + fmt(best));
  return out;
}

std::vector<CheckResult> verify_dominance(std::uint64_t) {
  std::vector<CheckResult> out;
  NamedGame ng = make_dominance_2x3();
  PreferenceGraph pg = build_graph(ng.game);

  auto sccs = scc_decomposition(pg);
  add(out, "preference graph is a single SCC covering all six profiles",
      sccs.size() == 1 && sccs[0].size() == 6, "");
  add(out, "column 1 strictly dominates column 2",
      ng.game.utility(1, Profile{0, 1}) > ng.game.utility(1, Profile{0, 2}) &&
          ng.game.utility(1, Profile{1, 1}) > ng.game.utility(1, Profile{1, 2}),
      "");

  IntegrateOptions o;
  o.step = 1e-3;
  o.t_max = 1e3;
  o.record_stride = 100;
  TrajectoryRecord tr = integrate(
      ng.game, MixedProfile::barycenter(ng.game.strategy_counts()), o);
  double final_mass = tr.final_state().prob(1, 2);
  add(out, "dominated column mass < 1e-4 by t = 1e3", final_mass < 1e-4,
      "mass = " + fmt(final_mass));

  ProfileSet omega = estimate_omega_limit(tr, 0.2);
  ProfileSet face = {ng.game.flatten(Profile{0, 0}), ng.game.flatten(Profile{0, 1}),
                     ng.game.flatten(Profile{1, 0}), ng.game.flatten(Profile{1, 1})};
  add(out, "omega-limit support is the four face profiles", omega == face,
      "support size = " + std::to_string(omega.size()));
  return out;
}

}  // namespace

std::vector<CheckResult> verify_named_game(const std::string& id,
                                           std::uint64_t seed) {
  if (id == "shapley") return verify_shapley(seed);
  if (id == "cog_fig2") return verify_cog(seed);
  if (id == "three_player_fig3") return verify_three_player(seed);
  if (id == "two_player_fig4") return verify_two_player(seed);
  if (id == "gadget_2x3_fig4b") return verify_gadget(seed);
  if (id == "dominance_fig6") return verify_dominance(seed);
  throw InputError("unknown corpus id: " + id);
}

bool all_passed(const std::vector<CheckResult>& checks) {
  return std::all_of(checks.begin(), checks.end(),
                     [](const CheckResult& c) { return c.pass; });
}

}  // namespace sinkatlas
