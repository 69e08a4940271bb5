#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "sinkatlas/game.hpp"
#include "sinkatlas/preference_graph.hpp"

namespace sinkatlas {

/// A fixture game with its verified structure. Constructors run a structural
/// check (graph arcs, sinks, named fixed points) and throw std::logic_error
/// if the constructed tensor does not realize the intended shape.
struct NamedGame {
  std::string id;
  std::string description;
  Game game;
  /// Named pure profiles ("a", "b", "c", "out", ...).
  std::map<std::string, Profile> landmarks;
  /// Expected sink equilibria, sorted by smallest contained profile id.
  std::vector<ProfileSet> expected_sinks;
  /// Named subgames ("square", "cube", "gadget", "gadget2", ...).
  std::map<std::string, Subgame> subgames;
  /// Named fixed points with exact coordinates ("xhat", "yhat", "zhat").
  std::map<std::string, MixedProfile> fixed_points;
};

/// Shapley's 3x3 game, perturbed off its ties: unique sink equilibrium is the
/// six-profile best-response cycle, every cycle arc of weight one, and the
/// three remaining profiles are sources.
NamedGame make_shapley();

/// 3x3 game whose unique sink equilibrium wraps around one excluded profile,
/// leaving a local source at the corner `a` of the top-left 2x2 square.
NamedGame make_cog();

/// 3x3x2 game with two sink equilibria joined by replicator orbits: inside
/// the distinguished 2x2x2 subgame every player earns 1 at the subgame's
/// sinks and 0 at its sources, `a` is a source and `b` a sink of that
/// subgame, and the graph has no path from `a` to `b`.
NamedGame make_three_player();

/// 4x5 two-player game with two sink equilibria but a single replicator
/// attractor: an orbit chain runs from the sink containing `a` through the
/// fixed points xhat, yhat, zhat to the exit profile `c` and on to the
/// opposite sink `b`.
NamedGame make_two_player();

struct GadgetWeights {
  double z_x = 0.4;  // top-row mass where the column player is indifferent
  double z_y = 0.6;  // between columns 1/2 (z_x) and columns 2/3 (z_y)
};

/// 2x3 gadget: two sources, two sinks, and two fixed points xhat (columns
/// {0,1}) and yhat (columns {1,2}) of which exactly one is a quasi-strict
/// Nash equilibrium; which one flips with the order of z_x and z_y.
NamedGame make_gadget_2x3(const GadgetWeights& weights = {});

/// 2x3 game where column 1 strictly dominates column 2 yet the preference
/// graph is one strongly connected component covering all six profiles.
NamedGame make_dominance_2x3();

std::vector<std::string> corpus_ids();
std::string corpus_description(const std::string& id);
NamedGame make_named(const std::string& id);

enum class RandomGameClass { Generic, ZeroSum, Potential };

RandomGameClass random_game_class_from_string(const std::string& name);

/// Deterministic per seed. Generic: i.i.d. uniform payoffs. ZeroSum
/// (two-player only): u2 = -u1. Potential: every player's utility equals a
/// random scalar potential per profile, so the graph is acyclic.
Game random_game(const std::vector<int>& shape, RandomGameClass cls,
                 std::uint64_t seed);

}  // namespace sinkatlas
