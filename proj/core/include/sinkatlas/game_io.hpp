#pragma once

#include <nlohmann/json.hpp>
#include <string>

#include "sinkatlas/game.hpp"

namespace sinkatlas {

// Game file format: JSON object with
//   players          integer N
//   strategy_counts  array of N positive integers
//   utilities        array of N flat payoff arrays, lexicographic profile
//                    order with player 1's index varying slowest
//   strategy_names   optional array of N label arrays
// Read -> write round-trips are value-identical.

nlohmann::json game_to_json(const Game& g);
Game game_from_json(const nlohmann::json& j);

Game read_game(const std::string& path);
void write_game(const Game& g, const std::string& path);

}  // namespace sinkatlas
