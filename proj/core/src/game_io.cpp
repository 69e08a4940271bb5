#include "sinkatlas/game_io.hpp"

#include <fstream>

namespace sinkatlas {

using nlohmann::json;

json game_to_json(const Game& g) {
  json j;
  j["players"] = g.num_players();
  j["strategy_counts"] = g.strategy_counts();
  j["utilities"] = json::array();
  for (int i = 0; i < g.num_players(); ++i) {
    json flat = json::array();
    for (ProfileId p = 0; p < g.num_profiles(); ++p) {
      flat.push_back(g.utility(i, p));
    }
    j["utilities"].push_back(std::move(flat));
  }
  if (g.has_strategy_names()) {
    j["strategy_names"] = g.strategy_names();
  }
  return j;
}

Game game_from_json(const json& j) {
  if (!j.is_object()) throw InputError("game file: top level must be an object");
  for (const char* key : {"players", "strategy_counts", "utilities"}) {
    if (!j.contains(key)) {
      throw InputError(std::string("game file: missing field '") + key + "'");
    }
  }
  int players = 0;
  std::vector<int> counts;
  std::vector<std::vector<double>> utilities;
  std::vector<std::vector<std::string>> names;
  try {
    players = j.at("players").get<int>();
    counts = j.at("strategy_counts").get<std::vector<int>>();
    utilities = j.at("utilities").get<std::vector<std::vector<double>>>();
    if (j.contains("strategy_names")) {
      names = j.at("strategy_names").get<std::vector<std::vector<std::string>>>();
    }
  } catch (const json::exception& e) {
    throw InputError(std::string("game file: ") + e.what());
  }
  if (players != static_cast<int>(counts.size())) {
    throw InputError("game file: players does not match strategy_counts length");
  }
  return Game(std::move(counts), std::move(utilities), std::move(names));
}

Game read_game(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open game file: " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    // e.what() carries byte position info from nlohmann.
    throw InputError("game file '" + path + "': " + e.what());
  }
  return game_from_json(j);
}

void write_game(const Game& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot open output file: " + path);
  out << game_to_json(g).dump(2) << "\n";
}

}  // namespace sinkatlas
