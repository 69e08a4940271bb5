#include "sinkatlas/game.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>
#include <sstream>

namespace sinkatlas {

namespace {

void check_finite(double v, const char* what) {
  if (!std::isfinite(v)) {
    throw InputError(std::string(what) + " must be finite");
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Subgame

Subgame::Subgame(std::vector<std::vector<int>> subsets)
    : subsets_(std::move(subsets)) {
  for (auto& s : subsets_) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    if (s.empty()) {
      throw InputError("subgame has an empty strategy subset");
    }
    if (s.front() < 0) {
      throw InputError("subgame has a negative strategy index");
    }
  }
}

Subgame Subgame::full(const std::vector<int>& strategy_counts) {
  std::vector<std::vector<int>> subsets(strategy_counts.size());
  for (size_t i = 0; i < strategy_counts.size(); ++i) {
    subsets[i].resize(strategy_counts[i]);
    std::iota(subsets[i].begin(), subsets[i].end(), 0);
  }
  return Subgame(std::move(subsets));
}

Subgame Subgame::singleton(const Profile& p) {
  std::vector<std::vector<int>> subsets;
  subsets.reserve(p.size());
  for (int c : p) subsets.push_back({c});
  return Subgame(std::move(subsets));
}

bool Subgame::is_full(const std::vector<int>& strategy_counts) const {
  if (subsets_.size() != strategy_counts.size()) return false;
  for (size_t i = 0; i < subsets_.size(); ++i) {
    if (static_cast<int>(subsets_[i].size()) != strategy_counts[i]) return false;
  }
  return true;
}

bool Subgame::contains(const Profile& p) const {
  if (p.size() != subsets_.size()) return false;
  for (size_t i = 0; i < p.size(); ++i) {
    if (!std::binary_search(subsets_[i].begin(), subsets_[i].end(), p[i])) {
      return false;
    }
  }
  return true;
}

long long Subgame::num_profiles() const {
  long long n = 1;
  for (const auto& s : subsets_) n *= static_cast<long long>(s.size());
  return n;
}

// ---------------------------------------------------------------------------
// MixedProfile

MixedProfile::MixedProfile(std::vector<std::vector<double>> dists)
    : dists_(std::move(dists)) {
  if (dists_.empty()) throw InputError("mixed profile needs >= 1 player");
  for (const auto& d : dists_) {
    if (d.empty()) throw InputError("mixed profile has an empty distribution");
    double sum = 0.0;
    for (double v : d) {
      check_finite(v, "mixed profile entry");
      if (v < 0.0) throw InputError("mixed profile entry is negative");
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-12) {
      throw InputError("mixed profile distribution does not sum to 1 (got " +
                       std::to_string(sum) + ")");
    }
  }
}

MixedProfile MixedProfile::barycenter(const std::vector<int>& strategy_counts) {
  std::vector<std::vector<double>> d(strategy_counts.size());
  for (size_t i = 0; i < strategy_counts.size(); ++i) {
    d[i].assign(strategy_counts[i], 1.0 / strategy_counts[i]);
  }
  return MixedProfile(std::move(d));
}

MixedProfile MixedProfile::point_mass(const std::vector<int>& strategy_counts,
                                      const Profile& p) {
  if (p.size() != strategy_counts.size()) {
    throw InputError("point mass profile has the wrong number of players");
  }
  std::vector<std::vector<double>> d(strategy_counts.size());
  for (size_t i = 0; i < strategy_counts.size(); ++i) {
    if (p[i] < 0 || p[i] >= strategy_counts[i]) {
      throw InputError("point mass strategy index out of range");
    }
    d[i].assign(strategy_counts[i], 0.0);
    d[i][p[i]] = 1.0;
  }
  return MixedProfile(std::move(d));
}

Subgame MixedProfile::support(double threshold) const {
  std::vector<std::vector<int>> subsets(dists_.size());
  for (size_t i = 0; i < dists_.size(); ++i) {
    for (size_t s = 0; s < dists_[i].size(); ++s) {
      if (dists_[i][s] > threshold) subsets[i].push_back(static_cast<int>(s));
    }
    if (subsets[i].empty()) {
      // All mass below threshold: fall back to the largest entry so the
      // support is never empty.
      size_t best = std::max_element(dists_[i].begin(), dists_[i].end()) -
                    dists_[i].begin();
      subsets[i].push_back(static_cast<int>(best));
    }
  }
  return Subgame(std::move(subsets));
}

bool MixedProfile::same_shape(const std::vector<int>& strategy_counts) const {
  if (dists_.size() != strategy_counts.size()) return false;
  for (size_t i = 0; i < dists_.size(); ++i) {
    if (static_cast<int>(dists_[i].size()) != strategy_counts[i]) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Game

Game::Game(std::vector<int> strategy_counts,
           std::vector<std::vector<double>> utilities,
           std::vector<std::vector<std::string>> strategy_names)
    : counts_(std::move(strategy_counts)),
      utils_(std::move(utilities)),
      names_(std::move(strategy_names)) {
  if (counts_.empty()) throw InputError("game needs >= 1 player");
  long long n = 1;
  for (int m : counts_) {
    if (m < 1) throw InputError("strategy count must be >= 1");
    n *= m;
    if (n > (1 << 26)) throw InputError("game too large");
  }
  num_profiles_ = static_cast<int>(n);
  strides_.assign(counts_.size(), 1);
  for (int i = static_cast<int>(counts_.size()) - 2; i >= 0; --i) {
    strides_[i] = strides_[i + 1] * counts_[i + 1];
  }
  if (utils_.size() != counts_.size()) {
    throw InputError("utilities must have one flat array per player");
  }
  for (const auto& u : utils_) {
    if (static_cast<int>(u.size()) != num_profiles_) {
      throw InputError("utility array has wrong length");
    }
    for (double v : u) check_finite(v, "utility");
  }
  if (!names_.empty()) {
    if (names_.size() != counts_.size()) {
      throw InputError("strategy_names must have one list per player");
    }
    for (size_t i = 0; i < names_.size(); ++i) {
      if (static_cast<int>(names_[i].size()) != counts_[i]) {
        throw InputError("strategy_names list has wrong length");
      }
    }
  }
}

ProfileId Game::flatten(std::span<const int> coords) const {
  if (static_cast<int>(coords.size()) != num_players()) {
    throw InputError("profile has wrong number of players");
  }
  ProfileId id = 0;
  for (int i = 0; i < num_players(); ++i) {
    if (coords[i] < 0 || coords[i] >= counts_[i]) {
      throw std::out_of_range("strategy index out of range");
    }
    id += coords[i] * strides_[i];
  }
  return id;
}

Profile Game::unflatten(ProfileId id) const {
  Profile p(num_players());
  for (int i = 0; i < num_players(); ++i) p[i] = coord(id, i);
  return p;
}

double Game::utility(int player, const Profile& p) const {
  if (player < 0 || player >= num_players()) {
    throw std::out_of_range("player index out of range");
  }
  return utils_[player][flatten(p)];
}

double Game::utility_mixed(int player, const MixedProfile& x) const {
  if (player < 0 || player >= num_players()) {
    throw std::out_of_range("player index out of range");
  }
  if (!x.same_shape(counts_)) {
    throw InputError("mixed profile shape does not match game");
  }
  double total = 0.0;
  for (ProfileId p = 0; p < num_profiles_; ++p) {
    double w = 1.0;
    for (int i = 0; i < num_players(); ++i) w *= x.prob(i, coord(p, i));
    total += w * utils_[player][p];
  }
  return total;
}

double Game::utility_vs_mixed(int player, int strategy,
                              const MixedProfile& x) const {
  if (strategy < 0 || strategy >= counts_[player]) {
    throw std::out_of_range("strategy index out of range");
  }
  double total = 0.0;
  for (ProfileId p = 0; p < num_profiles_; ++p) {
    if (coord(p, player) != strategy) continue;
    double w = 1.0;
    for (int i = 0; i < num_players(); ++i) {
      if (i != player) w *= x.prob(i, coord(p, i));
    }
    total += w * utils_[player][p];
  }
  return total;
}

Game Game::negated() const {
  std::vector<std::vector<double>> u = utils_;
  for (auto& per_player : u) {
    for (double& v : per_player) v = -v;
  }
  return Game(counts_, std::move(u), names_);
}

std::string Game::profile_label(ProfileId p) const {
  std::ostringstream out;
  for (int i = 0; i < num_players(); ++i) {
    if (i) out << ",";
    int c = coord(p, i);
    if (has_strategy_names()) {
      out << names_[i][c];
    } else {
      out << c;
    }
  }
  return out.str();
}

std::uint64_t Game::digest() const {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](const void* data, size_t n) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    for (size_t i = 0; i < n; ++i) {
      h ^= bytes[i];
      h *= 1099511628211ull;
    }
  };
  for (int m : counts_) mix(&m, sizeof(m));
  for (const auto& u : utils_) mix(u.data(), u.size() * sizeof(double));
  return h;
}

// ---------------------------------------------------------------------------
// Restriction / embedding

Profile RestrictedGame::to_parent(const Profile& sub) const {
  Profile p(sub.size());
  for (size_t i = 0; i < sub.size(); ++i) {
    p[i] = selection.subset(static_cast<int>(i))[sub[i]];
  }
  return p;
}

ProfileId RestrictedGame::parent_profile(const Game& parent,
                                         ProfileId sub) const {
  return parent.flatten(to_parent(game.unflatten(sub)));
}

RestrictedGame restrict(const Game& g, const Subgame& y) {
  if (y.num_players() != g.num_players()) {
    throw InputError("subgame has wrong number of players");
  }
  std::vector<int> counts(y.num_players());
  for (int i = 0; i < y.num_players(); ++i) {
    counts[i] = static_cast<int>(y.subset(i).size());
    if (y.subset(i).back() >= g.strategy_counts()[i]) {
      throw InputError("subgame strategy index out of range");
    }
  }
  long long sub_n = y.num_profiles();
  std::vector<std::vector<double>> utils(
      g.num_players(), std::vector<double>(static_cast<size_t>(sub_n)));

  // Enumerate subgame profiles in the restricted game's own lexicographic
  // order so flat indices line up with the new shape.
  Profile sub(g.num_players(), 0);
  for (long long flat = 0; flat < sub_n; ++flat) {
    Profile parent(g.num_players());
    for (int i = 0; i < g.num_players(); ++i) parent[i] = y.subset(i)[sub[i]];
    ProfileId pid = g.flatten(parent);
    for (int pl = 0; pl < g.num_players(); ++pl) {
      utils[pl][static_cast<size_t>(flat)] = g.utility(pl, pid);
    }
    for (int i = g.num_players() - 1; i >= 0; --i) {
      if (++sub[i] < counts[i]) break;
      sub[i] = 0;
    }
  }

  std::vector<std::vector<std::string>> names;
  if (g.has_strategy_names()) {
    names.resize(g.num_players());
    for (int i = 0; i < g.num_players(); ++i) {
      for (int s : y.subset(i)) names[i].push_back(g.strategy_names()[i][s]);
    }
  }
  return RestrictedGame{Game(std::move(counts), std::move(utils), std::move(names)),
                        y};
}

MixedProfile embed(const MixedProfile& sub_x, const Subgame& y,
                   const std::vector<int>& parent_counts) {
  std::vector<std::vector<double>> d(parent_counts.size());
  for (size_t i = 0; i < parent_counts.size(); ++i) {
    d[i].assign(parent_counts[i], 0.0);
    const auto& subset = y.subset(static_cast<int>(i));
    for (size_t k = 0; k < subset.size(); ++k) {
      d[i][subset[k]] = sub_x.prob(static_cast<int>(i), static_cast<int>(k));
    }
  }
  return MixedProfile(std::move(d));
}

MixedProfile project(const MixedProfile& x, const Subgame& y) {
  std::vector<std::vector<double>> d(y.num_players());
  for (int i = 0; i < y.num_players(); ++i) {
    const auto& subset = y.subset(i);
    double kept = 0.0;
    for (int s : subset) kept += x.prob(i, s);
    if (kept < 1.0 - 1e-9) {
      throw InputError("mixed profile has mass outside the subgame");
    }
    d[i].resize(subset.size());
    for (size_t k = 0; k < subset.size(); ++k) {
      d[i][k] = x.prob(i, subset[k]) / kept;
    }
  }
  return MixedProfile(std::move(d));
}

// ---------------------------------------------------------------------------
// Content

bool content_membership(const Game& g, const ProfileSet& h,
                        const MixedProfile& x, double support_threshold) {
  if (!x.same_shape(g.strategy_counts())) {
    throw InputError("mixed profile shape does not match game");
  }
  Subgame supp = x.support(support_threshold);
  // Walk the product of per-player supports; any member outside h refutes.
  Profile idx(g.num_players(), 0);
  long long n = supp.num_profiles();
  for (long long k = 0; k < n; ++k) {
    Profile p(g.num_players());
    for (int i = 0; i < g.num_players(); ++i) p[i] = supp.subset(i)[idx[i]];
    if (!h.count(g.flatten(p))) return false;
    for (int i = g.num_players() - 1; i >= 0; --i) {
      if (++idx[i] < static_cast<int>(supp.subset(i).size())) break;
      idx[i] = 0;
    }
  }
  return true;
}

double content_mass(const Game& g, const ProfileSet& h, const MixedProfile& x) {
  if (!x.same_shape(g.strategy_counts())) {
    throw InputError("mixed profile shape does not match game");
  }
  double total = 0.0;
  for (ProfileId p : h) {
    double w = 1.0;
    for (int i = 0; i < g.num_players(); ++i) w *= x.prob(i, g.coord(p, i));
    total += w;
  }
  return total;
}

ProfileSet complement(const Game& g, const ProfileSet& h) {
  ProfileSet out;
  for (ProfileId p = 0; p < g.num_profiles(); ++p) {
    if (!h.count(p)) out.insert(p);
  }
  return out;
}

}  // namespace sinkatlas
