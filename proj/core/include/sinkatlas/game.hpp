#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace sinkatlas {

/// Flat index of a pure profile in lexicographic order, player 0 slowest.
using ProfileId = int;
/// One strategy index per player.
using Profile = std::vector<int>;
/// A set of pure profiles of one game, by flat index.
using ProfileSet = std::set<ProfileId>;

// Default numeric policy, overridable per call where it matters.
inline constexpr double kTieTol = 1e-12;
inline constexpr double kSupportThreshold = 1e-9;

/// Payoff ties on a comparable pair; analyses that need a generic game refuse
/// to run and raise this instead of breaking the tie arbitrarily.
struct GenericityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed file, bad flag value, out-of-range start vector and the like.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// The integrator left the simplex by more than its guard tolerance.
struct StepSizeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A non-empty strategy subset per player.
class Subgame {
 public:
  Subgame() = default;
  explicit Subgame(std::vector<std::vector<int>> subsets);

  static Subgame full(const std::vector<int>& strategy_counts);
  static Subgame singleton(const Profile& p);

  int num_players() const { return static_cast<int>(subsets_.size()); }
  const std::vector<int>& subset(int player) const { return subsets_[player]; }
  const std::vector<std::vector<int>>& subsets() const { return subsets_; }
  bool is_full(const std::vector<int>& strategy_counts) const;
  bool contains(const Profile& p) const;
  /// Number of pure profiles spanned.
  long long num_profiles() const;

 private:
  std::vector<std::vector<int>> subsets_;  // sorted, unique, non-empty
};

/// One distribution over strategies per player. Entries are >= 0 and sum to 1
/// within 1e-12 at construction; values are stored as given (no renorm).
class MixedProfile {
 public:
  explicit MixedProfile(std::vector<std::vector<double>> dists);

  static MixedProfile barycenter(const std::vector<int>& strategy_counts);
  static MixedProfile point_mass(const std::vector<int>& strategy_counts,
                                 const Profile& p);

  int num_players() const { return static_cast<int>(dists_.size()); }
  const std::vector<double>& dist(int player) const { return dists_[player]; }
  const std::vector<std::vector<double>>& dists() const { return dists_; }
  double prob(int player, int strategy) const {
    return dists_[player][strategy];
  }

  /// Strategies with probability above `threshold`.
  Subgame support(double threshold = kSupportThreshold) const;

  bool same_shape(const std::vector<int>& strategy_counts) const;

 private:
  std::vector<std::vector<double>> dists_;
};

/// Finite normal-form game: N players, dense utility tensor per player.
/// Immutable after construction; the single source of truth for payoffs.
class Game {
 public:
  Game(std::vector<int> strategy_counts,
       std::vector<std::vector<double>> utilities,
       std::vector<std::vector<std::string>> strategy_names = {});

  int num_players() const { return static_cast<int>(counts_.size()); }
  const std::vector<int>& strategy_counts() const { return counts_; }
  int num_profiles() const { return num_profiles_; }

  ProfileId flatten(std::span<const int> coords) const;
  Profile unflatten(ProfileId id) const;
  int coord(ProfileId id, int player) const {
    return (id / strides_[player]) % counts_[player];
  }
  /// Profile equal to `id` except player `player` plays `strategy`.
  ProfileId with_strategy(ProfileId id, int player, int strategy) const {
    return id + (strategy - coord(id, player)) * strides_[player];
  }

  double utility(int player, ProfileId p) const { return utils_[player][p]; }
  double utility(int player, const Profile& p) const;

  /// Expected utility of `player` under the product distribution `x`.
  double utility_mixed(int player, const MixedProfile& x) const;
  /// Expected utility when `player` deviates to pure `strategy` while all
  /// others keep playing their mixtures in `x`.
  double utility_vs_mixed(int player, int strategy, const MixedProfile& x) const;

  Game negated() const;

  bool has_strategy_names() const { return !names_.empty(); }
  const std::vector<std::vector<std::string>>& strategy_names() const {
    return names_;
  }
  std::string profile_label(ProfileId p) const;

  /// FNV-1a over shape and payoff bytes; stable content digest for reports.
  std::uint64_t digest() const;

 private:
  std::vector<int> counts_;
  std::vector<int> strides_;  // strides_[0] largest: player 0 varies slowest
  int num_profiles_ = 0;
  std::vector<std::vector<double>> utils_;  // [player][flat profile]
  std::vector<std::vector<std::string>> names_;
};

/// A subgame re-indexed as a standalone Game plus the translation back.
struct RestrictedGame {
  Game game;
  Subgame selection;  // selection.subset(i)[new index] == parent index

  Profile to_parent(const Profile& sub) const;
  ProfileId parent_profile(const Game& parent, ProfileId sub) const;
};

RestrictedGame restrict(const Game& g, const Subgame& y);

/// Embed a mixed profile of restrict(g, y) back into g's strategy space,
/// zero mass outside y.
MixedProfile embed(const MixedProfile& sub_x, const Subgame& y,
                   const std::vector<int>& parent_counts);

/// Project x onto subgame y. Requires support(x) within y (mass outside y
/// must not exceed 1e-9 per player); mass is renormalized per player.
MixedProfile project(const MixedProfile& x, const Subgame& y);

/// True iff every profile in the product of per-player supports of x is in h.
bool content_membership(const Game& g, const ProfileSet& h,
                        const MixedProfile& x,
                        double support_threshold = kSupportThreshold);

/// Sum of product masses over h: sum_{p in h} prod_i x^i_{p_i}.
double content_mass(const Game& g, const ProfileSet& h, const MixedProfile& x);

ProfileSet complement(const Game& g, const ProfileSet& h);

}  // namespace sinkatlas
