#pragma once

#include <nlohmann/json.hpp>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "sinkatlas/game.hpp"

namespace sinkatlas {

/// Directed arc between an i-comparable pair, pointing at the profile where
/// the deviating player earns more. weight = u_i(to) - u_i(from) > tie_tol.
struct Arc {
  ProfileId from = 0;
  ProfileId to = 0;
  int player = 0;
  double weight = 0.0;
};

/// Comparable pair whose payoff difference is within the tie tolerance.
struct DegeneratePair {
  ProfileId a = 0;
  ProfileId b = 0;
  int player = 0;
  double diff = 0.0;

  std::string describe(const Game& g) const;
};

/// Weighted preference graph on (a subset of) the pure profiles of a game.
/// Immutable after build; queries are pure and safe for concurrent reads.
class PreferenceGraph {
 public:
  PreferenceGraph(std::vector<int> strategy_counts, std::vector<ProfileId> nodes,
                  std::vector<Arc> arcs,
                  std::vector<DegeneratePair> degenerate_pairs, double tie_tol);

  const std::vector<int>& strategy_counts() const { return counts_; }
  /// Sorted profile ids present in this graph (all of them for a full build).
  const std::vector<ProfileId>& nodes() const { return nodes_; }
  const std::vector<Arc>& arcs() const { return arcs_; }
  const std::vector<DegeneratePair>& degenerate_pairs() const {
    return degenerate_;
  }
  double tie_tol() const { return tie_tol_; }

  bool contains(ProfileId p) const { return local_index(p) >= 0; }
  std::span<const int> out_arc_ids(ProfileId p) const;
  std::span<const int> in_arc_ids(ProfileId p) const;

  bool is_source(ProfileId p) const;
  bool is_sink(ProfileId p) const;
  bool has_path(ProfileId from, ProfileId to) const;

  /// Signed weight W_{q,p} = u_i(q) - u_i(p) for a comparable, non-degenerate
  /// pair present in this graph; nullopt otherwise.
  std::optional<double> signed_weight(ProfileId q, ProfileId p) const;

  int local_index(ProfileId p) const;

 private:
  std::vector<int> counts_;
  std::vector<ProfileId> nodes_;
  std::vector<Arc> arcs_;
  std::vector<DegeneratePair> degenerate_;
  double tie_tol_;
  std::unordered_map<ProfileId, int> index_;
  // CSR-style adjacency over local node indices, values are arc ids.
  std::vector<int> out_start_, out_ids_, in_start_, in_ids_;
};

PreferenceGraph build_graph(const Game& g, double tie_tol = kTieTol);

/// Nodes Z_y, arcs between comparable pairs within Z_y, weights unchanged.
PreferenceGraph induced_subgraph(const PreferenceGraph& pg, const Subgame& y);

/// Strongly connected components in topological order: every arc between
/// distinct components points from an earlier to a later entry.
std::vector<std::vector<ProfileId>> scc_decomposition(const PreferenceGraph& pg);

/// A sink SCC of the preference graph.
struct SinkEquilibrium {
  int id = 0;
  std::vector<ProfileId> profiles;  // sorted
  bool is_subgame = false;          // profiles are exactly some Z_y
  bool is_singleton_pne = false;

  ProfileSet profile_set() const {
    return ProfileSet(profiles.begin(), profiles.end());
  }
};

/// All SCCs with no outgoing arcs, sorted by smallest contained profile id.
/// Refuses degenerate graphs (raises GenericityError naming a tied pair).
std::vector<SinkEquilibrium> sink_equilibria(const PreferenceGraph& pg,
                                             const Game& g);

/// Deterministic DOT text; highlight sets are shaded (first set darkest).
std::string export_dot(const PreferenceGraph& pg, const Game& g,
                       const std::vector<std::vector<ProfileId>>& highlights = {});

/// Stable JSON report: nodes, arcs with weights, SCCs, sink flags.
nlohmann::json graph_report_json(const PreferenceGraph& pg, const Game& g);

}  // namespace sinkatlas
