#include "sinkatlas/preference_graph.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <deque>
#include <queue>
#include <sstream>

namespace sinkatlas {

namespace {

// Shortest round-trip decimal text for a double; keeps DOT/JSON output stable.
std::string format_double(double v) {
  std::array<char, 32> buf;
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

}  // namespace

std::string DegeneratePair::describe(const Game& g) const {
  std::ostringstream out;
  out << "tied payoffs for player " << player << " between profiles ("
      << g.profile_label(a) << ") and (" << g.profile_label(b)
      << "): difference " << diff;
  return out.str();
}

PreferenceGraph::PreferenceGraph(std::vector<int> strategy_counts,
                                 std::vector<ProfileId> nodes,
                                 std::vector<Arc> arcs,
                                 std::vector<DegeneratePair> degenerate_pairs,
                                 double tie_tol)
    : counts_(std::move(strategy_counts)),
      nodes_(std::move(nodes)),
      arcs_(std::move(arcs)),
      degenerate_(std::move(degenerate_pairs)),
      tie_tol_(tie_tol) {
  std::sort(nodes_.begin(), nodes_.end());
  std::sort(arcs_.begin(), arcs_.end(), [](const Arc& x, const Arc& y) {
    return std::tie(x.from, x.to) < std::tie(y.from, y.to);
  });
  index_.reserve(nodes_.size());
  for (size_t i = 0; i < nodes_.size(); ++i) {
    index_[nodes_[i]] = static_cast<int>(i);
  }

  const int n = static_cast<int>(nodes_.size());
  std::vector<int> out_count(n, 0), in_count(n, 0);
  for (const Arc& a : arcs_) {
    ++out_count[index_.at(a.from)];
    ++in_count[index_.at(a.to)];
  }
  out_start_.assign(n + 1, 0);
  in_start_.assign(n + 1, 0);
  for (int i = 0; i < n; ++i) {
    out_start_[i + 1] = out_start_[i] + out_count[i];
    in_start_[i + 1] = in_start_[i] + in_count[i];
  }
  out_ids_.resize(arcs_.size());
  in_ids_.resize(arcs_.size());
  std::vector<int> out_pos(out_start_.begin(), out_start_.end() - 1);
  std::vector<int> in_pos(in_start_.begin(), in_start_.end() - 1);
  for (size_t k = 0; k < arcs_.size(); ++k) {
    out_ids_[out_pos[index_.at(arcs_[k].from)]++] = static_cast<int>(k);
    in_ids_[in_pos[index_.at(arcs_[k].to)]++] = static_cast<int>(k);
  }
}

int PreferenceGraph::local_index(ProfileId p) const {
  auto it = index_.find(p);
  return it == index_.end() ? -1 : it->second;
}

std::span<const int> PreferenceGraph::out_arc_ids(ProfileId p) const {
  int i = local_index(p);
  if (i < 0) return {};
  return {out_ids_.data() + out_start_[i],
          static_cast<size_t>(out_start_[i + 1] - out_start_[i])};
}

std::span<const int> PreferenceGraph::in_arc_ids(ProfileId p) const {
  int i = local_index(p);
  if (i < 0) return {};
  return {in_ids_.data() + in_start_[i],
          static_cast<size_t>(in_start_[i + 1] - in_start_[i])};
}

bool PreferenceGraph::is_source(ProfileId p) const {
  return contains(p) && in_arc_ids(p).empty() && !out_arc_ids(p).empty();
}

bool PreferenceGraph::is_sink(ProfileId p) const {
  return contains(p) && out_arc_ids(p).empty() && !in_arc_ids(p).empty();
}

bool PreferenceGraph::has_path(ProfileId from, ProfileId to) const {
  if (!contains(from) || !contains(to)) return false;
  if (from == to) return true;
  std::vector<char> seen(nodes_.size(), 0);
  std::deque<ProfileId> queue{from};
  seen[local_index(from)] = 1;
  while (!queue.empty()) {
    ProfileId p = queue.front();
    queue.pop_front();
    for (int arc_id : out_arc_ids(p)) {
      ProfileId q = arcs_[arc_id].to;
      if (q == to) return true;
      int li = local_index(q);
      if (!seen[li]) {
        seen[li] = 1;
        queue.push_back(q);
      }
    }
  }
  return false;
}

std::optional<double> PreferenceGraph::signed_weight(ProfileId q,
                                                     ProfileId p) const {
  for (int arc_id : out_arc_ids(p)) {
    if (arcs_[arc_id].to == q) return arcs_[arc_id].weight;
  }
  for (int arc_id : in_arc_ids(p)) {
    if (arcs_[arc_id].from == q) return -arcs_[arc_id].weight;
  }
  return std::nullopt;
}

PreferenceGraph build_graph(const Game& g, double tie_tol) {
  if (tie_tol < 0) throw InputError("tie tolerance must be >= 0");
  std::vector<ProfileId> nodes(g.num_profiles());
  for (ProfileId p = 0; p < g.num_profiles(); ++p) nodes[p] = p;

  std::vector<Arc> arcs;
  std::vector<DegeneratePair> degenerate;
  for (ProfileId p = 0; p < g.num_profiles(); ++p) {
    for (int i = 0; i < g.num_players(); ++i) {
      int ci = g.coord(p, i);
      // Each unordered comparable pair once: partner strategy above ours.
      for (int s = ci + 1; s < g.strategy_counts()[i]; ++s) {
        ProfileId q = g.with_strategy(p, i, s);
        double d = g.utility(i, q) - g.utility(i, p);
        if (std::abs(d) <= tie_tol) {
          degenerate.push_back({p, q, i, d});
        } else if (d > 0) {
          arcs.push_back({p, q, i, d});
        } else {
          arcs.push_back({q, p, i, -d});
        }
      }
    }
  }
  return PreferenceGraph(g.strategy_counts(), std::move(nodes), std::move(arcs),
                         std::move(degenerate), tie_tol);
}

PreferenceGraph induced_subgraph(const PreferenceGraph& pg, const Subgame& y) {
  if (y.num_players() != static_cast<int>(pg.strategy_counts().size())) {
    throw InputError("subgame has wrong number of players");
  }
  // Strides for membership tests against the original profile ids.
  const auto& counts = pg.strategy_counts();
  std::vector<int> strides(counts.size(), 1);
  for (int i = static_cast<int>(counts.size()) - 2; i >= 0; --i) {
    strides[i] = strides[i + 1] * counts[i + 1];
  }
  auto member = [&](ProfileId p) {
    for (size_t i = 0; i < counts.size(); ++i) {
      int c = (p / strides[i]) % counts[i];
      const auto& sub = y.subset(static_cast<int>(i));
      if (!std::binary_search(sub.begin(), sub.end(), c)) return false;
    }
    return true;
  };

  std::vector<ProfileId> nodes;
  for (ProfileId p : pg.nodes()) {
    if (member(p)) nodes.push_back(p);
  }
  std::vector<Arc> arcs;
  for (const Arc& a : pg.arcs()) {
    if (member(a.from) && member(a.to)) arcs.push_back(a);
  }
  std::vector<DegeneratePair> degenerate;
  for (const DegeneratePair& d : pg.degenerate_pairs()) {
    if (member(d.a) && member(d.b)) degenerate.push_back(d);
  }
  return PreferenceGraph(counts, std::move(nodes), std::move(arcs),
                         std::move(degenerate), pg.tie_tol());
}

std::vector<std::vector<ProfileId>> scc_decomposition(const PreferenceGraph& pg) {
  const int n = static_cast<int>(pg.nodes().size());
  // Iterative Tarjan over local indices; nodes visited in ascending profile
  // order, adjacency already sorted, so the output order is deterministic.
  std::vector<int> index(n, -1), low(n, 0);
  std::vector<char> on_stack(n, 0);
  std::vector<int> stack;
  std::vector<std::vector<ProfileId>> sccs;
  int next_index = 0;

  struct Frame {
    int v;
    size_t arc_pos;
  };
  for (int root = 0; root < n; ++root) {
    if (index[root] != -1) continue;
    std::vector<Frame> frames{{root, 0}};
    index[root] = low[root] = next_index++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!frames.empty()) {
      Frame& f = frames.back();
      auto out = pg.out_arc_ids(pg.nodes()[f.v]);
      if (f.arc_pos < out.size()) {
        int w = pg.local_index(pg.arcs()[out[f.arc_pos++]].to);
        if (index[w] == -1) {
          index[w] = low[w] = next_index++;
          stack.push_back(w);
          on_stack[w] = 1;
          frames.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], index[w]);
        }
      } else {
        if (low[f.v] == index[f.v]) {
          std::vector<ProfileId> comp;
          int w;
          do {
            w = stack.back();
            stack.pop_back();
            on_stack[w] = 0;
            comp.push_back(pg.nodes()[w]);
          } while (w != f.v);
          std::sort(comp.begin(), comp.end());
          sccs.push_back(std::move(comp));
        }
        int v = f.v;
        frames.pop_back();
        if (!frames.empty()) {
          low[frames.back().v] = std::min(low[frames.back().v], low[v]);
        }
      }
    }
  }
  // Tarjan emits components in reverse topological order. Canonicalize to
  // the unique topological order that releases the component with the
  // smallest contained profile id first among the ready ones.
  std::reverse(sccs.begin(), sccs.end());

  std::unordered_map<ProfileId, int> comp_of;
  for (size_t c = 0; c < sccs.size(); ++c) {
    for (ProfileId p : sccs[c]) comp_of[p] = static_cast<int>(c);
  }
  std::vector<std::set<int>> succ(sccs.size());
  std::vector<int> indegree(sccs.size(), 0);
  for (const Arc& a : pg.arcs()) {
    int cf = comp_of[a.from], ct = comp_of[a.to];
    if (cf != ct && succ[cf].insert(ct).second) ++indegree[ct];
  }
  auto by_min_profile = [&](int lhs, int rhs) {
    return sccs[lhs].front() > sccs[rhs].front();  // min-heap
  };
  std::priority_queue<int, std::vector<int>, decltype(by_min_profile)> ready(
      by_min_profile);
  for (size_t c = 0; c < sccs.size(); ++c) {
    if (indegree[c] == 0) ready.push(static_cast<int>(c));
  }
  std::vector<std::vector<ProfileId>> ordered;
  ordered.reserve(sccs.size());
  while (!ready.empty()) {
    int c = ready.top();
    ready.pop();
    ordered.push_back(std::move(sccs[c]));
    for (int s : succ[c]) {
      if (--indegree[s] == 0) ready.push(s);
    }
  }
  return ordered;
}

std::vector<SinkEquilibrium> sink_equilibria(const PreferenceGraph& pg,
                                             const Game& g) {
  if (!pg.degenerate_pairs().empty()) {
    throw GenericityError("cannot compute sink equilibria on a degenerate graph: " +
                          pg.degenerate_pairs().front().describe(g));
  }
  auto sccs = scc_decomposition(pg);
  // Map profile -> component.
  std::unordered_map<ProfileId, int> comp_of;
  for (size_t c = 0; c < sccs.size(); ++c) {
    for (ProfileId p : sccs[c]) comp_of[p] = static_cast<int>(c);
  }
  std::vector<char> has_out(sccs.size(), 0);
  for (const Arc& a : pg.arcs()) {
    if (comp_of[a.from] != comp_of[a.to]) has_out[comp_of[a.from]] = 1;
  }

  std::vector<std::vector<ProfileId>> sinks;
  for (size_t c = 0; c < sccs.size(); ++c) {
    if (!has_out[c]) sinks.push_back(sccs[c]);
  }
  std::sort(sinks.begin(), sinks.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });

  std::vector<SinkEquilibrium> out;
  for (size_t k = 0; k < sinks.size(); ++k) {
    SinkEquilibrium s;
    s.id = static_cast<int>(k);
    s.profiles = std::move(sinks[k]);
    s.is_singleton_pne = s.profiles.size() == 1;
    // H is a subgame iff |H| equals the product of its per-player projections.
    std::vector<std::set<int>> proj(g.num_players());
    for (ProfileId p : s.profiles) {
      for (int i = 0; i < g.num_players(); ++i) proj[i].insert(g.coord(p, i));
    }
    long long span = 1;
    for (const auto& pr : proj) span *= static_cast<long long>(pr.size());
    s.is_subgame = span == static_cast<long long>(s.profiles.size());
    out.push_back(std::move(s));
  }
  return out;
}

std::string export_dot(const PreferenceGraph& pg, const Game& g,
                       const std::vector<std::vector<ProfileId>>& highlights) {
  static const char* kShades[] = {"gray80", "gray65", "gray50"};
  std::unordered_map<ProfileId, int> shade;
  for (size_t h = 0; h < highlights.size(); ++h) {
    for (ProfileId p : highlights[h]) {
      shade.emplace(p, static_cast<int>(h % 3));
    }
  }
  std::ostringstream out;
  out << "digraph preference_graph {\n";
  out << "  node [shape=box];\n";
  for (ProfileId p : pg.nodes()) {
    out << "  \"" << g.profile_label(p) << "\"";
    auto it = shade.find(p);
    if (it != shade.end()) {
      out << " [style=filled, fillcolor=" << kShades[it->second] << "]";
    }
    out << ";\n";
  }
  for (const Arc& a : pg.arcs()) {
    out << "  \"" << g.profile_label(a.from) << "\" -> \""
        << g.profile_label(a.to) << "\" [label=\"" << format_double(a.weight)
        << "\"];\n";
  }
  out << "}\n";
  return out.str();
}

nlohmann::json graph_report_json(const PreferenceGraph& pg, const Game& g) {
  nlohmann::json j;
  j["strategy_counts"] = pg.strategy_counts();
  j["tie_tolerance"] = pg.tie_tol();
  j["nodes"] = nlohmann::json::array();
  for (ProfileId p : pg.nodes()) {
    j["nodes"].push_back(g.unflatten(p));
  }
  j["arcs"] = nlohmann::json::array();
  for (const Arc& a : pg.arcs()) {
    j["arcs"].push_back({{"from", g.unflatten(a.from)},
                         {"to", g.unflatten(a.to)},
                         {"player", a.player},
                         {"weight", a.weight}});
  }
  j["degenerate_pairs"] = nlohmann::json::array();
  for (const DegeneratePair& d : pg.degenerate_pairs()) {
    j["degenerate_pairs"].push_back({{"a", g.unflatten(d.a)},
                                     {"b", g.unflatten(d.b)},
                                     {"player", d.player},
                                     {"difference", d.diff}});
  }
  auto sccs = scc_decomposition(pg);
  std::unordered_map<ProfileId, int> comp_of;
  for (size_t c = 0; c < sccs.size(); ++c) {
    for (ProfileId p : sccs[c]) comp_of[p] = static_cast<int>(c);
  }
  std::vector<char> has_out(sccs.size(), 0);
  for (const Arc& a : pg.arcs()) {
    if (comp_of[a.from] != comp_of[a.to]) has_out[comp_of[a.from]] = 1;
  }
  j["sccs"] = nlohmann::json::array();
  for (size_t c = 0; c < sccs.size(); ++c) {
    nlohmann::json comp;
    comp["profiles"] = nlohmann::json::array();
    for (ProfileId p : sccs[c]) comp["profiles"].push_back(g.unflatten(p));
    comp["is_sink"] = !has_out[c];
    j["sccs"].push_back(std::move(comp));
  }
  return j;
}

}  // namespace sinkatlas
