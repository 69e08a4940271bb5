#include "sinkatlas/stability.hpp"

#include <algorithm>
#include <cmath>

namespace sinkatlas {

namespace {

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::vector<double> random_simplex(int n, std::mt19937_64& rng) {
  std::vector<double> v(n);
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    double u = uniform01(rng);
    v[i] = -std::log(u + 1e-300);
    sum += v[i];
  }
  for (int i = 0; i < n; ++i) v[i] /= sum;
  return v;
}

bool subgame_within(const Game& g, const Subgame& y, const ProfileSet& h) {
  Profile idx(g.num_players(), 0);
  long long n = y.num_profiles();
  for (long long k = 0; k < n; ++k) {
    Profile p(g.num_players());
    for (int i = 0; i < g.num_players(); ++i) p[i] = y.subset(i)[idx[i]];
    if (!h.count(g.flatten(p))) return false;
    for (int i = g.num_players() - 1; i >= 0; --i) {
      if (++idx[i] < static_cast<int>(y.subset(i).size())) break;
      idx[i] = 0;
    }
  }
  return true;
}

}  // namespace

const char* cavity_kind_name(Cavity::Kind k) {
  switch (k) {
    case Cavity::Kind::TwoIn:
      return "two_in";
    case Cavity::Kind::OneInOneOut:
      return "one_in_one_out";
    case Cavity::Kind::LocalSource:
      return "local_source";
  }
  return "?";
}

std::vector<Cavity> find_cavities(const Game& g, const PreferenceGraph& pg,
                                  const SinkEquilibrium& h) {
  ProfileSet hs = h.profile_set();
  std::vector<Cavity> out;
  const int np = g.num_players();
  const auto& counts = g.strategy_counts();

  // Strategy counts of the non-free players, for context enumeration.
  for (int pa = 0; pa < np; ++pa) {
    for (int pb = pa + 1; pb < np; ++pb) {
      std::vector<int> others;
      for (int k = 0; k < np; ++k) {
        if (k != pa && k != pb) others.push_back(k);
      }
      long long contexts = 1;
      for (int k : others) contexts *= counts[k];

      for (int sa = 0; sa < counts[pa]; ++sa) {
        for (int sa2 = sa + 1; sa2 < counts[pa]; ++sa2) {
          for (int sb = 0; sb < counts[pb]; ++sb) {
            for (int sb2 = sb + 1; sb2 < counts[pb]; ++sb2) {
              for (long long ctx = 0; ctx < contexts; ++ctx) {
                Profile base(np, 0);
                long long rem = ctx;
                for (int k : others) {
                  base[k] = static_cast<int>(rem % counts[k]);
                  rem /= counts[k];
                }
                base[pa] = sa;
                base[pb] = sb;
                ProfileId c00 = g.flatten(base);
                ProfileId c01 = g.with_strategy(c00, pb, sb2);
                ProfileId c10 = g.with_strategy(c00, pa, sa2);
                ProfileId c11 = g.with_strategy(c01, pa, sa2);
                std::array<ProfileId, 4> corner{c00, c01, c10, c11};
                int inside = 0;
                int out_idx = -1;
                for (int k = 0; k < 4; ++k) {
                  if (hs.count(corner[k])) {
                    ++inside;
                  } else {
                    out_idx = k;
                  }
                }
                if (inside != 3) continue;

                Cavity c;
                std::vector<std::vector<int>> subsets(np);
                for (int k = 0; k < np; ++k) subsets[k] = {base[k]};
                subsets[pa] = {sa, sa2};
                subsets[pb] = {sb, sb2};
                c.subgame = Subgame(subsets);
                c.out = corner[out_idx];
                c.diag = corner[3 - out_idx];  // diagonal of a 2x2
                // Neighbors of diag (and of out) are the remaining two.
                int a0 = -1, a1 = -1;
                for (int k = 0; k < 4; ++k) {
                  if (k != out_idx && k != 3 - out_idx) {
                    (a0 < 0 ? a0 : a1) = k;
                  }
                }
                c.adjacent = {corner[a0], corner[a1]};

                auto w0 = pg.signed_weight(c.adjacent[0], c.diag);
                auto w1 = pg.signed_weight(c.adjacent[1], c.diag);
                if (!w0 || !w1) {
                  throw GenericityError(
                      "cavity classification hit a degenerate pair");
                }
                c.signed_sum = *w0 + *w1;
                c.boundary = std::abs(c.signed_sum) <= pg.tie_tol();
                if (*w0 > 0 && *w1 > 0) {
                  c.kind = Cavity::Kind::LocalSource;
                } else if (*w0 < 0 && *w1 < 0) {
                  c.kind = Cavity::Kind::TwoIn;
                } else {
                  c.kind = Cavity::Kind::OneInOneOut;
                }
                out.push_back(std::move(c));
              }
            }
          }
        }
      }
    }
  }
  return out;
}

bool is_pseudoconvex_cavity(const Cavity& c, PseudoconvexityMode mode,
                            double tie_tol) {
  if (mode == PseudoconvexityMode::Strict) {
    if (std::abs(c.signed_sum) <= tie_tol) {
      throw GenericityError(
          "cavity deviation sum is zero within tolerance; the strict "
          "pseudoconvexity test cannot decide it");
    }
    return c.signed_sum < -tie_tol;
  }
  return c.signed_sum <= tie_tol;
}

PseudoconvexityReport is_pseudoconvex_sink(const Game& g,
                                           const PreferenceGraph& pg,
                                           const SinkEquilibrium& h,
                                           PseudoconvexityMode mode) {
  PseudoconvexityReport r;
  r.mode = mode;
  auto cavities = find_cavities(g, pg, h);
  r.num_cavities = static_cast<int>(cavities.size());
  for (const Cavity& c : cavities) {
    switch (c.kind) {
      case Cavity::Kind::TwoIn:
        ++r.num_two_in;
        break;
      case Cavity::Kind::OneInOneOut:
        ++r.num_one_in_one_out;
        break;
      case Cavity::Kind::LocalSource:
        ++r.num_local_source;
        break;
    }
    if (c.boundary) ++r.num_boundary;
    if (!is_pseudoconvex_cavity(c, mode, pg.tie_tol())) {
      r.verdict = false;
      r.failing.push_back(c);
    }
  }
  return r;
}

QuasiStrictReport is_quasi_strict_nash(const Game& g, const MixedProfile& x,
                                       double eq_tol, double strict_margin,
                                       double support_threshold) {
  if (!x.same_shape(g.strategy_counts())) {
    throw InputError("mixed profile shape does not match game");
  }
  QuasiStrictReport r;
  r.is_nash = true;
  r.quasi_strict = true;
  for (int i = 0; i < g.num_players(); ++i) {
    double base = g.utility_mixed(i, x);
    for (int s = 0; s < g.strategy_counts()[i]; ++s) {
      StrategyMargin m;
      m.player = i;
      m.strategy = s;
      m.in_support = x.prob(i, s) > support_threshold;
      m.gap = g.utility_vs_mixed(i, s, x) - base;
      if (m.gap > eq_tol) r.is_nash = false;
      if (m.in_support && std::abs(m.gap) > eq_tol) r.is_nash = false;
      if (!m.in_support && m.gap >= -strict_margin) r.quasi_strict = false;
      r.margins.push_back(m);
    }
  }
  r.quasi_strict = r.quasi_strict && r.is_nash;
  return r;
}

std::optional<MixedProfile> fixed_point_2x2(const Game& g, const Subgame& y) {
  if (y.num_players() != g.num_players()) {
    throw InputError("subgame has wrong number of players");
  }
  std::vector<int> free;
  for (int i = 0; i < g.num_players(); ++i) {
    size_t n = y.subset(i).size();
    if (n == 2) {
      free.push_back(i);
    } else if (n != 1) {
      throw InputError("fixed_point_2x2 needs a 2x2 subgame (others pure)");
    }
  }
  if (free.size() != 2) {
    throw InputError("fixed_point_2x2 needs exactly two free players");
  }
  const int pa = free[0], pb = free[1];

  Profile base(g.num_players());
  for (int i = 0; i < g.num_players(); ++i) base[i] = y.subset(i)[0];
  ProfileId p00 = g.flatten(base);
  ProfileId p01 = g.with_strategy(p00, pb, y.subset(pb)[1]);
  ProfileId p10 = g.with_strategy(p00, pa, y.subset(pa)[1]);
  ProfileId p11 = g.with_strategy(p01, pa, y.subset(pa)[1]);

  // Player pa mixes (w, 1-w) to equalize pb's two payoffs; symmetrically for
  // q. Interior solution exists only when each player's payoff differences
  // flip sign across the opponent's strategies.
  double d0 = g.utility(pb, p00) - g.utility(pb, p01);  // pa plays first row
  double d1 = g.utility(pb, p10) - g.utility(pb, p11);
  double e0 = g.utility(pa, p00) - g.utility(pa, p10);  // pb plays first col
  double e1 = g.utility(pa, p01) - g.utility(pa, p11);
  double den_w = d1 - d0;
  double den_q = e1 - e0;
  // Singular and consistent means a continuum of fixed points; singular but
  // inconsistent just means the indifference lines never cross.
  if (std::abs(den_w) <= 1e-12) {
    if (std::abs(d1) <= 1e-12) {
      throw GenericityError(
          "degenerate 2x2 subgame: a player is everywhere indifferent");
    }
    return std::nullopt;
  }
  if (std::abs(den_q) <= 1e-12) {
    if (std::abs(e1) <= 1e-12) {
      throw GenericityError(
          "degenerate 2x2 subgame: a player is everywhere indifferent");
    }
    return std::nullopt;
  }
  double w = d1 / den_w;
  double q = e1 / den_q;
  if (!(w > 0.0 && w < 1.0 && q > 0.0 && q < 1.0)) return std::nullopt;

  std::vector<std::vector<double>> dists(g.num_players());
  for (int i = 0; i < g.num_players(); ++i) {
    dists[i].assign(g.strategy_counts()[i], 0.0);
    if (i == pa) {
      dists[i][y.subset(i)[0]] = w;
      dists[i][y.subset(i)[1]] = 1.0 - w;
    } else if (i == pb) {
      dists[i][y.subset(i)[0]] = q;
      dists[i][y.subset(i)[1]] = 1.0 - q;
    } else {
      dists[i][y.subset(i)[0]] = 1.0;
    }
  }
  return MixedProfile(std::move(dists));
}

namespace {

void pure_candidates(const Game& g, const PreferenceGraph& pg,
                     const SinkEquilibrium& h, const LocalSourceOptions& opts,
                     const ProfileSet& hs,
                     std::vector<LocalSourceCertificate>& out) {
  const int np = g.num_players();
  const auto& counts = g.strategy_counts();
  Game neg = g.negated();

  // Free-player tuples: all pairs, plus all triples when np >= 3.
  std::vector<std::vector<int>> tuples;
  for (int i = 0; i < np; ++i) {
    for (int j = i + 1; j < np; ++j) {
      tuples.push_back({i, j});
      for (int k = j + 1; k < np; ++k) tuples.push_back({i, j, k});
    }
  }

  for (ProfileId p : h.profiles) {
    Profile pc = g.unflatten(p);
    for (const auto& free : tuples) {
      // One alternative strategy per free player; everyone else pinned at p.
      std::vector<int> alt_counts;
      for (int f : free) alt_counts.push_back(counts[f] - 1);
      if (std::any_of(alt_counts.begin(), alt_counts.end(),
                      [](int c) { return c == 0; })) {
        continue;
      }
      std::vector<int> alt_idx(free.size(), 0);
      bool more = true;
      while (more) {
        std::vector<std::vector<int>> subsets(np);
        for (int i = 0; i < np; ++i) subsets[i] = {pc[i]};
        for (size_t fi = 0; fi < free.size(); ++fi) {
          int alt = alt_idx[fi] >= pc[free[fi]] ? alt_idx[fi] + 1 : alt_idx[fi];
          subsets[free[fi]] = {pc[free[fi]], alt};
        }
        Subgame y(subsets);
        if (!subgame_within(g, y, hs)) {
          // p must be a source of the induced slice.
          bool source = true;
          for (int f : free) {
            for (int s : y.subset(f)) {
              if (s == pc[f]) continue;
              auto w = pg.signed_weight(g.with_strategy(p, f, s), p);
              if (!w || *w <= 0) {
                source = false;
                break;
              }
            }
            if (!source) break;
          }
          if (source) {
            RestrictedGame rn = restrict(neg, y);
            Profile sub(np);
            for (int i = 0; i < np; ++i) {
              const auto& subset = y.subset(i);
              sub[i] = static_cast<int>(
                  std::find(subset.begin(), subset.end(), pc[i]) -
                  subset.begin());
            }
            MixedProfile sub_point =
                MixedProfile::point_mass(rn.game.strategy_counts(), sub);
            QuasiStrictReport qs = is_quasi_strict_nash(
                rn.game, sub_point, opts.eq_tol, opts.strict_margin);
            if (qs.quasi_strict) {
              out.push_back(LocalSourceCertificate{
                  LocalSourceCertificate::Kind::Pure, h.id, y,
                  MixedProfile::point_mass(counts, pc), std::move(qs)});
            }
          }
        }
        for (int fi = static_cast<int>(free.size()) - 1; fi >= 0; --fi) {
          if (++alt_idx[fi] < alt_counts[fi]) break;
          alt_idx[fi] = 0;
          if (fi == 0) more = false;
        }
      }
    }
  }
}

// Mixed candidates: interior fixed points of cavity squares, certified inside
// a containing 2x3 subgame that also holds a second 2x2-support fixed point
// (the far end of the escaping orbit). Subgame sinks have no cavity squares,
// so they never produce mixed certificates.
void gadget_candidates(const Game& g, const PreferenceGraph& pg,
                       const SinkEquilibrium& h, const LocalSourceOptions& opts,
                       const ProfileSet& hs,
                       std::vector<LocalSourceCertificate>& out) {
  if (g.num_players() != 2) return;
  const auto& counts = g.strategy_counts();
  Game neg = g.negated();

  auto interior_fp = [&](const Subgame& square) -> std::optional<MixedProfile> {
    try {
      return fixed_point_2x2(g, square);
    } catch (const GenericityError&) {
      return std::nullopt;
    }
  };

  for (const Cavity& cavity : find_cavities(g, pg, h)) {
    const Subgame& square = cavity.subgame;
    std::optional<MixedProfile> fp = interior_fp(square);
    if (!fp) continue;

    for (int pl = 0; pl < 2; ++pl) {
      const std::vector<int>& own = square.subset(pl);
      const std::vector<int>& other = square.subset(1 - pl);
      for (int e = 0; e < counts[pl]; ++e) {
        if (e == own[0] || e == own[1]) continue;
        std::vector<std::vector<int>> ysub(2);
        ysub[pl] = {own[0], own[1], e};
        ysub[1 - pl] = other;
        Subgame y(ysub);
        if (subgame_within(g, y, hs)) continue;

        bool companion = false;
        for (int keep : {0, 1}) {
          std::vector<std::vector<int>> csub(2);
          csub[pl] = {own[keep], e};
          csub[1 - pl] = other;
          if (interior_fp(Subgame(csub))) {
            companion = true;
            break;
          }
        }
        if (!companion) continue;

        RestrictedGame rn = restrict(neg, y);
        MixedProfile sub_x = project(*fp, y);
        QuasiStrictReport qs = is_quasi_strict_nash(rn.game, sub_x, opts.eq_tol,
                                                    opts.strict_margin);
        if (qs.quasi_strict) {
          out.push_back(LocalSourceCertificate{
              LocalSourceCertificate::Kind::Gadget, h.id, y, *fp,
              std::move(qs)});
        }
      }
    }
  }
}

}  // namespace

std::vector<LocalSourceCertificate> find_local_sources(
    const Game& g, const PreferenceGraph& pg, const SinkEquilibrium& h,
    const LocalSourceOptions& opts) {
  ProfileSet hs = h.profile_set();
  std::vector<LocalSourceCertificate> out;
  pure_candidates(g, pg, h, opts, hs, out);
  if (opts.include_gadget_candidates) {
    gadget_candidates(g, pg, h, opts, hs, out);
  }
  return out;
}

double lyapunov_zH_derivative(const ProductMatrix& m,
                              const std::vector<ProfileId>& h,
                              const std::vector<double>& z) {
  std::vector<double> mz = m.apply(z);
  double total = 0.0;
  for (ProfileId p : h) total += z[p] * mz[p];
  return total;
}

double lyapunov_zH_derivative(const Game& g, const SinkEquilibrium& h,
                              const MixedProfile& x) {
  ProductMatrix m = product_matrix(g);
  return lyapunov_zH_derivative(m, h.profiles, correlated_state(g, x));
}

std::vector<TransversalEigenvalue> transversal_eigenvalues(
    const Game& g, const MixedProfile& x, double fp_tol,
    double support_threshold) {
  auto dx = replicator_vector_field(g, x);
  for (const auto& per_player : dx) {
    for (double v : per_player) {
      if (std::abs(v) > fp_tol) {
        throw std::invalid_argument(
            "transversal_eigenvalues: point is not a fixed point (|dx| = " +
            std::to_string(std::abs(v)) + ")");
      }
    }
  }
  std::vector<TransversalEigenvalue> out;
  for (int i = 0; i < g.num_players(); ++i) {
    double base = g.utility_mixed(i, x);
    for (int s = 0; s < g.strategy_counts()[i]; ++s) {
      if (x.prob(i, s) > support_threshold) continue;
      out.push_back({i, s, g.utility_vs_mixed(i, s, x) - base});
    }
  }
  return out;
}

MixedProfile sample_near_content(const Game& g, const std::vector<ProfileId>& h,
                                 double z_lo, double z_hi,
                                 std::mt19937_64& rng) {
  if (h.size() == static_cast<size_t>(g.num_profiles())) {
    throw InputError("H covers every profile; content mass is identically 1");
  }
  if (!(0 < z_lo && z_lo < z_hi && z_hi <= 1.0)) {
    throw InputError("sample_near_content: need 0 < z_lo < z_hi <= 1");
  }
  ProfileSet hs(h.begin(), h.end());

  for (int attempt = 0; attempt < 64; ++attempt) {
    // A random point of content(H): grow a subgame inside H around a random
    // anchor profile, then mix over it.
    ProfileId anchor = h[static_cast<size_t>(uniform01(rng) * h.size()) % h.size()];
    std::vector<std::vector<int>> subsets(g.num_players());
    for (int i = 0; i < g.num_players(); ++i) subsets[i] = {g.coord(anchor, i)};
    for (int pass = 0; pass < 2; ++pass) {
      for (int i = 0; i < g.num_players(); ++i) {
        for (int s = 0; s < g.strategy_counts()[i]; ++s) {
          if (std::find(subsets[i].begin(), subsets[i].end(), s) !=
              subsets[i].end()) {
            continue;
          }
          if (uniform01(rng) < 0.5) continue;
          auto grown = subsets;
          grown[i].push_back(s);
          std::sort(grown[i].begin(), grown[i].end());
          if (subgame_within(g, Subgame(grown), hs)) subsets = grown;
        }
      }
    }
    Subgame face(subsets);
    std::vector<std::vector<double>> content_dists(g.num_players());
    for (int i = 0; i < g.num_players(); ++i) {
      content_dists[i].assign(g.strategy_counts()[i], 0.0);
      auto wts = random_simplex(static_cast<int>(face.subset(i).size()), rng);
      for (size_t k = 0; k < face.subset(i).size(); ++k) {
        content_dists[i][face.subset(i)[k]] = wts[k];
      }
    }
    MixedProfile inside(content_dists);

    std::vector<std::vector<double>> interior_dists(g.num_players());
    for (int i = 0; i < g.num_players(); ++i) {
      interior_dists[i] = random_simplex(g.strategy_counts()[i], rng);
    }
    MixedProfile outside(interior_dists);

    auto blend = [&](double delta) {
      std::vector<std::vector<double>> d(g.num_players());
      for (int i = 0; i < g.num_players(); ++i) {
        d[i].resize(g.strategy_counts()[i]);
        for (int s = 0; s < g.strategy_counts()[i]; ++s) {
          d[i][s] = (1.0 - delta) * inside.prob(i, s) + delta * outside.prob(i, s);
        }
      }
      return MixedProfile(std::move(d));
    };

    if (content_mass(g, hs, blend(1.0)) >= z_hi) continue;  // can't get low enough
    double target = 0.5 * (z_lo + z_hi);
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 80; ++it) {
      double mid = 0.5 * (lo + hi);
      if (content_mass(g, hs, blend(mid)) > target) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    MixedProfile candidate = blend(0.5 * (lo + hi));
    double z = content_mass(g, hs, candidate);
    if (z >= z_lo && z < z_hi) return candidate;
  }
  throw InputError("sample_near_content: could not reach the requested band");
}

nlohmann::json pseudoconvexity_report_json(const Game& g,
                                           const PseudoconvexityReport& r) {
  nlohmann::json j;
  j["verdict"] = r.verdict;
  j["mode"] = r.mode == PseudoconvexityMode::Strict ? "strict" : "nonstrict";
  j["cavities"] = {{"total", r.num_cavities},
                   {"two_in", r.num_two_in},
                   {"one_in_one_out", r.num_one_in_one_out},
                   {"local_source", r.num_local_source},
                   {"boundary", r.num_boundary}};
  j["failing"] = nlohmann::json::array();
  for (const Cavity& c : r.failing) {
    j["failing"].push_back({{"kind", cavity_kind_name(c.kind)},
                            {"outside_profile", g.unflatten(c.out)},
                            {"diagonal_profile", g.unflatten(c.diag)},
                            {"signed_sum", c.signed_sum},
                            {"boundary", c.boundary}});
  }
  return j;
}

nlohmann::json certificate_json(const Game& g, const LocalSourceCertificate& c) {
  nlohmann::json j;
  j["kind"] = c.kind == LocalSourceCertificate::Kind::Pure ? "pure" : "gadget";
  j["sink_id"] = c.sink_id;
  j["subgame"] = c.subgame.subsets();
  j["point"] = c.point.dists();
  if (c.kind == LocalSourceCertificate::Kind::Pure) {
    Profile p(c.point.num_players());
    for (int i = 0; i < c.point.num_players(); ++i) {
      const auto& d = c.point.dist(i);
      p[i] = static_cast<int>(std::max_element(d.begin(), d.end()) - d.begin());
    }
    j["profile"] = p;
    j["profile_label"] = g.profile_label(g.flatten(p));
  }
  j["negated_margins"] = nlohmann::json::array();
  for (const StrategyMargin& m : c.negated_check.margins) {
    j["negated_margins"].push_back({{"player", m.player},
                                    {"strategy", m.strategy},
                                    {"in_support", m.in_support},
                                    {"gap", m.gap}});
  }
  return j;
}

}  // namespace sinkatlas
