#pragma once

#include <array>
#include <nlohmann/json.hpp>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "sinkatlas/dynamics.hpp"
#include "sinkatlas/game.hpp"
#include "sinkatlas/preference_graph.hpp"

namespace sinkatlas {

inline constexpr double kQuasiStrictTol = 1e-9;
inline constexpr double kFixedPointTol = 1e-8;

/// A 2x2 subgame (two free players, everyone else pinned to a pure strategy)
/// with exactly three of its four profiles inside a sink equilibrium.
/// `kind` classifies the two arcs joining the diagonal in-profile `diag` to
/// its neighbors: both in -> TwoIn, split -> OneInOneOut, both out ->
/// LocalSource.
struct Cavity {
  Subgame subgame;
  ProfileId out = 0;                 // the profile outside H
  ProfileId diag = 0;                // in-H profile diagonal to `out`
  std::array<ProfileId, 2> adjacent{};  // the other two in-H profiles
  enum class Kind { TwoIn, OneInOneOut, LocalSource };
  Kind kind = Kind::TwoIn;
  /// Signed deviation sum at `diag`: W_{adj0,diag} + W_{adj1,diag}.
  double signed_sum = 0.0;
  bool boundary = false;  // |signed_sum| <= tie tolerance
};

const char* cavity_kind_name(Cavity::Kind k);

std::vector<Cavity> find_cavities(const Game& g, const PreferenceGraph& pg,
                                  const SinkEquilibrium& h);

enum class PseudoconvexityMode { NonStrict, Strict };

/// NonStrict (default): pseudoconvex iff signed_sum <= tie_tol, so boundary
/// cavities pass. Strict: requires signed_sum < -tie_tol and raises
/// GenericityError on a boundary cavity.
bool is_pseudoconvex_cavity(const Cavity& c,
                            PseudoconvexityMode mode = PseudoconvexityMode::NonStrict,
                            double tie_tol = kTieTol);

struct PseudoconvexityReport {
  bool verdict = true;
  PseudoconvexityMode mode = PseudoconvexityMode::NonStrict;
  int num_cavities = 0;
  int num_two_in = 0;
  int num_one_in_one_out = 0;
  int num_local_source = 0;
  int num_boundary = 0;
  std::vector<Cavity> failing;
};

PseudoconvexityReport is_pseudoconvex_sink(
    const Game& g, const PreferenceGraph& pg, const SinkEquilibrium& h,
    PseudoconvexityMode mode = PseudoconvexityMode::NonStrict);

struct StrategyMargin {
  int player = 0;
  int strategy = 0;
  bool in_support = false;
  /// U_i(s; x_{-i}) - U_i(x): ~0 on support, < 0 off support at a
  /// quasi-strict equilibrium.
  double gap = 0.0;
};

struct QuasiStrictReport {
  bool is_nash = false;
  bool quasi_strict = false;  // both conditions
  std::vector<StrategyMargin> margins;
};

/// Nash within eq_tol on the support, every out-of-support strategy short by
/// more than strict_margin.
QuasiStrictReport is_quasi_strict_nash(const Game& g, const MixedProfile& x,
                                       double eq_tol = kQuasiStrictTol,
                                       double strict_margin = kQuasiStrictTol,
                                       double support_threshold = kSupportThreshold);

/// Interior fixed point of the 2x2 subgame y (two free players, others pure):
/// solves both indifference conditions; returns the point embedded in the
/// full strategy space iff both mixing weights lie strictly in (0,1).
/// Degenerate restricted game (zero denominator) raises GenericityError.
std::optional<MixedProfile> fixed_point_2x2(const Game& g, const Subgame& y);

/// Certificate that trajectories escape content(H) near a point.
struct LocalSourceCertificate {
  /// Pure: all three local-source conditions hold at a pure profile of H
  /// (the point is in content(H), the subgame is not contained in content(H),
  /// and the point is a quasi-strict equilibrium of the negated restricted
  /// game). Gadget: a mixed 2x2-support fixed point whose support square
  /// meets H, certified as a quasi-strict equilibrium of the negated game on
  /// a containing 2x3 subgame that pokes outside content(H).
  enum class Kind { Pure, Gadget };
  Kind kind;
  int sink_id;
  Subgame subgame;      // the witnessing subgame Y
  MixedProfile point;   // embedded in the full strategy space
  QuasiStrictReport negated_check;  // margins in the negated restricted game
};

struct LocalSourceOptions {
  double eq_tol = kQuasiStrictTol;
  double strict_margin = kQuasiStrictTol;
  bool include_gadget_candidates = true;
};

/// Searches two candidate families: pure profiles of H that are sources of a
/// 2x2 (and, for >= 3 players, 2x2x2) slice not contained in H, and (for
/// two-player games) 2x2-support interior fixed points inside containing 2x3
/// subgames. "No certificate found" never means "none exists".
std::vector<LocalSourceCertificate> find_local_sources(
    const Game& g, const PreferenceGraph& pg, const SinkEquilibrium& h,
    const LocalSourceOptions& opts = {});

/// d/dt of the total product mass on H along the replicator:
///   sum_{h in H} z_h (M z)_h.
double lyapunov_zH_derivative(const ProductMatrix& m,
                              const std::vector<ProfileId>& h,
                              const std::vector<double>& z);
double lyapunov_zH_derivative(const Game& g, const SinkEquilibrium& h,
                              const MixedProfile& x);

struct TransversalEigenvalue {
  int player = 0;
  int strategy = 0;
  double value = 0.0;  // u_i(s; x_{-i}) - U_i(x)
};

/// Jacobian eigenvalues along out-of-support directions at a fixed point
/// (field must vanish within fp_tol, else invalid_argument). Empty for
/// interior fixed points.
std::vector<TransversalEigenvalue> transversal_eigenvalues(
    const Game& g, const MixedProfile& x, double fp_tol = kFixedPointTol,
    double support_threshold = kSupportThreshold);

/// Random state with content mass on H inside [z_lo, z_hi): a random point of
/// content(H) blended toward a random interior point, blend weight found by
/// bisection. Requires H != Z.
MixedProfile sample_near_content(const Game& g, const std::vector<ProfileId>& h,
                                 double z_lo, double z_hi, std::mt19937_64& rng);

nlohmann::json pseudoconvexity_report_json(const Game& g,
                                           const PseudoconvexityReport& r);
nlohmann::json certificate_json(const Game& g, const LocalSourceCertificate& c);

}  // namespace sinkatlas
