#pragma once

#include <map>
#include <string>
#include <vector>

#include "sinkatlas/game.hpp"

namespace sinkatlas {

inline constexpr double kDefaultStep = 1e-3;
inline constexpr double kDefaultTMax = 1e4;
inline constexpr double kOmegaMassFloor = 1e-3;

/// Dense profile-pair matrix M with
///   M[q][p] = sum_i ( u_i(q_i; p_{-i}) - u_i(p) ),
/// so the induced distribution z over profiles evolves by dz_p = z_p (M z)_p.
/// Antisymmetric on comparable pairs, zero diagonal.
class ProductMatrix {
 public:
  ProductMatrix(int n, std::vector<double> entries)
      : n_(n), m_(std::move(entries)) {}
  int size() const { return n_; }
  double operator()(ProfileId q, ProfileId p) const { return m_[q * n_ + p]; }
  /// (M z)_q for all q.
  std::vector<double> apply(const std::vector<double>& z) const;

 private:
  int n_;
  std::vector<double> m_;  // row q, column p
};

ProductMatrix product_matrix(const Game& g);

/// Replicator derivative of every coordinate:
///   dx^i_s = x^i_s ( U_i(s; x_{-i}) - sum_r x^i_r U_i(r; x_{-i}) ).
/// Vanishes at vertices, at Nash equilibria, and on zero coordinates.
std::vector<std::vector<double>> replicator_vector_field(const Game& g,
                                                         const MixedProfile& x);

/// Product distribution z_p = prod_i x^i_{p_i} over all pure profiles.
std::vector<double> correlated_state(const Game& g, const MixedProfile& x);

/// dz_p = z_p (M z)_p, componentwise.
std::vector<double> correlated_vector_field(const ProductMatrix& m,
                                            const std::vector<double>& z);

struct StopCondition {
  enum class Kind {
    ContentMassAtLeast,
    ContentMassAtMost,
    DisplacementBelow,  // sup-norm displacement per unit time
    ProximityTo,        // sup-norm distance to a reference point
  };
  Kind kind;
  ProfileSet profiles;             // for the content-mass kinds
  double threshold = 0.0;
  std::vector<double> reference;   // flat coords, for ProximityTo

  static StopCondition content_mass_at_least(ProfileSet h, double threshold);
  static StopCondition content_mass_at_most(ProfileSet h, double threshold);
  static StopCondition displacement_below(double rate);
  static StopCondition proximity_to(const MixedProfile& ref, double radius);
};

/// Named series recorded alongside the trajectory.
struct ObservableSpec {
  enum class Kind { ContentMass, DistanceTo };
  std::string name;
  Kind kind;
  ProfileSet profiles;           // ContentMass
  std::vector<double> reference; // DistanceTo, flat coords

  static ObservableSpec content_mass(std::string name, ProfileSet h);
  static ObservableSpec distance_to(std::string name, const MixedProfile& ref);
};

struct IntegrateOptions {
  double t_max = kDefaultTMax;
  double step = kDefaultStep;
  int record_stride = 1;  // record every k-th step (first and last always)
  std::vector<StopCondition> stops;
  std::vector<ObservableSpec> observables;
};

/// Time-stamped trajectory with states packed flat (per-player blocks).
struct TrajectoryRecord {
  std::vector<int> strategy_counts;
  std::vector<int> offsets;  // coordinate offset per player, plus total at end
  std::vector<double> times;
  std::vector<double> states;  // times.size() x offsets.back()
  std::map<std::string, std::vector<double>> observables;
  int stop_index = -1;   // which stop condition fired, -1 for t_max
  double final_time = 0.0;

  size_t num_records() const { return times.size(); }
  int total_coords() const { return offsets.back(); }
  double coord(size_t record, int player, int strategy) const {
    return states[record * offsets.back() + offsets[player] + strategy];
  }
  MixedProfile state(size_t record) const;
  MixedProfile final_state() const { return state(times.size() - 1); }
};

/// Fixed-step RK4 with per-step renormalization. Exact-zero coordinates are
/// held at exact zero for all time (faces are invariant); a raw step that
/// leaves the simplex by more than 1e-6 raises StepSizeError.
TrajectoryRecord integrate(const Game& g, const MixedProfile& x0,
                           const IntegrateOptions& opts = {});

/// Fixed-step RK4 on dz = z (Mz) in correlated space, renormalized to sum 1.
/// Records z every `record_stride` steps, first and last included.
struct CorrelatedTrajectory {
  std::vector<double> times;
  std::vector<std::vector<double>> states;
};
CorrelatedTrajectory integrate_correlated(const ProductMatrix& m,
                                          std::vector<double> z0, double t_max,
                                          double step, int record_stride = 1);

/// Profiles whose correlated mass exceeds `mass_floor` anywhere in the
/// trailing `tail_fraction` of the trajectory; desk-scale stand-in for the
/// profile support of the omega-limit set.
ProfileSet estimate_omega_limit(const TrajectoryRecord& tr,
                                double tail_fraction,
                                double mass_floor = kOmegaMassFloor);

/// CSV with header `t,p<i>.<strategy>,...` plus one column per observable;
/// 17 significant digits throughout.
std::string trajectory_csv(const Game& g, const TrajectoryRecord& tr);

}  // namespace sinkatlas
