#include "sinkatlas/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace sinkatlas {

std::vector<double> ProductMatrix::apply(const std::vector<double>& z) const {
  std::vector<double> out(n_, 0.0);
  for (int q = 0; q < n_; ++q) {
    const double* row = m_.data() + static_cast<size_t>(q) * n_;
    double acc = 0.0;
    for (int p = 0; p < n_; ++p) acc += row[p] * z[p];
    out[q] = acc;
  }
  return out;
}

ProductMatrix product_matrix(const Game& g) {
  const int n = g.num_profiles();
  std::vector<double> m(static_cast<size_t>(n) * n, 0.0);
  for (ProfileId q = 0; q < n; ++q) {
    for (ProfileId p = 0; p < n; ++p) {
      if (p == q) continue;
      double acc = 0.0;
      for (int i = 0; i < g.num_players(); ++i) {
        ProfileId deviated = g.with_strategy(p, i, g.coord(q, i));
        acc += g.utility(i, deviated) - g.utility(i, p);
      }
      m[static_cast<size_t>(q) * n + p] = acc;
    }
  }
  return ProductMatrix(n, std::move(m));
}

namespace {

struct FlatLayout {
  std::vector<int> counts;
  std::vector<int> offsets;  // size counts.size()+1
  int total = 0;

  explicit FlatLayout(const std::vector<int>& c) : counts(c) {
    offsets.assign(c.size() + 1, 0);
    for (size_t i = 0; i < c.size(); ++i) offsets[i + 1] = offsets[i] + c[i];
    total = offsets.back();
  }
};

std::vector<double> pack(const MixedProfile& x, const FlatLayout& layout) {
  std::vector<double> flat(layout.total);
  for (size_t i = 0; i < layout.counts.size(); ++i) {
    for (int s = 0; s < layout.counts[i]; ++s) {
      flat[layout.offsets[i] + s] = x.prob(static_cast<int>(i), s);
    }
  }
  return flat;
}

MixedProfile unpack(const std::vector<double>& flat, const FlatLayout& layout) {
  std::vector<std::vector<double>> d(layout.counts.size());
  for (size_t i = 0; i < layout.counts.size(); ++i) {
    d[i].assign(flat.begin() + layout.offsets[i],
                flat.begin() + layout.offsets[i + 1]);
  }
  return MixedProfile(std::move(d));
}

struct FieldScratch {
  std::vector<double> payoff;  // U_i(s; x_{-i}) per coordinate
  std::vector<double> prefix, suffix;

  explicit FieldScratch(const FlatLayout& layout)
      : payoff(layout.total),
        prefix(layout.counts.size() + 1),
        suffix(layout.counts.size() + 1) {}
};

// Replicator field on the flat layout. One pass over all profiles computes
// every player's expected payoff per pure strategy via leave-one-out
// products, so zero coordinates contribute exactly zero.
void field(const Game& g, const FlatLayout& layout, const std::vector<double>& x,
           std::vector<double>& dx, FieldScratch& scratch) {
  const int np = g.num_players();
  std::vector<double>& w = scratch.payoff;
  std::fill(w.begin(), w.end(), 0.0);

  std::vector<double>& prefix = scratch.prefix;
  std::vector<double>& suffix = scratch.suffix;
  for (ProfileId p = 0; p < g.num_profiles(); ++p) {
    prefix[0] = 1.0;
    for (int i = 0; i < np; ++i) {
      prefix[i + 1] = prefix[i] * x[layout.offsets[i] + g.coord(p, i)];
    }
    if (prefix[np] == 0.0) {
      // Still need leave-one-out contributions where only one factor is zero.
      suffix[np] = 1.0;
      for (int i = np - 1; i >= 0; --i) {
        suffix[i] = suffix[i + 1] * x[layout.offsets[i] + g.coord(p, i)];
      }
      for (int i = 0; i < np; ++i) {
        double others = prefix[i] * suffix[i + 1];
        if (others != 0.0) {
          w[layout.offsets[i] + g.coord(p, i)] += others * g.utility(i, p);
        }
      }
    } else {
      double full = prefix[np];
      for (int i = 0; i < np; ++i) {
        double others = full / x[layout.offsets[i] + g.coord(p, i)];
        w[layout.offsets[i] + g.coord(p, i)] += others * g.utility(i, p);
      }
    }
  }

  for (int i = 0; i < np; ++i) {
    double avg = 0.0;
    for (int s = 0; s < layout.counts[i]; ++s) {
      avg += x[layout.offsets[i] + s] * w[layout.offsets[i] + s];
    }
    for (int s = 0; s < layout.counts[i]; ++s) {
      int k = layout.offsets[i] + s;
      dx[k] = x[k] * (w[k] - avg);
    }
  }
}

double sup_distance(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

double content_mass_flat(const Game& g, const FlatLayout& layout,
                         const std::vector<double>& x, const ProfileSet& h) {
  double total = 0.0;
  for (ProfileId p : h) {
    double m = 1.0;
    for (int i = 0; i < g.num_players(); ++i) {
      m *= x[layout.offsets[i] + g.coord(p, i)];
    }
    total += m;
  }
  return total;
}

}  // namespace

StopCondition StopCondition::content_mass_at_least(ProfileSet h,
                                                   double threshold) {
  StopCondition s;
  s.kind = Kind::ContentMassAtLeast;
  s.profiles = std::move(h);
  s.threshold = threshold;
  return s;
}

StopCondition StopCondition::content_mass_at_most(ProfileSet h,
                                                  double threshold) {
  StopCondition s;
  s.kind = Kind::ContentMassAtMost;
  s.profiles = std::move(h);
  s.threshold = threshold;
  return s;
}

StopCondition StopCondition::displacement_below(double rate) {
  StopCondition s;
  s.kind = Kind::DisplacementBelow;
  s.threshold = rate;
  return s;
}

StopCondition StopCondition::proximity_to(const MixedProfile& ref,
                                          double radius) {
  StopCondition s;
  s.kind = Kind::ProximityTo;
  s.threshold = radius;
  for (const auto& d : ref.dists()) {
    s.reference.insert(s.reference.end(), d.begin(), d.end());
  }
  return s;
}

ObservableSpec ObservableSpec::content_mass(std::string name, ProfileSet h) {
  ObservableSpec o;
  o.name = std::move(name);
  o.kind = Kind::ContentMass;
  o.profiles = std::move(h);
  return o;
}

ObservableSpec ObservableSpec::distance_to(std::string name,
                                           const MixedProfile& ref) {
  ObservableSpec o;
  o.name = std::move(name);
  o.kind = Kind::DistanceTo;
  for (const auto& d : ref.dists()) {
    o.reference.insert(o.reference.end(), d.begin(), d.end());
  }
  return o;
}

std::vector<std::vector<double>> replicator_vector_field(const Game& g,
                                                         const MixedProfile& x) {
  if (!x.same_shape(g.strategy_counts())) {
    throw InputError("mixed profile shape does not match game");
  }
  FlatLayout layout(g.strategy_counts());
  std::vector<double> flat = pack(x, layout);
  std::vector<double> dx(layout.total);
  FieldScratch scratch(layout);
  field(g, layout, flat, dx, scratch);
  std::vector<std::vector<double>> out(g.num_players());
  for (int i = 0; i < g.num_players(); ++i) {
    out[i].assign(dx.begin() + layout.offsets[i],
                  dx.begin() + layout.offsets[i + 1]);
  }
  return out;
}

std::vector<double> correlated_state(const Game& g, const MixedProfile& x) {
  if (!x.same_shape(g.strategy_counts())) {
    throw InputError("mixed profile shape does not match game");
  }
  std::vector<double> z(g.num_profiles());
  for (ProfileId p = 0; p < g.num_profiles(); ++p) {
    double m = 1.0;
    for (int i = 0; i < g.num_players(); ++i) m *= x.prob(i, g.coord(p, i));
    z[p] = m;
  }
  return z;
}

std::vector<double> correlated_vector_field(const ProductMatrix& m,
                                            const std::vector<double>& z) {
  if (static_cast<int>(z.size()) != m.size()) {
    throw InputError("correlated state has wrong length");
  }
  std::vector<double> mz = m.apply(z);
  for (int p = 0; p < m.size(); ++p) mz[p] *= z[p];
  return mz;
}

MixedProfile TrajectoryRecord::state(size_t record) const {
  std::vector<std::vector<double>> d(strategy_counts.size());
  const double* base = states.data() + record * offsets.back();
  for (size_t i = 0; i < strategy_counts.size(); ++i) {
    d[i].assign(base + offsets[i], base + offsets[i + 1]);
  }
  return MixedProfile(std::move(d));
}

TrajectoryRecord integrate(const Game& g, const MixedProfile& x0,
                           const IntegrateOptions& opts) {
  if (opts.step <= 0) throw InputError("step must be > 0");
  if (opts.t_max < 0) throw InputError("t_max must be >= 0");
  if (opts.record_stride < 1) throw InputError("record_stride must be >= 1");
  if (!x0.same_shape(g.strategy_counts())) {
    throw InputError("start profile shape does not match game");
  }

  FlatLayout layout(g.strategy_counts());
  std::vector<double> x = pack(x0, layout);

  TrajectoryRecord tr;
  tr.strategy_counts = g.strategy_counts();
  tr.offsets = layout.offsets;

  std::vector<double> k1(layout.total), k2(layout.total), k3(layout.total),
      k4(layout.total), tmp(layout.total);
  FieldScratch scratch(layout);
  std::vector<double> prev = x;

  auto record = [&](double t, const std::vector<double>& state) {
    tr.times.push_back(t);
    tr.states.insert(tr.states.end(), state.begin(), state.end());
    for (const auto& obs : opts.observables) {
      double v = 0.0;
      switch (obs.kind) {
        case ObservableSpec::Kind::ContentMass:
          v = content_mass_flat(g, layout, state, obs.profiles);
          break;
        case ObservableSpec::Kind::DistanceTo:
          v = sup_distance(state, obs.reference);
          break;
      }
      tr.observables[obs.name].push_back(v);
    }
  };

  auto check_stops = [&](const std::vector<double>& state,
                         const std::vector<double>& previous) -> int {
    for (size_t s = 0; s < opts.stops.size(); ++s) {
      const StopCondition& stop = opts.stops[s];
      switch (stop.kind) {
        case StopCondition::Kind::ContentMassAtLeast:
          if (content_mass_flat(g, layout, state, stop.profiles) >=
              stop.threshold) {
            return static_cast<int>(s);
          }
          break;
        case StopCondition::Kind::ContentMassAtMost:
          if (content_mass_flat(g, layout, state, stop.profiles) <=
              stop.threshold) {
            return static_cast<int>(s);
          }
          break;
        case StopCondition::Kind::DisplacementBelow:
          if (sup_distance(state, previous) / opts.step < stop.threshold) {
            return static_cast<int>(s);
          }
          break;
        case StopCondition::Kind::ProximityTo:
          if (sup_distance(state, stop.reference) <= stop.threshold) {
            return static_cast<int>(s);
          }
          break;
      }
    }
    return -1;
  };

  record(0.0, x);
  const long long max_steps =
      static_cast<long long>(std::ceil(opts.t_max / opts.step - 1e-9));
  double t = 0.0;
  for (long long n = 0; n < max_steps; ++n) {
    const double h = opts.step;
    prev = x;
    field(g, layout, x, k1, scratch);
    for (int i = 0; i < layout.total; ++i) tmp[i] = x[i] + 0.5 * h * k1[i];
    field(g, layout, tmp, k2, scratch);
    for (int i = 0; i < layout.total; ++i) tmp[i] = x[i] + 0.5 * h * k2[i];
    field(g, layout, tmp, k3, scratch);
    for (int i = 0; i < layout.total; ++i) tmp[i] = x[i] + h * k3[i];
    field(g, layout, tmp, k4, scratch);
    for (int i = 0; i < layout.total; ++i) {
      x[i] += h / 6.0 * (k1[i] + 2.0 * (k2[i] + k3[i]) + k4[i]);
    }
    t = (n + 1) * opts.step;

    // Simplex guard, then per-player renormalization. Exact zeros never move
    // (the field is multiplicative in each coordinate), so faces stay faces.
    for (size_t i = 0; i < layout.counts.size(); ++i) {
      double sum = 0.0;
      for (int s = 0; s < layout.counts[i]; ++s) {
        double v = x[layout.offsets[i] + s];
        if (v < -1e-6) {
          throw StepSizeError(
              "state left the simplex (coordinate " + std::to_string(v) +
              " at t=" + std::to_string(t) + "); reduce the step size");
        }
        sum += v;
      }
      if (std::abs(sum - 1.0) > 1e-6) {
        throw StepSizeError("state left the simplex (player " +
                            std::to_string(i) + " mass " + std::to_string(sum) +
                            " at t=" + std::to_string(t) +
                            "); reduce the step size");
      }
      double clipped = 0.0;
      for (int s = 0; s < layout.counts[i]; ++s) {
        double& v = x[layout.offsets[i] + s];
        if (v < 0.0) v = 0.0;
        clipped += v;
      }
      for (int s = 0; s < layout.counts[i]; ++s) {
        x[layout.offsets[i] + s] /= clipped;
      }
    }

    bool last = n + 1 == max_steps;
    int fired = check_stops(x, prev);
    if ((n + 1) % opts.record_stride == 0 || last || fired >= 0) {
      record(t, x);
    }
    if (fired >= 0) {
      tr.stop_index = fired;
      break;
    }
  }
  tr.final_time = tr.times.empty() ? 0.0 : tr.times.back();
  return tr;
}

CorrelatedTrajectory integrate_correlated(const ProductMatrix& m,
                                          std::vector<double> z0, double t_max,
                                          double step, int record_stride) {
  if (step <= 0) throw InputError("step must be > 0");
  if (static_cast<int>(z0.size()) != m.size()) {
    throw InputError("correlated state has wrong length");
  }
  double sum0 = 0.0;
  for (double v : z0) {
    if (v < 0) throw InputError("correlated state entry is negative");
    sum0 += v;
  }
  if (std::abs(sum0 - 1.0) > 1e-9) {
    throw InputError("correlated state does not sum to 1");
  }

  const int n = m.size();
  auto f = [&](const std::vector<double>& z) {
    std::vector<double> mz = m.apply(z);
    for (int p = 0; p < n; ++p) mz[p] *= z[p];
    return mz;
  };

  CorrelatedTrajectory tr;
  tr.times.push_back(0.0);
  tr.states.push_back(z0);
  std::vector<double> z = std::move(z0), tmp(n);
  const long long max_steps =
      static_cast<long long>(std::ceil(t_max / step - 1e-9));
  for (long long k = 0; k < max_steps; ++k) {
    auto k1 = f(z);
    for (int i = 0; i < n; ++i) tmp[i] = z[i] + 0.5 * step * k1[i];
    auto k2 = f(tmp);
    for (int i = 0; i < n; ++i) tmp[i] = z[i] + 0.5 * step * k2[i];
    auto k3 = f(tmp);
    for (int i = 0; i < n; ++i) tmp[i] = z[i] + step * k3[i];
    auto k4 = f(tmp);
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
      z[i] += step / 6.0 * (k1[i] + 2.0 * (k2[i] + k3[i]) + k4[i]);
      if (z[i] < 0.0) z[i] = 0.0;
      sum += z[i];
    }
    for (int i = 0; i < n; ++i) z[i] /= sum;
    if ((k + 1) % record_stride == 0 || k + 1 == max_steps) {
      tr.times.push_back((k + 1) * step);
      tr.states.push_back(z);
    }
  }
  return tr;
}

ProfileSet estimate_omega_limit(const TrajectoryRecord& tr,
                                double tail_fraction, double mass_floor) {
  if (tr.times.empty()) throw InputError("trajectory is empty");
  if (tail_fraction <= 0 || tail_fraction > 1) {
    throw InputError("tail_fraction must be in (0, 1]");
  }
  const size_t n = tr.num_records();
  size_t first = static_cast<size_t>(std::floor((1.0 - tail_fraction) * n));
  if (first >= n) first = n - 1;

  const auto& counts = tr.strategy_counts;
  int num_profiles = 1;
  for (int c : counts) num_profiles *= c;
  std::vector<int> strides(counts.size(), 1);
  for (int i = static_cast<int>(counts.size()) - 2; i >= 0; --i) {
    strides[i] = strides[i + 1] * counts[i + 1];
  }

  ProfileSet out;
  for (size_t r = first; r < n; ++r) {
    for (ProfileId p = 0; p < num_profiles; ++p) {
      if (out.count(p)) continue;
      double mass = 1.0;
      for (size_t i = 0; i < counts.size(); ++i) {
        mass *= tr.coord(r, static_cast<int>(i), (p / strides[i]) % counts[i]);
      }
      if (mass > mass_floor) out.insert(p);
    }
  }
  return out;
}

std::string trajectory_csv(const Game& g, const TrajectoryRecord& tr) {
  std::ostringstream out;
  out << "t";
  for (int i = 0; i < g.num_players(); ++i) {
    for (int s = 0; s < g.strategy_counts()[i]; ++s) {
      out << ",p" << i << ".";
      if (g.has_strategy_names()) {
        out << g.strategy_names()[i][s];
      } else {
        out << s;
      }
    }
  }
  for (const auto& [name, series] : tr.observables) {
    out << "," << name;
  }
  out << "\n";
  char buf[64];
  auto emit = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out << buf;
  };
  for (size_t r = 0; r < tr.num_records(); ++r) {
    emit(tr.times[r]);
    for (int k = 0; k < tr.total_coords(); ++k) {
      out << ",";
      emit(tr.states[r * tr.total_coords() + k]);
    }
    for (const auto& [name, series] : tr.observables) {
      out << ",";
      emit(series[r]);
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace sinkatlas
