#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "sinkatlas/game.hpp"

namespace testutil {

inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline std::vector<double> random_simplex(int n, std::mt19937_64& rng) {
  std::vector<double> v(n);
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    v[i] = -std::log(uniform01(rng) + 1e-300);
    sum += v[i];
  }
  for (int i = 0; i < n; ++i) v[i] /= sum;
  return v;
}

inline sinkatlas::MixedProfile random_mixed(const std::vector<int>& counts,
                                            std::mt19937_64& rng) {
  std::vector<std::vector<double>> d(counts.size());
  for (size_t i = 0; i < counts.size(); ++i) {
    d[i] = random_simplex(counts[i], rng);
  }
  return sinkatlas::MixedProfile(std::move(d));
}

/// Independent expected-utility oracle: plain sum over every pure profile.
inline double brute_force_mixed_utility(const sinkatlas::Game& g, int player,
                                        const sinkatlas::MixedProfile& x) {
  double total = 0.0;
  for (sinkatlas::ProfileId p = 0; p < g.num_profiles(); ++p) {
    sinkatlas::Profile coords = g.unflatten(p);
    double w = 1.0;
    for (int i = 0; i < g.num_players(); ++i) w *= x.prob(i, coords[i]);
    total += w * g.utility(player, p);
  }
  return total;
}

inline double sup_dist(const sinkatlas::MixedProfile& a,
                       const sinkatlas::MixedProfile& b) {
  double d = 0.0;
  for (int i = 0; i < a.num_players(); ++i) {
    for (size_t s = 0; s < a.dist(i).size(); ++s) {
      d = std::max(d, std::abs(a.dist(i)[s] - b.dist(i)[s]));
    }
  }
  return d;
}

}  // namespace testutil
