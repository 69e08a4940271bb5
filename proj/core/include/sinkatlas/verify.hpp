#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sinkatlas/corpus.hpp"

namespace sinkatlas {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

/// Scripted structural and trajectory checks for one corpus fixture.
/// Deterministic given the seed (used only by the sampling checks).
std::vector<CheckResult> verify_named_game(const std::string& id,
                                           std::uint64_t seed = 12345);

bool all_passed(const std::vector<CheckResult>& checks);

}  // namespace sinkatlas
