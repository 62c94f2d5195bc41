#pragma once

#include <cstdint>
#include <vector>

#include "icsim/scenario.hpp"
#include "icsim/sim.hpp"

namespace icsim {

// Symmetric perpendicular straight crossing; both cars trigger COND1 in the
// same slot, so the ENTER exchange starts simultaneously on both sides.
ScenarioConfig canonical_scenario();

// Canonical scenario with single receive-omission bursts of f1 and f2 slots
// placed at each car's first slot with an incoming ENTER.
ScenarioConfig burst_scenario(int f1, int f2);

struct GridRow {
  int f1 = 0;
  int f2 = 0;
  int t_en_sim = -1;
  int t_en_formula = -1;
  bool match = false;
};

// Simulates every (f1, f2) cell in [0, max_f]^2 against the closed form.
std::vector<GridRow> failure_grid(int max_f);

void write_grid_csv(std::ostream& out, const std::vector<GridRow>& rows);

// Deterministic family of randomized safety scenarios: mixed routes
// (conflicting and conflict-free), geometric and correlated losses.
ScenarioConfig randomized_scenario(std::uint64_t index);

}  // namespace icsim
