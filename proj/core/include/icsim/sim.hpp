#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "icsim/channel.hpp"
#include "icsim/protocol.hpp"
#include "icsim/scenario.hpp"

namespace icsim {

struct CarRecord {
  double x_true = 0.0;
  double x_hat = 0.0;
  double v = 0.0;
  double a = 0.0;  // acceleration applied during the slot
  Phase phase = Phase::BeforeEnter;
  ControlMode mode = ControlMode::MainPriority;
  std::optional<MsgType> sent;
  int received = 0;
  int lost = 0;
};

struct SlotRow {
  int slot = 0;  // 1-based
  CarRecord car[2];
};

struct SlotTrace {
  std::vector<SlotRow> rows;
};

struct Verdict {
  bool safe = true;
  bool both_crossed = false;
  int t_en_observed = -1;        // slots from the ENTER exchange to mutual MAINCTRL
  int total_crossing_slots = -1; // first ENTER send to both cars clear
  double min_separation = 0.0;   // m, minimum 2D center distance
};

struct RunResult {
  SlotTrace trace;
  Verdict verdict;
};

RunResult run(const ScenarioConfig& cfg);

struct Interval {
  double t_in = 0.0;
  double t_out = 0.0;  // kNever when the car never leaves within the run
};

// Time spans during which any part of the car overlaps each cell on its
// route, reconstructed from the trace with exact constant-acceleration
// crossing times inside each slot.
std::vector<std::pair<Subsection, Interval>> occupancy_intervals(
    const SlotTrace& trace, int car_index, const IntersectionGeometry& geom,
    const Route& route, double slot_duration);

void write_trace_csv(std::ostream& out, const SlotTrace& trace,
                     const ScenarioConfig& cfg);
std::string verdict_summary(const Verdict& v, const ScenarioConfig& cfg);

}  // namespace icsim
