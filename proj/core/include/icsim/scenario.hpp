#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include "icsim/channel.hpp"
#include "icsim/geometry.hpp"

namespace icsim {

struct ConfigError : std::runtime_error {
  std::string field;
  ConfigError(std::string f, const std::string& what)
      : std::runtime_error(f + ": " + what), field(std::move(f)) {}
};

struct CarConfig {
  std::uint32_t uid = 0;
  Route route{LaneIn::H1R, LaneOut::H3L};
  double x0 = -500.0;   // m, relative to the same axis as x_s
  double v0 = 12.0;     // m/s, > 0
  double a0 = 0.0;      // m/s^2
  double sigma_x = 1.0; // m
  double desired_accel = 0.0;  // a_PR; defaults to a0
  double exit_accel = 0.5;     // a_EXIT
  double resume_accel = 0.5;   // floor when resuming from standstill
};

struct LossConfig {
  LossKind kind = LossKind::None;
  int burst_length = 0;
  std::optional<int> burst_start;  // unset: anchored at first incoming ENTER
  int burst_offset = 0;
  double p_pdr = 1.0;
  double xi = 0.0;
  std::optional<std::string> env;  // "open" | "harsh": distance-dependent PDR
};

struct ProtocolConfig {
  double epsilon = 1e-9;      // COND1/COND2 tolerance
  double slot_duration = 0.1; // T, s
  double comm_range = 500.0;  // R, m
  double l_sigma = 3.0;       // l in x_hat_max = x_hat + l sigma
  double a_min_brake = -6.0;  // capture-area braking limit, < 0
  double safety_gap = 2.0;    // m, used in the default tau_th
  std::optional<double> tau_th;  // override; default from velocities at ENTER
  std::optional<double> d_col;   // override for D in a_NOPR
};

struct ScenarioConfig {
  IntersectionGeometry geometry;
  ProtocolConfig protocol;
  CarConfig cars[2];
  LossConfig loss[2];  // indexed by receiver (car 0, car 1)
  int n_slots = 5000;
  std::uint64_t seed = 0;

  void validate() const;  // throws ConfigError naming the offending field
  LossProcess make_loss_process(int receiver) const;
};

ScenarioConfig load_scenario(const std::string& path);
ScenarioConfig parse_scenario(const std::string& json_text);
// All defaults materialized, so a serialized run is self-describing.
std::string serialize_scenario(const ScenarioConfig& cfg);
std::string serialize_scenario_compact(const ScenarioConfig& cfg);

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace icsim
