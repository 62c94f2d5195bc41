#pragma once

#include <cstdint>
#include <limits>

namespace icsim {

// Acceleration magnitudes below this switch the time-to-reach formulas to
// the uniform-motion limit d/v.
inline constexpr double kAccelEps = 1e-9;

inline constexpr double kNever = std::numeric_limits<double>::infinity();

// Longitudinal state. Velocity never goes negative: a decelerating car
// stops and stays stopped.
struct Pose {
  double x = 0.0;  // m
  double v = 0.0;  // m/s, >= 0
  double a = 0.0;  // m/s^2
};

// Advance by dt seconds under constant acceleration with the v >= 0 clamp.
// If v would cross zero within dt, motion stops at the zero-velocity point.
Pose step(const Pose& pose, double dt);

// Smallest t >= 0 at which a car from `pose` (x taken as the estimated
// position) reaches x_s. Returns kNever when the car stops short.
// Throws std::invalid_argument if x_s < pose.x.
double mti(const Pose& pose, double x_s);

// Worst-case remaining time to the collision-area entrance x_col, evaluated
// from the inflated estimate x_hat_max. 0 if x_hat_max >= x_col.
double time_to_col(const Pose& pose_next, double x_col, double x_hat_max);

// Yield acceleration: shave D meters of displacement over the tau_col
// horizon. tau_col must be finite and > 0, D > 0.
double accel_nopr(const Pose& pose_next, double tau_col, double D);

// Stop-at-or-before-the-entrance braking. Returns 0 when tau_col is
// infinite (nothing to stop for) or the car is already stopped.
double accel_safe(const Pose& pose_next, double tau_col);

enum class ControlMode : std::uint8_t {
  MainPriority,  // proceed with the desired acceleration
  MainYield,     // slowed down behind the collision area
  Safe,          // braking to stop before the collision area
  ExitResume,    // speeding back up after the peer's EXIT
};

struct ControlCommand {
  ControlMode mode = ControlMode::MainPriority;
  double accel = 0.0;  // mode Safe implies accel <= 0
};

const char* to_string(ControlMode m);

}  // namespace icsim
