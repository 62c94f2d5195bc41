#include "icsim/kinematics.hpp"

#include <cmath>
#include <stdexcept>

namespace icsim {

Pose step(const Pose& pose, double dt) {
  if (dt <= 0.0) throw std::invalid_argument("step: dt must be > 0");
  double v = pose.v;
  double a = pose.a;
  if (v <= 0.0 && a <= 0.0) return {pose.x, 0.0, a};
  if (a < 0.0) {
    double t_stop = v / -a;
    if (t_stop <= dt) {
      // stops within the slot; displacement v^2 / (2|a|)
      return {pose.x + v * v / (2.0 * -a), 0.0, a};
    }
  }
  double x = pose.x + v * dt + 0.5 * a * dt * dt;
  double vn = v + a * dt;
  if (vn < 1e-12) vn = 0.0;  // numerically stopped
  return {x, vn, a};
}

namespace {

// Smallest t >= 0 with d = v t + 1/2 a t^2 under the v >= 0 clamp.
double time_to_distance(double d, double v, double a) {
  if (d <= 0.0) return 0.0;
  if (std::fabs(a) <= kAccelEps) {
    if (v <= 0.0) return kNever;
    return d / v;
  }
  double disc = v * v + 2.0 * a * d;
  if (a < 0.0) {
    if (disc < 0.0) return kNever;  // stops before covering d
    if (v <= 0.0) return kNever;
  }
  if (v <= 0.0 && a <= 0.0) return kNever;
  double root = (-v + std::sqrt(disc)) / a;
  return root;
}

}  // namespace

double mti(const Pose& pose, double x_s) {
  if (x_s < pose.x) throw std::invalid_argument("mti: already past the center");
  return time_to_distance(x_s - pose.x, pose.v, pose.a);
}

double time_to_col(const Pose& pose_next, double x_col, double x_hat_max) {
  if (x_hat_max >= x_col) return 0.0;
  return time_to_distance(x_col - x_hat_max, pose_next.v, pose_next.a);
}

double accel_nopr(const Pose& pose_next, double tau_col, double D) {
  if (D <= 0.0) throw std::invalid_argument("accel_nopr: D must be > 0");
  if (!(tau_col > 0.0) || std::isinf(tau_col))
    throw std::invalid_argument("accel_nopr: tau_col must be finite and > 0");
  return pose_next.a - 2.0 * D / (tau_col * tau_col);
}

double accel_safe(const Pose& pose_next, double tau_col) {
  if (std::isinf(tau_col)) return 0.0;
  if (pose_next.v <= 0.0) return 0.0;
  if (tau_col <= 0.0) throw std::invalid_argument("accel_safe: tau_col must be > 0");
  return -pose_next.v / tau_col;
}

const char* to_string(ControlMode m) {
  switch (m) {
    case ControlMode::MainPriority: return "MAIN_PRIORITY";
    case ControlMode::MainYield: return "MAIN_YIELD";
    case ControlMode::Safe: return "SAFE";
    case ControlMode::ExitResume: return "EXIT_RESUME";
  }
  return "?";
}

}  // namespace icsim
