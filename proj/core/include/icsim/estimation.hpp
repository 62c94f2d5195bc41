#pragma once

#include "icsim/kinematics.hpp"

namespace icsim {

// Gaussian longitudinal position belief. Velocity and acceleration are
// treated as exact; sigma stays constant.
struct PositionBelief {
  double mean = 0.0;   // m
  double sigma = 1.0;  // m, > 0
};

double normal_cdf(double z);

// Propagate the mean by deterministic kinematics over horizon_slots * T
// seconds (with the v >= 0 clamp); sigma unchanged.
PositionBelief predict(const PositionBelief& belief, const Pose& pose,
                       int horizon_slots, double T);

// ceil(R / (v T)): slots until the car, at constant speed, covers the
// communication range. Throws std::invalid_argument for v <= 0.
int horizon_slots(double v, double R, double T);

// One-sided capture-area probability P(X >= ca_start) of the predicted
// belief. COND1 holds when this reaches eps.
double prob_in_ca(const PositionBelief& predicted, double ca_start,
                  double x_s);

// P(X >= exit_boundary). COND2 holds when this reaches 1 - eps.
double prob_exited(const PositionBelief& belief, double exit_boundary);

}  // namespace icsim
