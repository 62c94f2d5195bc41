#include "icsim/estimation.hpp"

#include <cmath>
#include <stdexcept>

namespace icsim {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

PositionBelief predict(const PositionBelief& belief, const Pose& pose,
                       int horizon_slots, double T) {
  if (horizon_slots < 0) throw std::invalid_argument("predict: negative horizon");
  if (horizon_slots == 0) return belief;
  Pose p{belief.mean, pose.v, pose.a};
  Pose q = step(p, static_cast<double>(horizon_slots) * T);
  return {q.x, belief.sigma};
}

int horizon_slots(double v, double R, double T) {
  if (v <= 0.0) throw std::invalid_argument("horizon_slots: v must be > 0");
  if (R <= 0.0 || T <= 0.0) throw std::invalid_argument("horizon_slots: R and T must be > 0");
  return static_cast<int>(std::ceil(R / (v * T)));
}

namespace {

// Upper tail P(X >= c) computed via erfc directly; 1 - cdf would cancel to
// zero for tails below ~1e-16.
double upper_tail(double c, const PositionBelief& b) {
  double z = (c - b.mean) / b.sigma;
  return 0.5 * std::erfc(z / std::sqrt(2.0));
}

}  // namespace

double prob_in_ca(const PositionBelief& predicted, double ca_start,
                  double x_s) {
  if (!(ca_start < x_s)) throw std::invalid_argument("prob_in_ca: ca_start must be < x_s");
  return upper_tail(ca_start, predicted);
}

double prob_exited(const PositionBelief& belief, double exit_boundary) {
  return upper_tail(exit_boundary, belief);
}

}  // namespace icsim
