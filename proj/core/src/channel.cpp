#include "icsim/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace icsim {

double PdrModel::pdr(double d) const {
  if (d < 0.0) throw std::invalid_argument("pdr: distance must be >= 0");
  return std::exp(-lambda * d);
}

const char* to_string(LossKind k) {
  switch (k) {
    case LossKind::None: return "none";
    case LossKind::Burst: return "burst";
    case LossKind::Geometric: return "geometric";
    case LossKind::Correlated: return "correlated";
  }
  return "?";
}

double burst_length_pmf(LossKind kind, double p_pdr, double xi, int m) {
  if (m < 0) throw std::invalid_argument("burst_length_pmf: m must be >= 0");
  if (!(p_pdr > 0.0 && p_pdr <= 1.0))
    throw std::invalid_argument("burst_length_pmf: p_pdr must be in (0,1]");
  switch (kind) {
    case LossKind::Geometric:
      return std::pow(1.0 - p_pdr, m) * p_pdr;
    case LossKind::Correlated:
      if (!(xi >= 0.0 && xi < 1.0))
        throw std::invalid_argument("burst_length_pmf: xi must be in [0,1)");
      if (m == 0) return p_pdr;
      return (1.0 - p_pdr) * p_pdr * std::pow(xi, m - 1);
    default:
      throw std::invalid_argument("burst_length_pmf: kind has no pmf");
  }
}

LossProcess LossProcess::none() { return LossProcess{}; }

LossProcess LossProcess::burst(int start_slot, int length) {
  if (length < 0) throw std::invalid_argument("burst: length must be >= 0");
  LossProcess p;
  p.kind_ = LossKind::Burst;
  p.burst_len_ = length;
  p.burst_start_ = start_slot;
  return p;
}

LossProcess LossProcess::burst_auto(int length, int offset) {
  if (length < 0) throw std::invalid_argument("burst: length must be >= 0");
  LossProcess p;
  p.kind_ = LossKind::Burst;
  p.burst_len_ = length;
  p.burst_offset_ = offset;
  return p;
}

LossProcess LossProcess::geometric(double p_pdr, std::uint64_t seed) {
  if (!(p_pdr > 0.0 && p_pdr <= 1.0))
    throw std::invalid_argument("geometric: p_pdr must be in (0,1]");
  LossProcess p;
  p.kind_ = LossKind::Geometric;
  p.p_pdr_ = p_pdr;
  p.rng_.seed(seed);
  return p;
}

LossProcess LossProcess::geometric_pdr(const PdrModel& model, std::uint64_t seed) {
  LossProcess p;
  p.kind_ = LossKind::Geometric;
  p.use_pdr_model_ = true;
  p.model_ = model;
  p.rng_.seed(seed);
  return p;
}

LossProcess LossProcess::correlated(double p_pdr, double xi, std::uint64_t seed) {
  if (!(p_pdr > 0.0 && p_pdr <= 1.0))
    throw std::invalid_argument("correlated: p_pdr must be in (0,1]");
  if (!(xi >= 0.0 && xi < 1.0))
    throw std::invalid_argument("correlated: xi must be in [0,1); xi = 1 means an infinite burst");
  LossProcess p;
  p.kind_ = LossKind::Correlated;
  p.p_pdr_ = p_pdr;
  p.xi_ = xi;
  p.rng_.seed(seed);
  return p;
}

LossProcess LossProcess::correlated_pdr(const PdrModel& model, double xi,
                                        std::uint64_t seed) {
  LossProcess p = correlated(0.5, xi, seed);
  p.use_pdr_model_ = true;
  p.model_ = model;
  return p;
}

double LossProcess::uniform() {
  // 53-bit mantissa draw; portable across standard library implementations
  return static_cast<double>(rng_() >> 11) * 0x1.0p-53;
}

bool LossProcess::drops(int slot, double distance, bool incoming_is_enter) {
  switch (kind_) {
    case LossKind::None:
      return false;
    case LossKind::Burst: {
      if (!burst_start_ && incoming_is_enter) burst_start_ = slot + burst_offset_;
      if (!burst_start_) return false;
      return slot >= *burst_start_ && slot < *burst_start_ + burst_len_;
    }
    case LossKind::Geometric: {
      double p = use_pdr_model_ ? model_.pdr(distance) : p_pdr_;
      return uniform() >= p;
    }
    case LossKind::Correlated: {
      double p = use_pdr_model_ ? model_.pdr(distance) : p_pdr_;
      bool lost = prev_lost_ ? (uniform() < xi_) : (uniform() >= p);
      prev_lost_ = lost;
      return lost;
    }
  }
  return false;
}

}  // namespace icsim
