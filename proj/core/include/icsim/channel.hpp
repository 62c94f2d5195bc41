#pragma once

#include <cstdint>
#include <optional>
#include <random>

namespace icsim {

// Fitted exponential PDR-vs-distance model: P_PDR(d) = e^{-lambda d}.
struct PdrModel {
  double lambda = 0.0;  // 1/m, > 0

  static PdrModel open_field() { return {0.00063}; }
  static PdrModel harsh() { return {0.0013}; }

  double pdr(double d) const;
};

enum class LossKind : std::uint8_t { None, Burst, Geometric, Correlated };

const char* to_string(LossKind k);

// Likelihood of m consecutive receive failures.
// Geometric: (1-p)^m p. Correlated: p for m = 0, (1-p) p xi^{m-1} for
// m >= 1 (unnormalized; expected-delay sums renormalize over m <= M).
double burst_length_pmf(LossKind kind, double p_pdr, double xi, int m);

// Per-receiver receive-omission process. Deterministic given its seed.
class LossProcess {
 public:
  static LossProcess none();
  // Drops exactly slots [start, start + length).
  static LossProcess burst(int start_slot, int length);
  // Burst anchored at the receiver's first slot with an incoming ENTER,
  // shifted by `offset` slots.
  static LossProcess burst_auto(int length, int offset = 0);
  // i.i.d. drops with probability 1 - p_pdr.
  static LossProcess geometric(double p_pdr, std::uint64_t seed);
  // Distance-dependent i.i.d. drops with probability 1 - e^{-lambda d}.
  static LossProcess geometric_pdr(const PdrModel& model, std::uint64_t seed);
  // Drop with prob 1 - p if the previous slot delivered, else continue the
  // loss run with prob xi.
  static LossProcess correlated(double p_pdr, double xi, std::uint64_t seed);
  static LossProcess correlated_pdr(const PdrModel& model, double xi,
                                    std::uint64_t seed);

  // One call per slot with an incoming transmission. `distance` is the
  // current true inter-car distance; `incoming_is_enter` resolves the
  // auto-anchored burst. Returns true when the packet is lost.
  bool drops(int slot, double distance, bool incoming_is_enter);

  LossKind kind() const { return kind_; }
  double p_pdr() const { return p_pdr_; }
  double xi() const { return xi_; }
  int burst_length() const { return burst_len_; }
  std::optional<int> burst_start() const { return burst_start_; }

 private:
  LossProcess() = default;

  double uniform();

  LossKind kind_ = LossKind::None;
  double p_pdr_ = 1.0;
  double xi_ = 0.0;
  bool use_pdr_model_ = false;
  PdrModel model_{};
  int burst_len_ = 0;
  std::optional<int> burst_start_;
  int burst_offset_ = 0;
  bool prev_lost_ = false;
  std::mt19937_64 rng_{0};
};

}  // namespace icsim
