#pragma once

#include <cstdint>
#include <optional>
#include <span>

#include "icsim/estimation.hpp"
#include "icsim/geometry.hpp"
#include "icsim/kinematics.hpp"
#include "icsim/message.hpp"

namespace icsim {

enum class Phase : std::uint8_t { BeforeEnter, Enter, WaitForExit, ExitPhase, Done };

const char* to_string(Phase p);

enum class Priority : std::uint8_t { Proceed, Yield };

// Tie-break rule: proceed when there is no shared cell, when the MTIs are
// separated by more than tau_th, when ours is smaller, or on equal MTIs when
// our uid is higher. (inf, inf) pairs compare equal and fall to the uid.
Priority decide_priority(const EnterPayload& mine, std::uint32_t my_uid,
                         const EnterPayload& peer, std::uint32_t peer_uid,
                         bool col_empty, double tau_th);

struct MachineParams {
  double slot_duration = 0.1;    // T, s
  double desired_accel = 0.0;    // a_PR
  double exit_accel = 0.5;       // a_EXIT, must exceed a_NOPR when applied
  double resume_accel = 0.5;     // applied while below cruise speed after braking
  double cruise_speed = 0.0;     // <= 0 disables the cruise restore
  double l_sigma = 3.0;          // x_hat_max = x_hat + l * sigma
  double d_override = 0.0;       // <= 0: D = subsection_width * |COL|
  double yield_engage_tau = 2.0; // switch the yield car to stop braking below this
};

// Per-slot snapshot the simulation hands the machine. cond1/cond2 are the
// probabilistic triggers evaluated against this car's belief.
struct LocalView {
  Pose pose;                // true v and a; x unused by the protocol
  PositionBelief belief;    // estimated position
  bool cond1 = false;
  bool cond2 = false;
  double tau_th = 0.0;      // resolved before any MAINCTRL decision
  HbPayload theta;          // pose snapshot broadcast in HBs
};

struct SlotStep {
  std::optional<Message> outgoing;
  ControlCommand control;
};

// One car's IC state machine. Each slot: begin_slot() applies the pending
// phase transitions, picks the control action and the (at most one) outgoing
// message; absorb() folds in the messages delivered during the slot. The
// reaction to a delivery becomes visible in the next slot.
class ProtocolMachine {
 public:
  ProtocolMachine(std::uint32_t uid, const Route& route,
                  const IntersectionGeometry* geom, const MachineParams& params);

  std::optional<Message> begin_slot(const LocalView& local, int slot);
  void absorb(std::span<const Message> inbox, int slot);

  // Convenience wrapper: outgoing is decided before the inbox is folded in,
  // matching same-slot broadcast semantics.
  SlotStep slot_step(const LocalView& local, std::span<const Message> inbox,
                     int slot);

  ControlCommand control() const { return control_; }
  Phase phase() const { return phase_; }
  std::uint32_t uid() const { return uid_; }
  const Route& route() const { return route_; }

  std::optional<int> first_enter_slot() const { return first_enter_slot_; }
  std::optional<int> mainctrl_slot() const { return mc_slot_; }
  std::optional<Priority> priority() const { return priority_; }
  bool peer_enter_received() const { return peer_enter_.has_value(); }
  bool peer_hb_after_enter() const { return acked_; }
  const std::optional<EnterPayload>& peer_enter() const { return peer_enter_; }
  std::optional<double> collision_entrance() const { return x_col_; }
  bool done() const { return phase_ == Phase::Done; }

 private:
  void initiate_mainctrl(const LocalView& local, int slot);
  void refresh_safectrl(const LocalView& local);
  double yield_accel(const LocalView& local) const;
  double forward_accel(double base, const LocalView& local) const;

  std::uint32_t uid_;
  Route route_;
  const IntersectionGeometry* geom_;
  MachineParams params_;

  Phase phase_ = Phase::BeforeEnter;
  ControlCommand control_{ControlMode::MainPriority, 0.0};

  std::optional<int> first_enter_slot_;
  int last_enter_slot_ = -1;
  EnterPayload my_enter_{};  // frozen at the first send

  std::optional<EnterPayload> peer_enter_;
  std::uint32_t peer_uid_ = 0;
  int peer_enter_slot_ = -1;
  bool acked_ = false;

  bool fail_flag_ = false;     // failure awareness: own silence or a repeated ENTER
  int last_silence_ = -1;
  bool safe_active_ = false;
  double safe_accel_ = 0.0;  // held for the whole failure episode

  std::optional<int> mc_slot_;
  std::optional<Priority> priority_;
  bool peer_yields_ = false;
  std::optional<double> x_col_;  // entrance of the collision area, if any
  std::size_t col_cells_ = 0;
  bool from_yield_ = false;

  bool peer_exit_received_ = false;
  bool cond2_latched_ = false;
  std::optional<int> first_exit_slot_;
  bool exit_acked_ = false;  // yield side: peer HB after our first EXIT
};

}  // namespace icsim
