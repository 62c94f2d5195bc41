#include "icsim/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace icsim {

const char* to_string(Phase p) {
  switch (p) {
    case Phase::BeforeEnter: return "BEFORE_ENTER";
    case Phase::Enter: return "ENTER";
    case Phase::WaitForExit: return "WAIT_FOR_EXIT";
    case Phase::ExitPhase: return "EXIT";
    case Phase::Done: return "DONE";
  }
  return "?";
}

Priority decide_priority(const EnterPayload& mine, std::uint32_t my_uid,
                         const EnterPayload& peer, std::uint32_t peer_uid,
                         bool col_empty, double tau_th) {
  if (col_empty) return Priority::Proceed;
  const double t1 = mine.tau_mti;
  const double t2 = peer.tau_mti;
  const bool both_inf = std::isinf(t1) && std::isinf(t2);
  if (!both_inf && std::fabs(t1 - t2) > tau_th) return Priority::Proceed;
  if (t1 < t2) return Priority::Proceed;
  if (t1 == t2 || both_inf) return my_uid > peer_uid ? Priority::Proceed : Priority::Yield;
  return Priority::Yield;
}

ProtocolMachine::ProtocolMachine(std::uint32_t uid, const Route& route,
                                 const IntersectionGeometry* geom,
                                 const MachineParams& params)
    : uid_(uid), route_(route), geom_(geom), params_(params) {
  if (!route_valid(route)) throw std::invalid_argument("ProtocolMachine: invalid route");
  if (geom == nullptr) throw std::invalid_argument("ProtocolMachine: geometry required");
  control_ = {ControlMode::MainPriority, params.desired_accel};
}

double ProtocolMachine::forward_accel(double base, const LocalView& local) const {
  // a car that was braked below its cruise speed needs positive acceleration
  // to make progress again
  if (params_.cruise_speed > 0.0 && local.pose.v < params_.cruise_speed - 1e-9)
    return std::max(base, params_.resume_accel);
  if (local.pose.v < 1e-9 && base <= 0.0) return params_.resume_accel;
  return base;
}

void ProtocolMachine::initiate_mainctrl(const LocalView& local, int slot) {
  auto col = collision_area(route_, Route{peer_enter_->clane, peer_enter_->nlane});
  col_cells_ = col.size();
  if (!col.empty()) x_col_ = col_entrance(col, route_, *geom_);
  priority_ = decide_priority(my_enter_, uid_, *peer_enter_, peer_uid_,
                              col.empty(), local.tau_th);
  peer_yields_ = decide_priority(*peer_enter_, peer_uid_, my_enter_, uid_,
                                 col.empty(), local.tau_th) == Priority::Yield;
  mc_slot_ = slot;
  safe_active_ = false;
  if (*priority_ == Priority::Proceed) {
    phase_ = Phase::ExitPhase;
  } else {
    phase_ = Phase::WaitForExit;
    from_yield_ = true;
  }
}

void ProtocolMachine::refresh_safectrl(const LocalView& local) {
  double x_hat_max = local.belief.mean + params_.l_sigma * local.belief.sigma;
  // Before the peer's route is known the nearest possible collision cell is
  // the crossing-box entry itself.
  double target = geom_->entry_boundary();
  bool col_known_empty = false;
  if (peer_enter_) {
    auto col = collision_area(route_, Route{peer_enter_->clane, peer_enter_->nlane});
    if (col.empty())
      col_known_empty = true;
    else
      target = col_entrance(col, route_, *geom_);
  }
  if (col_known_empty) {
    safe_accel_ = 0.0;
  } else {
    double tau = time_to_col(local.pose, target, x_hat_max);
    if (std::isinf(tau)) {
      // current deceleration already stops short; zeroing it would let the
      // car coast into the box
      safe_accel_ = std::min(local.pose.a, 0.0);
    } else if (tau > 0.0) {
      safe_accel_ = accel_safe(local.pose, tau);
    } else {
      safe_accel_ = -local.pose.v / params_.slot_duration;
    }
  }
  if (safe_accel_ > 0.0) safe_accel_ = 0.0;
}

double ProtocolMachine::yield_accel(const LocalView& local) const {
  if (!x_col_) return forward_accel(params_.desired_accel, local);
  double x_hat_max = local.belief.mean + params_.l_sigma * local.belief.sigma;
  // time to the collision area under the nominal plan; measuring it under a
  // transient braking value would lock the braking in
  Pose plan{local.pose.x, local.pose.v, params_.desired_accel};
  double tau = time_to_col(plan, *x_col_, x_hat_max);
  if (tau <= 0.0) return local.pose.v > 0.0 ? -local.pose.v / params_.slot_duration : 0.0;
  if (tau <= params_.yield_engage_tau) return accel_safe(local.pose, tau);
  if (std::isinf(tau)) return std::min(params_.desired_accel, 0.0);  // plan stops short
  double D = params_.d_override > 0.0
                 ? params_.d_override
                 : geom_->subsection_width * static_cast<double>(col_cells_);
  return accel_nopr(plan, tau, D);
}

std::optional<Message> ProtocolMachine::begin_slot(const LocalView& local, int slot) {
  // pending transitions from last slot's deliveries
  if (phase_ == Phase::Enter && peer_enter_ && acked_ && !mc_slot_)
    initiate_mainctrl(local, slot);
  if (phase_ == Phase::BeforeEnter && local.cond1) phase_ = Phase::Enter;
  if (phase_ == Phase::WaitForExit && peer_exit_received_) phase_ = Phase::ExitPhase;
  if (phase_ == Phase::ExitPhase && first_exit_slot_) {
    // Evidence that our EXIT reached the peer. A yielding peer heartbeats
    // while it waits, so only its actual EXIT counts; a released (yield) car
    // knows the peer is past COND2, so a later HB from it is proof enough.
    bool delivered = from_yield_
                         ? exit_acked_
                         : (peer_yields_ ? peer_exit_received_
                                         : (peer_exit_received_ || exit_acked_));
    if (delivered) phase_ = Phase::Done;
  }
  if (phase_ == Phase::ExitPhase && local.cond2) cond2_latched_ = true;

  // outgoing message, at most one per slot
  std::optional<Message> out;
  bool resend_now = false;
  switch (phase_) {
    case Phase::BeforeEnter:
      out = make_hb(uid_, local.theta);
      break;
    case Phase::Enter: {
      if (!first_enter_slot_) {
        my_enter_ = EnterPayload{route_.clane, route_.nlane,
                                 mti(Pose{local.belief.mean, local.pose.v, local.pose.a},
                                     geom_->x_s)};
        first_enter_slot_ = slot;
        last_enter_slot_ = slot;
        out = make_enter(uid_, my_enter_);
      } else if (!peer_enter_) {
        last_enter_slot_ = slot;
        out = make_enter(uid_, my_enter_);
      } else if (!acked_ && fail_flag_ &&
                 ((slot - *first_enter_slot_) % 2 == 0)) {
        // retry on our own two-slot cadence while failure is suspected
        fail_flag_ = false;
        resend_now = true;
        last_enter_slot_ = slot;
        out = make_enter(uid_, my_enter_);
      } else {
        out = make_hb(uid_, local.theta);
      }
      break;
    }
    case Phase::WaitForExit:
      out = make_hb(uid_, local.theta);
      break;
    case Phase::ExitPhase: {
      if (cond2_latched_) {
        if (!first_exit_slot_) first_exit_slot_ = slot;
        out = make_exit(uid_, ExitPayload{route_.nlane});
      } else {
        out = make_hb(uid_, local.theta);
      }
      break;
    }
    case Phase::Done:
      out = make_hb(uid_, local.theta);
      break;
  }

  // control action
  switch (phase_) {
    case Phase::BeforeEnter:
      control_ = {ControlMode::MainPriority, params_.desired_accel};
      break;
    case Phase::Enter: {
      bool waiting_blind = !peer_enter_ && first_enter_slot_ && slot > *first_enter_slot_;
      if ((waiting_blind || resend_now || fail_flag_) && !safe_active_) {
        // one braking value per failure episode, held until MAINCTRL
        // overwrites it
        refresh_safectrl(local);
        safe_active_ = true;
      }
      if (safe_active_)
        control_ = {ControlMode::Safe, safe_accel_};
      else
        control_ = {ControlMode::MainPriority, params_.desired_accel};
      break;
    }
    case Phase::WaitForExit:
      control_ = {ControlMode::MainYield, yield_accel(local)};
      break;
    case Phase::ExitPhase:
    case Phase::Done:
      if (from_yield_)
        control_ = {ControlMode::ExitResume, forward_accel(params_.exit_accel, local)};
      else
        control_ = {ControlMode::MainPriority, forward_accel(params_.desired_accel, local)};
      break;
  }
  return out;
}

void ProtocolMachine::absorb(std::span<const Message> inbox, int slot) {
  if (inbox.empty()) {
    // the peer transmits in every slot, so an empty slot is a receive
    // omission on our side
    last_silence_ = slot;
    if (phase_ == Phase::BeforeEnter || phase_ == Phase::Enter) fail_flag_ = true;
    return;
  }
  for (const Message& msg : inbox) {
    switch (msg.type()) {
      case MsgType::Hb: {
        if (phase_ == Phase::Enter && peer_enter_ && slot > peer_enter_slot_)
          acked_ = true;
        if (phase_ == Phase::ExitPhase && first_exit_slot_ &&
            slot > *first_exit_slot_)
          exit_acked_ = true;
        break;
      }
      case MsgType::Enter: {
        const auto& p = std::get<EnterPayload>(msg.payload);
        if (phase_ == Phase::BeforeEnter) {
          if (!peer_enter_) {
            peer_enter_ = p;
            peer_uid_ = msg.uid;
            peer_enter_slot_ = slot;
          }
        } else if (phase_ == Phase::Enter) {
          if (!peer_enter_) {
            peer_enter_ = p;
            peer_uid_ = msg.uid;
            peer_enter_slot_ = slot;
            // a silence immediately before the exchange may have swallowed
            // the peer's response; re-announce once
            fail_flag_ = (last_silence_ == slot - 1);
          } else if (slot > last_enter_slot_) {
            // repeated ENTER where an HB was expected: the peer is missing
            // our ENTER
            fail_flag_ = true;
          }
        }
        // stale in any later phase
        break;
      }
      case MsgType::Exit: {
        peer_exit_received_ = true;
        // an EXIT implies the peer completed MAINCTRL, hence it had our ENTER
        if (phase_ == Phase::Enter && peer_enter_) acked_ = true;
        break;
      }
    }
  }
}

SlotStep ProtocolMachine::slot_step(const LocalView& local,
                                    std::span<const Message> inbox, int slot) {
  SlotStep step;
  step.outgoing = begin_slot(local, slot);
  step.control = control_;
  absorb(inbox, slot);
  return step;
}

}  // namespace icsim
