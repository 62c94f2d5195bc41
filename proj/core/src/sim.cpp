#include "icsim/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "icsim/estimation.hpp"

namespace icsim {

namespace {

// Pre-agreement SAFECTRL braking shifts true arrival times away from the
// MTIs frozen in the ENTER messages; the default tau_th absorbs that drift.
constexpr double kTauDriftMargin = 10.0;  // s

double distance2d(const Vec2& a, const Vec2& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

// First absolute time at which x(t) reaches boundary b, scanning the trace.
double crossing_time(const SlotTrace& trace, int car, double b, double T) {
  for (const SlotRow& row : trace.rows) {
    const CarRecord& r = row.car[car];
    if (r.x_true >= b) return (row.slot - 1) * T;
    double within = mti(Pose{r.x_true, r.v, r.a}, b);
    if (within <= T) return (row.slot - 1) * T + within;
  }
  return kNever;
}

}  // namespace

std::vector<std::pair<Subsection, Interval>> occupancy_intervals(
    const SlotTrace& trace, int car_index, const IntersectionGeometry& geom,
    const Route& route, double T) {
  std::vector<std::pair<Subsection, Interval>> out;
  auto cells = subsections_of(route);
  const double entry = geom.entry_boundary();
  const double w = geom.subsection_width;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    double c0 = entry + static_cast<double>(i) * w;
    double c1 = c0 + w;
    // front crosses the near edge; rear clears the far edge
    double t_in = crossing_time(trace, car_index, c0, T);
    double t_out = crossing_time(trace, car_index, c1 + geom.car_length, T);
    if (std::isinf(t_in)) continue;  // never reaches this cell
    out.emplace_back(cells[i], Interval{t_in, t_out});
  }
  return out;
}

RunResult run(const ScenarioConfig& cfg) {
  cfg.validate();
  const double T = cfg.protocol.slot_duration;
  const IntersectionGeometry& geom = cfg.geometry;

  Pose pose[2];
  PositionBelief belief[2];
  ProtocolMachine* machines[2];
  std::optional<ProtocolMachine> m0, m1;
  LossProcess loss[2] = {cfg.make_loss_process(0), cfg.make_loss_process(1)};

  for (int i = 0; i < 2; ++i) {
    const CarConfig& c = cfg.cars[i];
    pose[i] = {c.x0, c.v0, c.a0};
    belief[i] = {c.x0, c.sigma_x};
    MachineParams mp;
    mp.slot_duration = T;
    mp.desired_accel = c.desired_accel;
    mp.exit_accel = c.exit_accel;
    mp.resume_accel = c.resume_accel;
    mp.cruise_speed = c.v0;
    mp.l_sigma = cfg.protocol.l_sigma;
    mp.d_override = cfg.protocol.d_col.value_or(0.0);
    (i == 0 ? m0 : m1).emplace(c.uid, c.route, &geom, mp);
  }
  machines[0] = &*m0;
  machines[1] = &*m1;

  double v_at_enter[2] = {0.0, 0.0};
  bool enter_sent[2] = {false, false};
  bool hb_seen[2] = {false, false};
  double tau_th = cfg.protocol.tau_th.value_or(0.0);
  bool tau_th_known = cfg.protocol.tau_th.has_value();

  SlotTrace trace;
  trace.rows.reserve(static_cast<std::size_t>(cfg.n_slots));
  double min_sep = kNever;

  for (int slot = 1; slot <= cfg.n_slots; ++slot) {
    SlotRow row;
    row.slot = slot;

    Vec2 p2d[2];
    for (int i = 0; i < 2; ++i)
      p2d[i] = position2d(cfg.cars[i].route, geom,
                          pose[i].x - geom.car_length / 2.0);
    double dist = distance2d(p2d[0], p2d[1]);
    min_sep = std::min(min_sep, dist);

    // decision + transmission phase
    std::optional<Message> outgoing[2];
    ControlCommand ctrl[2];
    for (int i = 0; i < 2; ++i) {
      LocalView local;
      local.pose = pose[i];
      local.belief = belief[i];
      local.theta = HbPayload{p2d[i].x, p2d[i].y, pose[i].v, pose[i].a};
      local.tau_th = tau_th;
      if (machines[i]->phase() == Phase::BeforeEnter && pose[i].v > 0.0) {
        int h = horizon_slots(pose[i].v, cfg.protocol.comm_range, T);
        PositionBelief pred = predict(belief[i], pose[i], h, T);
        double ca = capture_area_start(geom, pose[i].v, cfg.protocol.a_min_brake);
        local.cond1 = prob_in_ca(pred, ca, geom.x_s) >= cfg.protocol.epsilon;
      }
      if (machines[i]->phase() == Phase::ExitPhase) {
        double xb = exit_boundary(cfg.cars[i].route, geom);
        local.cond2 = prob_exited(belief[i], xb) >= 1.0 - cfg.protocol.epsilon;
      }
      outgoing[i] = machines[i]->begin_slot(local, slot);
      ctrl[i] = machines[i]->control();

      if (!enter_sent[i] && machines[i]->first_enter_slot()) {
        enter_sent[i] = true;
        v_at_enter[i] = pose[i].v;
        // at least one HB must have been exchanged before negotiation starts
        if (!hb_seen[i])
          throw std::runtime_error(
              "scenario violates the HB-before-ENTER precondition for car " +
              std::to_string(cfg.cars[i].uid) +
              " (no heart-beat received before its first ENTER)");
      }
    }
    if (!tau_th_known && enter_sent[0] && enter_sent[1]) {
      // Both-proceed is only allowed when the MTIs are separated by more
      // than tau_th, so tau_th must cover the worst-case occupancy window of
      // a shared cell (cell offsets plus car length plus the safety gap at
      // the slower speed) and the drift the frozen MTIs accumulate while
      // SAFECTRL brakes during a staggered negotiation.
      double v_min = std::max(std::min(v_at_enter[0], v_at_enter[1]), 1e-6);
      tau_th = (4.0 * geom.subsection_width + geom.car_length +
                cfg.protocol.safety_gap) / v_min + kTauDriftMargin;
      tau_th_known = true;
    }

    // per-receiver delivery with same-slot semantics
    std::vector<Message> inbox[2];
    for (int rx = 0; rx < 2; ++rx) {
      int tx = 1 - rx;
      if (!outgoing[tx]) continue;
      bool is_enter = outgoing[tx]->type() == MsgType::Enter;
      if (loss[rx].drops(slot, dist, is_enter)) {
        row.car[rx].lost += 1;
      } else {
        if (outgoing[tx]->type() == MsgType::Hb) hb_seen[rx] = true;
        inbox[rx].push_back(*outgoing[tx]);
        row.car[rx].received += 1;
      }
    }
    for (int i = 0; i < 2; ++i) machines[i]->absorb(inbox[i], slot);

    // record, then advance the poses under the slot's control
    for (int i = 0; i < 2; ++i) {
      CarRecord& r = row.car[i];
      r.x_true = pose[i].x;
      r.x_hat = belief[i].mean;
      r.v = pose[i].v;
      r.a = ctrl[i].accel;
      r.phase = machines[i]->phase();
      r.mode = ctrl[i].mode;
      if (outgoing[i]) r.sent = outgoing[i]->type();
      pose[i] = step(Pose{pose[i].x, pose[i].v, ctrl[i].accel}, T);
      belief[i] = predict(PositionBelief{belief[i].mean, belief[i].sigma},
                          Pose{belief[i].mean, r.v, ctrl[i].accel}, 1, T);
    }
    trace.rows.push_back(row);

    bool crossed0 = pose[0].x >= exit_boundary(cfg.cars[0].route, geom);
    bool crossed1 = pose[1].x >= exit_boundary(cfg.cars[1].route, geom);
    if (machines[0]->done() && machines[1]->done() && crossed0 && crossed1) break;
  }

  Verdict v;
  v.min_separation = min_sep;

  // safety: no shared collision cell may be occupied by both cars at once
  auto col = collision_area(cfg.cars[0].route, cfg.cars[1].route);
  if (!col.empty()) {
    auto occ0 = occupancy_intervals(trace, 0, geom, cfg.cars[0].route, T);
    auto occ1 = occupancy_intervals(trace, 1, geom, cfg.cars[1].route, T);
    for (Subsection s : col) {
      const Interval* i0 = nullptr;
      const Interval* i1 = nullptr;
      for (const auto& [cell, iv] : occ0)
        if (cell == s) i0 = &iv;
      for (const auto& [cell, iv] : occ1)
        if (cell == s) i1 = &iv;
      if (i0 && i1 && i0->t_in < i1->t_out && i1->t_in < i0->t_out) v.safe = false;
    }
  }

  double xb0 = exit_boundary(cfg.cars[0].route, geom);
  double xb1 = exit_boundary(cfg.cars[1].route, geom);
  v.both_crossed = !trace.rows.empty() &&
                   pose[0].x >= xb0 && pose[1].x >= xb1;

  auto fe0 = machines[0]->first_enter_slot();
  auto fe1 = machines[1]->first_enter_slot();
  auto mc0 = machines[0]->mainctrl_slot();
  auto mc1 = machines[1]->mainctrl_slot();
  if (fe0 && fe1 && mc0 && mc1)
    v.t_en_observed = std::max(*mc0, *mc1) - std::max(*fe0, *fe1) + 1;
  if (fe0 && fe1 && v.both_crossed) {
    double t_done = std::max(crossing_time(trace, 0, xb0, T),
                             crossing_time(trace, 1, xb1, T));
    v.total_crossing_slots =
        static_cast<int>(std::ceil(t_done / T)) - std::min(*fe0, *fe1) + 1;
  }
  return {std::move(trace), v};
}

namespace {

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", x);
  return buf;
}

}  // namespace

void write_trace_csv(std::ostream& out, const SlotTrace& trace,
                     const ScenarioConfig& cfg) {
  out << "# icsim trace\n";
  out << "# config: " << serialize_scenario_compact(cfg) << "\n";
  out << "slot,car_uid,x_true,x_hat,v,a,phase,mode,msg_sent,msgs_received,msgs_lost\n";
  for (const SlotRow& row : trace.rows) {
    for (int i = 0; i < 2; ++i) {
      const CarRecord& r = row.car[i];
      out << row.slot << ',' << cfg.cars[i].uid << ',' << fmt(r.x_true) << ','
          << fmt(r.x_hat) << ',' << fmt(r.v) << ',' << fmt(r.a) << ','
          << to_string(r.phase) << ',' << to_string(r.mode) << ','
          << (r.sent ? to_string(*r.sent) : "-") << ',' << r.received << ','
          << r.lost << '\n';
    }
  }
}

std::string verdict_summary(const Verdict& v, const ScenarioConfig& cfg) {
  std::ostringstream os;
  os << "safe=" << (v.safe ? "true" : "false")
     << " both_crossed=" << (v.both_crossed ? "true" : "false")
     << " t_en_observed=" << v.t_en_observed
     << " total_crossing_slots=" << v.total_crossing_slots
     << " min_separation_m=" << fmt(v.min_separation)
     << " seed=" << cfg.seed << "\n";
  return os.str();
}

}  // namespace icsim
