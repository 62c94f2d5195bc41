#include "icsim/experiments.hpp"

#include <atomic>
#include <ostream>
#include <thread>

#include "icsim/analysis.hpp"

namespace icsim {

ScenarioConfig canonical_scenario() {
  ScenarioConfig cfg;
  cfg.cars[0] = CarConfig{1, Route{LaneIn::H1R, LaneOut::H3L}, -560.0, 12.0,
                          0.0, 1.0, 0.0, 0.5, 0.5};
  cfg.cars[1] = CarConfig{2, Route{LaneIn::H2R, LaneOut::H4L}, -560.0, 12.0,
                          0.0, 1.0, 0.0, 0.5, 0.5};
  cfg.n_slots = 5000;
  cfg.seed = 1;
  return cfg;
}

ScenarioConfig burst_scenario(int f1, int f2) {
  ScenarioConfig cfg = canonical_scenario();
  if (f1 > 0) {
    cfg.loss[0].kind = LossKind::Burst;
    cfg.loss[0].burst_length = f1;
  }
  if (f2 > 0) {
    cfg.loss[1].kind = LossKind::Burst;
    cfg.loss[1].burst_length = f2;
  }
  return cfg;
}

std::vector<GridRow> failure_grid(int max_f) {
  const int side = max_f + 1;
  std::vector<GridRow> rows(static_cast<std::size_t>(side) * side);
  // independent engines per cell; rows land at fixed indices, so the output
  // order does not depend on thread completion order
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int cell = next.fetch_add(1); cell < side * side;
         cell = next.fetch_add(1)) {
      int f1 = cell / side;
      int f2 = cell % side;
      auto res = run(burst_scenario(f1, f2));
      GridRow& row = rows[static_cast<std::size_t>(cell)];
      row.f1 = f1;
      row.f2 = f2;
      row.t_en_sim = res.verdict.t_en_observed;
      row.t_en_formula = t_en_closed_form(f1, f2);
      row.match = row.t_en_sim == row.t_en_formula;
    }
  };
  unsigned n = std::min(std::thread::hardware_concurrency(), 8u);
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < n; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return rows;
}

void write_grid_csv(std::ostream& out, const std::vector<GridRow>& rows) {
  out << "f1,f2,t_en_sim,t_en_formula,match\n";
  for (const GridRow& r : rows)
    out << r.f1 << ',' << r.f2 << ',' << r.t_en_sim << ',' << r.t_en_formula
        << ',' << (r.match ? "true" : "false") << '\n';
}

ScenarioConfig randomized_scenario(std::uint64_t index) {
  auto bits = [&](std::uint64_t stream) { return mix_seed(index, stream); };
  auto uni = [&](std::uint64_t stream, double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(bits(stream) >> 11) * 0x1.0p-53);
  };

  ScenarioConfig cfg;
  int arm1 = static_cast<int>(bits(1) % 4);
  int arm2 = (arm1 + 1 + static_cast<int>(bits(2) % 3)) % 4;  // distinct arms
  int turn1 = 1 + static_cast<int>(bits(3) % 3);
  int turn2 = 1 + static_cast<int>(bits(4) % 3);
  cfg.cars[0].uid = 1;
  cfg.cars[1].uid = 2;
  cfg.cars[0].route = Route{static_cast<LaneIn>(arm1),
                            static_cast<LaneOut>((arm1 + turn1) % 4)};
  cfg.cars[1].route = Route{static_cast<LaneIn>(arm2),
                            static_cast<LaneOut>((arm2 + turn2) % 4)};
  for (int i = 0; i < 2; ++i) {
    CarConfig& c = cfg.cars[i];
    c.v0 = uni(10 + i, 9.0, 15.0);
    // far enough out that a fair number of warm-up HBs precede COND1 even at
    // the lowest delivery ratio
    c.x0 = -uni(20 + i, 590.0, 640.0);
    c.a0 = 0.0;
    c.desired_accel = 0.0;
    c.sigma_x = (bits(30 + i) % 2) == 0 ? 1.0 : 0.1;
    c.exit_accel = 0.5;
    c.resume_accel = 0.5;
  }
  for (int i = 0; i < 2; ++i) {
    LossConfig& l = cfg.loss[i];
    if (index % 2 == 0) {
      l.kind = LossKind::Geometric;
      l.p_pdr = uni(40 + i, 0.3, 1.0);
    } else {
      l.kind = LossKind::Correlated;
      l.p_pdr = uni(50 + i, 0.3, 1.0);
      l.xi = uni(60 + i, 0.0, 0.95);
    }
  }
  cfg.n_slots = 5000;
  cfg.seed = mix_seed(index, 999);
  return cfg;
}

}  // namespace icsim
