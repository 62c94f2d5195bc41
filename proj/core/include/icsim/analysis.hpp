#pragma once

#include <iosfwd>
#include <vector>

#include "icsim/channel.hpp"

namespace icsim {

// ENTER-part delay in rounds for single bursts of f1 and f2 consecutive
// receive failures: 2 ceil(max(f1,f2)/2) + 3.
int t_en_closed_form(int f1, int f2);

// Expected ENTER delay, averaging t_EN over the burst length distribution
// truncated at M and renormalized (one car fails, the other does not).
// xi = 0 selects the independent (geometric) model. Rejects xi >= 1.
double expected_t_en(double p_pdr, double xi, int M = 50);

struct DelaySweepSpec {
  PdrModel model = PdrModel::open_field();
  std::vector<double> distances;   // m
  std::vector<double> xis;         // 0 = independent
  int truncation = 50;             // M

  static std::vector<double> default_distances();  // 0..500 step 10
};

struct DelayRow {
  double distance = 0.0;
  double xi = 0.0;
  double p_pdr = 1.0;
  double expected_slots = 3.0;
};

std::vector<DelayRow> delay_sweep(const DelaySweepSpec& spec);

// Columns: distance_m, xi, p_pdr, expected_t_en_slots, expected_t_en_ms.
void write_delay_csv(std::ostream& out, const std::vector<DelayRow>& rows,
                     const DelaySweepSpec& spec, double slot_duration);

}  // namespace icsim
