#include "icsim/analysis.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace icsim {

int t_en_closed_form(int f1, int f2) {
  if (f1 < 0 || f2 < 0) throw std::invalid_argument("t_en_closed_form: f must be >= 0");
  int f = std::max(f1, f2);
  return 2 * ((f + 1) / 2) + 3;
}

double expected_t_en(double p_pdr, double xi, int M) {
  if (!(p_pdr > 0.0 && p_pdr <= 1.0))
    throw std::invalid_argument("expected_t_en: p_pdr must be in (0,1]");
  if (xi >= 1.0)
    throw std::invalid_argument("expected_t_en: xi must be < 1; the delay diverges at xi = 1");
  if (xi < 0.0) throw std::invalid_argument("expected_t_en: xi must be >= 0");
  if (M < 1) throw std::invalid_argument("expected_t_en: M must be >= 1");
  LossKind kind = xi == 0.0 ? LossKind::Geometric : LossKind::Correlated;
  double num = 0.0, den = 0.0;
  for (int m = 0; m <= M; ++m) {
    double p = burst_length_pmf(kind, p_pdr, xi, m);
    num += p * static_cast<double>(t_en_closed_form(m, 0));
    den += p;
  }
  return num / den;
}

std::vector<double> DelaySweepSpec::default_distances() {
  std::vector<double> d;
  for (int i = 0; i <= 50; ++i) d.push_back(10.0 * i);
  return d;
}

std::vector<DelayRow> delay_sweep(const DelaySweepSpec& spec) {
  if (spec.truncation < 1) throw std::invalid_argument("delay_sweep: truncation must be >= 1");
  std::vector<DelayRow> rows;
  rows.reserve(spec.distances.size() * spec.xis.size());
  for (double d : spec.distances) {
    if (d < 0) throw std::invalid_argument("delay_sweep: distances must be >= 0");
    double p = spec.model.pdr(d);
    for (double xi : spec.xis)
      rows.push_back({d, xi, p, expected_t_en(p, xi, spec.truncation)});
  }
  return rows;
}

void write_delay_csv(std::ostream& out, const std::vector<DelayRow>& rows,
                     const DelaySweepSpec& spec, double slot_duration) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.5f", spec.model.lambda);
  out << "# expected ENTER delay vs distance\n";
  out << "# pdr model: e^(-lambda*d), lambda=" << buf
      << " (presets: open_field=0.00063, harsh=0.0013), M=" << spec.truncation
      << "\n";
  out << "distance_m,xi,p_pdr,expected_t_en_slots,expected_t_en_ms\n";
  for (const DelayRow& r : rows) {
    std::snprintf(buf, sizeof(buf), "%.1f,%.3f,%.9f,%.9f,%.6f", r.distance,
                  r.xi, r.p_pdr, r.expected_slots,
                  r.expected_slots * slot_duration * 1000.0);
    out << buf << "\n";
  }
}

}  // namespace icsim
