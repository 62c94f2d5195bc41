#include "icsim/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace icsim {

namespace {

int arm(LaneIn l) { return static_cast<int>(l); }
int arm(LaneOut l) { return static_cast<int>(l); }

// First cell entered per approach arm, right-hand traffic:
// south -> SE, east -> NE, north -> NW, west -> SW.
constexpr Subsection kEntryCell[4] = {Subsection::S2, Subsection::S3,
                                      Subsection::S4, Subsection::S1};

// Cells in sweep order form the counterclockwise cycle S2,S3,S4,S1; a path
// of k cells takes k consecutive entries starting at the approach's entry
// cell.
constexpr Subsection kCycle[4] = {Subsection::S2, Subsection::S3,
                                  Subsection::S4, Subsection::S1};

int cycle_index(Subsection s) {
  for (int i = 0; i < 4; ++i)
    if (kCycle[i] == s) return i;
  return 0;
}

// Unit direction of travel on the approach leg of arm a.
Vec2 approach_dir(int a) {
  switch (a) {
    case 0: return {0.0, 1.0};   // from south, heading north
    case 1: return {-1.0, 0.0};  // from east, heading west
    case 2: return {0.0, -1.0};  // from north, heading south
    default: return {1.0, 0.0};  // from west, heading east
  }
}

}  // namespace

bool route_valid(const Route& r) { return arm(r.clane) != arm(r.nlane); }

Turn turn_of(const Route& r) {
  if (!route_valid(r)) throw std::invalid_argument("route: U-turn not allowed");
  int d = (arm(r.nlane) - arm(r.clane) + 4) % 4;
  switch (d) {
    case 1: return Turn::Right;
    case 2: return Turn::Straight;
    default: return Turn::Left;  // d == 3
  }
}

const char* to_string(LaneIn l) {
  static const char* n[] = {"H1R", "H2R", "H3R", "H4R"};
  return n[static_cast<int>(l)];
}
const char* to_string(LaneOut l) {
  static const char* n[] = {"H1L", "H2L", "H3L", "H4L"};
  return n[static_cast<int>(l)];
}
const char* to_string(Subsection s) {
  static const char* n[] = {"S1", "S2", "S3", "S4"};
  return n[static_cast<int>(s)];
}

std::vector<Subsection> subsections_of(const Route& r) {
  Turn t = turn_of(r);
  int k = t == Turn::Right ? 1 : t == Turn::Straight ? 2 : 3;
  int start = cycle_index(kEntryCell[arm(r.clane)]);
  std::vector<Subsection> cells;
  cells.reserve(k);
  for (int i = 0; i < k; ++i) cells.push_back(kCycle[(start + i) % 4]);
  return cells;
}

std::vector<Subsection> collision_area(const Route& r1, const Route& r2) {
  auto c1 = subsections_of(r1);
  auto c2 = subsections_of(r2);
  std::vector<Subsection> col;
  for (Subsection s : c1)
    if (std::find(c2.begin(), c2.end(), s) != c2.end()) col.push_back(s);
  return col;
}

double col_entrance(const std::vector<Subsection>& col, const Route& route,
                    const IntersectionGeometry& geom) {
  if (col.empty()) throw std::invalid_argument("col_entrance: empty collision area");
  auto cells = subsections_of(route);
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (std::find(col.begin(), col.end(), cells[i]) != col.end())
      return geom.entry_boundary() + static_cast<double>(i) * geom.subsection_width;
  }
  throw std::invalid_argument("col_entrance: collision area not on route");
}

double box_exit(const Route& route, const IntersectionGeometry& geom) {
  auto cells = subsections_of(route);
  return geom.entry_boundary() +
         static_cast<double>(cells.size()) * geom.subsection_width;
}

double exit_boundary(const Route& route, const IntersectionGeometry& geom) {
  return box_exit(route, geom) + geom.car_length;
}

double capture_area_start(const IntersectionGeometry& geom, double v,
                          double a_min) {
  if (a_min >= 0.0) throw std::invalid_argument("capture_area_start: a_min must be < 0");
  double brake = v * v / (2.0 * std::fabs(a_min));
  return geom.entry_boundary() - brake;
}

Vec2 position2d(const Route& route, const IntersectionGeometry& geom,
                double s) {
  const double w = geom.subsection_width;
  const int a_in = arm(route.clane);
  const int a_out = arm(route.nlane);

  // Lane-center entry point on the box edge for each approach arm, and exit
  // point per outgoing arm, right-hand traffic.
  const Vec2 entry_pts[4] = {{w / 2, -w}, {w, w / 2}, {-w / 2, w}, {-w, -w / 2}};
  const Vec2 exit_pts[4] = {{-w / 2, -w}, {w, -w / 2}, {w / 2, w}, {-w, w / 2}};

  const double s_entry = geom.entry_boundary();
  const double s_exit = box_exit(route, geom);
  const Vec2 pin = entry_pts[a_in];
  const Vec2 pout = exit_pts[a_out];

  if (s <= s_entry) {
    Vec2 d = approach_dir(a_in);
    double back = s_entry - s;
    return {pin.x - d.x * back, pin.y - d.y * back};
  }
  if (s >= s_exit) {
    // outgoing arm direction: continues away from the box
    Vec2 d = approach_dir((a_out + 2) % 4);
    double fwd = s - s_exit;
    return {pout.x + d.x * fwd, pout.y + d.y * fwd};
  }
  double f = (s - s_entry) / (s_exit - s_entry);
  return {pin.x + f * (pout.x - pin.x), pin.y + f * (pout.y - pin.y)};
}

}  // namespace icsim
