#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace icsim {

// Incoming lanes H1R..H4R and outgoing lanes H1L..H4L. Arm 1 is the south
// approach, arms are numbered counterclockwise (2 = east, 3 = north,
// 4 = west). Right-hand traffic throughout.
enum class LaneIn : std::uint8_t { H1R = 0, H2R = 1, H3R = 2, H4R = 3 };
enum class LaneOut : std::uint8_t { H1L = 0, H2L = 1, H3L = 2, H4L = 3 };

// The crossing box is tiled by four square cells. S1 = SW, S2 = SE,
// S3 = NE, S4 = NW quadrant.
enum class Subsection : std::uint8_t { S1 = 0, S2 = 1, S3 = 2, S4 = 3 };

enum class Turn : std::uint8_t { Right, Straight, Left };

struct Route {
  LaneIn clane;
  LaneOut nlane;
};

// U-turns (same arm in and out) are invalid.
bool route_valid(const Route& r);
Turn turn_of(const Route& r);

const char* to_string(LaneIn l);
const char* to_string(LaneOut l);
const char* to_string(Subsection s);

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

struct IntersectionGeometry {
  double x_s = 0.0;              // longitudinal coordinate of the center
  double lane_width = 3.5;       // m
  double subsection_width = 3.5; // m
  double car_length = 4.5;       // m

  // entry edge of the crossing box along any route's longitudinal axis
  double entry_boundary() const { return x_s - subsection_width; }
};

// Ordered cells swept by the route: 1 for a right turn, 2 straight,
// 3 for a left turn. Throws std::invalid_argument on a U-turn.
std::vector<Subsection> subsections_of(const Route& r);

// Cells occupied by both routes, ordered along r1's path. May be empty.
std::vector<Subsection> collision_area(const Route& r1, const Route& r2);

// Longitudinal coordinate at which the car on `route` first enters any cell
// of `col`. Each cell contributes one subsection_width of path length.
// Throws std::invalid_argument if col is empty or disjoint from the route.
double col_entrance(const std::vector<Subsection>& col, const Route& route,
                    const IntersectionGeometry& geom);

// Longitudinal coordinate where the route leaves the crossing box.
double box_exit(const Route& route, const IntersectionGeometry& geom);

// Far edge of the last occupied cell plus one car length; once the position
// estimate clears this the whole car is in NLANE.
double exit_boundary(const Route& route, const IntersectionGeometry& geom);

// Start of the capture area for a car travelling at v with maximum braking
// deceleration a_min (a_min < 0): braking inside [ca_start, x_s) cannot
// prevent entering the box.
double capture_area_start(const IntersectionGeometry& geom, double v,
                          double a_min);

// 2D position of a point at longitudinal coordinate s along the route.
// Approach and exit legs follow the lane centers; inside the box the path is
// the chord between entry and exit points. Used for inter-car distance.
Vec2 position2d(const Route& route, const IntersectionGeometry& geom,
                double s);

}  // namespace icsim
