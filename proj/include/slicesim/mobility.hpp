#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "slicesim/radio.hpp"
#include "slicesim/rng.hpp"

namespace slicesim::mobility {

using radio::Position;

struct Segment {
    char id = '?';
    std::vector<Position> points;  // polyline, at least 2 vertices
    double length_m = 0.0;
};

enum class Turn { Straight, Left, Right };

struct Intersection {
    Position pos;
    double light_offset_s = 0.0;  // phase offset into the signal cycle
};

// A junction the route crosses, in route arc order.
struct RouteJunction {
    int intersection = -1;
    double arc_m = 0.0;
    Turn turn = Turn::Straight;
    bool ns_approach = false;  // approach axis, for the light phase
};

struct Route {
    std::vector<int> segments;          // indices into RoadTopology::segments
    std::vector<Position> polyline;     // concatenated, deduplicated joints
    std::vector<double> cum_arc;        // arc at each polyline vertex
    double length_m = 0.0;
    std::vector<RouteJunction> junctions;
    std::vector<double> segment_start_arc;
};

class RoadTopology {
  public:
    // Urban grid: nine segments A..I, six signalised junctions, three routes
    // from Start to End. Light phase offsets are drawn from `rng` at build.
    static RoadTopology build(Rng& rng);

    const std::vector<Segment>& segments() const { return segments_; }
    const std::vector<Intersection>& intersections() const { return intersections_; }
    const std::vector<Route>& routes() const { return routes_; }
    double road_width_m() const { return road_width_m_; }
    Position start() const { return start_; }
    Position end() const { return end_; }

    double light_cycle_s() const { return light_cycle_s_; }

    // `hint` caches the polyline leg and must only move forward in arc.
    Position position_on_route(int route, double arc_m, int* hint = nullptr) const;
    int segment_index_at(int route, double arc_m) const;

    bool light_red(int intersection, bool ns_approach, double clock_s) const;
    double red_remaining_s(int intersection, bool ns_approach, double clock_s) const;

  private:
    std::vector<Segment> segments_;
    std::vector<Intersection> intersections_;
    std::vector<Route> routes_;
    double road_width_m_ = 7.0;
    double light_cycle_s_ = 60.0;
    double light_red_s_ = 30.0;
    Position start_, end_;
};

enum class VehiclePhase { Cruising, Decelerating, Stopped, Crossing, Accelerating };

struct VehicleState {
    int route = 0;
    double arc_m = 0.0;
    double speed_mps = 0.0;
    VehiclePhase phase = VehiclePhase::Cruising;
    double stop_timer_s = 0.0;
    double target_speed_mps = 0.0;
    // stepping caches
    int next_junction = 0;
    int poly_hint = 0;
    bool stop_served = false;
};

struct VehicleKinematics {
    double accel_mps2 = 2.0;
    double decel_mps2 = 4.0;
    double cross_speed_mps = 20.0 / 3.6;
    double min_target_mps = 40.0 / 3.6;
    double max_target_mps = 70.0 / 3.6;
};

// Advances one vehicle by dt against the topology clock. dt is one TTI or an
// integer multiple of it.
void step_vehicle(VehicleState& v, const RoadTopology& topo, double clock_s, double dt_s,
                  const VehicleKinematics& kin);

bool vehicle_done(const VehicleState& v, const RoadTopology& topo);

// Deterministic arrival process at the Start point.
class VehicleSpawner {
  public:
    VehicleSpawner(double rate_per_s, const VehicleKinematics& kin)
        : rate_(rate_per_s), kin_(kin), next_spawn_s_(rate_per_s > 0 ? 1.0 / rate_per_s : 0) {}

    // Returns vehicles whose spawn time has been reached.
    std::vector<VehicleState> poll(double clock_s, const RoadTopology& topo, Rng& rng);

    double rate() const { return rate_; }

  private:
    double rate_;
    VehicleKinematics kin_;
    double next_spawn_s_;
};

struct PedestrianState {
    Position pos;
    double heading_rad = 0.0;
    double speed_mps = 1.5;
};

struct PedestrianBox {
    Position center;
    double half_m = 350.0;
};

// Random-waypoint walk with reflecting bounds. Heading is redrawn with
// probability 0.01 per second.
void step_pedestrian(PedestrianState& p, const PedestrianBox& box, double dt_s, Rng& rng);

PedestrianState spawn_pedestrian(const PedestrianBox& box, Rng& rng);

bool in_coverage(const Position& pos, const Position& bs, double radius_m = 500.0);

}  // namespace slicesim::mobility
