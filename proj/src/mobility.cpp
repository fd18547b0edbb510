#include "slicesim/mobility.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace slicesim::mobility {

namespace {

constexpr double kJunctionSnap = 0.5;  // m, vertex-to-intersection match

double polyline_length(const std::vector<Position>& pts) {
    double len = 0.0;
    for (std::size_t i = 1; i < pts.size(); ++i) len += radio::distance(pts[i - 1], pts[i]);
    return len;
}

Turn classify_turn(const Position& before, const Position& at, const Position& after) {
    const double ix = at.x - before.x, iy = at.y - before.y;
    const double ox = after.x - at.x, oy = after.y - at.y;
    const double cross = ix * oy - iy * ox;
    const double norm = std::hypot(ix, iy) * std::hypot(ox, oy);
    if (norm <= 0.0 || std::abs(cross) < 1e-9 * norm) return Turn::Straight;
    return cross > 0 ? Turn::Left : Turn::Right;
}

}  // namespace

RoadTopology RoadTopology::build(Rng& rng) {
    RoadTopology t;
    t.start_ = {0.0, 0.0};
    t.end_ = {6000.0, 1500.0};

    const Position j1{500, 0}, j2{2000, 1500}, j3{2000, 0}, j4{3500, 1500},
        j5{5000, 1500}, j6{3500, 0};

    // Roads may share pavement in the plane; only junction crossings interact.
    t.segments_ = {
        {'A', {t.start_, j1}, 0},
        {'B', {j1, {500, 1500}, j2}, 0},
        {'C', {j1, j3}, 0},
        {'D', {j2, j4}, 0},
        {'E', {j3, j6, j4}, 0},
        {'F', {j3, j6}, 0},
        {'G', {j4, j5}, 0},
        {'H', {j6, {5000, 0}, j5}, 0},
        {'I', {j5, t.end_}, 0},
    };
    for (auto& s : t.segments_) s.length_m = polyline_length(s.points);

    for (const Position& p : {j1, j2, j3, j4, j5, j6})
        t.intersections_.push_back({p, static_cast<double>(rng.uniform_int(60))});

    auto seg_index = [&](char id) {
        for (std::size_t i = 0; i < t.segments_.size(); ++i)
            if (t.segments_[i].id == id) return static_cast<int>(i);
        throw std::logic_error("unknown segment");
    };

    const std::vector<std::string> route_ids = {"ABDGI", "ACEGI", "ACFHI"};
    for (const auto& rid : route_ids) {
        Route r;
        for (char id : rid) r.segments.push_back(seg_index(id));
        // concatenate polylines, dropping duplicated joint vertices
        for (int si : r.segments) {
            const auto& pts = t.segments_[si].points;
            std::size_t from = r.polyline.empty() ? 0 : 1;
            r.segment_start_arc.push_back(polyline_length(r.polyline));
            for (std::size_t i = from; i < pts.size(); ++i) r.polyline.push_back(pts[i]);
        }
        r.cum_arc.resize(r.polyline.size());
        r.cum_arc[0] = 0.0;
        for (std::size_t i = 1; i < r.polyline.size(); ++i)
            r.cum_arc[i] =
                r.cum_arc[i - 1] + radio::distance(r.polyline[i - 1], r.polyline[i]);
        r.length_m = r.cum_arc.back();

        // junction waypoints: interior vertices coinciding with an intersection
        for (std::size_t i = 1; i + 1 < r.polyline.size(); ++i) {
            for (std::size_t k = 0; k < t.intersections_.size(); ++k) {
                if (radio::distance(r.polyline[i], t.intersections_[k].pos) < kJunctionSnap) {
                    RouteJunction rj;
                    rj.intersection = static_cast<int>(k);
                    rj.arc_m = r.cum_arc[i];
                    rj.turn = classify_turn(r.polyline[i - 1], r.polyline[i], r.polyline[i + 1]);
                    const double iy = r.polyline[i].y - r.polyline[i - 1].y;
                    const double ix = r.polyline[i].x - r.polyline[i - 1].x;
                    rj.ns_approach = std::abs(iy) > std::abs(ix);
                    r.junctions.push_back(rj);
                    break;
                }
            }
        }
        t.routes_.push_back(std::move(r));
    }
    return t;
}

Position RoadTopology::position_on_route(int route, double arc_m, int* hint) const {
    const Route& r = routes_.at(route);
    const double arc = std::clamp(arc_m, 0.0, r.length_m);
    std::size_t i = hint ? static_cast<std::size_t>(std::max(0, *hint)) : 0;
    if (i >= r.cum_arc.size() - 1) i = 0;
    if (r.cum_arc[i] > arc) i = 0;  // hint only valid for forward motion
    while (i + 2 < r.cum_arc.size() && r.cum_arc[i + 1] < arc) ++i;
    if (hint) *hint = static_cast<int>(i);
    const double leg = r.cum_arc[i + 1] - r.cum_arc[i];
    const double f = leg > 0 ? (arc - r.cum_arc[i]) / leg : 0.0;
    const Position& a = r.polyline[i];
    const Position& b = r.polyline[i + 1];
    return {a.x + f * (b.x - a.x), a.y + f * (b.y - a.y)};
}

int RoadTopology::segment_index_at(int route, double arc_m) const {
    const Route& r = routes_.at(route);
    int seg = r.segments.front();
    for (std::size_t i = 0; i < r.segments.size(); ++i)
        if (arc_m >= r.segment_start_arc[i] - 1e-9) seg = r.segments[i];
    return seg;
}

bool RoadTopology::light_red(int intersection, bool ns_approach, double clock_s) const {
    const auto& in = intersections_.at(intersection);
    double phase = std::fmod(clock_s + in.light_offset_s, light_cycle_s_);
    if (phase < 0) phase += light_cycle_s_;
    const bool ew_red = phase < light_red_s_;
    return ns_approach ? !ew_red : ew_red;
}

double RoadTopology::red_remaining_s(int intersection, bool ns_approach,
                                     double clock_s) const {
    if (!light_red(intersection, ns_approach, clock_s)) return 0.0;
    const auto& in = intersections_.at(intersection);
    double phase = std::fmod(clock_s + in.light_offset_s, light_cycle_s_);
    if (phase < 0) phase += light_cycle_s_;
    return ns_approach ? light_cycle_s_ - phase : light_red_s_ - phase;
}

void step_vehicle(VehicleState& v, const RoadTopology& topo, double clock_s, double dt_s,
                  const VehicleKinematics& kin) {
    const Route& r = topo.routes().at(v.route);
    const double zone_half = topo.road_width_m();

    if (v.phase == VehiclePhase::Stopped) {
        v.stop_timer_s -= dt_s;
        if (v.stop_timer_s > 0.0) {
            v.speed_mps = 0.0;
            return;
        }
        v.stop_timer_s = 0.0;
        v.phase = VehiclePhase::Accelerating;
    }

    // retire junctions already fully crossed
    while (v.next_junction < static_cast<int>(r.junctions.size()) &&
           v.arc_m > r.junctions[v.next_junction].arc_m + zone_half) {
        ++v.next_junction;
        v.stop_served = false;
    }

    double cap = v.target_speed_mps;
    bool in_zone = false;
    bool braking_for_stop = false;

    if (v.next_junction < static_cast<int>(r.junctions.size())) {
        const RouteJunction& j = r.junctions[v.next_junction];
        const double zone_entry = j.arc_m - zone_half;
        const double dist_entry = zone_entry - v.arc_m;
        if (dist_entry <= 0.0) {
            in_zone = true;
            cap = std::min(cap, kin.cross_speed_mps);
        } else if (dist_entry < 250.0) {
            // brake early enough to enter the junction box at crossing speed
            const double brake_cap = std::sqrt(kin.cross_speed_mps * kin.cross_speed_mps +
                                               2.0 * kin.decel_mps2 * dist_entry);
            cap = std::min(cap, brake_cap);
            if (j.turn != Turn::Right && !v.stop_served &&
                topo.light_red(j.intersection, j.ns_approach, clock_s)) {
                const double stop_cap = std::sqrt(2.0 * kin.decel_mps2 * dist_entry);
                cap = std::min(cap, stop_cap);
                braking_for_stop = true;
                if (dist_entry < 0.3 && v.speed_mps < 0.5) {
                    v.arc_m = zone_entry;
                    v.speed_mps = 0.0;
                    v.phase = VehiclePhase::Stopped;
                    const double rem =
                        topo.red_remaining_s(j.intersection, j.ns_approach, clock_s);
                    v.stop_timer_s = std::clamp(rem, 1.0, 60.0);
                    v.stop_served = true;
                    return;
                }
            }
        }
    }

    const double prev = v.speed_mps;
    if (v.speed_mps < cap)
        v.speed_mps = std::min(cap, v.speed_mps + kin.accel_mps2 * dt_s);
    else if (v.speed_mps > cap)
        v.speed_mps = std::max(cap, v.speed_mps - kin.decel_mps2 * dt_s);
    v.arc_m = std::min(r.length_m, v.arc_m + v.speed_mps * dt_s);

    if (in_zone)
        v.phase = VehiclePhase::Crossing;
    else if (v.speed_mps < prev || braking_for_stop)
        v.phase = VehiclePhase::Decelerating;
    else if (v.speed_mps > prev)
        v.phase = VehiclePhase::Accelerating;
    else
        v.phase = VehiclePhase::Cruising;
}

bool vehicle_done(const VehicleState& v, const RoadTopology& topo) {
    return v.arc_m >= topo.routes().at(v.route).length_m - 1e-9;
}

std::vector<VehicleState> VehicleSpawner::poll(double clock_s, const RoadTopology& topo,
                                               Rng& rng) {
    std::vector<VehicleState> out;
    if (rate_ <= 0.0) return out;
    const double interval = 1.0 / rate_;
    while (next_spawn_s_ <= clock_s + 1e-12) {
        VehicleState v;
        v.route = static_cast<int>(rng.uniform_int(topo.routes().size()));
        v.target_speed_mps = rng.uniform(kin_.min_target_mps, kin_.max_target_mps);
        v.speed_mps = v.target_speed_mps;
        v.arc_m = 0.0;
        out.push_back(v);
        next_spawn_s_ += interval;
    }
    return out;
}

PedestrianState spawn_pedestrian(const PedestrianBox& box, Rng& rng) {
    PedestrianState p;
    p.pos.x = rng.uniform(box.center.x - box.half_m, box.center.x + box.half_m);
    p.pos.y = rng.uniform(box.center.y - box.half_m, box.center.y + box.half_m);
    p.heading_rad = rng.uniform(0.0, 2.0 * M_PI);
    p.speed_mps = rng.uniform(1.0, 2.0);
    return p;
}

void step_pedestrian(PedestrianState& p, const PedestrianBox& box, double dt_s, Rng& rng) {
    if (rng.uniform() < 0.01 * dt_s) p.heading_rad = rng.uniform(0.0, 2.0 * M_PI);
    double x = p.pos.x + std::cos(p.heading_rad) * p.speed_mps * dt_s;
    double y = p.pos.y + std::sin(p.heading_rad) * p.speed_mps * dt_s;
    const double lox = box.center.x - box.half_m, hix = box.center.x + box.half_m;
    const double loy = box.center.y - box.half_m, hiy = box.center.y + box.half_m;
    bool flip_x = false, flip_y = false;
    if (x < lox) { x = 2 * lox - x; flip_x = true; }
    if (x > hix) { x = 2 * hix - x; flip_x = true; }
    if (y < loy) { y = 2 * loy - y; flip_y = true; }
    if (y > hiy) { y = 2 * hiy - y; flip_y = true; }
    if (flip_x || flip_y) {
        double hx = std::cos(p.heading_rad), hy = std::sin(p.heading_rad);
        if (flip_x) hx = -hx;
        if (flip_y) hy = -hy;
        p.heading_rad = std::atan2(hy, hx);
    }
    p.pos = {x, y};
}

bool in_coverage(const Position& pos, const Position& bs, double radius_m) {
    return radio::distance(pos, bs) <= radius_m;
}

}  // namespace slicesim::mobility
