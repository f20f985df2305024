#pragma once

#include <cassert>
#include <vector>

#include "dacoop/common.hpp"
#include "dacoop/geometry.hpp"

namespace dacoop {

struct ApfParams {
    double eta = 0.0;           // repulsion scale, dimensionless
    double lambda_mm = 1000.0;  // cohesion scale; inter-agent equilibrium at 2*lambda
    double rho0_mm = 500.0;     // obstacle influence range
    double b_threshold = 1.0;   // force-norm threshold for wall-following candidate choice

    void validate() const {
        if (eta < 0.0) throw ConfigError("apf: eta must be >= 0");
        if (!(lambda_mm > 0.0)) throw ConfigError("apf: lambda must be > 0");
        if (!(rho0_mm > 0.0)) throw ConfigError("apf: rho0 must be > 0");
        if (b_threshold < 0.0) throw ConfigError("apf: b_threshold must be >= 0");
    }
};

struct ForceSet {
    Vec2 f_a;      // attractive, unit vector while a target exists
    Vec2 f_r;      // repulsive
    Vec2 f_in;     // inter-individual
    Vec2 f_ar;     // f_a + f_r
    Vec2 f_total;  // f_a + f_r + f_in
};

inline ForceSet make_force_set(const Vec2& f_a, const Vec2& f_r, const Vec2& f_in) {
    return {f_a, f_r, f_in, f_a + f_r, f_a + f_r + f_in};
}

// Unit vector pointing to the target; zero in the degenerate p == target case.
inline Vec2 attractive_force(const Vec2& p, const Vec2& target) {
    Vec2 d = target - p;
    double n = d.norm();
    if (n == 0.0) return {0.0, 0.0};
    return d * (1.0 / n);
}

// Repulsion from the nearest obstacle point. Zero beyond rho0, grows unbounded
// as the distance goes to zero.
inline Vec2 repulsive_force(const Vec2& p, const Vec2& obstacle_point, double eta,
                            double rho0_mm) {
    Vec2 away = p - obstacle_point;
    double d = away.norm();
    if (d == 0.0) throw SimError("penetrating obstacle");
    if (d > rho0_mm) return {0.0, 0.0};
    double magnitude = eta * (rho0_mm - d) / (d * d * d * rho0_mm);
    return away * (magnitude / d);
}

// Sum of pairwise cohesion/repulsion terms, equilibrium at distance 2*lambda.
inline Vec2 interindividual_force(const Vec2& p, std::span<const Vec2> neighbor_positions,
                                  double lambda_mm) {
    Vec2 total{0.0, 0.0};
    for (const auto& q : neighbor_positions) {
        Vec2 to_neighbor = q - p;
        double d = to_neighbor.norm();
        if (d == 0.0) throw SimError("penetrating teammate");
        total = total + to_neighbor * ((0.5 - lambda_mm / d) / d);
    }
    return total;
}

// Commanded heading. When the attractive/repulsive resultant opposes the goal
// direction by more than 90 degrees, motion switches to one of the two vectors
// perpendicular to f_r (wall following); otherwise the total force is followed.
//
// Fixed conventions: exactly 90 degrees counts as not-exceeding; |f_in| == B
// selects by f_in; an exact candidate tie selects n1 = f_r rotated +90 degrees.
inline double resolve_heading(const ForceSet& forces, double current_heading_rad,
                              double b_threshold) {
    if (forces.f_ar.dot(forces.f_a) >= 0.0) {
        if (forces.f_total.is_zero()) return current_heading_rad;
        return forces.f_total.heading();
    }
    // angle(f_ar, f_a) > 90 deg implies |f_r| > |f_a| > 0
    assert(!forces.f_r.is_zero());
    Vec2 n1 = forces.f_r.perp_ccw();
    Vec2 n2 = -n1;
    // |n1| == |n2|, so raw dot products order the angles.
    Vec2 reference = forces.f_in.norm() < b_threshold
                         ? unit_from_heading(current_heading_rad)
                         : forces.f_in;
    double d1 = n1.dot(reference);
    double d2 = n2.dot(reference);
    const Vec2& chosen = d1 >= d2 ? n1 : n2;
    return chosen.heading();
}

// Nearest-point queries over the arena plus virtual disc obstacles placed at
// captured teammates. Real obstacles and walls win distance ties.
class ObstacleField {
public:
    ObstacleField(const Arena& arena, std::vector<Vec2> virtual_centers,
                  double virtual_radius_mm)
        : arena_(&arena),
          centers_(std::move(virtual_centers)),
          radius_(virtual_radius_mm) {}

    explicit ObstacleField(const Arena& arena) : arena_(&arena), radius_(0.0) {}

    // Distance is negative when p is inside a virtual disc (penetration depth);
    // arena obstacles reject penetrating queries instead.
    NearestHit nearest(const Vec2& p) const {
        NearestHit best = nearest_obstacle_point(p, *arena_);
        for (const auto& c : centers_) {
            Vec2 out = p - c;
            double dc = out.norm();
            if (dc == 0.0) throw SimError("penetrating obstacle");
            double d = dc - radius_;
            if (d < best.distance_mm) best = {c + out * (radius_ / dc), d};
        }
        return best;
    }

    const Arena& arena() const { return *arena_; }

private:
    const Arena* arena_;
    std::vector<Vec2> centers_;
    double radius_;
};

inline ObstacleField effective_obstacle_set(const Arena& arena,
                                            std::vector<Vec2> captured_teammates,
                                            double pursuer_radius_mm) {
    return ObstacleField(arena, std::move(captured_teammates), pursuer_radius_mm);
}

}  // namespace dacoop
