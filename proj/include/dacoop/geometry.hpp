#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "dacoop/common.hpp"
#include "dacoop/random.hpp"

namespace dacoop {

// All geometry is in millimeters, double precision.
struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2 operator-() const { return {-x, -y}; }
    bool operator==(const Vec2& o) const = default;

    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    double norm_sq() const { return x * x + y * y; }
    double norm() const { return std::hypot(x, y); }
    // Counter-clockwise quarter turn.
    Vec2 perp_ccw() const { return {-y, x}; }
    double heading() const { return std::atan2(y, x); }
    bool finite() const { return std::isfinite(x) && std::isfinite(y); }
    bool is_zero() const { return x == 0.0 && y == 0.0; }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }

inline Vec2 unit_from_heading(double heading_rad) {
    return {std::cos(heading_rad), std::sin(heading_rad)};
}

struct RectObstacle {
    Vec2 min_corner;
    Vec2 max_corner;

    bool strictly_contains(const Vec2& p) const {
        return p.x > min_corner.x && p.x < max_corner.x &&
               p.y > min_corner.y && p.y < max_corner.y;
    }

    // Closest point of the (solid) rectangle; equals p when p is inside.
    Vec2 clamp(const Vec2& p) const {
        return {std::clamp(p.x, min_corner.x, max_corner.x),
                std::clamp(p.y, min_corner.y, max_corner.y)};
    }

    // Euclidean distance from p to the rectangle, 0 inside.
    double distance(const Vec2& p) const { return (p - clamp(p)).norm(); }
};

struct RectRegion {
    Vec2 min_corner;
    Vec2 max_corner;

    double width() const { return max_corner.x - min_corner.x; }
    double height() const { return max_corner.y - min_corner.y; }
    Vec2 center() const {
        return {(min_corner.x + max_corner.x) * 0.5, (min_corner.y + max_corner.y) * 0.5};
    }
    double diagonal() const { return (max_corner - min_corner).norm(); }
    bool intersects(const RectObstacle& o) const {
        return min_corner.x < o.max_corner.x && max_corner.x > o.min_corner.x &&
               min_corner.y < o.max_corner.y && max_corner.y > o.min_corner.y;
    }
};

// Rectangular arena with axis-aligned rectangular obstacles. The four walls act
// as implicit obstacles ordered after the explicit ones (left, right, bottom, top).
struct Arena {
    double width_mm = 0.0;
    double height_mm = 0.0;
    std::vector<RectObstacle> obstacles;
    RectRegion pursuer_spawn;
    RectRegion evader_spawn;

    double diagonal() const { return std::hypot(width_mm, height_mm); }

    bool inside(const Vec2& p) const {
        return p.x >= 0.0 && p.x <= width_mm && p.y >= 0.0 && p.y <= height_mm;
    }

    void validate() const {
        if (!(width_mm > 0.0) || !(height_mm > 0.0))
            throw ConfigError("arena dimensions must be positive");
        auto inside_rect = [&](const Vec2& lo, const Vec2& hi) {
            return lo.x >= 0.0 && lo.y >= 0.0 && hi.x <= width_mm && hi.y <= height_mm;
        };
        for (std::size_t i = 0; i < obstacles.size(); ++i) {
            const auto& o = obstacles[i];
            if (!(o.min_corner.x < o.max_corner.x && o.min_corner.y < o.max_corner.y))
                throw ConfigError("obstacle " + std::to_string(i) + " has inverted corners");
            if (!inside_rect(o.min_corner, o.max_corner))
                throw ConfigError("obstacle " + std::to_string(i) + " lies outside the arena");
        }
        for (const auto* r : {&pursuer_spawn, &evader_spawn}) {
            if (!(r->min_corner.x <= r->max_corner.x && r->min_corner.y <= r->max_corner.y))
                throw ConfigError("spawn region has inverted corners");
            if (!inside_rect(r->min_corner, r->max_corner))
                throw ConfigError("spawn region lies outside the arena");
            for (std::size_t i = 0; i < obstacles.size(); ++i)
                if (r->intersects(obstacles[i]))
                    throw ConfigError("spawn region intersects obstacle " + std::to_string(i));
        }
    }
};

struct NearestHit {
    Vec2 point;
    double distance_mm = 0.0;
};

namespace detail {

// Wall candidates in tie-break order: left, right, bottom, top.
inline void wall_candidates(const Vec2& p, const Arena& a, NearestHit out[4]) {
    out[0] = {{0.0, std::clamp(p.y, 0.0, a.height_mm)}, std::abs(p.x)};
    out[1] = {{a.width_mm, std::clamp(p.y, 0.0, a.height_mm)}, std::abs(a.width_mm - p.x)};
    out[2] = {{std::clamp(p.x, 0.0, a.width_mm), 0.0}, std::abs(p.y)};
    out[3] = {{std::clamp(p.x, 0.0, a.width_mm), a.height_mm}, std::abs(a.height_mm - p.y)};
}

}  // namespace detail

// Closest point over all obstacle boundaries and the four arena walls.
// Ties go to the lowest obstacle index; walls are ordered after obstacles.
inline NearestHit nearest_obstacle_point(const Vec2& p, const Arena& arena) {
    for (std::size_t i = 0; i < arena.obstacles.size(); ++i)
        if (arena.obstacles[i].strictly_contains(p))
            throw SimError("penetrating query: point inside obstacle " + std::to_string(i));

    NearestHit best{{0.0, 0.0}, std::numeric_limits<double>::infinity()};
    for (const auto& o : arena.obstacles) {
        Vec2 q = o.clamp(p);
        double d = (p - q).norm();
        if (d < best.distance_mm) best = {q, d};
    }
    NearestHit walls[4];
    detail::wall_candidates(p, arena, walls);
    for (const auto& w : walls)
        if (w.distance_mm < best.distance_mm) best = w;
    return best;
}

// True iff the disc of the given radius intersects any obstacle or leaves the
// arena. Boundary contact counts as collision.
inline bool in_collision(const Vec2& p, double radius_mm, const Arena& arena) {
    if (p.x - radius_mm <= 0.0 || p.y - radius_mm <= 0.0 ||
        p.x + radius_mm >= arena.width_mm || p.y + radius_mm >= arena.height_mm)
        return true;
    for (const auto& o : arena.obstacles)
        if (o.distance(p) <= radius_mm) return true;
    return false;
}

// Uniform rejection sample over the region. Accepted points keep `clearance_mm`
// of free space and stay at least 2*clearance_mm from previously spawned agents.
inline Vec2 sample_spawn(const RectRegion& region, double clearance_mm,
                         std::span<const Vec2> existing, const Arena& arena,
                         RandomStream& rng) {
    for (int attempt = 0; attempt < 1000; ++attempt) {
        Vec2 p{rng.uniform(region.min_corner.x, region.max_corner.x),
               rng.uniform(region.min_corner.y, region.max_corner.y)};
        if (in_collision(p, clearance_mm, arena)) continue;
        bool clear = true;
        for (const auto& q : existing) {
            if ((p - q).norm() < 2.0 * clearance_mm) {
                clear = false;
                break;
            }
        }
        if (clear) return p;
    }
    throw SimError("spawn region infeasible");
}

// ---------------------------------------------------------------------------
// Arena file format: human-editable key = value lines.
//   arena.width_mm = 3600
//   arena.height_mm = 5000
//   obstacle = [xmin, ymin, xmax, ymax]       (repeatable)
//   pursuer_spawn = [xmin, ymin, xmax, ymax]
//   evader_spawn = [xmin, ymin, xmax, ymax]
// '#' starts a comment. Unknown keys are errors.
// ---------------------------------------------------------------------------

namespace detail {

inline std::string strip(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline double parse_number(const std::string& text, const std::string& where) {
    try {
        std::size_t pos = 0;
        double v = std::stod(text, &pos);
        if (pos != text.size() || !std::isfinite(v))
            throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError(where + ": not a number: '" + text + "'");
    }
}

inline std::array<double, 4> parse_rect4(const std::string& text, const std::string& where) {
    std::string t = strip(text);
    if (t.size() < 2 || t.front() != '[' || t.back() != ']')
        throw ConfigError(where + ": expected [xmin, ymin, xmax, ymax]");
    t = t.substr(1, t.size() - 2);
    std::array<double, 4> out{};
    std::stringstream ss(t);
    std::string item;
    int n = 0;
    while (std::getline(ss, item, ',')) {
        if (n >= 4) throw ConfigError(where + ": expected 4 numbers");
        out[n++] = parse_number(strip(item), where);
    }
    if (n != 4) throw ConfigError(where + ": expected 4 numbers");
    return out;
}

}  // namespace detail

inline Arena parse_arena(std::istream& in, const std::string& filename) {
    Arena arena;
    bool have_w = false, have_h = false, have_ps = false, have_es = false;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string where = filename + ":" + std::to_string(lineno);
        if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        line = detail::strip(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(where + ": expected key = value");
        std::string key = detail::strip(line.substr(0, eq));
        std::string value = detail::strip(line.substr(eq + 1));
        if (key == "arena.width_mm") {
            arena.width_mm = detail::parse_number(value, where);
            have_w = true;
        } else if (key == "arena.height_mm") {
            arena.height_mm = detail::parse_number(value, where);
            have_h = true;
        } else if (key == "obstacle") {
            auto r = detail::parse_rect4(value, where);
            arena.obstacles.push_back({{r[0], r[1]}, {r[2], r[3]}});
        } else if (key == "pursuer_spawn") {
            auto r = detail::parse_rect4(value, where);
            arena.pursuer_spawn = {{r[0], r[1]}, {r[2], r[3]}};
            have_ps = true;
        } else if (key == "evader_spawn") {
            auto r = detail::parse_rect4(value, where);
            arena.evader_spawn = {{r[0], r[1]}, {r[2], r[3]}};
            have_es = true;
        } else {
            throw ConfigError(where + ": unknown key '" + key + "'");
        }
    }
    if (!have_w || !have_h) throw ConfigError(filename + ": missing arena dimensions");
    if (!have_ps || !have_es) throw ConfigError(filename + ": missing spawn regions");
    arena.validate();
    return arena;
}

inline Arena load_arena(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open arena file: " + path);
    return parse_arena(in, path);
}

}  // namespace dacoop
