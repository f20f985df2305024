#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "dacoop/apf.hpp"
#include "dacoop/common.hpp"
#include "dacoop/geometry.hpp"
#include "dacoop/random.hpp"

namespace dacoop {

enum class CaptureSemantics { kSticky, kSimultaneous };
enum class EvaderMode { kEscape, kStationary };

struct ScenarioParams {
    int n_pursuers = 3;
    double v_p_mm_s = 300.0;
    double v_e_mm_s = 400.0;
    double radius_p_mm = 80.0;
    double radius_e_mm = 80.0;
    double d_capture_mm = 300.0;  // capture when center distance < d_capture
    double d_sense_mm = 2000.0;
    double dt_s = 0.1;
    int max_steps = 1000;
    double gamma = 0.99;  // discount used by the potential-based shaping term
    CaptureSemantics capture = CaptureSemantics::kSticky;
    EvaderMode evader = EvaderMode::kEscape;

    void validate() const {
        if (n_pursuers < 1) throw ConfigError("scenario: n_pursuers must be >= 1");
        for (double d : {v_p_mm_s, radius_p_mm, radius_e_mm, d_capture_mm, d_sense_mm, dt_s})
            if (!(d > 0.0)) throw ConfigError("scenario: lengths, speeds and dt must be > 0");
        if (evader == EvaderMode::kEscape && !(v_e_mm_s > v_p_mm_s))
            throw ConfigError("scenario: the escaping evader must be faster than pursuers");
        if (max_steps < 1) throw ConfigError("scenario: max_steps must be >= 1");
        if (!(gamma > 0.0 && gamma < 1.0)) throw ConfigError("scenario: gamma must be in (0,1)");
    }
};

// Stand-in escape policy: 1/d^2 repulsion from pursuers, obstacle repulsion
// within rho0, and a fixed tangential bias toward the larger free-space gap.
struct EvaderParams {
    double eta = 3.0e8;
    double rho0_mm = 500.0;
    double tangential_bias = 0.3;
    double sense_mm = 10000.0;  // pursuers beyond this range are ignored
    double probe_mm = 300.0;    // lookahead used to compare the two tangent gaps
};

struct AgentState {
    Vec2 position;
    double heading_rad = 0.0;
    bool captured = false;  // pursuers only; sticky in the default semantics
};

struct NeighborObs {
    double d_mm = 0.0;
    double phi_rad = 0.0;
};

struct Observation {
    double d_o_mm = 0.0;    // nearest effective obstacle (virtual discs included)
    double phi_o_rad = 0.0;
    double d_e_mm = 0.0;    // evader, always observed
    double phi_e_rad = 0.0;
    std::vector<NeighborObs> neighbors;  // ascending distance, all within d_sense
};

struct RewardBreakdown {
    double r_main = 0.0;
    double r_time = 0.0;
    double r_tm = 0.0;
    double r_o = 0.0;
    double r_pot = 0.0;
    double total() const { return r_main + r_time + r_tm + r_o + r_pot; }
};

// Staircase potential over the distance to the evader.
inline double shaping_potential(double d_e_mm) {
    if (d_e_mm < 400.0) return 15.0;
    if (d_e_mm < 600.0) return 10.0;
    if (d_e_mm < 800.0) return 5.0;
    return 0.0;
}

namespace detail {

// Earliest t in [0,1] with p + t*delta inside the closed box, if any.
inline std::optional<double> ray_aabb_entry(const Vec2& p, const Vec2& delta, const Vec2& lo,
                                            const Vec2& hi) {
    double t0 = 0.0, t1 = 1.0;
    for (int axis = 0; axis < 2; ++axis) {
        double pa = axis == 0 ? p.x : p.y;
        double da = axis == 0 ? delta.x : delta.y;
        double la = axis == 0 ? lo.x : lo.y;
        double ha = axis == 0 ? hi.x : hi.y;
        if (da == 0.0) {
            if (pa < la || pa > ha) return std::nullopt;
            continue;
        }
        double ta = (la - pa) / da;
        double tb = (ha - pa) / da;
        if (ta > tb) std::swap(ta, tb);
        t0 = std::max(t0, ta);
        t1 = std::min(t1, tb);
        if (t0 > t1) return std::nullopt;
    }
    return t0;
}

// Earliest t in [0,1] with |p + t*delta - c| <= r, if any. p starts outside.
inline std::optional<double> ray_circle_entry(const Vec2& p, const Vec2& delta, const Vec2& c,
                                              double r) {
    Vec2 rel = p - c;
    double a = delta.norm_sq();
    if (a == 0.0) return std::nullopt;
    double b = 2.0 * rel.dot(delta);
    double c0 = rel.norm_sq() - r * r;
    double disc = b * b - 4.0 * a * c0;
    if (disc < 0.0) return std::nullopt;
    double t = (-b - std::sqrt(disc)) / (2.0 * a);
    if (t < 0.0 || t > 1.0) return std::nullopt;
    return t;
}

// Earliest t in [0,1] at which a disc of `radius` sweeping along delta touches
// the rectangle (entry into the Minkowski-inflated rounded rectangle).
inline std::optional<double> swept_disc_rect_entry(const Vec2& p, const Vec2& delta,
                                                   const RectObstacle& o, double radius) {
    std::optional<double> best;
    auto consider = [&](std::optional<double> t) {
        if (t && (!best || *t < *best)) best = t;
    };
    consider(ray_aabb_entry(p, delta, {o.min_corner.x - radius, o.min_corner.y},
                            {o.max_corner.x + radius, o.max_corner.y}));
    consider(ray_aabb_entry(p, delta, {o.min_corner.x, o.min_corner.y - radius},
                            {o.max_corner.x, o.max_corner.y + radius}));
    consider(ray_circle_entry(p, delta, o.min_corner, radius));
    consider(ray_circle_entry(p, delta, o.max_corner, radius));
    consider(ray_circle_entry(p, delta, {o.min_corner.x, o.max_corner.y}, radius));
    consider(ray_circle_entry(p, delta, {o.max_corner.x, o.min_corner.y}, radius));
    return best;
}

// Earliest t > 0 at which the disc center leaves the wall-clear interior box.
inline double wall_exit_t(const Vec2& p, const Vec2& delta, const Arena& arena, double radius) {
    double t = std::numeric_limits<double>::infinity();
    if (delta.x > 0.0) t = std::min(t, (arena.width_mm - radius - p.x) / delta.x);
    if (delta.x < 0.0) t = std::min(t, (radius - p.x) / delta.x);
    if (delta.y > 0.0) t = std::min(t, (arena.height_mm - radius - p.y) / delta.y);
    if (delta.y < 0.0) t = std::min(t, (radius - p.y) / delta.y);
    return t;
}

}  // namespace detail

// Moves a disc of the given radius from p along `heading` by `dist`, clipping at
// the first contact with an obstacle or wall. The returned position is always
// collision-free; the agent does not slide within the step.
inline Vec2 clip_move(const Vec2& p, double heading_rad, double dist, double radius,
                      const Arena& arena) {
    if (dist <= 0.0) return p;
    Vec2 dir = unit_from_heading(heading_rad);
    Vec2 delta = dir * dist;
    double t_hit = detail::wall_exit_t(p, delta, arena, radius);
    for (const auto& o : arena.obstacles) {
        auto t = detail::swept_disc_rect_entry(p, delta, o, radius);
        if (t && *t < t_hit) t_hit = *t;
    }
    double move_len = dist;
    if (t_hit < 1.0) move_len = std::max(0.0, t_hit * dist - 1e-3);
    Vec2 cand = p + dir * move_len;
    // Contact is computed exactly; the loop only absorbs last-ulp rounding.
    while (move_len > 0.0 && in_collision(cand, radius, arena)) {
        move_len = move_len > 1e-6 ? move_len * 0.5 : 0.0;
        cand = p + dir * move_len;
    }
    return cand;
}

struct EnvStepResult {
    std::vector<Observation> observations;
    std::vector<RewardBreakdown> rewards;  // one per pursuer; zero if already captured
    bool done = false;
    bool success = false;
    bool timeout = false;
    std::vector<int> newly_captured;
};

// The pursuit Markov game. One instance is owned by one episode runner;
// independent episodes use independent instances and seeds.
class PursuitEnv {
public:
    PursuitEnv(const Arena& arena, const ScenarioParams& params,
               const EvaderParams& evader_params = {})
        : arena_(&arena), params_(params), evader_params_(evader_params), rng_(0) {
        params_.validate();
    }

    std::vector<Observation> reset(std::uint64_t seed) {
        rng_ = RandomStream(seed);
        pursuers_.assign(params_.n_pursuers, AgentState{});
        std::vector<Vec2> placed;
        for (auto& p : pursuers_) {
            p.position = sample_spawn(arena_->pursuer_spawn, params_.radius_p_mm, placed,
                                      *arena_, rng_);
            p.heading_rad = rng_.uniform_angle();
            p.captured = false;
            placed.push_back(p.position);
        }
        evader_.position =
            sample_spawn(arena_->evader_spawn, params_.radius_e_mm, placed, *arena_, rng_);
        evader_.heading_rad = rng_.uniform_angle();
        evader_.captured = false;
        step_count_ = 0;
        return all_observations();
    }

    // Advances one timestep. `headings` holds one commanded heading per
    // uncaptured pursuer, in ascending pursuer index order.
    EnvStepResult step(std::span<const double> headings) {
        std::size_t expected = 0;
        for (const auto& p : pursuers_)
            if (!p.captured) ++expected;
        if (headings.size() != expected)
            throw SimError("invalid command: expected " + std::to_string(expected) +
                           " headings, got " + std::to_string(headings.size()));
        for (double h : headings)
            if (!std::isfinite(h)) throw SimError("invalid command: non-finite heading");

        EnvStepResult result;
        if (expected == 0) {
            // Terminal state; nothing moves.
            result.observations = all_observations();
            result.rewards.assign(pursuers_.size(), RewardBreakdown{});
            result.done = true;
            result.success = true;
            return result;
        }

        const std::vector<AgentState> prev_pursuers = pursuers_;
        const AgentState prev_evader = evader_;

        // All agents decide from the pre-step snapshot, then move simultaneously.
        double evader_heading = evader_.heading_rad;
        if (params_.evader == EvaderMode::kEscape) evader_heading = evader_policy();
        std::size_t next_heading = 0;
        for (auto& p : pursuers_) {
            if (p.captured) continue;
            p.heading_rad = wrap_angle(headings[next_heading++]);
            p.position = clip_move(p.position, p.heading_rad, params_.v_p_mm_s * params_.dt_s,
                                   params_.radius_p_mm, *arena_);
        }
        if (params_.evader == EvaderMode::kEscape) {
            evader_.heading_rad = evader_heading;
            evader_.position = clip_move(evader_.position, evader_.heading_rad,
                                         params_.v_e_mm_s * params_.dt_s, params_.radius_e_mm,
                                         *arena_);
        }

        // Capture flags from post-move positions.
        for (std::size_t i = 0; i < pursuers_.size(); ++i) {
            bool in_range =
                (pursuers_[i].position - evader_.position).norm() < params_.d_capture_mm;
            if (params_.capture == CaptureSemantics::kSticky) {
                if (in_range && !pursuers_[i].captured) {
                    pursuers_[i].captured = true;
                    result.newly_captured.push_back(static_cast<int>(i));
                }
            } else {
                if (in_range != pursuers_[i].captured) {
                    if (in_range) result.newly_captured.push_back(static_cast<int>(i));
                    pursuers_[i].captured = in_range;
                }
            }
        }

        ++step_count_;
        result.rewards.resize(pursuers_.size());
        for (std::size_t i = 0; i < pursuers_.size(); ++i) {
            if (prev_pursuers[i].captured) continue;  // no longer acting
            result.rewards[i] = compute_reward(prev_pursuers, prev_evader, static_cast<int>(i));
        }

        bool all_captured = true;
        for (const auto& p : pursuers_)
            all_captured = all_captured && p.captured;
        result.success = all_captured;
        result.timeout = !all_captured && step_count_ >= params_.max_steps;
        result.done = result.success || result.timeout;
        result.observations = all_observations();
        return result;
    }

    Observation build_observation(int i) const {
        const AgentState& self = pursuers_[static_cast<std::size_t>(i)];
        Observation obs;
        ObstacleField field = obstacle_field_for(i);
        NearestHit hit = field.nearest(self.position);
        obs.d_o_mm = hit.distance_mm;
        obs.phi_o_rad = bearing(self, hit.point);
        obs.d_e_mm = (evader_.position - self.position).norm();
        obs.phi_e_rad = bearing(self, evader_.position);
        for (std::size_t j = 0; j < pursuers_.size(); ++j) {
            if (static_cast<int>(j) == i || pursuers_[j].captured) continue;
            double d = (pursuers_[j].position - self.position).norm();
            if (d <= params_.d_sense_mm)
                obs.neighbors.push_back({d, bearing(self, pursuers_[j].position)});
        }
        std::stable_sort(obs.neighbors.begin(), obs.neighbors.end(),
                         [](const NeighborObs& a, const NeighborObs& b) { return a.d_mm < b.d_mm; });
        return obs;
    }

    // Virtual forces for pursuer i under the given parameters.
    ForceSet compute_forces(int i, const ApfParams& apf) const {
        const AgentState& self = pursuers_[static_cast<std::size_t>(i)];
        Vec2 f_a = attractive_force(self.position, evader_.position);
        ObstacleField field = obstacle_field_for(i);
        NearestHit hit = field.nearest(self.position);
        Vec2 f_r = repulsive_force(self.position, hit.point, apf.eta, apf.rho0_mm);
        std::vector<Vec2> neighbors;
        for (std::size_t j = 0; j < pursuers_.size(); ++j) {
            if (static_cast<int>(j) == i || pursuers_[j].captured) continue;
            if ((pursuers_[j].position - self.position).norm() <= params_.d_sense_mm)
                neighbors.push_back(pursuers_[j].position);
        }
        Vec2 f_in = interindividual_force(self.position, neighbors, apf.lambda_mm);
        return make_force_set(f_a, f_r, f_in);
    }

    // Deterministic escape heading for the evader (pre-step state).
    double evader_policy() const {
        Vec2 pursuer_rep{0.0, 0.0};
        for (const auto& p : pursuers_) {
            Vec2 away = evader_.position - p.position;
            double d = away.norm();
            if (d == 0.0 || d > evader_params_.sense_mm) continue;
            pursuer_rep = pursuer_rep + away * (1.0 / (d * d * d));
        }
        Vec2 total{0.0, 0.0};
        if (!pursuer_rep.is_zero()) {
            Vec2 u = pursuer_rep * (1.0 / pursuer_rep.norm());
            Vec2 t1 = u.perp_ccw();
            Vec2 t2 = -t1;
            total = u + evader_params_.tangential_bias * (gap_size(t1) >= gap_size(t2) ? t1 : t2);
        }
        NearestHit hit = nearest_obstacle_point(evader_.position, *arena_);
        if (hit.distance_mm <= evader_params_.rho0_mm && hit.distance_mm > 0.0)
            total = total + repulsive_force(evader_.position, hit.point, evader_params_.eta,
                                            evader_params_.rho0_mm);
        if (total.is_zero()) return evader_.heading_rad;
        return total.heading();
    }

    const Arena& arena() const { return *arena_; }
    const ScenarioParams& params() const { return params_; }
    const std::vector<AgentState>& pursuers() const { return pursuers_; }
    const AgentState& evader() const { return evader_; }
    int step_count() const { return step_count_; }
    int uncaptured_count() const {
        int n = 0;
        for (const auto& p : pursuers_)
            if (!p.captured) ++n;
        return n;
    }

private:
    std::vector<Observation> all_observations() const {
        std::vector<Observation> obs;
        obs.reserve(pursuers_.size());
        for (std::size_t i = 0; i < pursuers_.size(); ++i)
            obs.push_back(build_observation(static_cast<int>(i)));
        return obs;
    }

    ObstacleField obstacle_field_for(int i) const {
        std::vector<Vec2> captured;
        for (std::size_t j = 0; j < pursuers_.size(); ++j)
            if (static_cast<int>(j) != i && pursuers_[j].captured)
                captured.push_back(pursuers_[j].position);
        return ObstacleField(*arena_, std::move(captured), params_.radius_p_mm);
    }

    double bearing(const AgentState& self, const Vec2& target) const {
        Vec2 rel = target - self.position;
        if (rel.is_zero()) return 0.0;
        return wrap_angle(rel.heading() - self.heading_rad);
    }

    // Free-space clearance at a probe point along a tangent direction; blocked
    // probes rank lowest.
    double gap_size(const Vec2& dir) const {
        Vec2 probe = evader_.position + dir * evader_params_.probe_mm;
        if (!arena_->inside(probe)) return -1.0;
        for (const auto& o : arena_->obstacles)
            if (o.strictly_contains(probe)) return -1.0;
        return nearest_obstacle_point(probe, *arena_).distance_mm;
    }

    RewardBreakdown compute_reward(const std::vector<AgentState>& prev_pursuers,
                                   const AgentState& prev_evader, int i) const {
        const AgentState& now = pursuers_[static_cast<std::size_t>(i)];
        const AgentState& before = prev_pursuers[static_cast<std::size_t>(i)];
        RewardBreakdown r;
        if (now.captured && !before.captured) r.r_main = 20.0;
        double turn = std::abs(wrap_angle(now.heading_rad - before.heading_rad));
        if (turn > deg_to_rad(45.0)) r.r_time = -5.0;
        for (std::size_t j = 0; j < pursuers_.size(); ++j) {
            if (static_cast<int>(j) == i) continue;
            if ((pursuers_[j].position - now.position).norm() < 2.0 * params_.radius_p_mm) {
                r.r_tm = -20.0;
                break;
            }
        }
        double d_o = obstacle_field_for(i).nearest(now.position).distance_mm;
        if (d_o < params_.radius_p_mm)
            r.r_o = -20.0;
        else if (d_o < 1.5 * params_.radius_p_mm)
            r.r_o = -2.0;
        double d_e_now = (evader_.position - now.position).norm();
        double d_e_prev = (prev_evader.position - before.position).norm();
        r.r_pot = params_.gamma * shaping_potential(d_e_now) - shaping_potential(d_e_prev);
        return r;
    }

    const Arena* arena_;
    ScenarioParams params_;
    EvaderParams evader_params_;
    RandomStream rng_;
    std::vector<AgentState> pursuers_;
    AgentState evader_;
    int step_count_ = 0;
};

// ---------------------------------------------------------------------------
// Trajectory export
// ---------------------------------------------------------------------------

struct TrajectoryRow {
    int step = 0;
    int agent_id = 0;
    std::string role;  // "pursuer" | "evader"
    Vec2 position;
    double heading_rad = 0.0;
    bool captured = false;
    RewardBreakdown reward;
};

class TrajectoryRecorder {
public:
    // Records the current env state; rewards are zero for the initial state.
    void record(const PursuitEnv& env, std::span<const RewardBreakdown> rewards = {}) {
        const auto& pursuers = env.pursuers();
        for (std::size_t i = 0; i < pursuers.size(); ++i) {
            TrajectoryRow row;
            row.step = env.step_count();
            row.agent_id = static_cast<int>(i);
            row.role = "pursuer";
            row.position = pursuers[i].position;
            row.heading_rad = pursuers[i].heading_rad;
            row.captured = pursuers[i].captured;
            if (i < rewards.size()) row.reward = rewards[i];
            rows_.push_back(std::move(row));
        }
        TrajectoryRow ev;
        ev.step = env.step_count();
        ev.agent_id = static_cast<int>(pursuers.size());
        ev.role = "evader";
        ev.position = env.evader().position;
        ev.heading_rad = env.evader().heading_rad;
        rows_.push_back(std::move(ev));
    }

    const std::vector<TrajectoryRow>& rows() const { return rows_; }

    void write_csv(std::ostream& out) const {
        out << "step,agent_id,role,x_mm,y_mm,heading_rad,captured,"
               "r_main,r_time,r_tm,r_o,r_pot\n";
        for (const auto& r : rows_) {
            out << r.step << ',' << r.agent_id << ',' << r.role << ','
                << format_double(r.position.x) << ',' << format_double(r.position.y) << ','
                << format_double(r.heading_rad) << ',' << (r.captured ? 1 : 0) << ','
                << format_double(r.reward.r_main) << ',' << format_double(r.reward.r_time) << ','
                << format_double(r.reward.r_tm) << ',' << format_double(r.reward.r_o) << ','
                << format_double(r.reward.r_pot) << '\n';
        }
    }

private:
    std::vector<TrajectoryRow> rows_;
};

}  // namespace dacoop
