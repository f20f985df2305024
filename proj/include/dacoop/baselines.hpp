#pragma once

#include <string>
#include <utility>
#include <vector>

#include "dacoop/common.hpp"
#include "dacoop/trainer.hpp"

namespace dacoop {

// 24 absolute reference headings, uniformly spaced over the circle.
struct HeadingActionGrid {
    std::vector<double> headings;

    static HeadingActionGrid default_grid() {
        HeadingActionGrid grid;
        for (int k = 0; k < 24; ++k)
            grid.headings.push_back(wrap_angle(2.0 * kPi * k / 24.0));
        return grid;
    }
};

// Approach bonus of the heading-action baseline; distances in millimeters.
inline double vanilla_reward_bonus(double d_e_prev_mm, double d_e_now_mm) {
    return (d_e_prev_mm - d_e_now_mm) / 200.0;
}

inline double vanilla_step_policy(std::span<const double> q_values, double eps,
                                  const HeadingActionGrid& grid, RandomStream& rng) {
    return grid.headings[static_cast<std::size_t>(select_action(q_values, eps, rng))];
}

// The baseline shares the trainer verbatim; only the action mapping and the
// approach bonus differ.
class VanillaAdapter final : public ActionAdapter {
public:
    explicit VanillaAdapter(HeadingActionGrid grid = HeadingActionGrid::default_grid())
        : grid_(std::move(grid)) {}

    int num_actions() const override { return static_cast<int>(grid_.headings.size()); }

    double heading_for(const PursuitEnv&, int, int action) const override {
        return grid_.headings[static_cast<std::size_t>(action)];
    }

    double extra_reward(double d_e_prev_mm, double d_e_now_mm) const override {
        return vanilla_reward_bonus(d_e_prev_mm, d_e_now_mm);
    }

    std::string name() const override { return "vanilla_d3qn"; }

private:
    HeadingActionGrid grid_;
};

// Distance-scheduled potential-field parameters: both decay linearly to zero
// as the evader gets closer, with a small floor keeping lambda valid.
struct ApfSchedule {
    double eta0 = 3.0e8;
    double lambda0 = 1000.0;
    double d_ref_mm = 2000.0;
    double lambda_min_mm = 1.0;

    void validate() const {
        if (!(d_ref_mm > 0.0)) throw ConfigError("apf_schedule: d_ref must be > 0");
        if (!(lambda_min_mm > 0.0)) throw ConfigError("apf_schedule: lambda_min must be > 0");
        if (eta0 < 0.0 || lambda0 < 0.0)
            throw ConfigError("apf_schedule: initial values must be >= 0");
    }
};

inline std::pair<double, double> scheduled_params(double d_e_mm, const ApfSchedule& schedule) {
    double factor = std::clamp(d_e_mm / schedule.d_ref_mm, 0.0, 1.0);
    return {schedule.eta0 * factor,
            std::max(schedule.lambda_min_mm, schedule.lambda0 * factor)};
}

inline DecideFn make_scheduled_apf_decide(const ApfSchedule& schedule, const ApfParams& base) {
    return [schedule, base](const PursuitEnv& env, int agent, const Observation& obs) {
        auto [eta, lambda] = scheduled_params(obs.d_e_mm, schedule);
        ApfParams p = base;
        p.eta = eta;
        p.lambda_mm = lambda;
        ForceSet forces = env.compute_forces(agent, p);
        double current = env.pursuers()[static_cast<std::size_t>(agent)].heading_rad;
        return resolve_heading(forces, current, p.b_threshold);
    };
}

struct GridSearchResult {
    std::size_t best_index = 0;
    double eta0 = 0.0;
    double lambda0 = 0.0;
    double best_success_rate = 0.0;
    std::vector<double> rates;  // per candidate, in grid order
};

// Evaluates every candidate pair on the same episode seeds and returns the
// best one; ties go to the lower grid index. With `scheduled` the candidates
// parameterize the distance schedule, otherwise they are held fixed.
inline GridSearchResult grid_search_best_init(
    const Arena& arena, const ScenarioParams& scenario, const EvaderParams& evader,
    const ApfParams& base, const std::vector<std::pair<double, double>>& candidates,
    int episodes_per_candidate, std::uint64_t seed, bool scheduled) {
    if (candidates.empty()) throw ConfigError("grid search: no candidates");
    GridSearchResult result;
    result.rates.reserve(candidates.size());
    std::uint64_t eval_seed = RandomStream::derive(seed, 777);
    for (std::size_t c = 0; c < candidates.size(); ++c) {
        DecideFn decide;
        if (scheduled) {
            ApfSchedule schedule;
            schedule.eta0 = candidates[c].first;
            schedule.lambda0 = candidates[c].second;
            decide = make_scheduled_apf_decide(schedule, base);
        } else {
            ApfParams p = base;
            p.eta = candidates[c].first;
            p.lambda_mm = candidates[c].second;
            decide = make_fixed_apf_decide(p);
        }
        EvalStats stats =
            evaluate_policy(arena, scenario, evader, decide, episodes_per_candidate, eval_seed);
        result.rates.push_back(stats.success_rate);
        if (c == 0 || stats.success_rate > result.best_success_rate) {
            result.best_index = c;
            result.best_success_rate = stats.success_rate;
            result.eta0 = candidates[c].first;
            result.lambda0 = candidates[c].second;
        }
    }
    return result;
}

}  // namespace dacoop
