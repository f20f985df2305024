#pragma once

#include <chrono>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "dacoop/apf.hpp"
#include "dacoop/common.hpp"
#include "dacoop/env.hpp"
#include "dacoop/net.hpp"
#include "dacoop/replay.hpp"

namespace dacoop {

// Discrete (eta, lambda) action set, eta-major order.
struct ActionGrid {
    std::vector<std::pair<double, double>> pairs;

    std::size_t size() const { return pairs.size(); }

    static ActionGrid default_grid() {
        ActionGrid grid;
        const double etas[] = {0.0, 1.5e8, 3.0e8};
        const double lambdas[] = {30.0, 100.0, 250.0, 500.0, 750.0, 1000.0, 2000.0, 3000.0};
        for (double eta : etas)
            for (double lambda : lambdas) grid.pairs.emplace_back(eta, lambda);
        return grid;
    }
};

struct TrainConfig {
    int episodes = 1500;
    int t_u = 100;  // network updates performed after each episode
    double gamma = 0.99;
    double lr = 3e-4;
    double eps_start = 1.0;
    double eps_end = 0.01;
    int eps_decay_episodes = 4000;
    int target_sync_c = 1000;  // updates between target network syncs
    std::size_t batch_size = 64;
    std::size_t replay_capacity = std::size_t{1} << 17;
    double per_alpha = 0.6;
    double per_beta_start = 0.4;
    double per_beta_end = 1.0;
    double per_epsilon = 1e-3;
    int checkpoint_every = 200;  // episodes; 0 = initial and final only
    int eval_every = 100;        // episodes; 0 = no periodic evaluation
    int eval_episodes = 100;
    bool wall_clock_in_metrics = false;  // keep metrics byte-reproducible by default

    void validate() const {
        if (episodes < 0) throw ConfigError("train: episodes must be >= 0");
        if (t_u < 0) throw ConfigError("train: t_u must be >= 0");
        if (!(gamma > 0.0 && gamma < 1.0)) throw ConfigError("train: gamma must be in (0,1)");
        if (!(lr > 0.0)) throw ConfigError("train: lr must be > 0");
        if (eps_end > eps_start) throw ConfigError("train: eps_end must be <= eps_start");
        if (eps_decay_episodes < 1) throw ConfigError("train: eps_decay_episodes must be >= 1");
        if (target_sync_c < 1) throw ConfigError("train: target_sync_c must be >= 1");
        if (batch_size < 1) throw ConfigError("train: batch_size must be >= 1");
        if (replay_capacity == 0 || (replay_capacity & (replay_capacity - 1)) != 0)
            throw ConfigError("train: replay_capacity must be a power of two");
        if (!(per_alpha >= 0.0)) throw ConfigError("train: per_alpha must be >= 0");
        if (!(per_epsilon > 0.0)) throw ConfigError("train: per_epsilon must be > 0");
        if (checkpoint_every < 0 || eval_every < 0)
            throw ConfigError("train: cadences must be >= 0");
        if (eval_every > 0 && eval_episodes < 1)
            throw ConfigError("train: eval_episodes must be >= 1");
    }
};

inline double epsilon_at(const TrainConfig& cfg, int episode) {
    double eps = cfg.eps_start - (cfg.eps_start - cfg.eps_end) * static_cast<double>(episode) /
                                     static_cast<double>(cfg.eps_decay_episodes);
    return std::max(cfg.eps_end, eps);
}

inline double beta_at(const TrainConfig& cfg, int episode) {
    if (cfg.episodes <= 1) return cfg.per_beta_end;
    double progress = static_cast<double>(episode) / static_cast<double>(cfg.episodes - 1);
    progress = std::clamp(progress, 0.0, 1.0);
    return cfg.per_beta_start + (cfg.per_beta_end - cfg.per_beta_start) * progress;
}

inline int argmax_action(std::span<const double> q) {
    int best = 0;
    for (int i = 1; i < static_cast<int>(q.size()); ++i)
        if (q[static_cast<std::size_t>(i)] > q[static_cast<std::size_t>(best)]) best = i;
    return best;
}

// Epsilon-greedy with ties resolved to the lowest index.
inline int select_action(std::span<const double> q, double eps, RandomStream& rng) {
    double u = rng.uniform();
    if (u < eps) return static_cast<int>(rng.uniform_index(q.size()));
    return argmax_action(q);
}

// Double-Q target: the online network picks the next action, the target
// network values it.
inline double compute_target(const ReplayTransition& tr, const NetworkParams& online,
                             const NetworkParams& target, double gamma) {
    if (tr.done) return tr.reward;
    thread_local ForwardCache online_cache, target_cache;
    q_forward(tr.next_obs, online, online_cache);
    int a_star = argmax_action(online_cache.q);
    q_forward(tr.next_obs, target, target_cache);
    return tr.reward + gamma * target_cache.q[static_cast<std::size_t>(a_star)];
}

// Maps a discrete action index to a commanded heading. DACOOP routes through
// the potential-field layer; the vanilla baseline steers directly.
class ActionAdapter {
public:
    virtual ~ActionAdapter() = default;
    virtual int num_actions() const = 0;
    virtual double heading_for(const PursuitEnv& env, int agent, int action) const = 0;
    virtual double extra_reward(double /*d_e_prev_mm*/, double /*d_e_now_mm*/) const {
        return 0.0;
    }
    virtual std::string name() const = 0;
};

class DacoopAdapter final : public ActionAdapter {
public:
    DacoopAdapter(ActionGrid grid, ApfParams base) : grid_(std::move(grid)), base_(base) {}

    int num_actions() const override { return static_cast<int>(grid_.size()); }

    double heading_for(const PursuitEnv& env, int agent, int action) const override {
        ApfParams p = base_;
        p.eta = grid_.pairs[static_cast<std::size_t>(action)].first;
        p.lambda_mm = grid_.pairs[static_cast<std::size_t>(action)].second;
        ForceSet forces = env.compute_forces(agent, p);
        double current = env.pursuers()[static_cast<std::size_t>(agent)].heading_rad;
        return resolve_heading(forces, current, p.b_threshold);
    }

    std::string name() const override { return "dacoop"; }

    const ActionGrid& grid() const { return grid_; }

private:
    ActionGrid grid_;
    ApfParams base_;
};

struct EpisodeMetrics {
    int episode = 0;
    bool success = false;
    int steps = 0;
    double mean_return = 0.0;
    double loss_mean = 0.0;
    double epsilon = 0.0;
    std::int64_t wall_ms = 0;
};

inline std::string metrics_json(const EpisodeMetrics& m) {
    std::string out = "{\"episode\":" + std::to_string(m.episode);
    out += ",\"success\":";
    out += m.success ? "true" : "false";
    out += ",\"steps\":" + std::to_string(m.steps);
    out += ",\"mean_return\":" + format_double(m.mean_return);
    out += ",\"loss_mean\":" + format_double(m.loss_mean);
    out += ",\"epsilon\":" + format_double(m.epsilon);
    out += ",\"wall_ms\":" + std::to_string(m.wall_ms);
    out += "}";
    return out;
}

struct EvalPoint {
    int episode = 0;
    double success_rate = 0.0;
};

struct TrainHooks {
    std::function<void(int episode, const NetworkParams&, bool is_final)> on_checkpoint;
    std::function<void(const EpisodeMetrics&)> on_metrics;
    std::function<void(const EvalPoint&)> on_eval;
};

struct TrainOutcome {
    NetworkParams final_params;
    NetworkParams best_params;
    double best_eval_success = -1.0;
    int best_eval_episode = -1;
    std::vector<EpisodeMetrics> metrics;
    std::vector<EvalPoint> evals;
    long total_updates = 0;
    long target_syncs = 0;
};

struct TrainSetup {
    const Arena* arena = nullptr;
    ScenarioParams scenario;
    EvaderParams evader;
    const ActionAdapter* adapter = nullptr;
    TrainConfig train;
    std::uint64_t seed = 1;
    NetworkShape shape;  // num_actions is overwritten from the adapter
};

// ---------------------------------------------------------------------------
// Greedy evaluation
// ---------------------------------------------------------------------------

using DecideFn = std::function<double(const PursuitEnv&, int agent, const Observation&)>;

struct EvalStats {
    int episodes = 0;
    int successes = 0;
    double success_rate = 0.0;
    double mean_steps = 0.0;
};

inline EvalStats evaluate_policy(const Arena& arena, const ScenarioParams& scenario,
                                 const EvaderParams& evader, const DecideFn& decide,
                                 int n_episodes, std::uint64_t seed) {
    if (n_episodes < 1) throw ConfigError("empty evaluation");
    PursuitEnv env(arena, scenario, evader);
    EvalStats stats;
    stats.episodes = n_episodes;
    long step_sum = 0;
    for (int ep = 0; ep < n_episodes; ++ep) {
        auto obs = env.reset(RandomStream::derive(seed, static_cast<std::uint64_t>(ep)));
        while (true) {
            std::vector<double> headings;
            headings.reserve(env.pursuers().size());
            for (std::size_t i = 0; i < env.pursuers().size(); ++i) {
                if (env.pursuers()[i].captured) continue;
                headings.push_back(decide(env, static_cast<int>(i), obs[i]));
            }
            EnvStepResult res = env.step(headings);
            obs = std::move(res.observations);
            if (res.done) {
                if (res.success) ++stats.successes;
                step_sum += env.step_count();
                break;
            }
        }
    }
    stats.success_rate = static_cast<double>(stats.successes) / n_episodes;
    stats.mean_steps = static_cast<double>(step_sum) / n_episodes;
    return stats;
}

inline DecideFn make_network_decide(const ActionAdapter& adapter, const NetworkParams& params,
                                    double d_sense_mm, double arena_diag_mm) {
    return [&adapter, &params, d_sense_mm, arena_diag_mm](const PursuitEnv& env, int agent,
                                                          const Observation& obs) {
        EncodedObservation enc = encode_observation(obs, d_sense_mm, arena_diag_mm);
        thread_local ForwardCache cache;
        q_forward(enc, params, cache);
        return adapter.heading_for(env, agent, argmax_action(cache.q));
    };
}

inline DecideFn make_fixed_apf_decide(const ApfParams& apf) {
    return [apf](const PursuitEnv& env, int agent, const Observation&) {
        ForceSet forces = env.compute_forces(agent, apf);
        double current = env.pursuers()[static_cast<std::size_t>(agent)].heading_rad;
        return resolve_heading(forces, current, apf.b_threshold);
    };
}

// ---------------------------------------------------------------------------
// Training (Alg.: per-step epsilon-greedy parameter selection for every
// uncaptured pursuer through a shared network, post-episode prioritized
// updates with double-Q targets and periodic target sync).
// ---------------------------------------------------------------------------

inline TrainOutcome train(const TrainSetup& setup, const TrainHooks& hooks = {}) {
    setup.train.validate();
    setup.scenario.validate();
    if (setup.adapter == nullptr || setup.arena == nullptr)
        throw ConfigError("train: setup is incomplete");
    const TrainConfig& cfg = setup.train;
    const double d_sense = setup.scenario.d_sense_mm;
    const double diag = setup.arena->diagonal();

    NetworkShape shape = setup.shape;
    shape.num_actions = setup.adapter->num_actions();

    RandomStream init_rng(RandomStream::derive(setup.seed, 0));
    RandomStream explore_rng(RandomStream::derive(setup.seed, 1));
    RandomStream sample_rng(RandomStream::derive(setup.seed, 2));

    TrainOutcome out;
    NetworkParams online = NetworkParams::init(shape, init_rng);
    NetworkParams target = clone_into_target(online);
    AdamState adam = AdamState::zeros_like(online);
    Gradients grads = Gradients::zeros_like(online);
    PrioritizedReplay replay(cfg.replay_capacity, cfg.per_alpha);

    PursuitEnv env(*setup.arena, setup.scenario, setup.evader);
    const int n = setup.scenario.n_pursuers;

    if (hooks.on_checkpoint) hooks.on_checkpoint(0, online, cfg.episodes == 0);

    ForwardCache cache;
    std::vector<double> new_priorities(cfg.batch_size);

    for (int ep = 0; ep < cfg.episodes; ++ep) {
        auto t_start = std::chrono::steady_clock::now();
        double eps = epsilon_at(cfg, ep);
        auto obs = env.reset(RandomStream::derive(setup.seed, 1000 + static_cast<std::uint64_t>(ep)));
        std::vector<double> returns(static_cast<std::size_t>(n), 0.0);
        bool success = false;

        std::vector<EncodedObservation> step_enc(static_cast<std::size_t>(n));
        std::vector<int> step_action(static_cast<std::size_t>(n), -1);
        while (true) {
            std::vector<double> headings;
            headings.reserve(static_cast<std::size_t>(n));
            for (int i = 0; i < n; ++i) {
                step_action[static_cast<std::size_t>(i)] = -1;
                if (env.pursuers()[static_cast<std::size_t>(i)].captured) continue;
                step_enc[static_cast<std::size_t>(i)] =
                    encode_observation(obs[static_cast<std::size_t>(i)], d_sense, diag);
                q_forward(step_enc[static_cast<std::size_t>(i)], online, cache);
                int a = select_action(cache.q, eps, explore_rng);
                step_action[static_cast<std::size_t>(i)] = a;
                headings.push_back(setup.adapter->heading_for(env, i, a));
            }
            EnvStepResult res = env.step(headings);
            for (int i = 0; i < n; ++i) {
                int a = step_action[static_cast<std::size_t>(i)];
                if (a < 0) continue;  // captured pursuers generate no transitions
                double reward = res.rewards[static_cast<std::size_t>(i)].total() +
                                setup.adapter->extra_reward(
                                    obs[static_cast<std::size_t>(i)].d_e_mm,
                                    res.observations[static_cast<std::size_t>(i)].d_e_mm);
                ReplayTransition tr;
                tr.obs = std::move(step_enc[static_cast<std::size_t>(i)]);
                tr.action = a;
                tr.reward = reward;
                tr.next_obs = encode_observation(res.observations[static_cast<std::size_t>(i)],
                                                 d_sense, diag);
                tr.done = env.pursuers()[static_cast<std::size_t>(i)].captured || res.done;
                replay.push(std::move(tr));
                returns[static_cast<std::size_t>(i)] += reward;
            }
            obs = std::move(res.observations);
            if (res.done) {
                success = res.success;
                break;
            }
        }

        double loss_mean = 0.0;
        if (replay.size() >= cfg.batch_size && cfg.t_u > 0) {
            double beta = beta_at(cfg, ep);
            double loss_acc = 0.0;
            for (int u = 0; u < cfg.t_u; ++u) {
                SampledBatch batch = replay.sample(cfg.batch_size, beta, sample_rng);
                grads.clear();
                double loss_sum = 0.0;
                for (std::size_t k = 0; k < batch.indices.size(); ++k) {
                    const ReplayTransition& tr = replay.at(batch.indices[k]);
                    double y = compute_target(tr, online, target, cfg.gamma);
                    q_forward(tr.obs, online, cache);
                    double td = y - cache.q[static_cast<std::size_t>(tr.action)];
                    double w = batch.is_weights[k];
                    loss_sum += w * 0.5 * td * td;
                    q_backward(tr.obs, online, cache, tr.action, td, w, grads);
                    new_priorities[k] = std::abs(td) + cfg.per_epsilon;
                }
                double loss = loss_sum / static_cast<double>(cfg.batch_size);
                if (!std::isfinite(loss))
                    throw NumericError("non-finite loss at episode " + std::to_string(ep) +
                                       ", update " + std::to_string(u));
                grads.scale(1.0 / static_cast<double>(cfg.batch_size));
                adam_step(online, grads, adam, cfg.lr);
                for (std::size_t k = 0; k < batch.indices.size(); ++k)
                    replay.update_priority(batch.indices[k], new_priorities[k]);
                ++out.total_updates;
                if (out.total_updates % cfg.target_sync_c == 0) {
                    target = clone_into_target(online);
                    ++out.target_syncs;
                }
                loss_acc += loss;
            }
            loss_mean = loss_acc / static_cast<double>(cfg.t_u);
        }

        EpisodeMetrics m;
        m.episode = ep;
        m.success = success;
        m.steps = env.step_count();
        double ret = 0.0;
        for (double r : returns) ret += r;
        m.mean_return = ret / static_cast<double>(n);
        m.loss_mean = loss_mean;
        m.epsilon = eps;
        if (cfg.wall_clock_in_metrics) {
            m.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                            std::chrono::steady_clock::now() - t_start)
                            .count();
        }
        out.metrics.push_back(m);
        if (hooks.on_metrics) hooks.on_metrics(m);

        if (cfg.checkpoint_every > 0 && (ep + 1) % cfg.checkpoint_every == 0 &&
            hooks.on_checkpoint)
            hooks.on_checkpoint(ep + 1, online, false);

        if (cfg.eval_every > 0 && (ep + 1) % cfg.eval_every == 0) {
            DecideFn decide = make_network_decide(*setup.adapter, online, d_sense, diag);
            EvalStats stats = evaluate_policy(
                *setup.arena, setup.scenario, setup.evader, decide, cfg.eval_episodes,
                RandomStream::derive(setup.seed, 3000000 + static_cast<std::uint64_t>(ep)));
            EvalPoint point{ep + 1, stats.success_rate};
            out.evals.push_back(point);
            if (hooks.on_eval) hooks.on_eval(point);
            if (stats.success_rate > out.best_eval_success) {
                out.best_eval_success = stats.success_rate;
                out.best_eval_episode = ep + 1;
                out.best_params = online;
            }
        }
    }

    if (cfg.episodes > 0 && hooks.on_checkpoint) hooks.on_checkpoint(cfg.episodes, online, true);
    out.final_params = std::move(online);
    if (out.best_eval_episode < 0) out.best_params = out.final_params;
    return out;
}

}  // namespace dacoop
