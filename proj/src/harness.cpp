#include "seren/harness.hpp"

#include <atomic>
#include <memory>
#include <stdexcept>
#include <thread>

#include "seren/replay.hpp"
#include "seren/rng.hpp"
#include "seren/uncertainty.hpp"

namespace seren {

namespace {

ExperimentConfig degenerate_overrides(ExperimentConfig cfg) {
    // The degenerate loop must be draw-for-draw comparable with the baseline:
    // two identical ensemble members (mean == member), full masks, no
    // optimistic init, zero switch cost and no warmup.
    cfg.agents.ensemble_size = 2;
    cfg.agents.mask_fraction = 1.0;
    cfg.agents.ensemble_init_value = 0.0;
    cfg.agents.ensemble_init_jitter = 0.0;
    cfg.agents.beta = 0.0;
    cfg.warmup_steps = 0;
    return cfg;
}

QTable ensemble_mean_table(const EnsembleQ& critic) {
    QTable mean(critic.n_states(), critic.n_actions(), 0.0);
    for (int s = 0; s < mean.rows(); ++s)
        for (int a = 0; a < mean.cols(); ++a) mean(s, a) = ensemble_mean(critic, s, a);
    return mean;
}

}  // namespace

RunResult run_seren(const ExperimentConfig& raw_cfg, bool record_trajectory) {
    ExperimentConfig cfg = raw_cfg.mode == RunMode::SerenDegenerate
                               ? degenerate_overrides(raw_cfg)
                               : raw_cfg;
    cfg.validate();
    if (cfg.mode == RunMode::EGreedy)
        throw std::invalid_argument("run_seren: config requests the baseline mode");
    const bool degenerate = cfg.mode == RunMode::SerenDegenerate;

    TabularMdp mdp = cfg.env.build();
    const int n_states = mdp.n_states;
    const int n_actions = mdp.n_actions;
    const int horizon = cfg.effective_horizon(n_states);
    const double beta = cfg.agents.beta;

    RngStream rng(cfg.seed);

    ExploiterAgent exploiter(cfg.agents.ensemble_size, n_states, n_actions,
                             cfg.agents.gamma_exploit, cfg.agents.lr_exploit,
                             cfg.agents.mask_fraction);
    if (cfg.agents.ensemble_init_value > 0.0 || cfg.agents.ensemble_init_jitter > 0.0)
        for (auto& member : exploiter.critic.members)
            for (double& v : member.data()) {
                v = cfg.agents.ensemble_init_value;
                if (cfg.agents.ensemble_init_jitter > 0.0)
                    v += cfg.agents.ensemble_init_jitter * rng.uniform();
            }

    ExplorerAgent explorer(n_states, n_actions, cfg.agents.gamma_explore, cfg.agents.lr_explore);
    SwitchPolicy switcher(n_states, beta, cfg.agents.gamma_switch, cfg.agents.lr_switch);
    VisitCounts counts(n_states, n_actions);

    std::unique_ptr<UncertaintyMeasure> measure;
    if (cfg.uncertainty == UncertaintyKind::Ensemble)
        measure = std::make_unique<EnsembleVarianceMeasure>(&exploiter.critic);
    else
        measure = std::make_unique<CountBonusMeasure>(&counts);

    ReplayBuffer buffer(cfg.buffer_capacity);

    RunResult result;
    result.metrics.config_hash = config_hash(cfg);
    result.metrics.seed = cfg.seed;

    std::uint64_t global_step = 0;
    bool limit_hit = false;
    for (int episode = 1; episode <= cfg.n_episodes && !limit_hit; ++episode) {
        int s = mdp.start_state;
        switcher.begin_episode();
        EpisodeRow row;
        row.episode = episode;
        double uncertainty_sum = 0.0;

        for (int t = 0; t < horizon; ++t) {
            if (cfg.total_step_limit > 0 &&
                global_step >= static_cast<std::uint64_t>(cfg.total_step_limit)) {
                limit_hit = true;
                break;
            }

            // Training runs on the step schedule before acting.
            const bool past_warmup = global_step >= static_cast<std::uint64_t>(cfg.warmup_steps);
            if (past_warmup && buffer.size() > 0) {
                if (global_step % static_cast<std::uint64_t>(cfg.train_freq_exploiter) == 0)
                    exploiter_update(exploiter, buffer.sample(cfg.batch_size, rng), rng);
                if (!degenerate &&
                    global_step % static_cast<std::uint64_t>(cfg.train_freq_explorer_switcher) ==
                        0) {
                    std::vector<Transition> batch = buffer.sample(cfg.batch_size, rng);
                    explorer_update(explorer, batch, beta);
                    switcher_update(switcher, batch);
                }
            }

            int g;
            int a;
            if (!past_warmup) {
                // Warmup overrides only the executed action; the switch still
                // evaluates and its decision is recorded and charged.
                g = switcher_decide_recording(switcher, s, t);
                a = rng.uniform_int(n_actions);
            } else if (degenerate) {
                g = rng.bernoulli(cfg.epsilon) ? 1 : 0;
                a = g == 1 ? rng.uniform_int(n_actions) : exploiter_act(exploiter, s);
            } else {
                int a_exploit = exploiter_act(exploiter, s);
                int a_xplr = explorer_act(explorer, s);
                g = switcher_decide_recording(switcher, s, t);
                a = g == 1 ? a_xplr : a_exploit;
            }

            double l_cached = degenerate ? 0.0 : measure->value(s, a);
            StepOutcome out = step(mdp, s, a, rng);
            RewardPair rewards = compute_rewards(g, out.reward, l_cached, beta);
            buffer.push({s, a, out.next_state, rewards.r_exploit, rewards.r_xplr, g, out.done});
            counts.record(s, a);

            row.episode_return += out.reward;
            row.interventions += g;
            uncertainty_sum += l_cached;
            ++row.steps;
            if (out.done && out.reward > 0.0) row.success = true;
            if (record_trajectory)
                result.trajectory.push_back({s, a, out.next_state, out.reward, g});

            s = out.next_state;
            ++global_step;
            if (out.done) break;
        }

        row.mean_uncertainty = row.steps > 0 ? uncertainty_sum / row.steps : 0.0;
        result.metrics.rows.push_back(row);
    }

    result.metrics.validate();
    result.ensemble = exploiter.critic.members;
    result.q_exploiter_mean = ensemble_mean_table(exploiter.critic);
    result.q_explorer = explorer.q_xplr;
    result.q_switch = switcher.q_switch;
    result.buffer_interventions = buffer.lifetime_interventions();
    result.total_steps = global_step;
    return result;
}

RunResult run_baseline_egreedy(const ExperimentConfig& raw_cfg, bool record_trajectory) {
    ExperimentConfig cfg = raw_cfg;
    cfg.validate();

    TabularMdp mdp = cfg.env.build();
    const int n_states = mdp.n_states;
    const int n_actions = mdp.n_actions;
    const int horizon = cfg.effective_horizon(n_states);

    RngStream rng(cfg.seed);
    QTable q(n_states, n_actions, 0.0);
    ReplayBuffer buffer(cfg.buffer_capacity);

    RunResult result;
    result.metrics.config_hash = config_hash(cfg);
    result.metrics.seed = cfg.seed;

    std::uint64_t global_step = 0;
    bool limit_hit = false;
    for (int episode = 1; episode <= cfg.n_episodes && !limit_hit; ++episode) {
        int s = mdp.start_state;
        EpisodeRow row;
        row.episode = episode;

        for (int t = 0; t < horizon; ++t) {
            if (cfg.total_step_limit > 0 &&
                global_step >= static_cast<std::uint64_t>(cfg.total_step_limit)) {
                limit_hit = true;
                break;
            }

            const bool past_warmup = global_step >= static_cast<std::uint64_t>(cfg.warmup_steps);
            if (past_warmup && buffer.size() > 0 &&
                global_step % static_cast<std::uint64_t>(cfg.train_freq_exploiter) == 0) {
                for (const Transition& tr : buffer.sample(cfg.batch_size, rng)) {
                    double next_v = 0.0;
                    if (!tr.done) {
                        next_v = q(tr.s_next, 0);
                        for (int a = 1; a < n_actions; ++a)
                            next_v = std::max(next_v, q(tr.s_next, a));
                    }
                    double target = tr.r_exploit + cfg.agents.gamma_exploit * next_v;
                    q(tr.s, tr.a) += cfg.agents.lr_exploit * (target - q(tr.s, tr.a));
                }
            }

            // The baseline flips its coin from the very first step; only
            // training waits for the warmup gate.
            int explored = rng.bernoulli(cfg.epsilon) ? 1 : 0;
            int a = explored == 1 ? rng.uniform_int(n_actions) : argmax_row(q, s);

            StepOutcome out = step(mdp, s, a, rng);
            buffer.push({s, a, out.next_state, out.reward, 0.0, explored, out.done});

            row.episode_return += out.reward;
            row.interventions += explored;
            ++row.steps;
            if (out.done && out.reward > 0.0) row.success = true;
            if (record_trajectory)
                result.trajectory.push_back({s, a, out.next_state, out.reward, explored});

            s = out.next_state;
            ++global_step;
            if (out.done) break;
        }

        result.metrics.rows.push_back(row);
    }

    result.metrics.validate();
    result.ensemble = {q};
    result.q_exploiter_mean = q;
    result.q_explorer = QTable(n_states, n_actions, 0.0);
    result.q_switch = QTable(n_states, 2, 0.0);
    result.buffer_interventions = buffer.lifetime_interventions();
    result.total_steps = global_step;
    return result;
}

bool run_degenerate_equivalence(const ExperimentConfig& raw_cfg) {
    ExperimentConfig cfg = degenerate_overrides(raw_cfg);
    cfg.mode = RunMode::SerenDegenerate;
    RunResult game = run_seren(cfg, true);

    ExperimentConfig base = cfg;
    base.mode = RunMode::EGreedy;
    RunResult flat = run_baseline_egreedy(base, true);

    if (game.trajectory != flat.trajectory) return false;
    if (!game.q_exploiter_mean.same_shape(flat.q_exploiter_mean)) return false;
    return game.q_exploiter_mean.data() == flat.q_exploiter_mean.data();
}

SweepResult sweep(const std::vector<ExperimentConfig>& configs, int parallelism) {
    if (configs.empty()) throw std::invalid_argument("sweep: empty config list");
    if (parallelism < 1) throw std::invalid_argument("sweep: parallelism must be >= 1");

    struct Slot {
        MetricsLog metrics;
        std::string error;
        bool failed = false;
    };
    std::vector<Slot> slots(configs.size());
    std::atomic<std::size_t> next{0};

    auto worker = [&]() {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= configs.size()) return;
            try {
                const ExperimentConfig& cfg = configs[i];
                RunResult r = cfg.mode == RunMode::EGreedy ? run_baseline_egreedy(cfg)
                                                           : run_seren(cfg);
                slots[i].metrics = std::move(r.metrics);
            } catch (const std::exception& e) {
                slots[i].failed = true;
                slots[i].error = e.what();
            }
        }
    };

    std::vector<std::thread> pool;
    int n_workers = std::min<std::size_t>(static_cast<std::size_t>(parallelism), configs.size());
    for (int w = 0; w < n_workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();

    SweepResult out;
    out.csv = std::string("config_id,") + kMetricsCsvHeader + "\n";
    for (std::size_t i = 0; i < slots.size(); ++i) {
        if (slots[i].failed) {
            out.errors.push_back("config " + std::to_string(i) + ": " + slots[i].error);
            continue;
        }
        for (const EpisodeRow& r : slots[i].metrics.rows) {
            out.csv += std::to_string(i);
            out.csv += ',';
            out.csv += std::to_string(r.episode);
            out.csv += ',';
            out.csv += format_double(r.episode_return);
            out.csv += ',';
            out.csv += std::to_string(r.steps);
            out.csv += ',';
            out.csv += std::to_string(r.interventions);
            out.csv += ',';
            out.csv += format_double(r.mean_uncertainty);
            out.csv += ',';
            out.csv += r.success ? '1' : '0';
            out.csv += '\n';
        }
    }
    return out;
}

}  // namespace seren
