#pragma once

#include <string>
#include <vector>

#include "seren/agents.hpp"
#include "seren/config.hpp"
#include "seren/metrics.hpp"
#include "seren/table.hpp"

namespace seren {

/// One executed step, kept only when a run is asked to record its trajectory.
struct StepRecord {
    int s = 0;
    int a = 0;
    int s_next = 0;
    double r_env = 0.0;
    int g = 0;

    bool operator==(const StepRecord&) const = default;
};

struct RunResult {
    MetricsLog metrics;
    std::vector<QTable> ensemble;  // exploiter members; baseline runs hold one table
    QTable q_exploiter_mean;
    QTable q_explorer;
    QTable q_switch;
    std::vector<StepRecord> trajectory;
    std::uint64_t buffer_interventions = 0;  // lifetime g = 1 pushes
    std::uint64_t total_steps = 0;
};

/// Runs the two-learner loop: per step the exploiter proposes its greedy
/// action, the exploration policy proposes its own, and the switch decides
/// which one executes. Rewards are computed with the uncertainty cached at
/// collection time; training runs off-policy on uniform replay batches.
/// Deterministic given (config, seed).
RunResult run_seren(const ExperimentConfig& cfg, bool record_trajectory = false);

/// Single Q-learner with epsilon-greedy selection under the shared draw-order
/// contract (coin first, one uniform action draw only when exploring, then
/// the environment draw). The interventions column counts exploratory draws.
RunResult run_baseline_egreedy(const ExperimentConfig& cfg, bool record_trajectory = false);

/// Runs the degenerate configuration (Bernoulli switch, uniform exploration
/// policy, zero cost, no switch/exploration training) and the epsilon-greedy
/// baseline with the same seed; true iff the trajectories and the final
/// exploiter tables are exactly equal.
bool run_degenerate_equivalence(const ExperimentConfig& cfg);

struct SweepResult {
    std::string csv;  // config_id-prefixed aggregate, sorted by (config_id, episode)
    std::vector<std::string> errors;  // one line per failed config
};

/// Runs each config in an isolated worker. Output is deterministic for any
/// parallelism level.
SweepResult sweep(const std::vector<ExperimentConfig>& configs, int parallelism);

}  // namespace seren
