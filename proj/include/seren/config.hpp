#pragma once

#include <cstdint>
#include <string>

#include "seren/mdp.hpp"

namespace seren {

enum class RunMode { Seren, EGreedy, SerenDegenerate };
enum class UncertaintyKind { Ensemble, Count };

/// Environment selector: a named builder plus its parameters.
struct EnvSpec {
    std::string name = "sparse_grid";  // sparse_grid | chain | random

    // sparse_grid
    int width = 8;
    int height = 8;
    Cell start{0, 0};
    Cell goal{7, 7};
    double slip = 0.0;

    // chain
    int chain_n = 5;
    double small_reward = 0.005;
    double big_reward = 1.0;

    // random
    int n_states = 5;
    int n_actions = 2;
    double reward_sparsity = 0.5;
    std::uint64_t mdp_seed = 0;

    double discount = 0.99;

    TabularMdp build() const;
};

struct AgentConfig {
    double gamma_exploit = 0.99;
    double gamma_explore = 0.05;
    double gamma_switch = 0.05;  // shares the explorer's myopia by default
    int ensemble_size = 5;
    double beta = 10.0;
    double mask_fraction = 0.8;
    double lr_exploit = 0.1;
    double lr_explore = 0.1;
    double lr_switch = 0.1;
    /// Ensemble members start at ensemble_init_value plus an independent
    /// per-member, per-entry jitter uniform in [0, ensemble_init_jitter].
    /// The optimistic constant drives systematic coverage (untried entries
    /// keep it, trained entries decay below it) and the jitter keeps the
    /// member disagreement signal alive. Jitter 0 consumes no draws.
    double ensemble_init_value = 1.0;
    double ensemble_init_jitter = 0.01;
};

struct ExperimentConfig {
    EnvSpec env;
    std::uint64_t seed = 0;
    int n_episodes = 150;
    int horizon = 0;  // 0 means the 4 * n_states default
    RunMode mode = RunMode::Seren;
    UncertaintyKind uncertainty = UncertaintyKind::Ensemble;
    double epsilon = 0.1;  // baseline / degenerate switch probability
    AgentConfig agents;
    std::size_t buffer_capacity = 200000;
    std::size_t batch_size = 256;
    int train_freq_exploiter = 8;
    int train_freq_explorer_switcher = 4;
    int warmup_steps = 500;
    int total_step_limit = 0;  // 0 = unlimited; equivalence runs cap steps

    void validate() const;
    int effective_horizon(int n_states) const;
};

ExperimentConfig config_from_json_text(const std::string& text);
ExperimentConfig config_from_file(const std::string& path);
std::string config_to_canonical_json(const ExperimentConfig& cfg);

/// FNV-1a hash of the canonical serialisation; identifies a run in metadata.
std::uint64_t config_hash(const ExperimentConfig& cfg);

}  // namespace seren
