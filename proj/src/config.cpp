#include "seren/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace seren {

using nlohmann::json;

TabularMdp EnvSpec::build() const {
    if (name == "sparse_grid")
        return make_sparse_grid(width, height, start, goal, slip, discount);
    if (name == "chain") return make_chain(chain_n, small_reward, big_reward, discount);
    if (name == "random")
        return make_random_mdp(n_states, n_actions, reward_sparsity, mdp_seed, discount);
    throw std::invalid_argument("EnvSpec: unknown environment '" + name + "'");
}

void ExperimentConfig::validate() const {
    if (n_episodes < 1) throw std::invalid_argument("config: episodes must be >= 1");
    if (horizon < 0) throw std::invalid_argument("config: horizon must be >= 0");
    if (batch_size == 0 || batch_size > buffer_capacity)
        throw std::invalid_argument("config: need 0 < batch_size <= buffer_capacity");
    if (train_freq_exploiter < 1 || train_freq_explorer_switcher < 1)
        throw std::invalid_argument("config: training frequencies must be >= 1");
    if (warmup_steps < 0) throw std::invalid_argument("config: warmup_steps must be >= 0");
    if (epsilon < 0.0 || epsilon > 1.0)
        throw std::invalid_argument("config: epsilon must lie in [0, 1]");
    if (agents.ensemble_size < 2)
        throw std::invalid_argument("config: ensemble_size must be >= 2");
    if (!(agents.mask_fraction > 0.0 && agents.mask_fraction <= 1.0))
        throw std::invalid_argument("config: mask_fraction must lie in (0, 1]");
    for (double g : {agents.gamma_exploit, agents.gamma_explore, agents.gamma_switch})
        if (!(g >= 0.0 && g < 1.0))
            throw std::invalid_argument("config: discounts must lie in [0, 1)");
    for (double lr : {agents.lr_exploit, agents.lr_explore, agents.lr_switch})
        if (!(lr > 0.0 && lr <= 1.0))
            throw std::invalid_argument("config: learning rates must lie in (0, 1]");
    if (agents.beta < 0.0) throw std::invalid_argument("config: beta must be >= 0");
    if (agents.ensemble_init_value < 0.0 || agents.ensemble_init_jitter < 0.0)
        throw std::invalid_argument("config: ensemble init parameters must be >= 0");
}

int ExperimentConfig::effective_horizon(int n_states) const {
    return horizon > 0 ? horizon : 4 * n_states;
}

namespace {

EnvSpec env_from_json(const json& j) {
    EnvSpec e;
    e.name = j.value("name", e.name);
    e.discount = j.value("discount", e.discount);
    if (e.name == "sparse_grid") {
        e.width = j.value("width", e.width);
        e.height = j.value("height", e.height);
        if (j.contains("start")) e.start = {j["start"][0].get<int>(), j["start"][1].get<int>()};
        if (j.contains("goal")) e.goal = {j["goal"][0].get<int>(), j["goal"][1].get<int>()};
        e.slip = j.value("slip", e.slip);
    } else if (e.name == "chain") {
        e.chain_n = j.value("n", e.chain_n);
        e.small_reward = j.value("small_reward", e.small_reward);
        e.big_reward = j.value("big_reward", e.big_reward);
    } else if (e.name == "random") {
        e.n_states = j.value("n_states", e.n_states);
        e.n_actions = j.value("n_actions", e.n_actions);
        e.reward_sparsity = j.value("reward_sparsity", e.reward_sparsity);
        e.mdp_seed = j.value("mdp_seed", e.mdp_seed);
    } else {
        throw std::invalid_argument("config: unknown environment '" + e.name + "'");
    }
    return e;
}

json env_to_json(const EnvSpec& e) {
    json j;
    j["name"] = e.name;
    j["discount"] = e.discount;
    if (e.name == "sparse_grid") {
        j["width"] = e.width;
        j["height"] = e.height;
        j["start"] = {e.start.x, e.start.y};
        j["goal"] = {e.goal.x, e.goal.y};
        j["slip"] = e.slip;
    } else if (e.name == "chain") {
        j["n"] = e.chain_n;
        j["small_reward"] = e.small_reward;
        j["big_reward"] = e.big_reward;
    } else {
        j["n_states"] = e.n_states;
        j["n_actions"] = e.n_actions;
        j["reward_sparsity"] = e.reward_sparsity;
        j["mdp_seed"] = e.mdp_seed;
    }
    return j;
}

RunMode mode_from_string(const std::string& s) {
    if (s == "seren") return RunMode::Seren;
    if (s == "egreedy") return RunMode::EGreedy;
    if (s == "seren-degenerate") return RunMode::SerenDegenerate;
    throw std::invalid_argument("config: unknown mode '" + s + "'");
}

std::string mode_to_string(RunMode m) {
    switch (m) {
        case RunMode::Seren: return "seren";
        case RunMode::EGreedy: return "egreedy";
        default: return "seren-degenerate";
    }
}

UncertaintyKind uncertainty_from_string(const std::string& s) {
    if (s == "ensemble") return UncertaintyKind::Ensemble;
    if (s == "count") return UncertaintyKind::Count;
    throw std::invalid_argument("config: unknown uncertainty measure '" + s + "'");
}

}  // namespace

ExperimentConfig config_from_json_text(const std::string& text) {
    json j = json::parse(text);
    ExperimentConfig cfg;
    if (j.contains("env")) cfg.env = env_from_json(j["env"]);
    cfg.seed = j.value("seed", cfg.seed);
    cfg.n_episodes = j.value("episodes", cfg.n_episodes);
    cfg.horizon = j.value("horizon", cfg.horizon);
    if (j.contains("mode")) cfg.mode = mode_from_string(j["mode"].get<std::string>());
    if (j.contains("uncertainty"))
        cfg.uncertainty = uncertainty_from_string(j["uncertainty"].get<std::string>());
    cfg.epsilon = j.value("epsilon", cfg.epsilon);
    cfg.buffer_capacity = j.value("buffer_capacity", cfg.buffer_capacity);
    cfg.batch_size = j.value("batch_size", cfg.batch_size);
    cfg.train_freq_exploiter = j.value("train_freq_exploiter", cfg.train_freq_exploiter);
    cfg.train_freq_explorer_switcher =
        j.value("train_freq_explorer_switcher", cfg.train_freq_explorer_switcher);
    cfg.warmup_steps = j.value("warmup_steps", cfg.warmup_steps);
    cfg.total_step_limit = j.value("total_steps", cfg.total_step_limit);
    if (j.contains("agents")) {
        const json& a = j["agents"];
        cfg.agents.gamma_exploit = a.value("gamma_exploit", cfg.agents.gamma_exploit);
        cfg.agents.gamma_explore = a.value("gamma_explore", cfg.agents.gamma_explore);
        cfg.agents.gamma_switch = a.value("gamma_switch", cfg.agents.gamma_switch);
        cfg.agents.ensemble_size = a.value("ensemble_size", cfg.agents.ensemble_size);
        cfg.agents.beta = a.value("beta", cfg.agents.beta);
        cfg.agents.mask_fraction = a.value("mask_fraction", cfg.agents.mask_fraction);
        cfg.agents.lr_exploit = a.value("lr_exploit", cfg.agents.lr_exploit);
        cfg.agents.lr_explore = a.value("lr_explore", cfg.agents.lr_explore);
        cfg.agents.lr_switch = a.value("lr_switch", cfg.agents.lr_switch);
        cfg.agents.ensemble_init_value =
            a.value("ensemble_init_value", cfg.agents.ensemble_init_value);
        cfg.agents.ensemble_init_jitter =
            a.value("ensemble_init_jitter", cfg.agents.ensemble_init_jitter);
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig config_from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return config_from_json_text(buf.str());
}

std::string config_to_canonical_json(const ExperimentConfig& cfg) {
    json j;
    j["env"] = env_to_json(cfg.env);
    j["seed"] = cfg.seed;
    j["episodes"] = cfg.n_episodes;
    j["horizon"] = cfg.horizon;
    j["mode"] = mode_to_string(cfg.mode);
    j["uncertainty"] = cfg.uncertainty == UncertaintyKind::Ensemble ? "ensemble" : "count";
    j["epsilon"] = cfg.epsilon;
    j["buffer_capacity"] = cfg.buffer_capacity;
    j["batch_size"] = cfg.batch_size;
    j["train_freq_exploiter"] = cfg.train_freq_exploiter;
    j["train_freq_explorer_switcher"] = cfg.train_freq_explorer_switcher;
    j["warmup_steps"] = cfg.warmup_steps;
    j["total_steps"] = cfg.total_step_limit;
    j["agents"] = {{"gamma_exploit", cfg.agents.gamma_exploit},
                   {"gamma_explore", cfg.agents.gamma_explore},
                   {"gamma_switch", cfg.agents.gamma_switch},
                   {"ensemble_size", cfg.agents.ensemble_size},
                   {"beta", cfg.agents.beta},
                   {"mask_fraction", cfg.agents.mask_fraction},
                   {"lr_exploit", cfg.agents.lr_exploit},
                   {"lr_explore", cfg.agents.lr_explore},
                   {"lr_switch", cfg.agents.lr_switch},
                   {"ensemble_init_value", cfg.agents.ensemble_init_value},
                   {"ensemble_init_jitter", cfg.agents.ensemble_init_jitter}};
    return j.dump();
}

std::uint64_t config_hash(const ExperimentConfig& cfg) {
    std::string text = config_to_canonical_json(cfg);
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

}  // namespace seren
