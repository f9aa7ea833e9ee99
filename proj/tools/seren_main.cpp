#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "seren/config.hpp"
#include "seren/dp_oracle.hpp"
#include "seren/harness.hpp"
#include "seren/linear_fa.hpp"
#include "seren/metrics.hpp"

namespace {

using nlohmann::json;

struct CommonOpts {
    std::string config_path;
    std::optional<std::int64_t> seed;
    std::string out_dir = ".";
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path, "Path to the JSON config")->required();
    cmd->add_option("--seed", opts.seed, "Seed override");
    cmd->add_option("--out", opts.out_dir, "Output directory");
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
}

json table_to_json(const seren::QTable& q) {
    json rows = json::array();
    for (int s = 0; s < q.rows(); ++s) {
        json row = json::array();
        for (int a = 0; a < q.cols(); ++a) row.push_back(q(s, a));
        rows.push_back(row);
    }
    return rows;
}

json run_tables_json(const seren::ExperimentConfig& cfg, const seren::RunResult& result) {
    json j;
    j["config_hash"] = result.metrics.config_hash;
    j["seed"] = result.metrics.seed;
    j["config"] = json::parse(seren::config_to_canonical_json(cfg));
    j["q_exploiter_mean"] = table_to_json(result.q_exploiter_mean);
    j["q_explorer"] = table_to_json(result.q_explorer);
    j["q_switch"] = table_to_json(result.q_switch);
    json members = json::array();
    for (const auto& m : result.ensemble) members.push_back(table_to_json(m));
    j["ensemble_members"] = members;
    return j;
}

seren::ExperimentConfig load_config(const CommonOpts& opts) {
    seren::ExperimentConfig cfg = seren::config_from_file(opts.config_path);
    if (opts.seed) cfg.seed = static_cast<std::uint64_t>(*opts.seed);
    return cfg;
}

int cmd_train(const CommonOpts& opts, bool baseline) {
    seren::ExperimentConfig cfg = load_config(opts);
    if (baseline) cfg.mode = seren::RunMode::EGreedy;
    seren::RunResult result = cfg.mode == seren::RunMode::EGreedy
                                  ? seren::run_baseline_egreedy(cfg)
                                  : seren::run_seren(cfg);
    std::filesystem::path dir(opts.out_dir);
    std::filesystem::create_directories(dir);
    write_file(dir / "metrics.csv", result.metrics.to_csv());
    write_file(dir / "tables.json", run_tables_json(cfg, result).dump(2) + "\n");
    json summary;
    summary["episodes"] = result.metrics.rows.size();
    summary["total_steps"] = result.total_steps;
    double last_return = result.metrics.rows.empty() ? 0.0
                                                     : result.metrics.rows.back().episode_return;
    summary["final_return"] = last_return;
    summary["metrics_csv"] = (dir / "metrics.csv").string();
    summary["tables_json"] = (dir / "tables.json").string();
    std::cout << summary.dump() << "\n";
    return 0;
}

int cmd_equiv(const CommonOpts& opts) {
    seren::ExperimentConfig cfg = load_config(opts);
    cfg.mode = seren::RunMode::SerenDegenerate;
    bool equal = seren::run_degenerate_equivalence(cfg);
    json j;
    j["equal"] = equal;
    std::cout << j.dump() << "\n";
    return equal ? 0 : 3;
}

seren::SwitchingProblem problem_from_json(const json& j, std::optional<std::int64_t> seed) {
    seren::SwitchingProblem p;
    json env = j.at("env");
    if (seed && env.value("name", std::string()) == "random") env["mdp_seed"] = *seed;
    {
        // Reuse the experiment config plumbing for the env block.
        json wrapper;
        wrapper["env"] = env;
        seren::ExperimentConfig cfg = seren::config_from_json_text(wrapper.dump());
        p.mdp = cfg.env.build();
    }
    p.discount = j.value("discount", p.mdp.discount);
    p.beta = j.value("beta", 1.0);
    p.continue_uses_max = j.value("continue_max_over_actions", false);

    const int n = p.mdp.n_states;
    seren::QTable l(n, p.mdp.n_actions, 1.0);
    if (j.contains("L")) {
        if (j["L"].is_object() && j["L"].contains("constant")) {
            double c = j["L"]["constant"].get<double>();
            for (double& v : l.data()) v = c;
        } else {
            for (int s = 0; s < n; ++s)
                for (int a = 0; a < p.mdp.n_actions; ++a) l(s, a) = j["L"][s][a].get<double>();
        }
    }
    p.l_frozen = l;

    if (j.contains("exploiter_policy") && j["exploiter_policy"].is_array()) {
        p.exploiter_policy = j["exploiter_policy"].get<std::vector<int>>();
    } else {
        seren::TabularMdp control = p.mdp;
        control.discount = p.discount;
        p.exploiter_policy = seren::greedy_policy(seren::solve_mdp_q(control, 1e-10));
    }
    if (j.contains("explorer_policy") && j["explorer_policy"].is_array()) {
        p.explorer_policy = j["explorer_policy"].get<std::vector<int>>();
    } else {
        // Default exploration policy: head for the most uncertain action.
        p.explorer_policy.assign(static_cast<std::size_t>(n), 0);
        for (int s = 0; s < n; ++s) {
            int best = 0;
            for (int a = 1; a < p.mdp.n_actions; ++a)
                if (l(s, a) > l(s, best)) best = a;
            p.explorer_policy[static_cast<std::size_t>(s)] = best;
        }
    }
    p.validate();
    return p;
}

int cmd_dp_solve(const CommonOpts& opts) {
    std::ifstream in(opts.config_path);
    if (!in) throw std::runtime_error("cannot open config file: " + opts.config_path);
    json j = json::parse(in);
    seren::SwitchingProblem p = problem_from_json(j, opts.seed);
    double tol = j.value("tol", 1e-10);
    seren::DpSolution sol = seren::value_iteration(p, tol);
    json out;
    out["value"] = sol.value;
    out["g_star"] = sol.g_star;
    out["iterations"] = sol.iterations;
    out["residual"] = sol.residual;
    std::cout << out.dump() << "\n";
    return 0;
}

int cmd_fa_check(const CommonOpts& opts) {
    std::ifstream in(opts.config_path);
    if (!in) throw std::runtime_error("cannot open config file: " + opts.config_path);
    json j = json::parse(in);
    const int n_instances = j.value("n_instances", 20);
    const int n_states = j.value("n_states", 8);
    const int n_actions = j.value("n_actions", 2);
    const int n_features = j.value("n_features", 3);
    const double gamma = j.value("gamma", 0.9);
    const double beta = j.value("beta", 0.5);
    const double tol = j.value("tol", 1e-10);
    const std::uint64_t base_seed = opts.seed ? static_cast<std::uint64_t>(*opts.seed)
                                              : j.value("seed", 0ULL);

    std::string csv = "seed,approx_error,bound\n";
    for (int i = 0; i < n_instances; ++i) {
        std::uint64_t seed = base_seed + static_cast<std::uint64_t>(i);
        seren::RngStream rng(seed * 977 + 13);
        seren::SwitchingProblem p;
        p.mdp = seren::make_random_mdp(n_states, n_actions, 0.5, seed, gamma);
        p.discount = gamma;
        p.beta = beta;
        p.l_frozen = seren::QTable(n_states, n_actions, 0.0);
        for (double& v : p.l_frozen.data()) v = rng.uniform();
        p.exploiter_policy.resize(static_cast<std::size_t>(n_states));
        p.explorer_policy.resize(static_cast<std::size_t>(n_states));
        for (int s = 0; s < n_states; ++s) {
            p.exploiter_policy[static_cast<std::size_t>(s)] = rng.uniform_int(n_actions);
            p.explorer_policy[static_cast<std::size_t>(s)] = rng.uniform_int(n_actions);
        }
        p.validate();
        seren::FeatureBasis basis(seren::random_orthonormal_features(n_states, n_features, rng),
                                  seren::stationary_weighting_uniform(p.mdp));
        seren::ProjectedSolution sol = seren::projected_fixed_point(p, basis, tol);
        csv += std::to_string(seed) + "," + seren::format_double(sol.approx_error) + "," +
               seren::format_double(sol.bound) + "\n";
    }

    std::filesystem::path dir(opts.out_dir);
    std::filesystem::create_directories(dir);
    write_file(dir / "fa_check.csv", csv);
    std::cout << csv;
    return 0;
}

int cmd_sweep(const CommonOpts& opts, int parallelism) {
    std::ifstream in(opts.config_path);
    if (!in) throw std::runtime_error("cannot open config file: " + opts.config_path);
    json j = json::parse(in);
    if (!j.contains("configs") || !j["configs"].is_array() || j["configs"].empty())
        throw std::runtime_error("sweep config needs a non-empty 'configs' array");
    std::vector<seren::ExperimentConfig> configs;
    for (const json& one : j["configs"]) {
        seren::ExperimentConfig cfg = seren::config_from_json_text(one.dump());
        if (opts.seed) cfg.seed = static_cast<std::uint64_t>(*opts.seed);
        configs.push_back(cfg);
    }
    seren::SweepResult result = seren::sweep(configs, parallelism);
    for (const std::string& err : result.errors) {
        json e;
        e["error"] = err;
        std::cerr << e.dump() << "\n";
    }
    std::filesystem::path dir(opts.out_dir);
    std::filesystem::create_directories(dir);
    write_file(dir / "sweep.csv", result.csv);
    std::cout << result.csv;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Tabular two-learner exploration laboratory"};
    app.require_subcommand(1);

    CommonOpts train_opts, baseline_opts, equiv_opts, dp_opts, fa_opts, sweep_opts;
    int parallelism = 1;

    CLI::App* train = app.add_subcommand("train", "Run one experiment config");
    add_common(train, train_opts);
    CLI::App* baseline = app.add_subcommand("baseline", "Run the epsilon-greedy baseline");
    add_common(baseline, baseline_opts);
    CLI::App* equiv = app.add_subcommand("equiv-check",
                                         "Exact equivalence of the degenerate loop and the baseline");
    add_common(equiv, equiv_opts);
    CLI::App* dp = app.add_subcommand("dp-solve", "Exact switching value and decision rule");
    add_common(dp, dp_opts);
    CLI::App* fa = app.add_subcommand("fa-check", "Projected fixed-point error vs. bound, per seed");
    add_common(fa, fa_opts);
    CLI::App* sw = app.add_subcommand("sweep", "Run a list of configs and aggregate the metrics");
    add_common(sw, sweep_opts);
    sw->add_option("--parallelism", parallelism, "Worker count")->check(CLI::PositiveNumber);

    CLI11_PARSE(app, argc, argv);

    try {
        if (train->parsed()) return cmd_train(train_opts, false);
        if (baseline->parsed()) return cmd_train(baseline_opts, true);
        if (equiv->parsed()) return cmd_equiv(equiv_opts);
        if (dp->parsed()) return cmd_dp_solve(dp_opts);
        if (fa->parsed()) return cmd_fa_check(fa_opts);
        if (sw->parsed()) return cmd_sweep(sweep_opts, parallelism);
    } catch (const std::exception& e) {
        nlohmann::json err;
        err["error"] = e.what();
        std::cerr << err.dump() << "\n";
        return 1;
    }
    return 0;
}
