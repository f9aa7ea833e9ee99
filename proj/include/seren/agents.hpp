#pragma once

#include <span>
#include <vector>

#include "seren/rng.hpp"
#include "seren/table.hpp"
#include "seren/uncertainty.hpp"

namespace seren {

/// One step record as stored in the replay buffer. r_xplr already folds in
/// the cached uncertainty and the intervention cost: r_xplr = -L - beta * g.
struct Transition {
    int s = 0;
    int a = 0;
    int s_next = 0;
    double r_exploit = 0.0;
    double r_xplr = 0.0;
    int g = 0;  // 1 when the exploration policy supplied the executed action
    bool done = false;
};

struct RewardPair {
    double r_exploit = 0.0;
    double r_xplr = 0.0;
};

/// The executed action's environment reward goes to the exploiter unchanged;
/// the exploration reward is the negated cached uncertainty minus the
/// intervention cost when the switch fired.
inline RewardPair compute_rewards(int g, double env_reward, double l_cached, double beta) {
    return {env_reward, -l_cached - beta * static_cast<double>(g)};
}

/// Step-size rule: constant alpha, or the Robbins-Monro harmonic schedule
/// c / visits(s, a) used by the convergence checks.
struct StepSchedule {
    bool robbins_monro = false;
    double constant = 0.1;
    double harmonic_scale = 1.0;
};

/// Greedy learner over the environment reward, backed by an ensemble of
/// independently masked Q tables. Greedy actions maximise the ensemble mean;
/// ties resolve to the lowest action index.
struct ExploiterAgent {
    EnsembleQ critic;
    double discount = 0.99;
    double learning_rate = 0.1;
    double mask_fraction = 0.8;
    StepSchedule schedule;

    ExploiterAgent() = default;
    ExploiterAgent(int member_count, int n_states, int n_actions, double gamma, double lr,
                   double mask);

    int n_actions() const { return critic.n_actions(); }

  private:
    friend void exploiter_update(ExploiterAgent&, std::span<const Transition>, RngStream&);
    std::vector<QTable> visit_counts_;  // per member, only under Robbins-Monro
};

int exploiter_act(const ExploiterAgent& agent, int s);

/// Applies the tabular TD update to every member on an independently drawn
/// mask_fraction subset of the batch (Bernoulli per member and transition).
/// When mask_fraction >= 1 no mask draws are consumed. Transitions are used
/// identically whichever policy produced them.
void exploiter_update(ExploiterAgent& agent, std::span<const Transition> batch, RngStream& rng);

/// Learner over the negated uncertainty with a small discount.
struct ExplorerAgent {
    QTable q_xplr;
    double discount = 0.05;
    double learning_rate = 0.1;
    StepSchedule schedule;

    ExplorerAgent() = default;
    ExplorerAgent(int n_states, int n_actions, double gamma, double lr)
        : q_xplr(n_states, n_actions, 0.0), discount(gamma), learning_rate(lr),
          visit_counts_(n_states, n_actions, 0.0) {}

  private:
    friend void explorer_update(ExplorerAgent&, std::span<const Transition>, double);
    QTable visit_counts_;
};

int explorer_act(const ExplorerAgent& agent, int s);

/// TD update on the -L component of the stored reward (r_xplr + beta * g);
/// the intervention cost belongs to the switcher, not the exploration policy.
void explorer_update(ExplorerAgent& agent, std::span<const Transition> batch, double beta);

/// Binary decision head: at every state, keep control with the exploiter (0)
/// or hand it to the exploration policy (1) at cost beta. A value tie
/// resolves to intervening.
struct SwitchPolicy {
    QTable q_switch;  // (state, decision in {0, 1})
    double beta = 10.0;
    double discount = 0.05;
    double learning_rate = 0.1;
    StepSchedule schedule;
    std::vector<int> intervention_times;  // step indices of this episode, strictly increasing

    SwitchPolicy() = default;
    SwitchPolicy(int n_states, double beta_, double gamma, double lr)
        : q_switch(n_states, 2, 0.0), beta(beta_), discount(gamma), learning_rate(lr),
          visit_counts_(n_states, 2, 0.0) {}

    void begin_episode() { intervention_times.clear(); }

  private:
    friend void switcher_update(SwitchPolicy&, std::span<const Transition>);
    QTable visit_counts_;
};

/// Pure decision: 1 iff q(s, 1) >= q(s, 0).
int switcher_decide(const SwitchPolicy& p, int s);

/// Decision taken inside a run; an intervention appends the step index.
int switcher_decide_recording(SwitchPolicy& p, int s, int step_index);

/// TD update over the binary decision: the max over {continue, intervene} at
/// the next state realises the optimal-stopping backup.
void switcher_update(SwitchPolicy& p, std::span<const Transition> batch);

}  // namespace seren
