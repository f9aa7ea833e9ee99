#include "seren/agents.hpp"

#include <algorithm>
#include <stdexcept>

namespace seren {

namespace {

double step_size(const StepSchedule& schedule, QTable& visits, int r, int c) {
    if (!schedule.robbins_monro) return schedule.constant;
    visits(r, c) += 1.0;
    return schedule.harmonic_scale / visits(r, c);
}

}  // namespace

ExploiterAgent::ExploiterAgent(int member_count, int n_states, int n_actions, double gamma,
                               double lr, double mask)
    : critic(member_count, n_states, n_actions), discount(gamma), learning_rate(lr),
      mask_fraction(mask) {
    if (!(mask > 0.0 && mask <= 1.0))
        throw std::invalid_argument("ExploiterAgent: mask_fraction must lie in (0, 1]");
    visit_counts_.assign(static_cast<std::size_t>(member_count),
                         QTable(n_states, n_actions, 0.0));
}

int exploiter_act(const ExploiterAgent& agent, int s) {
    int best = 0;
    double best_v = ensemble_mean(agent.critic, s, 0);
    for (int a = 1; a < agent.n_actions(); ++a) {
        double v = ensemble_mean(agent.critic, s, a);
        if (v > best_v) {
            best_v = v;
            best = a;
        }
    }
    return best;
}

void exploiter_update(ExploiterAgent& agent, std::span<const Transition> batch, RngStream& rng) {
    if (batch.empty()) throw std::invalid_argument("exploiter_update: empty batch");
    const bool full_mask = agent.mask_fraction >= 1.0;
    for (const Transition& t : batch) {
        for (int e = 0; e < agent.critic.member_count(); ++e) {
            if (!full_mask && !rng.bernoulli(agent.mask_fraction)) continue;
            QTable& q = agent.critic.members[static_cast<std::size_t>(e)];
            double next_v = 0.0;
            if (!t.done) {
                next_v = q(t.s_next, 0);
                for (int a = 1; a < q.cols(); ++a) next_v = std::max(next_v, q(t.s_next, a));
            }
            double target = t.r_exploit + agent.discount * next_v;
            double alpha = agent.schedule.robbins_monro
                               ? step_size(agent.schedule,
                                           agent.visit_counts_[static_cast<std::size_t>(e)],
                                           t.s, t.a)
                               : agent.learning_rate;
            q(t.s, t.a) += alpha * (target - q(t.s, t.a));
        }
    }
}

int explorer_act(const ExplorerAgent& agent, int s) { return argmax_row(agent.q_xplr, s); }

void explorer_update(ExplorerAgent& agent, std::span<const Transition> batch, double beta) {
    if (batch.empty()) throw std::invalid_argument("explorer_update: empty batch");
    for (const Transition& t : batch) {
        double reward = t.r_xplr + beta * t.g;  // recover -L
        double next_v = 0.0;
        if (!t.done) {
            next_v = agent.q_xplr(t.s_next, 0);
            for (int a = 1; a < agent.q_xplr.cols(); ++a)
                next_v = std::max(next_v, agent.q_xplr(t.s_next, a));
        }
        double target = reward + agent.discount * next_v;
        double alpha = agent.schedule.robbins_monro
                           ? step_size(agent.schedule, agent.visit_counts_, t.s, t.a)
                           : agent.learning_rate;
        agent.q_xplr(t.s, t.a) += alpha * (target - agent.q_xplr(t.s, t.a));
    }
}

int switcher_decide(const SwitchPolicy& p, int s) {
    return p.q_switch(s, 1) >= p.q_switch(s, 0) ? 1 : 0;
}

int switcher_decide_recording(SwitchPolicy& p, int s, int step_index) {
    int g = switcher_decide(p, s);
    if (g == 1) {
        if (!p.intervention_times.empty() && step_index <= p.intervention_times.back())
            throw std::invalid_argument("switcher_decide_recording: step index not increasing");
        p.intervention_times.push_back(step_index);
    }
    return g;
}

void switcher_update(SwitchPolicy& p, std::span<const Transition> batch) {
    if (batch.empty()) throw std::invalid_argument("switcher_update: empty batch");
    for (const Transition& t : batch) {
        double next_v = 0.0;
        if (!t.done) next_v = std::max(p.q_switch(t.s_next, 0), p.q_switch(t.s_next, 1));
        double target = t.r_xplr + p.discount * next_v;
        double alpha = p.schedule.robbins_monro
                           ? step_size(p.schedule, p.visit_counts_, t.s, t.g)
                           : p.learning_rate;
        p.q_switch(t.s, t.g) += alpha * (target - p.q_switch(t.s, t.g));
    }
}

}  // namespace seren
