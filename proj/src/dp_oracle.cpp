#include "seren/dp_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace seren {

namespace {

constexpr int kIterationCap = 10'000'000;

double kernel_flow(const TabularMdp& mdp, int s, int a, const std::vector<double>& v) {
    double acc = 0.0;
    auto row = mdp.row(s, a);
    for (int t = 0; t < mdp.n_states; ++t) acc += row[static_cast<std::size_t>(t)] * v[static_cast<std::size_t>(t)];
    return acc;
}

void check_value_shape(const SwitchingProblem& p, const std::vector<double>& v) {
    if (v.size() != static_cast<std::size_t>(p.mdp.n_states))
        throw std::invalid_argument("value vector length must match the state count");
    for (double x : v)
        if (!std::isfinite(x)) throw std::invalid_argument("value vector must be finite");
}

}  // namespace

void SwitchingProblem::validate() const {
    mdp.validate();
    if (!(discount >= 0.0 && discount < 1.0))
        throw std::invalid_argument("SwitchingProblem: discount must lie in [0, 1)");
    if (exploiter_policy.size() != static_cast<std::size_t>(mdp.n_states) ||
        explorer_policy.size() != static_cast<std::size_t>(mdp.n_states))
        throw std::invalid_argument("SwitchingProblem: policy length must match state count");
    for (int s = 0; s < mdp.n_states; ++s) {
        if (exploiter_policy[static_cast<std::size_t>(s)] < 0 ||
            exploiter_policy[static_cast<std::size_t>(s)] >= mdp.n_actions ||
            explorer_policy[static_cast<std::size_t>(s)] < 0 ||
            explorer_policy[static_cast<std::size_t>(s)] >= mdp.n_actions)
            throw std::invalid_argument("SwitchingProblem: policy action out of range");
    }
    if (l_frozen.rows() != mdp.n_states || l_frozen.cols() != mdp.n_actions)
        throw std::invalid_argument("SwitchingProblem: uncertainty table shape mismatch");
    for (int s = 0; s < mdp.n_states; ++s)
        for (int a = 0; a < mdp.n_actions; ++a)
            if (!(l_frozen(s, a) >= 0.0))
                throw std::invalid_argument("SwitchingProblem: uncertainty must be >= 0");
}

std::vector<double> intervention_operator(const SwitchingProblem& p,
                                          const std::vector<double>& v) {
    check_value_shape(p, v);
    std::vector<double> out(v.size());
    for (int s = 0; s < p.mdp.n_states; ++s) {
        int ax = p.explorer_policy[static_cast<std::size_t>(s)];
        out[static_cast<std::size_t>(s)] =
            -p.l_frozen(s, ax) - p.beta + p.discount * kernel_flow(p.mdp, s, ax, v);
    }
    return out;
}

std::vector<double> continue_backup(const SwitchingProblem& p, const std::vector<double>& v) {
    check_value_shape(p, v);
    std::vector<double> out(v.size());
    for (int s = 0; s < p.mdp.n_states; ++s) {
        if (p.continue_uses_max) {
            double best = -std::numeric_limits<double>::infinity();
            for (int a = 0; a < p.mdp.n_actions; ++a)
                best = std::max(best, -p.l_frozen(s, a) + p.discount * kernel_flow(p.mdp, s, a, v));
            out[static_cast<std::size_t>(s)] = best;
        } else {
            int ae = p.exploiter_policy[static_cast<std::size_t>(s)];
            out[static_cast<std::size_t>(s)] =
                -p.l_frozen(s, ae) + p.discount * kernel_flow(p.mdp, s, ae, v);
        }
    }
    return out;
}

std::vector<double> switcher_bellman(const SwitchingProblem& p, const std::vector<double>& v) {
    std::vector<double> intervene = intervention_operator(p, v);
    std::vector<double> keep = continue_backup(p, v);
    for (std::size_t s = 0; s < keep.size(); ++s) keep[s] = std::max(keep[s], intervene[s]);
    return keep;
}

DpSolution value_iteration(const SwitchingProblem& p, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("value_iteration: tol must be positive");
    p.validate();
    const double gamma = p.discount;
    // Stop when one more sweep moves the iterate by at most tol*(1-gamma)/gamma,
    // which pins the result within tol of the fixed point.
    const double stop = gamma > 0.0 ? tol * (1.0 - gamma) / gamma
                                    : std::numeric_limits<double>::infinity();

    DpSolution sol;
    sol.value.assign(static_cast<std::size_t>(p.mdp.n_states), 0.0);
    double change = 0.0;
    for (int k = 0; k < kIterationCap; ++k) {
        std::vector<double> next = switcher_bellman(p, sol.value);
        change = sup_norm_diff(next, sol.value);
        sol.value = std::move(next);
        sol.iterations = k + 1;
        if (change <= stop) {
            sol.residual = gamma > 0.0 ? change * gamma / (1.0 - gamma) : 0.0;
            std::vector<double> intervene = intervention_operator(p, sol.value);
            std::vector<double> keep = continue_backup(p, sol.value);
            sol.g_star.resize(static_cast<std::size_t>(p.mdp.n_states));
            for (std::size_t s = 0; s < sol.g_star.size(); ++s)
                sol.g_star[s] = intervene[s] >= keep[s] ? 1 : 0;
            return sol;
        }
    }
    throw std::runtime_error("value_iteration: no convergence within iteration cap");
}

QTable switch_q_from_value(const SwitchingProblem& p, const std::vector<double>& v) {
    QTable q(p.mdp.n_states, 2, 0.0);
    std::vector<double> intervene = intervention_operator(p, v);
    SwitchingProblem fixed = p;
    fixed.continue_uses_max = false;
    std::vector<double> keep = continue_backup(fixed, v);
    for (int s = 0; s < p.mdp.n_states; ++s) {
        q(s, 0) = keep[static_cast<std::size_t>(s)];
        q(s, 1) = intervene[static_cast<std::size_t>(s)];
    }
    return q;
}

std::vector<double> fa_bellman(const SwitchingProblem& p, const std::vector<double>& v) {
    std::vector<double> intervene = intervention_operator(p, v);
    std::vector<double> choice(v.size());
    for (std::size_t s = 0; s < v.size(); ++s) choice[s] = std::max(intervene[s], v[s]);
    std::vector<double> out(v.size());
    for (int s = 0; s < p.mdp.n_states; ++s) {
        int ae = p.exploiter_policy[static_cast<std::size_t>(s)];
        out[static_cast<std::size_t>(s)] =
            -p.l_frozen(s, ae) + p.discount * kernel_flow(p.mdp, s, ae, choice);
    }
    return out;
}

std::vector<double> fa_value_fixed_point(const SwitchingProblem& p, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("fa_value_fixed_point: tol must be positive");
    const double gamma = p.discount;
    const double stop = gamma > 0.0 ? tol * (1.0 - gamma) / gamma
                                    : std::numeric_limits<double>::infinity();
    std::vector<double> v(static_cast<std::size_t>(p.mdp.n_states), 0.0);
    for (int k = 0; k < kIterationCap; ++k) {
        std::vector<double> next = fa_bellman(p, v);
        double change = sup_norm_diff(next, v);
        v = std::move(next);
        if (change <= stop) return v;
    }
    throw std::runtime_error("fa_value_fixed_point: no convergence within iteration cap");
}

bool contraction_check(const SwitchingProblem& p, const std::vector<double>& v1,
                       const std::vector<double>& v2) {
    double lhs = sup_norm_diff(switcher_bellman(p, v1), switcher_bellman(p, v2));
    return lhs <= p.discount * sup_norm_diff(v1, v2) + 1e-12;
}

QTable solve_mdp_q(const TabularMdp& mdp, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("solve_mdp_q: tol must be positive");
    const double gamma = mdp.discount;
    const double stop = gamma > 0.0 ? tol * (1.0 - gamma) / gamma
                                    : std::numeric_limits<double>::infinity();
    QTable q(mdp.n_states, mdp.n_actions, 0.0);
    std::vector<double> v(static_cast<std::size_t>(mdp.n_states), 0.0);
    for (int k = 0; k < kIterationCap; ++k) {
        double change = 0.0;
        QTable next(mdp.n_states, mdp.n_actions, 0.0);
        for (int s = 0; s < mdp.n_states; ++s)
            for (int a = 0; a < mdp.n_actions; ++a) {
                next(s, a) = mdp.reward(s, a) + gamma * kernel_flow(mdp, s, a, v);
                change = std::max(change, std::abs(next(s, a) - q(s, a)));
            }
        q = std::move(next);
        for (int s = 0; s < mdp.n_states; ++s) {
            double best = q(s, 0);
            for (int a = 1; a < mdp.n_actions; ++a) best = std::max(best, q(s, a));
            v[static_cast<std::size_t>(s)] = best;
        }
        if (change <= stop) return q;
    }
    throw std::runtime_error("solve_mdp_q: no convergence within iteration cap");
}

std::vector<int> greedy_policy(const QTable& q) {
    std::vector<int> policy(static_cast<std::size_t>(q.rows()));
    for (int s = 0; s < q.rows(); ++s) policy[static_cast<std::size_t>(s)] = argmax_row(q, s);
    return policy;
}

}  // namespace seren
