#pragma once

#include <vector>

#include "seren/mdp.hpp"
#include "seren/table.hpp"

namespace seren {

/// Fixed-policy switching problem: a finite MDP, a deterministic exploiter
/// policy, a deterministic exploration policy, a frozen uncertainty table and
/// the intervention cost. This is the regime in which the switcher's value is
/// computed exactly.
struct SwitchingProblem {
    TabularMdp mdp;
    std::vector<int> exploiter_policy;
    std::vector<int> explorer_policy;
    QTable l_frozen;  // (s, a), entrywise >= 0
    double beta = 0.0;
    double discount = 0.95;
    /// When set, the continue branch of the Bellman operator maximises over
    /// all actions instead of following the fixed exploiter action. The
    /// contraction checks are stated for that form.
    bool continue_uses_max = false;

    void validate() const;
};

struct DpSolution {
    std::vector<double> value;
    std::vector<int> g_star;  // 1 where intervening attains the fixed point
    double residual = 0.0;    // sup-norm distance bound to the fixed point
    int iterations = 0;
};

/// One-step backup through an intervention: pay the exploration reward of the
/// exploration policy's action minus the switch cost, then flow through that
/// action's transition kernel.
///
/// (Mv)(s) = -L(s, ax(s)) - beta + gamma * sum_s' P(s' | s, ax(s)) v(s')
std::vector<double> intervention_operator(const SwitchingProblem& p,
                                          const std::vector<double>& v);

/// The continue branch: the exploration reward of the exploiter's action plus
/// the discounted flow through its kernel (or the max over actions when
/// continue_uses_max is set).
std::vector<double> continue_backup(const SwitchingProblem& p, const std::vector<double>& v);

/// The switcher's Bellman operator: per state, the better of intervening and
/// continuing. A gamma-contraction in the sup norm.
std::vector<double> switcher_bellman(const SwitchingProblem& p, const std::vector<double>& v);

/// Iterates the switcher Bellman operator from v = 0 until the returned value
/// is within tol of the fixed point in sup norm. g_star applies the Heaviside
/// convention H(0) = 1: intervene whenever the intervention branch ties or
/// beats the continue branch.
DpSolution value_iteration(const SwitchingProblem& p, double tol);

/// The (state, decision) value table implied by a state value: column 0 is
/// the continue backup (fixed exploiter action), column 1 the intervention
/// backup. At the fixed point this is the target the binary Q-learner
/// converges to.
QTable switch_q_from_value(const SwitchingProblem& p, const std::vector<double>& v);

/// The one-step-deferred operator behind the linear-FA fixed point: take the
/// exploiter action now, then choose the better branch at the next state.
///
/// (Fv)(s) = -L(s, ae(s)) + gamma * sum_s' P(s' | s, ae(s)) max{(Mv)(s'), v(s')}
std::vector<double> fa_bellman(const SwitchingProblem& p, const std::vector<double>& v);

/// Exact fixed point of fa_bellman, used as the reference the projected
/// solution is compared against.
std::vector<double> fa_value_fixed_point(const SwitchingProblem& p, double tol);

/// True iff ||T v1 - T v2||_inf <= gamma * ||v1 - v2||_inf + 1e-12.
bool contraction_check(const SwitchingProblem& p, const std::vector<double>& v1,
                       const std::vector<double>& v2);

/// Standard optimal Q table via Q-value iteration to sup-norm accuracy tol.
QTable solve_mdp_q(const TabularMdp& mdp, double tol);

/// Lowest-index greedy policy of a (state, action) table.
std::vector<int> greedy_policy(const QTable& q);

}  // namespace seren
