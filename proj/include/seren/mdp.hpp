#pragma once

#include <optional>
#include <vector>

#include "seren/rng.hpp"
#include "seren/table.hpp"

namespace seren {

/// Finite MDP with a dense transition tensor P(s, a, s'), a reward table
/// R(s, a) and discount in [0, 1). Terminal states self-loop with reward 0.
/// Immutable after construction; validate() is called by every factory.
struct TabularMdp {
    int n_states = 0;
    int n_actions = 0;
    std::vector<double> transition;  // (s, a, s') row-major
    QTable reward;                   // (s, a)
    double discount = 0.0;
    std::vector<bool> terminal;      // per state
    int start_state = 0;

    double p(int s, int a, int s_next) const {
        return transition[(static_cast<std::size_t>(s) * n_actions + a) * n_states + s_next];
    }
    double& p(int s, int a, int s_next) {
        return transition[(static_cast<std::size_t>(s) * n_actions + a) * n_states + s_next];
    }
    std::span<const double> row(int s, int a) const {
        return {transition.data() + (static_cast<std::size_t>(s) * n_actions + a) * n_states,
                static_cast<std::size_t>(n_states)};
    }
    bool is_terminal(int s) const { return terminal[static_cast<std::size_t>(s)]; }

    /// Checks row-stochasticity (1e-9), finite rewards, discount < 1 and the
    /// terminal self-loop convention. Throws std::invalid_argument.
    void validate() const;
};

struct StepOutcome {
    int next_state = 0;
    double reward = 0.0;
    bool done = false;
};

/// Samples one transition. Consumes exactly one draw from rng.
StepOutcome step(const TabularMdp& mdp, int s, int a, RngStream& rng);

/// Grid cell, x across (width), y down (height). State index is y*width + x.
struct Cell {
    int x = 0;
    int y = 0;
};

/// Four-action (N/E/S/W) grid where only transitions entering the goal are
/// rewarded. Moving off-grid stays in place; with probability `slip` the
/// executed move is replaced by a uniformly random direction. The goal is
/// terminal. With slip > 0 the (s, a) reward entry is the probability of
/// entering the goal, so expected rewards are preserved.
TabularMdp make_sparse_grid(int width, int height, Cell start, Cell goal, double slip,
                            double discount = 0.99);

/// Hard-exploration chain: action 0 steps left deterministically and pays
/// small_reward at state 0; action 1 steps right with probability 0.6, stays
/// with 0.3 and slips left with 0.1, paying big_reward at state n-1.
TabularMdp make_chain(int n, double small_reward, double big_reward, double discount = 0.99);

/// Random MDP with transition rows drawn from the flat simplex. A fraction
/// reward_sparsity of (s, a) rewards is zeroed, the rest are uniform in [0,1].
/// Reproducible per seed.
TabularMdp make_random_mdp(int n_states, int n_actions, double reward_sparsity,
                           std::uint64_t seed, double discount = 0.95);

}  // namespace seren
