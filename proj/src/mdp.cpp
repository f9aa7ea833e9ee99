#include "seren/mdp.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace seren {

void TabularMdp::validate() const {
    if (n_states <= 0 || n_actions <= 0)
        throw std::invalid_argument("TabularMdp: empty state or action set");
    if (!(discount >= 0.0 && discount < 1.0))
        throw std::invalid_argument("TabularMdp: discount must lie in [0, 1)");
    if (transition.size() != static_cast<std::size_t>(n_states) * n_actions * n_states)
        throw std::invalid_argument("TabularMdp: transition tensor shape mismatch");
    if (reward.rows() != n_states || reward.cols() != n_actions)
        throw std::invalid_argument("TabularMdp: reward table shape mismatch");
    if (terminal.size() != static_cast<std::size_t>(n_states))
        throw std::invalid_argument("TabularMdp: terminal mask shape mismatch");
    if (start_state < 0 || start_state >= n_states)
        throw std::invalid_argument("TabularMdp: start state out of range");

    for (int s = 0; s < n_states; ++s) {
        for (int a = 0; a < n_actions; ++a) {
            double sum = 0.0;
            for (int t = 0; t < n_states; ++t) {
                double pr = p(s, a, t);
                if (pr < 0.0 || pr > 1.0 + 1e-12)
                    throw std::invalid_argument("TabularMdp: transition entry outside [0, 1]");
                sum += pr;
            }
            if (std::abs(sum - 1.0) > 1e-9)
                throw std::invalid_argument("TabularMdp: transition row does not sum to 1 at (" +
                                            std::to_string(s) + ", " + std::to_string(a) + ")");
            if (!std::isfinite(reward(s, a)))
                throw std::invalid_argument("TabularMdp: non-finite reward entry");
            if (terminal[static_cast<std::size_t>(s)]) {
                if (std::abs(p(s, a, s) - 1.0) > 1e-12 || reward(s, a) != 0.0)
                    throw std::invalid_argument(
                        "TabularMdp: terminal state must self-loop with reward 0");
            }
        }
    }
}

StepOutcome step(const TabularMdp& mdp, int s, int a, RngStream& rng) {
    if (s < 0 || s >= mdp.n_states) throw std::invalid_argument("step: state out of range");
    if (a < 0 || a >= mdp.n_actions) throw std::invalid_argument("step: action out of range");
    StepOutcome out;
    out.next_state = rng.categorical(mdp.row(s, a));
    out.reward = mdp.reward(s, a);
    out.done = mdp.is_terminal(out.next_state);
    return out;
}

namespace {

// N, E, S, W deltas; state index is y*width + x.
constexpr int kDx[4] = {0, 1, 0, -1};
constexpr int kDy[4] = {-1, 0, 1, 0};

int clamp_move(int width, int height, int x, int y, int dir) {
    int nx = x + kDx[dir];
    int ny = y + kDy[dir];
    if (nx < 0 || nx >= width || ny < 0 || ny >= height) return y * width + x;
    return ny * width + nx;
}

}  // namespace

TabularMdp make_sparse_grid(int width, int height, Cell start, Cell goal, double slip,
                            double discount) {
    if (width * height < 2)
        throw std::invalid_argument("make_sparse_grid: degenerate grid");
    if (start.x < 0 || start.x >= width || start.y < 0 || start.y >= height ||
        goal.x < 0 || goal.x >= width || goal.y < 0 || goal.y >= height)
        throw std::invalid_argument("make_sparse_grid: cell out of range");
    if (start.x == goal.x && start.y == goal.y)
        throw std::invalid_argument("make_sparse_grid: start must differ from goal");
    if (slip < 0.0 || slip >= 1.0)
        throw std::invalid_argument("make_sparse_grid: slip must lie in [0, 1)");

    TabularMdp mdp;
    mdp.n_states = width * height;
    mdp.n_actions = 4;
    mdp.discount = discount;
    mdp.start_state = start.y * width + start.x;
    mdp.transition.assign(static_cast<std::size_t>(mdp.n_states) * 4 * mdp.n_states, 0.0);
    mdp.reward = QTable(mdp.n_states, 4, 0.0);
    mdp.terminal.assign(static_cast<std::size_t>(mdp.n_states), false);

    const int goal_state = goal.y * width + goal.x;
    mdp.terminal[static_cast<std::size_t>(goal_state)] = true;

    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            int s = y * width + x;
            if (s == goal_state) {
                for (int a = 0; a < 4; ++a) mdp.p(s, a, s) = 1.0;
                continue;
            }
            for (int a = 0; a < 4; ++a) {
                mdp.p(s, a, clamp_move(width, height, x, y, a)) += 1.0 - slip;
                for (int d = 0; d < 4; ++d)
                    mdp.p(s, a, clamp_move(width, height, x, y, d)) += slip / 4.0;
                // Reward is the chance this move enters the goal; exact 1 when slip = 0.
                mdp.reward(s, a) = mdp.p(s, a, goal_state);
            }
        }
    }
    mdp.validate();
    return mdp;
}

TabularMdp make_chain(int n, double small_reward, double big_reward, double discount) {
    if (n < 3) throw std::invalid_argument("make_chain: need at least 3 states");

    TabularMdp mdp;
    mdp.n_states = n;
    mdp.n_actions = 2;
    mdp.discount = discount;
    mdp.start_state = 0;
    mdp.transition.assign(static_cast<std::size_t>(n) * 2 * n, 0.0);
    mdp.reward = QTable(n, 2, 0.0);
    mdp.terminal.assign(static_cast<std::size_t>(n), false);

    for (int s = 0; s < n; ++s) {
        int left = std::max(s - 1, 0);
        int right = std::min(s + 1, n - 1);
        mdp.p(s, 0, left) = 1.0;
        mdp.p(s, 1, right) += 0.6;
        mdp.p(s, 1, s) += 0.3;
        mdp.p(s, 1, left) += 0.1;
    }
    mdp.reward(0, 0) = small_reward;
    mdp.reward(n - 1, 1) = big_reward;
    mdp.validate();
    return mdp;
}

TabularMdp make_random_mdp(int n_states, int n_actions, double reward_sparsity,
                           std::uint64_t seed, double discount) {
    if (n_states < 1 || n_actions < 1)
        throw std::invalid_argument("make_random_mdp: need at least one state and action");
    if (reward_sparsity < 0.0 || reward_sparsity > 1.0)
        throw std::invalid_argument("make_random_mdp: reward_sparsity must lie in [0, 1]");

    RngStream rng(seed);
    TabularMdp mdp;
    mdp.n_states = n_states;
    mdp.n_actions = n_actions;
    mdp.discount = discount;
    mdp.start_state = 0;
    mdp.transition.assign(static_cast<std::size_t>(n_states) * n_actions * n_states, 0.0);
    mdp.reward = QTable(n_states, n_actions, 0.0);
    mdp.terminal.assign(static_cast<std::size_t>(n_states), false);

    for (int s = 0; s < n_states; ++s) {
        for (int a = 0; a < n_actions; ++a) {
            // Exponential spacings normalised to 1 give a flat simplex draw.
            double sum = 0.0;
            for (int t = 0; t < n_states; ++t) {
                double e = -std::log(1.0 - rng.uniform());
                mdp.p(s, a, t) = e;
                sum += e;
            }
            for (int t = 0; t < n_states; ++t) mdp.p(s, a, t) /= sum;
            double r = rng.uniform();
            mdp.reward(s, a) = rng.bernoulli(reward_sparsity) ? 0.0 : r;
        }
    }
    mdp.validate();
    return mdp;
}

}  // namespace seren
