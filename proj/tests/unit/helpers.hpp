#pragma once

// Test-side oracles, written against the raw MDP data and kept independent of
// the library's solver paths.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "seren/dp_oracle.hpp"
#include "seren/mdp.hpp"
#include "seren/rng.hpp"

namespace testutil {

/// Plain Q-value iteration to sup-norm residual tol between sweeps.
inline seren::QTable brute_force_q(const seren::TabularMdp& mdp, double tol) {
    seren::QTable q(mdp.n_states, mdp.n_actions, 0.0);
    for (int iter = 0; iter < 5'000'000; ++iter) {
        seren::QTable next(mdp.n_states, mdp.n_actions, 0.0);
        double change = 0.0;
        for (int s = 0; s < mdp.n_states; ++s)
            for (int a = 0; a < mdp.n_actions; ++a) {
                double acc = 0.0;
                for (int t = 0; t < mdp.n_states; ++t) {
                    double best = q(t, 0);
                    for (int b = 1; b < mdp.n_actions; ++b) best = std::max(best, q(t, b));
                    acc += mdp.p(s, a, t) * best;
                }
                next(s, a) = mdp.reward(s, a) + mdp.discount * acc;
                change = std::max(change, std::abs(next(s, a) - q(s, a)));
            }
        q = next;
        if (change <= tol) return q;
    }
    throw std::runtime_error("brute_force_q: did not converge");
}

/// Solves A x = b by Gaussian elimination with partial pivoting.
inline std::vector<double> solve_linear(std::vector<std::vector<double>> a,
                                        std::vector<double> b) {
    const int n = static_cast<int>(b.size());
    for (int col = 0; col < n; ++col) {
        int pivot = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
        std::swap(a[col], a[pivot]);
        std::swap(b[col], b[pivot]);
        if (std::abs(a[col][col]) < 1e-14) throw std::runtime_error("solve_linear: singular");
        for (int r = col + 1; r < n; ++r) {
            double f = a[r][col] / a[col][col];
            for (int c = col; c < n; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    std::vector<double> x(static_cast<std::size_t>(n), 0.0);
    for (int r = n - 1; r >= 0; --r) {
        double acc = b[r];
        for (int c = r + 1; c < n; ++c) acc -= a[r][c] * x[static_cast<std::size_t>(c)];
        x[static_cast<std::size_t>(r)] = acc / a[r][r];
    }
    return x;
}

/// Exact value of one fixed binary intervention map: per state the reward and
/// kernel follow the map's branch, and the induced linear system is solved
/// directly.
inline std::vector<double> fixed_map_value(const seren::SwitchingProblem& p,
                                           const std::vector<int>& map) {
    const int n = p.mdp.n_states;
    std::vector<std::vector<double>> a(static_cast<std::size_t>(n),
                                       std::vector<double>(static_cast<std::size_t>(n), 0.0));
    std::vector<double> r(static_cast<std::size_t>(n), 0.0);
    for (int s = 0; s < n; ++s) {
        int act = map[static_cast<std::size_t>(s)] == 1
                      ? p.explorer_policy[static_cast<std::size_t>(s)]
                      : p.exploiter_policy[static_cast<std::size_t>(s)];
        r[static_cast<std::size_t>(s)] = -p.l_frozen(s, act) -
                                         (map[static_cast<std::size_t>(s)] == 1 ? p.beta : 0.0);
        for (int t = 0; t < n; ++t)
            a[static_cast<std::size_t>(s)][static_cast<std::size_t>(t)] =
                (s == t ? 1.0 : 0.0) - p.discount * p.mdp.p(s, act, t);
    }
    return solve_linear(std::move(a), std::move(r));
}

/// Pointwise best value over all 2^n intervention maps.
inline std::vector<double> exhaustive_best_value(const seren::SwitchingProblem& p) {
    const int n = p.mdp.n_states;
    std::vector<double> best(static_cast<std::size_t>(n),
                             -std::numeric_limits<double>::infinity());
    std::vector<int> map(static_cast<std::size_t>(n), 0);
    for (long mask = 0; mask < (1L << n); ++mask) {
        for (int s = 0; s < n; ++s) map[static_cast<std::size_t>(s)] = (mask >> s) & 1;
        std::vector<double> v = fixed_map_value(p, map);
        for (int s = 0; s < n; ++s)
            best[static_cast<std::size_t>(s)] = std::max(best[static_cast<std::size_t>(s)],
                                                         v[static_cast<std::size_t>(s)]);
    }
    return best;
}

/// Random fixed-policy switching problem over a flat-simplex MDP.
inline seren::SwitchingProblem random_problem(std::uint64_t seed, int max_states, int max_actions,
                                              double gamma, double beta, double l_scale = 1.0) {
    seren::RngStream rng(seed);
    int n = 2 + rng.uniform_int(max_states - 1);
    int m = std::max(2, 1 + rng.uniform_int(max_actions));
    seren::SwitchingProblem p;
    p.mdp = seren::make_random_mdp(n, m, 0.5, seed ^ 0x9e3779b97f4a7c15ULL, gamma);
    p.discount = gamma;
    p.beta = beta;
    p.l_frozen = seren::QTable(n, m, 0.0);
    for (double& v : p.l_frozen.data()) v = l_scale * rng.uniform();
    p.exploiter_policy.resize(static_cast<std::size_t>(n));
    p.explorer_policy.resize(static_cast<std::size_t>(n));
    for (int s = 0; s < n; ++s) {
        p.exploiter_policy[static_cast<std::size_t>(s)] = rng.uniform_int(m);
        p.explorer_policy[static_cast<std::size_t>(s)] = rng.uniform_int(m);
    }
    p.validate();
    return p;
}

inline std::vector<double> random_vector(seren::RngStream& rng, int n, double scale) {
    std::vector<double> v(static_cast<std::size_t>(n));
    for (double& x : v) x = scale * (2.0 * rng.uniform() - 1.0);
    return v;
}

}  // namespace testutil
