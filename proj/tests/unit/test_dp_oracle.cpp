#include <doctest.h>

#include "helpers.hpp"
#include "seren/dp_oracle.hpp"

using namespace seren;

namespace {

SwitchingProblem single_state_problem(double l, double beta, double gamma) {
    SwitchingProblem p;
    p.mdp.n_states = 1;
    p.mdp.n_actions = 1;
    p.mdp.discount = gamma;
    p.mdp.transition = {1.0};
    p.mdp.reward = QTable(1, 1, 0.0);
    p.mdp.terminal = {false};
    p.mdp.start_state = 0;
    p.discount = gamma;
    p.beta = beta;
    p.l_frozen = QTable(1, 1, l);
    p.exploiter_policy = {0};
    p.explorer_policy = {0};
    p.validate();
    return p;
}

}  // namespace

TEST_SUITE("dp_oracle") {

TEST_CASE("intervention backup at zero value and zero uncertainty is the bare cost") {
    SwitchingProblem p = testutil::random_problem(1, 6, 3, 0.9, 2.5, 0.0);
    for (double& v : p.l_frozen.data()) v = 0.0;
    std::vector<double> zeros(static_cast<std::size_t>(p.mdp.n_states), 0.0);
    for (double x : intervention_operator(p, zeros)) CHECK(x == doctest::Approx(-2.5));
}

TEST_CASE("intervention backup hand-evaluated on one state") {
    SwitchingProblem p = single_state_problem(2.0, 10.0, 0.5);
    std::vector<double> v{-4.0};
    CHECK(intervention_operator(p, v)[0] == doctest::Approx(-14.0));
}

TEST_CASE("free intervention through the same policy equals the continue backup") {
    SwitchingProblem p = testutil::random_problem(2, 6, 3, 0.9, 0.0);
    p.beta = 0.0;
    p.explorer_policy = p.exploiter_policy;
    RngStream rng(4);
    std::vector<double> v = testutil::random_vector(rng, p.mdp.n_states, 3.0);
    std::vector<double> lhs = intervention_operator(p, v);
    std::vector<double> rhs = continue_backup(p, v);
    CHECK(sup_norm_diff(lhs, rhs) <= 1e-12);
}

TEST_CASE("with zero uncertainty and a real cost the continue branch wins") {
    SwitchingProblem p = testutil::random_problem(5, 6, 3, 0.9, 1.0, 0.0);
    for (double& v : p.l_frozen.data()) v = 0.0;
    std::vector<double> zeros(static_cast<std::size_t>(p.mdp.n_states), 0.0);
    std::vector<double> t = switcher_bellman(p, zeros);
    std::vector<double> keep = continue_backup(p, zeros);
    CHECK(sup_norm_diff(t, keep) <= 1e-12);
}

TEST_CASE("zero cost with identical policies makes both branches equal") {
    SwitchingProblem p = testutil::random_problem(6, 6, 3, 0.9, 0.0);
    p.beta = 0.0;
    p.explorer_policy = p.exploiter_policy;
    RngStream rng(6);
    std::vector<double> v = testutil::random_vector(rng, p.mdp.n_states, 2.0);
    std::vector<double> t = switcher_bellman(p, v);
    CHECK(sup_norm_diff(t, continue_backup(p, v)) <= 1e-12);
    CHECK(sup_norm_diff(t, intervention_operator(p, v)) <= 1e-12);
}

TEST_CASE("three-state backup matches direct enumeration") {
    SwitchingProblem p = testutil::random_problem(7, 3, 2, 0.8, 0.4);
    RngStream rng(8);
    std::vector<double> v = testutil::random_vector(rng, p.mdp.n_states, 2.0);
    std::vector<double> t = switcher_bellman(p, v);
    for (int s = 0; s < p.mdp.n_states; ++s) {
        int ax = p.explorer_policy[static_cast<std::size_t>(s)];
        int ae = p.exploiter_policy[static_cast<std::size_t>(s)];
        double flow_x = 0.0, flow_e = 0.0;
        for (int u = 0; u < p.mdp.n_states; ++u) {
            flow_x += p.mdp.p(s, ax, u) * v[static_cast<std::size_t>(u)];
            flow_e += p.mdp.p(s, ae, u) * v[static_cast<std::size_t>(u)];
        }
        double intervene = -p.l_frozen(s, ax) - p.beta + p.discount * flow_x;
        double keep = -p.l_frozen(s, ae) + p.discount * flow_e;
        CHECK(t[static_cast<std::size_t>(s)] == doctest::Approx(std::max(intervene, keep)));
    }
}

TEST_CASE("value iteration on one state gives the geometric series") {
    SwitchingProblem p = single_state_problem(0.7, 1e9, 0.5);
    DpSolution sol = value_iteration(p, 1e-10);
    CHECK(sol.value[0] == doctest::Approx(-0.7 / (1.0 - 0.5)).epsilon(1e-8));
    CHECK(sol.g_star[0] == 0);
    CHECK(sol.residual <= 1e-10);
}

TEST_CASE("zero uncertainty makes not intervening optimal everywhere") {
    SwitchingProblem p = testutil::random_problem(9, 8, 3, 0.9, 4.0, 0.0);
    for (double& v : p.l_frozen.data()) v = 0.0;
    DpSolution sol = value_iteration(p, 1e-10);
    CHECK(sup_norm(sol.value) <= 1e-9);
    for (int g : sol.g_star) CHECK(g == 0);
}

TEST_CASE("iterates contract geometrically toward the fixed point") {
    SwitchingProblem p = testutil::random_problem(10, 8, 3, 0.9, 0.6);
    DpSolution sol = value_iteration(p, 1e-12);
    std::vector<double> v(static_cast<std::size_t>(p.mdp.n_states), 0.0);
    for (int k = 0; k < 30; ++k) {
        std::vector<double> next = switcher_bellman(p, v);
        CHECK(sup_norm_diff(next, sol.value) <=
              p.discount * sup_norm_diff(v, sol.value) + 1e-9);
        v = next;
    }
}

TEST_CASE("optimal stopping ties the binary Q table at the fixed point") {
    SwitchingProblem p = testutil::random_problem(11, 7, 2, 0.85, 0.3);
    DpSolution sol = value_iteration(p, 1e-12);
    QTable q = switch_q_from_value(p, sol.value);
    for (int s = 0; s < p.mdp.n_states; ++s) {
        double best = std::max(q(s, 0), q(s, 1));
        CHECK(best == doctest::Approx(sol.value[static_cast<std::size_t>(s)]).epsilon(1e-9));
        if (sol.g_star[static_cast<std::size_t>(s)] == 1)
            CHECK(q(s, 1) >= q(s, 0) - 1e-12);
        else
            CHECK(q(s, 1) < q(s, 0));
    }
}

TEST_CASE("contraction check accepts equal inputs and random pairs") {
    SwitchingProblem p = testutil::random_problem(12, 10, 3, 0.9, 0.5);
    RngStream rng(99);
    std::vector<double> v = testutil::random_vector(rng, p.mdp.n_states, 5.0);
    CHECK(contraction_check(p, v, v));
    for (int round = 0; round < 200; ++round) {
        SwitchingProblem q = testutil::random_problem(1000 + round, 10, 3,
                                                      round % 2 ? 0.9 : 0.5, 0.5);
        std::vector<double> v1 = testutil::random_vector(rng, q.mdp.n_states, 5.0);
        std::vector<double> v2 = testutil::random_vector(rng, q.mdp.n_states, 5.0);
        CHECK(contraction_check(q, v1, v2));
        q.continue_uses_max = true;
        CHECK(contraction_check(q, v1, v2));
    }
}

TEST_CASE("bellman operator is monotone") {
    RngStream rng(14);
    for (int round = 0; round < 50; ++round) {
        SwitchingProblem p = testutil::random_problem(2000 + round, 8, 3, 0.9, 0.4);
        std::vector<double> v = testutil::random_vector(rng, p.mdp.n_states, 3.0);
        std::vector<double> w = v;
        for (double& x : w) x += 2.0 * rng.uniform();
        std::vector<double> tv = switcher_bellman(p, v);
        std::vector<double> tw = switcher_bellman(p, w);
        for (std::size_t s = 0; s < tv.size(); ++s) CHECK(tv[s] <= tw[s] + 1e-12);
    }
}

TEST_CASE("decision rule matches exhaustive search over all binary maps") {
    for (int round = 0; round < 10; ++round) {
        SwitchingProblem p = testutil::random_problem(3000 + round, 8, 3, 0.8, 0.2);
        DpSolution sol = value_iteration(p, 1e-11);
        std::vector<double> best = testutil::exhaustive_best_value(p);
        std::vector<double> achieved = testutil::fixed_map_value(p, sol.g_star);
        CHECK(sup_norm_diff(achieved, best) <= 1e-8);
    }
}

TEST_CASE("scaling the uncertainty toward zero removes every intervention") {
    for (int round = 0; round < 10; ++round) {
        SwitchingProblem base =
            testutil::random_problem(4000 + round, 8, 3, 0.99, 10.0, 3.0);
        int prev = base.mdp.n_states + 1;
        for (double lambda : {1.0, 0.1, 0.01, 0.0}) {
            SwitchingProblem p = base;
            for (double& v : p.l_frozen.data()) v *= lambda;
            DpSolution sol = value_iteration(p, 1e-10);
            int count = 0;
            for (int g : sol.g_star) count += g;
            CHECK(count <= prev);
            prev = count;
            if (lambda == 0.0) CHECK(count == 0);
        }
    }
}

TEST_CASE("intervention states are exactly the obstacle-tight states") {
    SwitchingProblem p = testutil::random_problem(15, 9, 3, 0.9, 0.05, 2.0);
    DpSolution sol = value_iteration(p, 1e-12);
    std::vector<double> intervene = intervention_operator(p, sol.value);
    for (int s = 0; s < p.mdp.n_states; ++s) {
        if (sol.g_star[static_cast<std::size_t>(s)] == 1)
            CHECK(std::abs(intervene[static_cast<std::size_t>(s)] -
                           sol.value[static_cast<std::size_t>(s)]) <= 1e-8);
        else
            CHECK(intervene[static_cast<std::size_t>(s)] <
                  sol.value[static_cast<std::size_t>(s)]);
    }
}

TEST_CASE("control oracle solves textbook instances") {
    TabularMdp zero = make_random_mdp(4, 2, 1.0, 21, 0.9);
    QTable q0 = solve_mdp_q(zero, 1e-10);
    CHECK(sup_norm(q0.data()) <= 1e-9);

    // Two states; staying in state 0 pays 1 under action 0 with gamma 0.5.
    TabularMdp loop;
    loop.n_states = 2;
    loop.n_actions = 1;
    loop.discount = 0.5;
    loop.transition = {1.0, 0.0, 0.0, 1.0};
    loop.reward = QTable(2, 1, 0.0);
    loop.reward(0, 0) = 1.0;
    loop.terminal = {false, false};
    loop.validate();
    QTable q = solve_mdp_q(loop, 1e-10);
    CHECK(q(0, 0) == doctest::Approx(2.0).epsilon(1e-8));
}

TEST_CASE("chain optimum is always-right by policy enumeration") {
    TabularMdp mdp = make_chain(5, 0.005, 1.0, 0.95);
    QTable q = solve_mdp_q(mdp, 1e-10);
    std::vector<int> greedy = greedy_policy(q);

    // Evaluate all 2^5 deterministic policies exactly and find the best by
    // value at the start state.
    std::vector<int> best_policy;
    double best_value = -1e300;
    for (int mask = 0; mask < 32; ++mask) {
        std::vector<std::vector<double>> a(5, std::vector<double>(5, 0.0));
        std::vector<double> r(5, 0.0);
        std::vector<int> policy(5);
        for (int s = 0; s < 5; ++s) {
            policy[static_cast<std::size_t>(s)] = (mask >> s) & 1;
            int act = policy[static_cast<std::size_t>(s)];
            r[static_cast<std::size_t>(s)] = mdp.reward(s, act);
            for (int t = 0; t < 5; ++t)
                a[static_cast<std::size_t>(s)][static_cast<std::size_t>(t)] =
                    (s == t ? 1.0 : 0.0) - 0.95 * mdp.p(s, act, t);
        }
        std::vector<double> v = testutil::solve_linear(a, r);
        if (v[0] > best_value) {
            best_value = v[0];
            best_policy = policy;
        }
    }
    CHECK(best_policy == std::vector<int>{1, 1, 1, 1, 1});
    CHECK(greedy == best_policy);
}

TEST_CASE("value iteration rejects a non-positive tolerance") {
    SwitchingProblem p = single_state_problem(1.0, 1.0, 0.5);
    CHECK_THROWS_AS(value_iteration(p, 0.0), std::invalid_argument);
}

}  // TEST_SUITE
