#include "seren/linear_fa.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace seren {

namespace {

constexpr int kPowerIterationCap = 2'000'000;
constexpr int kFixedPointCap = 1'000'000;
constexpr double kStationaryResidual = 1e-12;
constexpr double kRegularisationMix = 1e-6;

// Dense Cholesky of a symmetric positive-definite p x p matrix (row-major).
// Throws when a pivot degenerates, which is how rank deficiency surfaces.
std::vector<double> cholesky(std::vector<double> m, int p) {
    for (int i = 0; i < p; ++i) {
        for (int j = 0; j <= i; ++j) {
            double sum = m[static_cast<std::size_t>(i) * p + j];
            for (int k = 0; k < j; ++k)
                sum -= m[static_cast<std::size_t>(i) * p + k] * m[static_cast<std::size_t>(j) * p + k];
            if (i == j) {
                if (sum <= 1e-12)
                    throw std::invalid_argument("FeatureBasis: columns are not linearly independent");
                m[static_cast<std::size_t>(i) * p + j] = std::sqrt(sum);
            } else {
                m[static_cast<std::size_t>(i) * p + j] = sum / m[static_cast<std::size_t>(j) * p + j];
            }
        }
    }
    return m;
}

std::vector<double> cholesky_solve(const std::vector<double>& chol, int p,
                                   std::vector<double> b) {
    for (int i = 0; i < p; ++i) {
        for (int k = 0; k < i; ++k) b[static_cast<std::size_t>(i)] -= chol[static_cast<std::size_t>(i) * p + k] * b[static_cast<std::size_t>(k)];
        b[static_cast<std::size_t>(i)] /= chol[static_cast<std::size_t>(i) * p + i];
    }
    for (int i = p - 1; i >= 0; --i) {
        for (int k = i + 1; k < p; ++k) b[static_cast<std::size_t>(i)] -= chol[static_cast<std::size_t>(k) * p + i] * b[static_cast<std::size_t>(k)];
        b[static_cast<std::size_t>(i)] /= chol[static_cast<std::size_t>(i) * p + i];
    }
    return b;
}

std::vector<double> uniform_kernel_row(const TabularMdp& mdp, int s) {
    std::vector<double> row(static_cast<std::size_t>(mdp.n_states), 0.0);
    for (int a = 0; a < mdp.n_actions; ++a) {
        auto r = mdp.row(s, a);
        for (int t = 0; t < mdp.n_states; ++t) row[static_cast<std::size_t>(t)] += r[static_cast<std::size_t>(t)] / mdp.n_actions;
    }
    return row;
}

// Damped power iteration x <- (x + xP)/2 on a dense kernel. Returns the
// distribution once ||xP - x||_1 <= kStationaryResidual, or nullopt-like
// empty vector when the cap is hit.
std::vector<double> power_iterate(const std::vector<std::vector<double>>& kernel) {
    const int n = static_cast<int>(kernel.size());
    std::vector<double> x(static_cast<std::size_t>(n), 1.0 / n);
    std::vector<double> next(static_cast<std::size_t>(n), 0.0);
    for (int it = 0; it < kPowerIterationCap; ++it) {
        std::fill(next.begin(), next.end(), 0.0);
        for (int s = 0; s < n; ++s)
            for (int t = 0; t < n; ++t) next[static_cast<std::size_t>(t)] += x[static_cast<std::size_t>(s)] * kernel[static_cast<std::size_t>(s)][static_cast<std::size_t>(t)];
        double residual = 0.0;
        for (int t = 0; t < n; ++t) residual += std::abs(next[static_cast<std::size_t>(t)] - x[static_cast<std::size_t>(t)]);
        double mass = 0.0;
        for (int t = 0; t < n; ++t) {
            x[static_cast<std::size_t>(t)] = 0.5 * (x[static_cast<std::size_t>(t)] + next[static_cast<std::size_t>(t)]);
            mass += x[static_cast<std::size_t>(t)];
        }
        for (int t = 0; t < n; ++t) x[static_cast<std::size_t>(t)] /= mass;
        if (residual <= kStationaryResidual) return x;
    }
    return {};
}

std::vector<double> stationary_of_kernel(std::vector<std::vector<double>> kernel) {
    std::vector<double> pi = power_iterate(kernel);
    bool positive = !pi.empty();
    for (double v : pi)
        if (v <= 0.0) positive = false;
    if (positive) return pi;

    // Reducible or stalled chain: mix in a little uniform mass and redo.
    const int n = static_cast<int>(kernel.size());
    for (int s = 0; s < n; ++s)
        for (int t = 0; t < n; ++t)
            kernel[static_cast<std::size_t>(s)][static_cast<std::size_t>(t)] =
                (1.0 - kRegularisationMix) * kernel[static_cast<std::size_t>(s)][static_cast<std::size_t>(t)] + kRegularisationMix / n;
    pi = power_iterate(kernel);
    if (pi.empty())
        throw std::runtime_error("stationary_weighting: power iteration failed to converge");
    return pi;
}

}  // namespace

FeatureBasis::FeatureBasis(std::vector<std::vector<double>> features,
                           std::vector<double> weighting)
    : features_(std::move(features)), weighting_(std::move(weighting)) {
    if (features_.empty()) throw std::invalid_argument("FeatureBasis: no rows");
    n_features_ = static_cast<int>(features_.front().size());
    if (n_features_ == 0) throw std::invalid_argument("FeatureBasis: no features");
    for (const auto& row : features_)
        if (static_cast<int>(row.size()) != n_features_)
            throw std::invalid_argument("FeatureBasis: ragged feature rows");
    if (weighting_.size() != features_.size())
        throw std::invalid_argument("FeatureBasis: weighting length mismatch");
    double mass = 0.0;
    for (double w : weighting_) {
        if (!(w > 0.0)) throw std::invalid_argument("FeatureBasis: weighting must be positive");
        mass += w;
    }
    if (std::abs(mass - 1.0) > 1e-9)
        throw std::invalid_argument("FeatureBasis: weighting must sum to 1");

    std::vector<double> gram(static_cast<std::size_t>(n_features_) * n_features_, 0.0);
    for (std::size_t s = 0; s < features_.size(); ++s)
        for (int i = 0; i < n_features_; ++i)
            for (int j = 0; j < n_features_; ++j)
                gram[static_cast<std::size_t>(i) * n_features_ + j] +=
                    weighting_[s] * features_[s][static_cast<std::size_t>(i)] * features_[s][static_cast<std::size_t>(j)];
    gram_chol_ = cholesky(std::move(gram), n_features_);
}

std::vector<double> FeatureBasis::fit(const std::vector<double>& target) const {
    if (target.size() != features_.size())
        throw std::invalid_argument("FeatureBasis::fit: target length mismatch");
    std::vector<double> rhs(static_cast<std::size_t>(n_features_), 0.0);
    for (std::size_t s = 0; s < features_.size(); ++s)
        for (int i = 0; i < n_features_; ++i)
            rhs[static_cast<std::size_t>(i)] += weighting_[s] * features_[s][static_cast<std::size_t>(i)] * target[s];
    return cholesky_solve(gram_chol_, n_features_, std::move(rhs));
}

std::vector<double> FeatureBasis::evaluate(const std::vector<double>& r) const {
    if (r.size() != static_cast<std::size_t>(n_features_))
        throw std::invalid_argument("FeatureBasis::evaluate: coefficient length mismatch");
    std::vector<double> out(features_.size(), 0.0);
    for (std::size_t s = 0; s < features_.size(); ++s)
        for (int i = 0; i < n_features_; ++i) out[s] += features_[s][static_cast<std::size_t>(i)] * r[static_cast<std::size_t>(i)];
    return out;
}

std::vector<double> project(const FeatureBasis& basis, const std::vector<double>& target) {
    return basis.evaluate(basis.fit(target));
}

double weighted_norm(const std::vector<double>& x, const std::vector<double>& weighting) {
    if (x.size() != weighting.size())
        throw std::invalid_argument("weighted_norm: length mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) acc += weighting[i] * x[i] * x[i];
    return std::sqrt(acc);
}

ProjectedSolution projected_fixed_point(const SwitchingProblem& p, const FeatureBasis& basis,
                                        double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("projected_fixed_point: tol must be positive");
    if (basis.n_points() != p.mdp.n_states)
        throw std::invalid_argument("projected_fixed_point: basis rows must match state count");

    const auto& d = basis.weighting();
    ProjectedSolution sol;
    sol.r_star.assign(static_cast<std::size_t>(basis.n_features()), 0.0);
    std::vector<double> v(static_cast<std::size_t>(p.mdp.n_states), 0.0);

    for (int k = 0; k < kFixedPointCap; ++k) {
        std::vector<double> r_next = basis.fit(fa_bellman(p, v));
        std::vector<double> v_next = basis.evaluate(r_next);
        std::vector<double> diff(v.size());
        for (std::size_t s = 0; s < v.size(); ++s) diff[s] = v_next[s] - v[s];
        double change = weighted_norm(diff, d);
        v = std::move(v_next);
        sol.r_star = std::move(r_next);
        sol.iterations = k + 1;
        if (change <= tol) break;
        if (k + 1 == kFixedPointCap)
            throw std::runtime_error(
                "projected_fixed_point: divergence guard hit; basis or weighting breaks the "
                "contraction premise");
    }

    std::vector<double> backup = project(basis, fa_bellman(p, v));
    std::vector<double> gap(v.size());
    for (std::size_t s = 0; s < v.size(); ++s) gap[s] = backup[s] - v[s];
    sol.fixed_point_residual = weighted_norm(gap, d);

    std::vector<double> exact = fa_value_fixed_point(p, std::min(tol, 1e-12));
    std::vector<double> err(v.size());
    for (std::size_t s = 0; s < v.size(); ++s) err[s] = v[s] - exact[s];
    sol.approx_error = weighted_norm(err, d);

    std::vector<double> projected_exact = project(basis, exact);
    std::vector<double> proj_err(v.size());
    for (std::size_t s = 0; s < v.size(); ++s) proj_err[s] = projected_exact[s] - exact[s];
    sol.bound = weighted_norm(proj_err, d) / std::sqrt(1.0 - p.discount * p.discount);
    return sol;
}

std::vector<double> stationary_weighting(const TabularMdp& mdp, const std::vector<int>& policy) {
    if (policy.size() != static_cast<std::size_t>(mdp.n_states))
        throw std::invalid_argument("stationary_weighting: policy length mismatch");
    std::vector<std::vector<double>> kernel(static_cast<std::size_t>(mdp.n_states));
    for (int s = 0; s < mdp.n_states; ++s) {
        int a = policy[static_cast<std::size_t>(s)];
        if (a < 0 || a >= mdp.n_actions)
            throw std::invalid_argument("stationary_weighting: policy action out of range");
        auto row = mdp.row(s, a);
        kernel[static_cast<std::size_t>(s)].assign(row.begin(), row.end());
    }
    return stationary_of_kernel(std::move(kernel));
}

std::vector<double> stationary_weighting_uniform(const TabularMdp& mdp) {
    std::vector<std::vector<double>> kernel(static_cast<std::size_t>(mdp.n_states));
    for (int s = 0; s < mdp.n_states; ++s) kernel[static_cast<std::size_t>(s)] = uniform_kernel_row(mdp, s);
    return stationary_of_kernel(std::move(kernel));
}

std::vector<std::vector<double>> random_orthonormal_features(int n_states, int n_features,
                                                             RngStream& rng) {
    if (n_features <= 0 || n_features > n_states)
        throw std::invalid_argument("random_orthonormal_features: need 0 < p <= n");
    // Box-Muller pairs; modified Gram-Schmidt on the columns.
    std::vector<std::vector<double>> cols(static_cast<std::size_t>(n_features),
                                          std::vector<double>(static_cast<std::size_t>(n_states)));
    for (auto& col : cols)
        for (int s = 0; s < n_states; ++s) {
            double u1 = std::max(rng.uniform(), 1e-300);
            double u2 = rng.uniform();
            col[static_cast<std::size_t>(s)] =
                std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
        }
    for (int i = 0; i < n_features; ++i) {
        for (int j = 0; j < i; ++j) {
            double dot = 0.0;
            for (int s = 0; s < n_states; ++s) dot += cols[static_cast<std::size_t>(i)][static_cast<std::size_t>(s)] * cols[static_cast<std::size_t>(j)][static_cast<std::size_t>(s)];
            for (int s = 0; s < n_states; ++s) cols[static_cast<std::size_t>(i)][static_cast<std::size_t>(s)] -= dot * cols[static_cast<std::size_t>(j)][static_cast<std::size_t>(s)];
        }
        double norm = 0.0;
        for (int s = 0; s < n_states; ++s) norm += cols[static_cast<std::size_t>(i)][static_cast<std::size_t>(s)] * cols[static_cast<std::size_t>(i)][static_cast<std::size_t>(s)];
        norm = std::sqrt(norm);
        if (norm < 1e-12)
            throw std::runtime_error("random_orthonormal_features: degenerate draw");
        for (int s = 0; s < n_states; ++s) cols[static_cast<std::size_t>(i)][static_cast<std::size_t>(s)] /= norm;
    }
    std::vector<std::vector<double>> rows(static_cast<std::size_t>(n_states),
                                          std::vector<double>(static_cast<std::size_t>(n_features)));
    for (int s = 0; s < n_states; ++s)
        for (int i = 0; i < n_features; ++i) rows[static_cast<std::size_t>(s)][static_cast<std::size_t>(i)] = cols[static_cast<std::size_t>(i)][static_cast<std::size_t>(s)];
    return rows;
}

}  // namespace seren
