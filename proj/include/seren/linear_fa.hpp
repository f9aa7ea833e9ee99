#pragma once

#include <vector>

#include "seren/dp_oracle.hpp"
#include "seren/mdp.hpp"
#include "seren/rng.hpp"

namespace seren {

/// Linear feature basis over states: one row of `features` per state, one
/// column per feature, plus a strictly positive weighting over states that
/// defines the projection norm. Columns must be linearly independent; the
/// constructor factors the weighted Gram matrix and rejects rank-deficient
/// bases.
class FeatureBasis {
  public:
    FeatureBasis(std::vector<std::vector<double>> features, std::vector<double> weighting);

    int n_points() const { return static_cast<int>(features_.size()); }
    int n_features() const { return n_features_; }
    const std::vector<double>& weighting() const { return weighting_; }
    const std::vector<std::vector<double>>& features() const { return features_; }

    /// Weighted least-squares coefficients of a target vector.
    std::vector<double> fit(const std::vector<double>& target) const;

    /// Evaluates the linear combination Phi r at every state.
    std::vector<double> evaluate(const std::vector<double>& r) const;

  private:
    std::vector<std::vector<double>> features_;
    std::vector<double> weighting_;
    int n_features_ = 0;
    std::vector<double> gram_chol_;  // Cholesky factor of Phi^T D Phi
};

/// Weighted least-squares projection of a target onto the basis span.
/// Idempotent.
std::vector<double> project(const FeatureBasis& basis, const std::vector<double>& target);

struct ProjectedSolution {
    std::vector<double> r_star;
    double fixed_point_residual = 0.0;  // weighted-L2 gap of the projected backup
    double approx_error = 0.0;          // weighted-L2 distance to the exact value
    double bound = 0.0;                 // (1 - gamma^2)^{-1/2} * projection error of the exact value
    int iterations = 0;
};

/// Fixed point of the projected one-step-deferred backup: iterate
/// Phi r <- Project(F(Phi r)) from r = 0 until the weighted-L2 change drops
/// below tol, then report the distance to the exact value and the
/// approximation bound it must respect.
ProjectedSolution projected_fixed_point(const SwitchingProblem& p, const FeatureBasis& basis,
                                        double tol);

/// Weighted L2 norm sqrt(sum_s d(s) x(s)^2).
double weighted_norm(const std::vector<double>& x, const std::vector<double>& weighting);

/// Stationary distribution of the chain induced by a deterministic policy,
/// computed by damped power iteration to residual 1e-12. Chains that fail to
/// yield a strictly positive distribution are regularised by mixing 1e-6 of
/// the uniform kernel.
std::vector<double> stationary_weighting(const TabularMdp& mdp, const std::vector<int>& policy);

/// Same, under the uniform-random policy (the default projection weighting).
std::vector<double> stationary_weighting_uniform(const TabularMdp& mdp);

/// Random basis with standard-normal entries, orthonormalised so the
/// linear-independence requirement holds by construction.
std::vector<std::vector<double>> random_orthonormal_features(int n_states, int n_features,
                                                             RngStream& rng);

}  // namespace seren
