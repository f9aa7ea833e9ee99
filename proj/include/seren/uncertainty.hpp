#pragma once

#include <memory>
#include <string>
#include <vector>

#include "seren/table.hpp"

namespace seren {

/// Ensemble of independent value tables. At least two members so the sample
/// variance is defined.
struct EnsembleQ {
    std::vector<QTable> members;

    EnsembleQ() = default;
    EnsembleQ(int member_count, int n_states, int n_actions);

    int member_count() const { return static_cast<int>(members.size()); }
    int n_states() const { return members.empty() ? 0 : members.front().rows(); }
    int n_actions() const { return members.empty() ? 0 : members.front().cols(); }

    void validate() const;
};

/// Empirical mean of the member predictions at (s, a).
double ensemble_mean(const EnsembleQ& q, int s, int a);

/// Unbiased sample variance across members at (s, a). Non-negative.
double ensemble_variance(const EnsembleQ& q, int s, int a);

/// State-action visitation counts. Monotone non-decreasing over a run.
struct VisitCounts {
    explicit VisitCounts(int n_states, int n_actions) : counts(n_states, n_actions, 0.0) {}
    QTable counts;

    void record(int s, int a) { counts(s, a) += 1.0; }
};

/// Count bonus 1/sqrt(1 + n(s, a)): equals 1 at n = 0 and decreases to 0.
double count_bonus(const VisitCounts& v, int s, int a);

/// A pluggable uncertainty source L(s, a) >= 0.
class UncertaintyMeasure {
  public:
    virtual ~UncertaintyMeasure() = default;
    virtual double value(int s, int a) const = 0;
    virtual int n_states() const = 0;
    virtual int n_actions() const = 0;
};

/// Live view over an ensemble; value is the member disagreement.
class EnsembleVarianceMeasure final : public UncertaintyMeasure {
  public:
    explicit EnsembleVarianceMeasure(const EnsembleQ* source) : source_(source) {}
    double value(int s, int a) const override { return ensemble_variance(*source_, s, a); }
    int n_states() const override { return source_->n_states(); }
    int n_actions() const override { return source_->n_actions(); }

  private:
    const EnsembleQ* source_;
};

/// Live view over visitation counts.
class CountBonusMeasure final : public UncertaintyMeasure {
  public:
    explicit CountBonusMeasure(const VisitCounts* source) : source_(source) {}
    double value(int s, int a) const override { return count_bonus(*source_, s, a); }
    int n_states() const override { return source_->counts.rows(); }
    int n_actions() const override { return source_->counts.cols(); }

  private:
    const VisitCounts* source_;
};

/// Immutable snapshot of a measure, decoupled from later mutation of its
/// source. This is the fixed-L regime the dynamic-programming oracle and the
/// convergence tests operate in.
QTable freeze(const UncertaintyMeasure& measure);

}  // namespace seren
