#include "seren/uncertainty.hpp"

#include <cmath>
#include <stdexcept>

namespace seren {

EnsembleQ::EnsembleQ(int member_count, int n_states, int n_actions) {
    if (member_count < 2)
        throw std::invalid_argument("EnsembleQ: need at least 2 members");
    members.assign(static_cast<std::size_t>(member_count), QTable(n_states, n_actions, 0.0));
}

void EnsembleQ::validate() const {
    if (member_count() < 2) throw std::invalid_argument("EnsembleQ: need at least 2 members");
    for (const auto& m : members)
        if (!m.same_shape(members.front()))
            throw std::invalid_argument("EnsembleQ: members must share one shape");
}

double ensemble_mean(const EnsembleQ& q, int s, int a) {
    double sum = 0.0;
    for (const auto& m : q.members) sum += m(s, a);
    return sum / q.member_count();
}

double ensemble_variance(const EnsembleQ& q, int s, int a) {
    const int e = q.member_count();
    if (e < 2) throw std::invalid_argument("ensemble_variance: need at least 2 members");
    const double mu = ensemble_mean(q, s, a);
    double ss = 0.0;
    for (const auto& m : q.members) {
        double d = m(s, a) - mu;
        ss += d * d;
    }
    return ss / (e - 1);
}

double count_bonus(const VisitCounts& v, int s, int a) {
    return 1.0 / std::sqrt(1.0 + v.counts(s, a));
}

QTable freeze(const UncertaintyMeasure& measure) {
    QTable snapshot(measure.n_states(), measure.n_actions(), 0.0);
    for (int s = 0; s < snapshot.rows(); ++s)
        for (int a = 0; a < snapshot.cols(); ++a) snapshot(s, a) = measure.value(s, a);
    return snapshot;
}

}  // namespace seren
