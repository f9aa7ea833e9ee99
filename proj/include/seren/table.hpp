#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace seren {

/// Dense real table indexed by (state, action). Also used for (state, decision)
/// pairs where the decision set is {continue, intervene}.
class QTable {
  public:
    QTable() = default;
    QTable(int rows, int cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, fill) {
        if (rows <= 0 || cols <= 0) throw std::invalid_argument("QTable: non-positive shape");
    }

    double& operator()(int r, int c) { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
    double operator()(int r, int c) const { return data_[static_cast<std::size_t>(r) * cols_ + c]; }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

    bool same_shape(const QTable& other) const {
        return rows_ == other.rows_ && cols_ == other.cols_;
    }

  private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> data_;
};

inline double sup_norm(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

inline double sup_norm_diff(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw std::invalid_argument("sup_norm_diff: size mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

inline double sup_norm_diff(const QTable& a, const QTable& b) {
    if (!a.same_shape(b)) throw std::invalid_argument("sup_norm_diff: shape mismatch");
    return sup_norm_diff(a.data(), b.data());
}

/// Lowest-index argmax over a table row.
inline int argmax_row(const QTable& q, int row) {
    int best = 0;
    for (int c = 1; c < q.cols(); ++c)
        if (q(row, c) > q(row, best)) best = c;
    return best;
}

}  // namespace seren
