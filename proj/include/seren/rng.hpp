#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>

namespace seren {

/// Seeded random stream with a draw counter.
///
/// Every sampling helper consumes exactly one draw from the underlying
/// engine, so callers can assert how many draws an operation used. This
/// is the contract the trajectory-equivalence checks rely on.
class RngStream {
  public:
    explicit RngStream(std::uint64_t seed) : engine_(seed) {}

    /// Uniform double in [0, 1). Exactly one engine draw.
    double uniform() {
        ++draws_;
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Uniform integer in {0, ..., n-1}. Exactly one engine draw.
    int uniform_int(int n) {
        if (n <= 0) throw std::invalid_argument("uniform_int: n must be positive");
        int k = static_cast<int>(uniform() * n);
        return k < n ? k : n - 1;
    }

    /// True with probability p. Exactly one engine draw.
    bool bernoulli(double p) { return uniform() < p; }

    /// Index drawn from an (unnormalised up to rounding) probability row.
    /// Exactly one engine draw.
    int categorical(std::span<const double> probs) {
        double u = uniform();
        double acc = 0.0;
        int last_positive = -1;
        for (std::size_t i = 0; i < probs.size(); ++i) {
            if (probs[i] > 0.0) last_positive = static_cast<int>(i);
            acc += probs[i];
            if (u < acc) return static_cast<int>(i);
        }
        if (last_positive < 0) throw std::invalid_argument("categorical: all-zero row");
        return last_positive;
    }

    std::uint64_t draw_count() const { return draws_; }

  private:
    std::mt19937_64 engine_;
    std::uint64_t draws_ = 0;
};

}  // namespace seren
