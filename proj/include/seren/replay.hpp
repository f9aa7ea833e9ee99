#pragma once

#include <cstdint>
#include <vector>

#include "seren/agents.hpp"
#include "seren/rng.hpp"

namespace seren {

/// Fixed-capacity ring buffer of transitions with uniform sampling over the
/// current contents. Keeps a lifetime counter of stored interventions so the
/// logging-conservation check has an independent tally.
class ReplayBuffer {
  public:
    explicit ReplayBuffer(std::size_t capacity);

    void push(const Transition& t);

    /// Uniform sample with replacement; exactly n draws from rng.
    std::vector<Transition> sample(std::size_t n, RngStream& rng) const;

    std::size_t size() const { return data_.size(); }
    std::size_t capacity() const { return capacity_; }
    std::uint64_t total_pushed() const { return pushed_; }
    std::uint64_t lifetime_interventions() const { return interventions_; }

    const Transition& at(std::size_t i) const { return data_[i]; }

  private:
    std::size_t capacity_;
    std::size_t write_ = 0;
    std::uint64_t pushed_ = 0;
    std::uint64_t interventions_ = 0;
    std::vector<Transition> data_;
};

}  // namespace seren
