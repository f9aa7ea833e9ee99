#include "seren/replay.hpp"

#include <stdexcept>

namespace seren {

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
    if (capacity == 0) throw std::invalid_argument("ReplayBuffer: zero capacity");
    data_.reserve(capacity);
}

void ReplayBuffer::push(const Transition& t) {
    if (data_.size() < capacity_) {
        data_.push_back(t);
    } else {
        data_[write_] = t;
        write_ = (write_ + 1) % capacity_;
    }
    ++pushed_;
    if (t.g == 1) ++interventions_;
}

std::vector<Transition> ReplayBuffer::sample(std::size_t n, RngStream& rng) const {
    if (data_.empty()) throw std::invalid_argument("ReplayBuffer::sample: empty buffer");
    std::vector<Transition> batch;
    batch.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        batch.push_back(data_[static_cast<std::size_t>(rng.uniform_int(static_cast<int>(data_.size())))]);
    return batch;
}

}  // namespace seren
