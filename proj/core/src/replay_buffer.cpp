#include "odirl/replay_buffer.hpp"

namespace odirl::buffers {

ReplayBuffer::ReplayBuffer(std::size_t capacity, Domain domain) : capacity_(capacity), domain_(domain) {
  if (capacity_ == 0) throw Error("replay buffer: capacity must be positive");
}

void ReplayBuffer::push(std::span<const Transition> trajectory) {
  for (const auto& t : trajectory) {
    if (t.domain != domain_) {
      throw Error(std::string("replay buffer: ") + std::string(to_string(t.domain)) +
                  " transition pushed into " + std::string(to_string(domain_)) + " buffer");
    }
  }
  for (const auto& t : trajectory) {
    if (data_.size() < capacity_) {
      data_.push_back(t);
    } else {
      data_[head_] = t;
      head_ = (head_ + 1) % capacity_;
    }
    ++inserted_;
  }
}

const Transition& ReplayBuffer::at(std::size_t i) const {
  if (i >= data_.size()) throw Error("replay buffer: index out of range");
  return data_[(head_ + i) % data_.size()];
}

std::vector<Transition> ReplayBuffer::sample(std::size_t n, Rng& rng) const {
  std::vector<Transition> out;
  if (n == 0) return out;
  if (data_.empty()) throw Error("replay buffer: cannot sample from an empty buffer");
  std::uniform_int_distribution<std::size_t> pick(0, data_.size() - 1);
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(data_[pick(rng)]);
  return out;
}

TransitionBatch ReplayBuffer::sample_batch(std::size_t n, Rng& rng) const {
  auto v = sample(n, rng);
  return stack(std::span<const Transition>(v));
}

}  // namespace odirl::buffers
