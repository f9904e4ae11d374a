#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "odirl/types.hpp"

namespace odirl::buffers {

// Fixed-capacity FIFO ring of transitions from a single domain.
class ReplayBuffer {
 public:
  ReplayBuffer(std::size_t capacity, Domain domain);

  // Throws Error if any transition carries a different domain tag; the buffer
  // is left unchanged in that case.
  void push(std::span<const Transition> trajectory);

  // n draws, uniform with replacement.
  std::vector<Transition> sample(std::size_t n, Rng& rng) const;
  TransitionBatch sample_batch(std::size_t n, Rng& rng) const;

  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }
  std::size_t capacity() const { return capacity_; }
  Domain domain() const { return domain_; }
  std::size_t insertions() const { return inserted_; }
  // i = 0 is the oldest stored transition.
  const Transition& at(std::size_t i) const;

 private:
  std::size_t capacity_;
  Domain domain_;
  std::vector<Transition> data_;
  std::size_t head_ = 0;  // next slot to overwrite once full
  std::size_t inserted_ = 0;
};

}  // namespace odirl::buffers
