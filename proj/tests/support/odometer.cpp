#include "odometer.hpp"

#include <stdexcept>

namespace halfreg::testing {

int OdometerSource::choose(DecisionTag, std::span<const int> options) {
  if (pos_ == path_.size()) path_.push_back({0, options.size()});
  const Slot& slot = path_[pos_++];
  // The prefix is replayed exactly, so the option list must be the same.
  if (slot.count != options.size()) throw std::logic_error("odometer: option count changed");
  return options[slot.index];
}

bool OdometerSource::advance() {
  path_.resize(pos_);
  while (!path_.empty()) {
    Slot& last = path_.back();
    if (++last.index < last.count) return true;
    path_.pop_back();
  }
  return false;
}

Rational OdometerSource::weight() const {
  Rational w = 1;
  for (std::size_t i = 0; i < pos_; ++i) w *= reciprocal(static_cast<long>(path_[i].count));
  return w;
}

}  // namespace halfreg::testing
