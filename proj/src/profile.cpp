#include "metacog/profile.hpp"

#include <stdexcept>

namespace metacog {

namespace {

void require_unit(double value, const char* what) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw std::invalid_argument(std::string(what) + " must lie in [0, 1], got " +
                                std::to_string(value));
  }
}

void require_rate(double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("learning rate must lie in (0, 1], got " + std::to_string(alpha));
  }
}

}  // namespace

CapabilityProfile::CapabilityProfile(double initial_value) {
  require_unit(initial_value, "initial profile value");
  entries_.fill(initial_value);
}

void CapabilityProfile::set(Dimension d, double value, std::uint64_t observations) {
  require_unit(value, "profile entry");
  const auto i = dimension_index(d);
  entries_[i] = value;
  counts_[i] = observations;
}

void CapabilityProfile::update(std::span<const Dimension> dimensions, bool success, double alpha) {
  require_rate(alpha);
  const double reward = success ? 1.0 : 0.0;
  // Validate everything before touching state so a bad label leaves the
  // profile unchanged.
  for (Dimension d : dimensions) dimension_index(d);
  for (Dimension d : dimensions) {
    const auto i = dimension_index(d);
    entries_[i] += alpha * (reward - entries_[i]);
    ++counts_[i];
  }
}

CapabilityProfile init_profile(double initial_value) { return CapabilityProfile(initial_value); }

CapabilityProfile apply_feedback(CapabilityProfile profile, std::span<const Dimension> dimensions,
                                 bool success, double alpha) {
  profile.update(dimensions, success, alpha);
  return profile;
}

double effective_memory_horizon(double alpha) {
  require_rate(alpha);
  return 1.0 / alpha;
}

}  // namespace metacog
