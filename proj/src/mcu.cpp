#include "metacog/mcu.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace metacog {

namespace {

void require_range(double v, double lo, double hi, bool lo_open, const char* name) {
  const bool ok = (lo_open ? v > lo : v >= lo) && v <= hi;
  if (!ok) {
    throw std::invalid_argument(std::string(name) + " out of range: " + std::to_string(v));
  }
}

void require_unit(double v, const char* name) { require_range(v, 0.0, 1.0, false, name); }

}  // namespace

MetacogParams::MetacogParams(double lambda, double theta, double theta_delta, double gamma,
                             double alpha)
    : lambda_(lambda), theta_(theta), theta_delta_(theta_delta), gamma_(gamma), alpha_(alpha) {
  require_unit(lambda_, "lambda");
  require_unit(theta_, "theta");
  require_unit(theta_delta_, "theta_delta");
  if (!(gamma_ >= 0.0) || !std::isfinite(gamma_)) {
    throw std::invalid_argument("gamma out of range: " + std::to_string(gamma_));
  }
  require_range(alpha_, 0.0, 1.0, true, "alpha");
}

MetacogParams MetacogParams::with_lambda(double v) const {
  return {v, theta_, theta_delta_, gamma_, alpha_};
}
MetacogParams MetacogParams::with_theta(double v) const {
  return {lambda_, v, theta_delta_, gamma_, alpha_};
}
MetacogParams MetacogParams::with_theta_delta(double v) const {
  return {lambda_, theta_, v, gamma_, alpha_};
}
MetacogParams MetacogParams::with_gamma(double v) const {
  return {lambda_, theta_, theta_delta_, v, alpha_};
}
MetacogParams MetacogParams::with_alpha(double v) const {
  return {lambda_, theta_, theta_delta_, gamma_, v};
}

double profile_confidence(const CapabilityProfile& profile, std::span<const Dimension> dimensions) {
  if (dimensions.empty()) {
    throw std::invalid_argument("profile confidence needs at least one dimension");
  }
  if (dimensions.size() == 1) return profile.at(dimensions.front());
  double sum = 0.0;
  for (Dimension d : dimensions) sum += profile.at(d);
  return sum / static_cast<double>(dimensions.size());
}

double effective_threshold(double conflict, const MetacogParams& params) {
  require_unit(conflict, "conflict");
  if (conflict > params.theta_delta()) return params.theta() + params.gamma() * conflict;
  return params.theta();
}

ConfidenceBreakdown fuse_confidence(double verbalized, double profile_conf,
                                    const MetacogParams& params) {
  require_unit(verbalized, "verbalized confidence");
  require_unit(profile_conf, "profile confidence");
  ConfidenceBreakdown b;
  b.verbalized = verbalized;
  b.profile = profile_conf;
  const double lambda = params.lambda();
  b.fused = std::clamp(lambda * verbalized + (1.0 - lambda) * profile_conf, 0.0, 1.0);
  b.conflict = std::abs(verbalized - profile_conf);
  b.effective_threshold = effective_threshold(b.conflict, params);
  return b;
}

}  // namespace metacog
