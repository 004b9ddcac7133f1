#pragma once

#include <span>

#include "metacog/profile.hpp"
#include "metacog/types.hpp"

namespace metacog {

// Hyperparameters of the self-assessment and learning loop. Every instance
// is in range: the checking constructor and the with_* copies throw
// std::invalid_argument otherwise.
class MetacogParams {
 public:
  MetacogParams() = default;
  MetacogParams(double lambda, double theta, double theta_delta, double gamma, double alpha);

  double lambda() const { return lambda_; }            // weight of verbalized confidence
  double theta() const { return theta_; }              // base delegation threshold
  double theta_delta() const { return theta_delta_; }  // conflict threshold
  double gamma() const { return gamma_; }              // threshold dampening factor
  double alpha() const { return alpha_; }              // profile learning rate

  MetacogParams with_lambda(double v) const;
  MetacogParams with_theta(double v) const;
  MetacogParams with_theta_delta(double v) const;
  MetacogParams with_gamma(double v) const;
  MetacogParams with_alpha(double v) const;

  friend bool operator==(const MetacogParams&, const MetacogParams&) = default;

 private:
  double lambda_ = 0.6;
  double theta_ = 0.5;
  double theta_delta_ = 0.3;
  double gamma_ = 0.2;
  double alpha_ = 0.1;
};

struct ConfidenceBreakdown {
  double verbalized = 0.0;
  double profile = 0.0;
  double fused = 0.0;
  double conflict = 0.0;
  double effective_threshold = 0.0;

  friend bool operator==(const ConfidenceBreakdown&, const ConfidenceBreakdown&) = default;
};

// Profile-based confidence for a task. One dimension reads the entry
// directly; several dimensions average their entries.
double profile_confidence(const CapabilityProfile& profile, std::span<const Dimension> dimensions);

// Fuses verbalized and profile confidence and fills in conflict and the
// effective threshold.
ConfidenceBreakdown fuse_confidence(double verbalized, double profile_conf,
                                    const MetacogParams& params);

// theta + gamma * conflict when conflict strictly exceeds theta_delta, else
// theta. Not clamped: a value above 1 forces delegation.
double effective_threshold(double conflict, const MetacogParams& params);

inline bool should_delegate(const ConfidenceBreakdown& b) {
  return b.fused < b.effective_threshold;
}

}  // namespace metacog
