#pragma once

#include <memory>

#include "bip/grid_fem.hpp"

// The benchmark's probability model: forward map, Gaussian log-likelihood
// against the embedded reference measurements, log-prior on log(theta),
// and their sum. Everything is handled in log space; the non-normalized
// posterior is never exponentiated.

namespace bip {

inline constexpr double kLikelihoodSigma = 0.05;
inline constexpr double kPriorSigma      = 2.0;

struct LogDensityParts {
  double log_likelihood = 0.0;
  double log_prior      = 0.0;
  double log_posterior  = 0.0;
};

/// -||z - zhat||^2 / (2 sigma^2) with sigma = 0.05.
double log_likelihood(const MeasurementVector& z);

/// -sum_k ln(theta_k)^2 / (2 sigma_pr^2) with sigma_pr = 2.
/// Throws std::invalid_argument for non-positive or non-finite theta.
double log_prior(const ParameterVector& theta);

/// The posterior density at a selectable mesh level. Level 2 is the
/// benchmark definition; levels 0 and 1 exist for multilevel experiments.
class Posterior {
public:
  explicit Posterior(MeshLevel level = MeshLevel(2));

  MeshLevel level() const { return forward_.level(); }
  const ForwardOperator& forward_operator() const { return forward_; }

  /// Stateless given the shared ForwardOperator; an Evaluator owns the
  /// per-caller solver workspace, so use one per thread.
  class Evaluator {
  public:
    explicit Evaluator(const Posterior& p)
        : posterior_(&p), ws_(p.forward_.make_workspace()) {}

    MeasurementVector forward(const ParameterVector& theta) {
      return posterior_->forward_.apply(theta, ws_);
    }
    LogDensityParts log_posterior(const ParameterVector& theta);

  private:
    const Posterior* posterior_;
    ForwardOperator::Workspace ws_;
  };

  Evaluator make_evaluator() const { return Evaluator(*this); }

  /// Convenience single-shot evaluations (allocate a workspace per call).
  MeasurementVector forward(const ParameterVector& theta) const;
  LogDensityParts log_posterior(const ParameterVector& theta) const;

private:
  ForwardOperator forward_;
};

/// z^theta = measure(solve(assemble(theta, level))).
MeasurementVector forward(const ParameterVector& theta, MeshLevel level);

/// log_posterior = log_likelihood(forward(theta, level)) + log_prior(theta).
LogDensityParts log_posterior(const ParameterVector& theta, MeshLevel level);

}  // namespace bip
