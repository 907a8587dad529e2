#include "bip/posterior.hpp"

#include <cmath>
#include <stdexcept>

#include "bip/verify.hpp"

namespace bip {

double log_likelihood(const MeasurementVector& z) {
  const double misfit2 = (z - embedded_zhat()).squaredNorm();
  return -misfit2 / (2.0 * kLikelihoodSigma * kLikelihoodSigma);
}

double log_prior(const ParameterVector& theta) {
  double sum = 0.0;
  for (int k = 0; k < kParameterCount; ++k) {
    if (!(theta[k] > 0.0) || !std::isfinite(theta[k]))
      throw std::invalid_argument(
          "log_prior requires positive, finite parameters");
    const double l = std::log(theta[k]);
    sum += l * l;
  }
  return -sum / (2.0 * kPriorSigma * kPriorSigma);
}

Posterior::Posterior(MeshLevel level) : forward_(level) {}

LogDensityParts Posterior::Evaluator::log_posterior(
    const ParameterVector& theta) {
  LogDensityParts parts;
  parts.log_prior = bip::log_prior(theta);
  parts.log_likelihood = bip::log_likelihood(forward(theta));
  parts.log_posterior = parts.log_likelihood + parts.log_prior;
  return parts;
}

MeasurementVector Posterior::forward(const ParameterVector& theta) const {
  auto ws = forward_.make_workspace();
  return forward_.apply(theta, ws);
}

LogDensityParts Posterior::log_posterior(const ParameterVector& theta) const {
  Evaluator ev(*this);
  return ev.log_posterior(theta);
}

MeasurementVector forward(const ParameterVector& theta, MeshLevel level) {
  return Posterior(level).forward(theta);
}

LogDensityParts log_posterior(const ParameterVector& theta, MeshLevel level) {
  return Posterior(level).log_posterior(theta);
}

}  // namespace bip
