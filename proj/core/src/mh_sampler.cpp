#include "bip/mh_sampler.hpp"

#include <atomic>
#include <cmath>
#include <cstring>
#include <exception>
#include <istream>
#include <limits>
#include <mutex>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace bip {

double Rng::uniform() {
  // 53-bit mantissa, [0, 1).
  return double(engine_() >> 11) * 0x1.0p-53;
}

void Rng::gaussians(double* out, int n) {
  if (n % 2 != 0)
    throw std::invalid_argument("gaussians() draws in pairs; n must be even");
  for (int i = 0; i < n; i += 2) {
    // Box-Muller with u1 in (0, 1]: exactly two engine draws per pair.
    const double u1 = double((engine_() >> 11) + 1) * 0x1.0p-53;
    const double u2 = double(engine_() >> 11) * 0x1.0p-53;
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    out[i] = r * std::cos(a);
    out[i + 1] = r * std::sin(a);
  }
}

void Rng::save(std::ostream& out) const {
  std::ostringstream text;
  text << engine_;
  const std::string state = text.str();
  const std::uint64_t size = state.size();
  out.write(reinterpret_cast<const char*>(&size), sizeof(size));
  out.write(state.data(), static_cast<std::streamsize>(state.size()));
}

Rng Rng::load(std::istream& in) {
  std::uint64_t size = 0;
  in.read(reinterpret_cast<char*>(&size), sizeof(size));
  if (!in || size > (1 << 20))
    throw std::runtime_error("corrupt RNG state");
  std::string state(size, '\0');
  in.read(state.data(), static_cast<std::streamsize>(size));
  if (!in) throw std::runtime_error("truncated RNG state");
  Rng rng;
  std::istringstream text(state);
  text >> rng.engine_;
  if (!text) throw std::runtime_error("unparsable RNG state");
  return rng;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t chain_seed(std::uint64_t seed, int chain_index) {
  if (chain_index < 0)
    throw std::invalid_argument("chain index must be non-negative");
  return splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(chain_index) +
                                      0x243F6A8885A308D3ULL));
}

void SamplerConfig::validate() const {
  if (!(sigma_prop >= 0.0) || !std::isfinite(sigma_prop))
    throw std::invalid_argument("sigma_prop must be finite and >= 0");
  if (chain_length < 1)
    throw std::invalid_argument("chain_length must be >= 1");
  if (n_chains < 1) throw std::invalid_argument("n_chains must be >= 1");
  if (burn_in_discard < 0)
    throw std::invalid_argument("burn_in_discard must be >= 0");
  if (thin_stride < 0)
    throw std::invalid_argument("thin_stride must be >= 0");
  if (lag_grid.stride < 1 || lag_grid.count < 1)
    throw std::invalid_argument("lag grid needs stride >= 1, count >= 1");
  if (snapshot_points_per_decade < 1)
    throw std::invalid_argument("snapshot_points_per_decade must be >= 1");
  for (int k = 0; k < kParameterCount; ++k)
    if (!(theta0[k] > 0.0) || !std::isfinite(theta0[k]))
      throw std::invalid_argument("theta0 must be positive and finite");
  for (const auto& [a, b] : pair_histograms)
    if (a < 0 || a >= kParameterCount || b < 0 || b >= kParameterCount)
      throw std::invalid_argument("pair histogram component out of range");
}

TargetFactory posterior_target(const Posterior& posterior) {
  const Posterior* p = &posterior;
  return [p](int) -> LogTarget {
    auto evaluator = std::make_shared<Posterior::Evaluator>(
        p->make_evaluator());
    return [evaluator](const ParameterVector& theta) {
      return evaluator->log_posterior(theta);
    };
  };
}

TargetFactory prior_only_target() {
  return [](int) -> LogTarget {
    return [](const ParameterVector& theta) {
      LogDensityParts parts;
      parts.log_likelihood = 0.0;
      parts.log_prior = log_prior(theta);
      parts.log_posterior = parts.log_prior;
      return parts;
    };
  };
}

ParameterVector propose(const ParameterVector& theta, double sigma_prop,
                        Rng& rng) {
  double xi[kParameterCount];
  rng.gaussians(xi, kParameterCount);
  ParameterVector proposal;
  for (int k = 0; k < kParameterCount; ++k)
    proposal[k] = theta[k] * std::exp(sigma_prop * xi[k]);
  return proposal;
}

double acceptance_probability(const LogDensityParts& current,
                              const ParameterVector& current_theta,
                              const ParameterVector& proposal_theta,
                              const LogDensityParts& proposal) {
  if (!std::isfinite(proposal.log_posterior)) return 0.0;
  double log_a = proposal.log_posterior - current.log_posterior;
  for (int k = 0; k < kParameterCount; ++k)
    log_a += std::log(proposal_theta[k]) - std::log(current_theta[k]);
  return std::min(1.0, std::exp(log_a));
}

Chain::Chain(LogTarget target, double sigma_prop,
             const ParameterVector& theta0, Rng rng)
    : target_(std::move(target)),
      sigma_prop_(sigma_prop),
      theta_(theta0),
      rng_(rng) {
  density_ = target_(theta_);
  if (!std::isfinite(density_.log_posterior))
    throw std::invalid_argument(
        "initial sample has a non-finite log-density");
}

void Chain::step() {
  const ParameterVector proposal = propose(theta_, sigma_prop_, rng_);
  LogDensityParts parts;
  bool anomalous = false;
  try {
    parts = target_(proposal);
  } catch (const std::exception&) {
    // Treat an unevaluable proposal like a zero-density one.
    parts.log_posterior = -std::numeric_limits<double>::infinity();
    anomalous = true;
  }
  if (!std::isfinite(parts.log_posterior)) anomalous = true;

  const double a = acceptance_probability(density_, theta_, proposal, parts);
  const double u = rng_.uniform();  // consumed on every step
  ++steps_;
  if (anomalous) ++anomalies_;
  if (u < a) {
    theta_ = proposal;
    density_ = parts;
    ++accepted_;
  }
}

void Chain::save_state(std::ostream& out) const {
  out.write(reinterpret_cast<const char*>(theta_.data()),
            sizeof(double) * kParameterCount);
  out.write(reinterpret_cast<const char*>(&density_), sizeof(density_));
  out.write(reinterpret_cast<const char*>(&steps_), sizeof(steps_));
  out.write(reinterpret_cast<const char*>(&accepted_), sizeof(accepted_));
  out.write(reinterpret_cast<const char*>(&anomalies_), sizeof(anomalies_));
  rng_.save(out);
  if (!out) throw std::runtime_error("failed to write chain state");
}

Chain Chain::load_state(std::istream& in, LogTarget target,
                        double sigma_prop) {
  ParameterVector theta;
  LogDensityParts density;
  std::int64_t steps = 0, accepted = 0, anomalies = 0;
  in.read(reinterpret_cast<char*>(theta.data()),
          sizeof(double) * kParameterCount);
  in.read(reinterpret_cast<char*>(&density), sizeof(density));
  in.read(reinterpret_cast<char*>(&steps), sizeof(steps));
  in.read(reinterpret_cast<char*>(&accepted), sizeof(accepted));
  in.read(reinterpret_cast<char*>(&anomalies), sizeof(anomalies));
  if (!in) throw std::runtime_error("truncated chain state");
  Rng rng = Rng::load(in);

  Chain chain(std::move(target), sigma_prop, theta, rng);
  // The constructor re-evaluates the target; keep the stored density to
  // stay bit-identical with the saved trajectory.
  chain.density_ = density;
  chain.steps_ = steps;
  chain.accepted_ = accepted;
  chain.anomalies_ = anomalies;
  return chain;
}

SampleDumpWriter::SampleDumpWriter(std::ostream& out,
                                   std::uint64_t thin_stride)
    : out_(&out) {
  out_->write("BIPBCHN1", 8);
  const std::uint32_t count = kParameterCount;
  out_->write(reinterpret_cast<const char*>(&count), sizeof(count));
  out_->write(reinterpret_cast<const char*>(&thin_stride),
              sizeof(thin_stride));
  if (!*out_) throw std::runtime_error("failed to write sample dump header");
}

void SampleDumpWriter::write(const ParameterVector& theta,
                             double log_posterior) {
  out_->write(reinterpret_cast<const char*>(theta.data()),
              sizeof(double) * kParameterCount);
  out_->write(reinterpret_cast<const char*>(&log_posterior),
              sizeof(log_posterior));
  if (!*out_) throw std::runtime_error("failed to write sample record");
  ++records_;
}

std::vector<ChainResult> run_chains(
    const SamplerConfig& config, const TargetFactory& target_factory,
    const std::function<SampleDumpWriter*(int)>& dump_sink, int n_threads) {
  config.validate();
  if (!target_factory) throw std::invalid_argument("missing target factory");

  std::vector<ChainResult> results(static_cast<size_t>(config.n_chains));
  std::atomic<int> next_chain{0};
  std::mutex error_mutex;
  std::exception_ptr first_error;

  const auto worker = [&] {
    for (;;) {
      const int index = next_chain.fetch_add(1);
      if (index >= config.n_chains) return;
      try {
        Rng rng(chain_seed(config.seed, index));
        Chain chain(target_factory(index), config.sigma_prop, config.theta0,
                    std::move(rng));
        ChainAccumulator acc(config.lag_grid,
                             config.snapshot_points_per_decade,
                             config.pair_histograms);
        SampleDumpWriter* dump = dump_sink ? dump_sink(index) : nullptr;

        const std::int64_t total =
            config.burn_in_discard + config.chain_length;
        for (std::int64_t i = 0; i < total; ++i) {
          if (i > 0) chain.step();
          if (i < config.burn_in_discard) continue;
          acc.push(chain.theta());
          const std::int64_t recorded = i - config.burn_in_discard;
          if (dump && config.thin_stride > 0 &&
              recorded % config.thin_stride == 0)
            dump->write(chain.theta(), chain.density().log_posterior);
        }

        acc.set_acceptance(chain.accepted(), chain.steps());
        acc.finalize();
        results[static_cast<size_t>(index)] =
            ChainResult{std::move(acc), chain.accepted(), chain.steps(),
                        chain.anomalies()};
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };

  const int threads = std::max(1, std::min(n_threads, config.n_chains));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(threads));
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);
  return results;
}

}  // namespace bip
