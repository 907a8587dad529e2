#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

#include "bip/chain_stats.hpp"
#include "bip/posterior.hpp"

// Reference Metropolis-Hastings sampler with the lognormal random-walk
// proposal theta~_k = theta_k * exp(xi_k), xi_k ~ N(0, sigma_prop^2), and
// the Jacobian-corrected acceptance probability
//   A = min{1, exp(dlogpi + sum_k (ln theta~_k - ln theta_k))}.

namespace bip {

/// Wrapper around mt19937_64 with a fixed per-draw consumption contract:
/// uniform() consumes one engine draw, each Gaussian pair consumes two.
/// A step therefore always advances the engine by exactly 65 draws for a
/// 64-dimensional proposal, accepted or not.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform();                          // [0, 1)
  void gaussians(double* out, int n);        // Box-Muller, n even

  void save(std::ostream& out) const;
  static Rng load(std::istream& in);

private:
  Rng() : engine_() {}
  std::mt19937_64 engine_;
};

/// splitmix64-based mixing of (seed, chain index): adding chains never
/// perturbs the streams of existing ones.
std::uint64_t chain_seed(std::uint64_t seed, int chain_index);

struct SamplerConfig {
  double sigma_prop = 0.0725;
  std::int64_t chain_length = 0;  // samples recorded per chain, after burn-in
  int n_chains = 1;
  std::uint64_t seed = 0;
  MeshLevel level = MeshLevel(2);
  ParameterVector theta0 = ParameterVector::Ones();
  std::int64_t burn_in_discard = 0;
  std::int64_t thin_stride = 0;  // 0: no sample dump
  LagGrid lag_grid;
  int snapshot_points_per_decade = 32;
  std::vector<std::pair<int, int>> pair_histograms;

  void validate() const;  // throws std::invalid_argument
};

/// Log-density target; must populate all three LogDensityParts fields.
using LogTarget = std::function<LogDensityParts(const ParameterVector&)>;
/// Builds a per-chain target (each chain owns its evaluation workspace).
using TargetFactory = std::function<LogTarget(int chain_index)>;

TargetFactory posterior_target(const Posterior& posterior);
/// Prior-only target (no PDE solve); used to validate the proposal
/// Jacobian end-to-end.
TargetFactory prior_only_target();

ParameterVector propose(const ParameterVector& theta, double sigma_prop,
                        Rng& rng);

/// min{1, exp(dlogpi + sum_k (ln prop_k - ln cur_k))}; a non-finite
/// proposal log-density yields 0.
double acceptance_probability(const LogDensityParts& current,
                              const ParameterVector& current_theta,
                              const ParameterVector& proposal_theta,
                              const LogDensityParts& proposal);

/// One chain. Exactly one target evaluation per step; the stored
/// log-density always matches the current sample.
class Chain {
public:
  Chain(LogTarget target, double sigma_prop, const ParameterVector& theta0,
        Rng rng);

  /// One proposal/accept-reject transition.
  void step();

  const ParameterVector& theta() const { return theta_; }
  const LogDensityParts& density() const { return density_; }
  std::int64_t steps() const { return steps_; }
  std::int64_t accepted() const { return accepted_; }
  std::int64_t anomalies() const { return anomalies_; }

  void save_state(std::ostream& out) const;
  /// Restores sample, counters, and RNG position; the target is supplied
  /// by the caller (it is not serializable).
  static Chain load_state(std::istream& in, LogTarget target,
                          double sigma_prop);

private:
  LogTarget target_;
  double sigma_prop_;
  ParameterVector theta_;
  LogDensityParts density_;
  std::int64_t steps_ = 0;
  std::int64_t accepted_ = 0;
  std::int64_t anomalies_ = 0;
  Rng rng_;
};

/// Optional thinned binary sample dump:
///   magic "BIPBCHN1", u32 parameter count, u64 thinning stride,
///   then records of 64 f64 (theta) + 1 f64 (log posterior),
/// all little-endian.
class SampleDumpWriter {
public:
  SampleDumpWriter(std::ostream& out, std::uint64_t thin_stride);
  void write(const ParameterVector& theta, double log_posterior);
  std::uint64_t records_written() const { return records_; }

private:
  std::ostream* out_;
  std::uint64_t records_ = 0;
};

struct ChainResult {
  ChainAccumulator accumulator;
  std::int64_t accepted = 0;
  std::int64_t steps = 0;
  std::int64_t anomalies = 0;
};

/// Runs config.n_chains independent chains, chain L seeded from
/// chain_seed(config.seed, L). Each chain feeds its accumulator on the
/// fly; `dump_sink(L)` may return a writer for thinned sample records
/// (or nullptr). Results are finalized.
std::vector<ChainResult> run_chains(
    const SamplerConfig& config, const TargetFactory& target_factory,
    const std::function<SampleDumpWriter*(int)>& dump_sink = {},
    int n_threads = 1);

}  // namespace bip
