#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "bip/grid_fem.hpp"

// Streaming per-chain statistics and the cross-chain diagnostics built
// from them: autocovariance at a fixed lag grid, integrated autocovariance,
// effective sample size, ensemble means with uncertainty, covariance and
// correlation, eigen-spectra, the 1/n convergence law, and log-histograms.
//
// Nothing here stores full chains: all quantities are computable from the
// accumulator state, which keeps a ring of the most recent samples only as
// far back as the largest configured lag.

namespace bip {

/// Lags {0, stride, 2*stride, ..., (count-1)*stride}. The benchmark grid
/// is stride 100, count 201 (lags 0..20000).
struct LagGrid {
  int stride = 100;
  int count  = 201;

  bool operator==(const LagGrid&) const = default;
  int max_lag() const { return stride * (count - 1); }
};

inline constexpr int kHistogramBins    = 1000;
inline constexpr double kHistogramLo   = -3.0;  // log10(theta)
inline constexpr double kHistogramHi   = 3.0;
inline constexpr int kPairHistogramBins = 100;

/// Bin index for one component value; out-of-range values clamp to the
/// edge bins (and are tallied separately by the accumulator).
int log_histogram_bin(double theta_k);

/// Single-writer streaming accumulator for one chain. After finalize()
/// the lagged reductions are frozen, the sample ring is released, and
/// push() is no longer allowed.
class ChainAccumulator {
public:
  ChainAccumulator() : ChainAccumulator(LagGrid{}, 32, {}) {}
  ChainAccumulator(LagGrid lags, int snapshot_points_per_decade,
                   std::vector<std::pair<int, int>> pair_histograms);

  void push(const ParameterVector& theta);
  void finalize();
  bool finalized() const { return finalized_; }

  void set_acceptance(std::int64_t accepted, std::int64_t proposals);

  std::int64_t count() const { return n_; }
  const LagGrid& lag_grid() const { return lags_; }
  Eigen::VectorXd mean() const;
  std::int64_t accepted() const { return accepted_; }
  std::int64_t proposals() const { return proposals_; }
  double acceptance_rate() const;

  /// AC_L(s) = 1/(n-s-1) sum_{l=s}^{n-1} [x_l - m][x_{l-s} - m]^T with m
  /// the full-chain mean. Requires finalize(); s must lie on the lag grid
  /// with n > s + 1.
  Eigen::MatrixXd autocovariance(int lag) const;

  /// Sample covariance about the chain's own mean ((n-1)-normalized);
  /// identical to autocovariance(0).
  Eigen::MatrixXd chain_covariance() const;

  /// Covariance about an externally supplied center (the ensemble mean),
  /// (n-1)-normalized.
  Eigen::MatrixXd covariance_about(const Eigen::VectorXd& center) const;

  /// Merges sums, outer-product sufficient statistics, histograms, and
  /// acceptance counters of another finalized accumulator (disjoint
  /// samples). Lagged sums and snapshots are per-chain and are not merged.
  void merge(const ChainAccumulator& other);

  // Histograms (component bins, then kPairHistogramBins^2 row-major for
  // pairs).
  std::vector<std::int64_t> histogram(int component) const;
  std::int64_t histogram_underflow(int component) const;
  std::int64_t histogram_overflow(int component) const;
  const std::vector<std::pair<int, int>>& pair_histogram_indices() const {
    return pair_indices_;
  }
  std::vector<std::int64_t> pair_histogram(int pair) const;

  // Running-mean snapshots <theta>_{L,n} on the geometric n-grid.
  struct Snapshot {
    std::int64_t n;
    Eigen::VectorXd mean;
  };
  const std::vector<Snapshot>& snapshots() const { return snapshots_; }

  void save(std::ostream& out) const;
  static ChainAccumulator load(std::istream& in);

private:
  void flush_block(int width);
  const Eigen::MatrixXd& block(std::int64_t index) const;
  Eigen::MatrixXd& block(std::int64_t index);

  LagGrid lags_;
  int snapshot_ppd_ = 32;
  bool finalized_ = false;
  bool merged_ = false;  // lagged sums/snapshots invalidated by merge()

  std::int64_t n_ = 0;
  Eigen::VectorXd sum_;

  // Lagged cross-sums S_j = sum_l x_l x_{l-j*stride}^T, accumulated in
  // blocks of `stride` samples so the rank-1 updates become GEMMs.
  std::vector<Eigen::MatrixXd> lag_sums_;
  std::vector<Eigen::VectorXd> head_sums_;  // sums over the first j*stride samples
  std::vector<Eigen::VectorXd> tail_sums_;  // sums over the last j*stride samples (finalize)
  std::vector<Eigen::MatrixXd> ring_;       // last lag count+1 blocks
  int block_fill_ = 0;
  std::int64_t blocks_done_ = 0;

  std::vector<std::int64_t> histograms_;  // 64 * kHistogramBins
  std::vector<std::int64_t> under_, over_;
  std::vector<std::pair<int, int>> pair_indices_;
  std::vector<std::int64_t> pair_histograms_;

  std::vector<Snapshot> snapshots_;
  std::int64_t next_snapshot_ = 1;
  int snapshot_exp_ = 0;

  std::int64_t accepted_ = 0, proposals_ = 0;
};

/// IAC = (1/N) sum_L stride * [AC_L(0) + 2 sum_{j>=1} AC_L(j*stride)].
/// All chains must share the lag grid and be finalized.
Eigen::MatrixXd integrated_autocovariance(
    const std::vector<const ChainAccumulator*>& chains);

struct EssInfo {
  bool ridge_applied = false;
  double ridge = 0.0;
  double lambda_max = 0.0;
};

/// N_L / lambda_max(C^{-1} IAC) via Cholesky of C and a symmetric
/// eigensolve of the transformed matrix. If C is numerically singular a
/// ridge eps*(tr C/64)*I with eps = 1e-10 is added and reported.
double effective_sample_size(const Eigen::MatrixXd& C,
                             const Eigen::MatrixXd& iac, double chain_length,
                             EssInfo* info = nullptr);

struct EnsembleMean {
  Eigen::VectorXd mean;
  Eigen::VectorXd two_sigma;        // empty when only one chain
  bool uncertainty_available = false;
};

/// Mean of chain means; 2 sigma = (2/sqrt(N)) * across-chain stddev of the
/// chain means.
EnsembleMean ensemble_mean_with_uncertainty(
    const std::vector<const ChainAccumulator*>& chains);

/// C_L centered at the ensemble mean, C the chain average, and the
/// correlation D_ij = C_ij / sqrt(C_ii C_jj). Zero-variance components get
/// NaN correlation entries.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> covariance_and_correlation(
    const std::vector<const ChainAccumulator*>& chains);

struct EigenSpectrum {
  Eigen::VectorXd values;   // descending
  Eigen::MatrixXd vectors;  // columns match values
};
EigenSpectrum eigen_spectrum(const Eigen::MatrixXd& c);

struct ConvergenceError {
  std::vector<std::int64_t> n;           // snapshot grid (common across chains)
  std::vector<double> mean_square_error; // e(n)^2, chain average
  std::vector<std::vector<double>> per_chain;  // e_L(n)
  double fitted_k = 0.0;      // least-squares K in e(n)^2 ~ K/n over the tail
  double loglog_slope = 0.0;  // slope of log e(n)^2 vs log n over the tail
};

/// e_L(n) = || diag(ref)^-1 (<theta>_{L,n} - ref) ||_2 on the snapshot
/// grid, the chain-averaged e(n)^2 series, and a tail fit of K/n.
ConvergenceError convergence_error(
    const std::vector<const ChainAccumulator*>& chains,
    const Eigen::VectorXd& reference_mean);

/// tr(diag(ref)^-1 IAC diag(ref)^-1): the Markov-chain CLT prediction for
/// the constant in e(n)^2 ~ K/n.
double convergence_constant_prediction(const Eigen::MatrixXd& iac,
                                       const Eigen::VectorXd& reference_mean);

}  // namespace bip
