#include "bip/chain_stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <istream>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace bip {

namespace {

constexpr char kAccumulatorMagic[8] = {'B', 'I', 'P', 'A', 'C', 'C', '0', '1'};

template <typename T>
void write_pod(std::ostream& out, const T& value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T read_pod(std::istream& in) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) throw std::runtime_error("truncated accumulator stream");
  return value;
}

void write_vector(std::ostream& out, const Eigen::VectorXd& v) {
  write_pod<std::int64_t>(out, v.size());
  out.write(reinterpret_cast<const char*>(v.data()),
            static_cast<std::streamsize>(sizeof(double)) * v.size());
}

Eigen::VectorXd read_vector(std::istream& in) {
  const auto n = read_pod<std::int64_t>(in);
  if (n < 0 || n > (1 << 24))
    throw std::runtime_error("corrupt accumulator stream (vector size)");
  Eigen::VectorXd v(n);
  in.read(reinterpret_cast<char*>(v.data()),
          static_cast<std::streamsize>(sizeof(double)) * n);
  if (!in) throw std::runtime_error("truncated accumulator stream");
  return v;
}

void write_matrix(std::ostream& out, const Eigen::MatrixXd& m) {
  write_pod<std::int64_t>(out, m.rows());
  write_pod<std::int64_t>(out, m.cols());
  out.write(reinterpret_cast<const char*>(m.data()),
            static_cast<std::streamsize>(sizeof(double)) * m.size());
}

Eigen::MatrixXd read_matrix(std::istream& in) {
  const auto rows = read_pod<std::int64_t>(in);
  const auto cols = read_pod<std::int64_t>(in);
  if (rows < 0 || cols < 0 || rows * cols > (1 << 28))
    throw std::runtime_error("corrupt accumulator stream (matrix size)");
  Eigen::MatrixXd m(rows, cols);
  in.read(reinterpret_cast<char*>(m.data()),
          static_cast<std::streamsize>(sizeof(double)) * m.size());
  if (!in) throw std::runtime_error("truncated accumulator stream");
  return m;
}

void write_counts(std::ostream& out, const std::vector<std::int64_t>& v) {
  write_pod<std::int64_t>(out, static_cast<std::int64_t>(v.size()));
  out.write(reinterpret_cast<const char*>(v.data()),
            static_cast<std::streamsize>(sizeof(std::int64_t)) * v.size());
}

std::vector<std::int64_t> read_counts(std::istream& in) {
  const auto n = read_pod<std::int64_t>(in);
  if (n < 0 || n > (1 << 28))
    throw std::runtime_error("corrupt accumulator stream (count size)");
  std::vector<std::int64_t> v(static_cast<size_t>(n));
  in.read(reinterpret_cast<char*>(v.data()),
          static_cast<std::streamsize>(sizeof(std::int64_t)) * n);
  if (!in) throw std::runtime_error("truncated accumulator stream");
  return v;
}

std::int64_t snapshot_point(int exponent, int points_per_decade) {
  return static_cast<std::int64_t>(
      std::llround(std::pow(10.0, exponent / double(points_per_decade))));
}

}  // namespace

int log_histogram_bin(double theta_k) {
  const double l = std::log10(theta_k);
  const double t = (l - kHistogramLo) / (kHistogramHi - kHistogramLo);
  const int bin = static_cast<int>(std::floor(t * kHistogramBins));
  return std::clamp(bin, 0, kHistogramBins - 1);
}

ChainAccumulator::ChainAccumulator(
    LagGrid lags, int snapshot_points_per_decade,
    std::vector<std::pair<int, int>> pair_histograms)
    : lags_(lags),
      snapshot_ppd_(snapshot_points_per_decade),
      pair_indices_(std::move(pair_histograms)) {
  if (lags_.stride < 1 || lags_.count < 1)
    throw std::invalid_argument("lag grid needs stride >= 1 and count >= 1");
  if (snapshot_ppd_ < 1)
    throw std::invalid_argument("snapshot grid needs >= 1 point per decade");
  for (const auto& [a, b] : pair_indices_)
    if (a < 0 || a >= kParameterCount || b < 0 || b >= kParameterCount)
      throw std::invalid_argument("pair histogram component out of range");

  sum_ = Eigen::VectorXd::Zero(kParameterCount);
  lag_sums_.assign(lags_.count,
                   Eigen::MatrixXd::Zero(kParameterCount, kParameterCount));
  ring_.assign(lags_.count + 1,
               Eigen::MatrixXd::Zero(kParameterCount, lags_.stride));
  histograms_.assign(static_cast<size_t>(kParameterCount) * kHistogramBins, 0);
  under_.assign(kParameterCount, 0);
  over_.assign(kParameterCount, 0);
  pair_histograms_.assign(pair_indices_.size() * kPairHistogramBins *
                              kPairHistogramBins,
                          0);
}

const Eigen::MatrixXd& ChainAccumulator::block(std::int64_t index) const {
  return ring_[static_cast<size_t>(index % (lags_.count + 1))];
}

Eigen::MatrixXd& ChainAccumulator::block(std::int64_t index) {
  return ring_[static_cast<size_t>(index % (lags_.count + 1))];
}

void ChainAccumulator::push(const ParameterVector& theta) {
  if (finalized_)
    throw std::logic_error("push() after finalize() is not allowed");

  ++n_;
  sum_ += theta;
  block(blocks_done_).col(block_fill_) = theta;
  ++block_fill_;

  for (int k = 0; k < kParameterCount; ++k) {
    const double l = std::log10(theta[k]);
    if (l < kHistogramLo) ++under_[k];
    if (l >= kHistogramHi) ++over_[k];
    ++histograms_[static_cast<size_t>(k) * kHistogramBins +
                  log_histogram_bin(theta[k])];
  }
  for (size_t p = 0; p < pair_indices_.size(); ++p) {
    const auto [a, b] = pair_indices_[p];
    const auto coarse = [](double t) {
      const double u =
          (std::log10(t) - kHistogramLo) / (kHistogramHi - kHistogramLo);
      return std::clamp(static_cast<int>(std::floor(u * kPairHistogramBins)),
                        0, kPairHistogramBins - 1);
    };
    ++pair_histograms_[(p * kPairHistogramBins + coarse(theta[a])) *
                           kPairHistogramBins +
                       coarse(theta[b])];
  }

  if (n_ == next_snapshot_) {
    snapshots_.push_back({n_, sum_ / double(n_)});
    while (next_snapshot_ <= n_)
      next_snapshot_ = snapshot_point(++snapshot_exp_, snapshot_ppd_);
  }

  if (block_fill_ == lags_.stride) flush_block(lags_.stride);
}

void ChainAccumulator::flush_block(int width) {
  Eigen::MatrixXd& cur = block(blocks_done_);
  const std::int64_t max_j =
      std::min<std::int64_t>(blocks_done_, lags_.count - 1);
  for (std::int64_t j = 0; j <= max_j; ++j)
    lag_sums_[static_cast<size_t>(j)].noalias() +=
        cur.leftCols(width) * block(blocks_done_ - j).leftCols(width)
                                  .transpose();

  // head_sums_[j-1] = sum over the first j full blocks (j*stride samples);
  // a partial trailing block never feeds a reachable lag, so skip it.
  if (width == lags_.stride &&
      static_cast<int>(head_sums_.size()) < lags_.count - 1) {
    Eigen::VectorXd block_sum = cur.rowwise().sum();
    head_sums_.push_back(head_sums_.empty() ? block_sum
                                            : head_sums_.back() + block_sum);
  }

  ++blocks_done_;
  block_fill_ = 0;
  block(blocks_done_).setZero();
}

void ChainAccumulator::finalize() {
  if (finalized_) return;
  const int last_width = block_fill_;
  if (block_fill_ > 0) flush_block(block_fill_);

  // Suffix sums at stride multiples, walking columns backwards through the
  // retained ring.
  tail_sums_.assign(lags_.count, Eigen::VectorXd::Zero(kParameterCount));
  Eigen::VectorXd running = Eigen::VectorXd::Zero(kParameterCount);
  std::int64_t back = 0;
  const std::int64_t needed =
      static_cast<std::int64_t>(lags_.count - 1) * lags_.stride;
  for (std::int64_t b = blocks_done_ - 1; b >= 0 && back < needed; --b) {
    if (blocks_done_ - b > lags_.count) break;  // beyond ring history
    const int width =
        (b == blocks_done_ - 1 && last_width > 0) ? last_width : lags_.stride;
    const Eigen::MatrixXd& blk = block(b);
    for (int c = width - 1; c >= 0 && back < needed; --c) {
      running += blk.col(c);
      ++back;
      if (back % lags_.stride == 0)
        tail_sums_[static_cast<size_t>(back / lags_.stride)] = running;
    }
  }

  ring_.clear();
  ring_.shrink_to_fit();
  finalized_ = true;
}

void ChainAccumulator::set_acceptance(std::int64_t accepted,
                                      std::int64_t proposals) {
  if (accepted < 0 || proposals < 0 || accepted > proposals)
    throw std::invalid_argument("invalid acceptance counters");
  accepted_ = accepted;
  proposals_ = proposals;
}

Eigen::VectorXd ChainAccumulator::mean() const {
  if (n_ == 0) throw std::logic_error("mean() of an empty accumulator");
  return sum_ / double(n_);
}

double ChainAccumulator::acceptance_rate() const {
  if (proposals_ == 0) return std::numeric_limits<double>::quiet_NaN();
  return double(accepted_) / double(proposals_);
}

Eigen::MatrixXd ChainAccumulator::autocovariance(int lag) const {
  if (!finalized_)
    throw std::logic_error("autocovariance() requires finalize()");
  if (lag < 0 || lag % lags_.stride != 0 || lag / lags_.stride >= lags_.count)
    throw std::invalid_argument("lag is not on the accumulator's lag grid");
  const int j = lag / lags_.stride;
  if (merged_ && j > 0)
    throw std::logic_error(
        "lagged autocovariance is per-chain and unavailable after merge()");
  if (n_ <= lag + 1)
    throw std::invalid_argument("chain too short for the requested lag");

  const Eigen::VectorXd m = sum_ / double(n_);
  const Eigen::VectorXd a =
      (j == 0) ? sum_ : Eigen::VectorXd(sum_ - head_sums_[j - 1]);
  const Eigen::VectorXd b =
      (j == 0) ? sum_ : Eigen::VectorXd(sum_ - tail_sums_[j]);
  Eigen::MatrixXd ac = lag_sums_[static_cast<size_t>(j)];
  ac.noalias() -= a * m.transpose();
  ac.noalias() -= m * b.transpose();
  ac.noalias() += double(n_ - lag) * m * m.transpose();
  return ac / double(n_ - lag - 1);
}

Eigen::MatrixXd ChainAccumulator::chain_covariance() const {
  return covariance_about(mean());
}

Eigen::MatrixXd ChainAccumulator::covariance_about(
    const Eigen::VectorXd& center) const {
  if (!finalized_)
    throw std::logic_error("covariance_about() requires finalize()");
  if (center.size() != kParameterCount)
    throw std::invalid_argument("center must have 64 components");
  if (n_ < 2) throw std::logic_error("covariance needs at least two samples");
  Eigen::MatrixXd c = lag_sums_[0];
  c.noalias() -= sum_ * center.transpose();
  c.noalias() -= center * sum_.transpose();
  c.noalias() += double(n_) * center * center.transpose();
  return c / double(n_ - 1);
}

void ChainAccumulator::merge(const ChainAccumulator& other) {
  if (!finalized_ || !other.finalized_)
    throw std::logic_error("merge() requires both accumulators finalized");
  if (pair_indices_ != other.pair_indices_)
    throw std::invalid_argument("merge() needs matching pair histograms");

  n_ += other.n_;
  sum_ += other.sum_;
  lag_sums_[0] += other.lag_sums_[0];
  for (size_t i = 0; i < histograms_.size(); ++i)
    histograms_[i] += other.histograms_[i];
  for (int k = 0; k < kParameterCount; ++k) {
    under_[k] += other.under_[k];
    over_[k] += other.over_[k];
  }
  for (size_t i = 0; i < pair_histograms_.size(); ++i)
    pair_histograms_[i] += other.pair_histograms_[i];
  accepted_ += other.accepted_;
  proposals_ += other.proposals_;
  merged_ = true;
}

std::vector<std::int64_t> ChainAccumulator::histogram(int component) const {
  if (component < 0 || component >= kParameterCount)
    throw std::invalid_argument("histogram component out of range");
  const auto* base =
      histograms_.data() + static_cast<size_t>(component) * kHistogramBins;
  return {base, base + kHistogramBins};
}

std::int64_t ChainAccumulator::histogram_underflow(int component) const {
  return under_.at(static_cast<size_t>(component));
}

std::int64_t ChainAccumulator::histogram_overflow(int component) const {
  return over_.at(static_cast<size_t>(component));
}

std::vector<std::int64_t> ChainAccumulator::pair_histogram(int pair) const {
  if (pair < 0 || pair >= static_cast<int>(pair_indices_.size()))
    throw std::invalid_argument("pair histogram index out of range");
  const size_t cells = size_t(kPairHistogramBins) * kPairHistogramBins;
  const auto* base = pair_histograms_.data() + static_cast<size_t>(pair) * cells;
  return {base, base + cells};
}

void ChainAccumulator::save(std::ostream& out) const {
  out.write(kAccumulatorMagic, sizeof(kAccumulatorMagic));
  write_pod<std::int32_t>(out, lags_.stride);
  write_pod<std::int32_t>(out, lags_.count);
  write_pod<std::int32_t>(out, snapshot_ppd_);
  write_pod<std::uint8_t>(out, finalized_ ? 1 : 0);
  write_pod<std::uint8_t>(out, merged_ ? 1 : 0);
  write_pod<std::int64_t>(out, n_);
  write_vector(out, sum_);
  write_pod<std::int64_t>(out, blocks_done_);
  write_pod<std::int32_t>(out, block_fill_);

  write_pod<std::int64_t>(out, static_cast<std::int64_t>(lag_sums_.size()));
  for (const auto& m : lag_sums_) write_matrix(out, m);
  write_pod<std::int64_t>(out, static_cast<std::int64_t>(head_sums_.size()));
  for (const auto& v : head_sums_) write_vector(out, v);
  write_pod<std::int64_t>(out, static_cast<std::int64_t>(tail_sums_.size()));
  for (const auto& v : tail_sums_) write_vector(out, v);
  write_pod<std::int64_t>(out, static_cast<std::int64_t>(ring_.size()));
  for (const auto& m : ring_) write_matrix(out, m);

  write_counts(out, histograms_);
  write_counts(out, under_);
  write_counts(out, over_);
  write_pod<std::int64_t>(out, static_cast<std::int64_t>(pair_indices_.size()));
  for (const auto& [a, b] : pair_indices_) {
    write_pod<std::int32_t>(out, a);
    write_pod<std::int32_t>(out, b);
  }
  write_counts(out, pair_histograms_);

  write_pod<std::int64_t>(out, static_cast<std::int64_t>(snapshots_.size()));
  for (const auto& s : snapshots_) {
    write_pod<std::int64_t>(out, s.n);
    write_vector(out, s.mean);
  }
  write_pod<std::int64_t>(out, next_snapshot_);
  write_pod<std::int32_t>(out, snapshot_exp_);
  write_pod<std::int64_t>(out, accepted_);
  write_pod<std::int64_t>(out, proposals_);
  if (!out) throw std::runtime_error("failed to write accumulator stream");
}

ChainAccumulator ChainAccumulator::load(std::istream& in) {
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kAccumulatorMagic, sizeof(magic)) != 0)
    throw std::runtime_error("not an accumulator stream (bad magic)");

  LagGrid lags;
  lags.stride = read_pod<std::int32_t>(in);
  lags.count = read_pod<std::int32_t>(in);
  const int ppd = read_pod<std::int32_t>(in);
  const bool finalized = read_pod<std::uint8_t>(in) != 0;
  const bool merged = read_pod<std::uint8_t>(in) != 0;

  ChainAccumulator acc(lags, ppd, {});
  acc.finalized_ = finalized;
  acc.merged_ = merged;
  acc.n_ = read_pod<std::int64_t>(in);
  acc.sum_ = read_vector(in);
  acc.blocks_done_ = read_pod<std::int64_t>(in);
  acc.block_fill_ = read_pod<std::int32_t>(in);

  const auto n_lag = read_pod<std::int64_t>(in);
  acc.lag_sums_.resize(static_cast<size_t>(n_lag));
  for (auto& m : acc.lag_sums_) m = read_matrix(in);
  const auto n_head = read_pod<std::int64_t>(in);
  acc.head_sums_.resize(static_cast<size_t>(n_head));
  for (auto& v : acc.head_sums_) v = read_vector(in);
  const auto n_tail = read_pod<std::int64_t>(in);
  acc.tail_sums_.resize(static_cast<size_t>(n_tail));
  for (auto& v : acc.tail_sums_) v = read_vector(in);
  const auto n_ring = read_pod<std::int64_t>(in);
  acc.ring_.resize(static_cast<size_t>(n_ring));
  for (auto& m : acc.ring_) m = read_matrix(in);

  acc.histograms_ = read_counts(in);
  acc.under_ = read_counts(in);
  acc.over_ = read_counts(in);
  const auto n_pairs = read_pod<std::int64_t>(in);
  acc.pair_indices_.resize(static_cast<size_t>(n_pairs));
  for (auto& [a, b] : acc.pair_indices_) {
    a = read_pod<std::int32_t>(in);
    b = read_pod<std::int32_t>(in);
  }
  acc.pair_histograms_ = read_counts(in);

  const auto n_snap = read_pod<std::int64_t>(in);
  acc.snapshots_.resize(static_cast<size_t>(n_snap));
  for (auto& s : acc.snapshots_) {
    s.n = read_pod<std::int64_t>(in);
    s.mean = read_vector(in);
  }
  acc.next_snapshot_ = read_pod<std::int64_t>(in);
  acc.snapshot_exp_ = read_pod<std::int32_t>(in);
  acc.accepted_ = read_pod<std::int64_t>(in);
  acc.proposals_ = read_pod<std::int64_t>(in);
  return acc;
}

Eigen::MatrixXd integrated_autocovariance(
    const std::vector<const ChainAccumulator*>& chains) {
  if (chains.empty())
    throw std::invalid_argument("integrated_autocovariance needs >= 1 chain");
  const LagGrid grid = chains.front()->lag_grid();
  Eigen::MatrixXd iac =
      Eigen::MatrixXd::Zero(kParameterCount, kParameterCount);
  for (const ChainAccumulator* chain : chains) {
    if (!(chain->lag_grid() == grid))
      throw std::invalid_argument("chains disagree on the lag grid");
    Eigen::MatrixXd sum = chain->autocovariance(0);
    for (int j = 1; j < grid.count; ++j)
      sum += 2.0 * chain->autocovariance(j * grid.stride);
    iac += double(grid.stride) * sum;
  }
  return iac / double(chains.size());
}

double effective_sample_size(const Eigen::MatrixXd& C,
                             const Eigen::MatrixXd& iac, double chain_length,
                             EssInfo* info) {
  if (C.rows() != C.cols() || iac.rows() != iac.cols() ||
      C.rows() != iac.rows())
    throw std::invalid_argument("covariance matrices must be square and "
                                "equally sized");
  const Eigen::MatrixXd sym = 0.5 * (iac + iac.transpose());

  EssInfo local;
  Eigen::LLT<Eigen::MatrixXd> llt(C);
  if (llt.info() != Eigen::Success) {
    local.ridge_applied = true;
    local.ridge = 1e-10 * C.trace() / double(C.rows());
    Eigen::MatrixXd ridged =
        C + local.ridge * Eigen::MatrixXd::Identity(C.rows(), C.cols());
    llt.compute(ridged);
    if (llt.info() != Eigen::Success) {
      if (info) *info = local;
      return std::numeric_limits<double>::quiet_NaN();
    }
  }

  const Eigen::MatrixXd l = llt.matrixL();
  Eigen::MatrixXd b =
      l.triangularView<Eigen::Lower>().solve(sym);
  b = l.triangularView<Eigen::Lower>()
          .solve(b.transpose())
          .transpose();
  const Eigen::MatrixXd b_sym = 0.5 * (b + b.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(b_sym,
                                                    Eigen::EigenvaluesOnly);
  local.lambda_max = es.eigenvalues().maxCoeff();
  if (info) *info = local;
  return chain_length / local.lambda_max;
}

EnsembleMean ensemble_mean_with_uncertainty(
    const std::vector<const ChainAccumulator*>& chains) {
  if (chains.empty())
    throw std::invalid_argument("ensemble mean needs >= 1 chain");
  const int n = static_cast<int>(chains.size());

  EnsembleMean result;
  result.mean = Eigen::VectorXd::Zero(kParameterCount);
  for (const ChainAccumulator* c : chains) result.mean += c->mean();
  result.mean /= double(n);

  if (n >= 2) {
    Eigen::VectorXd var = Eigen::VectorXd::Zero(kParameterCount);
    for (const ChainAccumulator* c : chains)
      var += (c->mean() - result.mean).array().square().matrix();
    var /= double(n);
    result.two_sigma = 2.0 / std::sqrt(double(n)) * var.array().sqrt();
    result.uncertainty_available = true;
  }
  return result;
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> covariance_and_correlation(
    const std::vector<const ChainAccumulator*>& chains) {
  const EnsembleMean em = ensemble_mean_with_uncertainty(chains);
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(kParameterCount, kParameterCount);
  for (const ChainAccumulator* chain : chains)
    c += chain->covariance_about(em.mean);
  c /= double(chains.size());

  Eigen::MatrixXd d(kParameterCount, kParameterCount);
  for (int i = 0; i < kParameterCount; ++i)
    for (int j = 0; j < kParameterCount; ++j)
      d(i, j) = c(i, j) / std::sqrt(c(i, i) * c(j, j));
  return {std::move(c), std::move(d)};
}

EigenSpectrum eigen_spectrum(const Eigen::MatrixXd& c) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
      0.5 * (c + c.transpose()));
  if (es.info() != Eigen::Success)
    throw std::runtime_error("symmetric eigensolve failed");
  EigenSpectrum spectrum;
  spectrum.values = es.eigenvalues().reverse();
  spectrum.vectors = es.eigenvectors().rowwise().reverse();
  return spectrum;
}

ConvergenceError convergence_error(
    const std::vector<const ChainAccumulator*>& chains,
    const Eigen::VectorXd& reference_mean) {
  if (chains.empty())
    throw std::invalid_argument("convergence_error needs >= 1 chain");
  if (reference_mean.size() != kParameterCount)
    throw std::invalid_argument("reference mean must have 64 components");

  ConvergenceError result;
  const auto& base = chains.front()->snapshots();
  for (const auto& s : base) result.n.push_back(s.n);

  result.per_chain.resize(chains.size());
  result.mean_square_error.assign(result.n.size(), 0.0);
  for (size_t l = 0; l < chains.size(); ++l) {
    const auto& snaps = chains[l]->snapshots();
    if (snaps.size() != result.n.size())
      throw std::invalid_argument("chains disagree on the snapshot grid");
    for (size_t i = 0; i < snaps.size(); ++i) {
      if (snaps[i].n != result.n[i])
        throw std::invalid_argument("chains disagree on the snapshot grid");
      const double e =
          ((snaps[i].mean - reference_mean).array() /
           reference_mean.array())
              .matrix()
              .norm();
      result.per_chain[l].push_back(e);
      result.mean_square_error[i] += e * e / double(chains.size());
    }
  }

  // Tail fit over n >= n_max/10: least-squares K in e^2 = K/n and the
  // log-log slope as a shape check.
  if (!result.n.empty()) {
    const double n_max = double(result.n.back());
    double num = 0.0, den = 0.0;
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    int points = 0;
    for (size_t i = 0; i < result.n.size(); ++i) {
      const double n = double(result.n[i]);
      const double e2 = result.mean_square_error[i];
      if (n < n_max / 10.0 || e2 <= 0.0) continue;
      num += e2 / n;
      den += 1.0 / (n * n);
      const double x = std::log(n), y = std::log(e2);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
      ++points;
    }
    if (den > 0.0) result.fitted_k = num / den;
    if (points >= 2) {
      const double denom = points * sxx - sx * sx;
      if (denom != 0.0) result.loglog_slope = (points * sxy - sx * sy) / denom;
    }
  }
  return result;
}

double convergence_constant_prediction(const Eigen::MatrixXd& iac,
                                       const Eigen::VectorXd& reference_mean) {
  if (iac.rows() != reference_mean.size() ||
      iac.cols() != reference_mean.size())
    throw std::invalid_argument("dimension mismatch");
  double k = 0.0;
  for (int i = 0; i < reference_mean.size(); ++i)
    k += iac(i, i) / (reference_mean[i] * reference_mean[i]);
  return k;
}

}  // namespace bip
