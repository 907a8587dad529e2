// Command-line front end: forward/posterior evaluation, sampling campaigns
// with checkpointing, diagnostics export, the 1D analytic benchmark, and
// golden-vector generation/checking.
//
// Exit codes: 0 success, 2 bad arguments, 3 malformed config/input,
// 4 missing file, 5 verification/check failure.

#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bip/bench1d.hpp"
#include "bip/chain_stats.hpp"
#include "bip/mh_sampler.hpp"
#include "bip/posterior.hpp"
#include "bip/verify.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitBadArgs = 2;
constexpr int kExitMalformed = 3;
constexpr int kExitMissingFile = 4;
constexpr int kExitCheckFailed = 5;

struct CliError {
  int code;
  std::string message;
};

[[noreturn]] void fail(int code, const std::string& message) {
  throw CliError{code, message};
}

std::string format_double(double v) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", v);
  return buffer;
}

bip::ParameterVector read_theta_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(kExitMissingFile, "cannot open theta file: " + path);
  bip::ParameterVector theta;
  for (int k = 0; k < bip::kParameterCount; ++k)
    if (!(in >> theta[k]))
      fail(kExitMalformed,
           "theta file must contain 64 numbers: " + path);
  double extra;
  if (in >> extra)
    fail(kExitMalformed, "theta file has more than 64 numbers: " + path);
  return theta;
}

std::string resolve_output_dir(const std::string& flag_value,
                               const std::string& config_value = {}) {
  if (!flag_value.empty()) return flag_value;
  if (!config_value.empty()) return config_value;
  if (const char* env = std::getenv("BIPBENCH_OUTPUT"); env && *env)
    return env;
  return ".";
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(kExitMissingFile, "cannot write " + path.string());
  return out;
}

// ---------------------------------------------------------------------------
// sample: config parsing, checkpointed chain execution

struct RunConfig {
  bip::SamplerConfig sampler;
  std::string output_dir;
  int checkpoint_interval_seconds = 300;
};

RunConfig parse_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(kExitMissingFile, "cannot open config: " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    fail(kExitMalformed, std::string("malformed config JSON: ") + e.what());
  }
  if (!doc.is_object()) fail(kExitMalformed, "config must be a JSON object");

  const std::set<std::string> known = {
      "level",          "sigma_prop",     "n_chains",
      "chain_length",   "seed",           "burn_in_discard",
      "thin_stride",    "pair_histograms", "output_dir",
      "snapshot_points_per_decade",        "lag_stride",
      "lag_count",      "checkpoint_interval_seconds"};
  for (const auto& [key, value] : doc.items())
    if (!known.count(key))
      fail(kExitMalformed, "unknown config key: " + key);

  RunConfig config;
  try {
    auto& s = config.sampler;
    s.level = bip::MeshLevel(doc.value("level", 2));
    s.sigma_prop = doc.value("sigma_prop", 0.0725);
    s.n_chains = doc.value("n_chains", 1);
    s.chain_length = doc.value("chain_length", std::int64_t{1000});
    s.seed = doc.value("seed", std::uint64_t{0});
    s.burn_in_discard = doc.value("burn_in_discard", std::int64_t{0});
    s.thin_stride = doc.value("thin_stride", std::int64_t{0});
    s.lag_grid.stride = doc.value("lag_stride", 100);
    s.lag_grid.count = doc.value("lag_count", 201);
    s.snapshot_points_per_decade =
        doc.value("snapshot_points_per_decade", 32);
    if (doc.contains("pair_histograms"))
      for (const auto& pair : doc.at("pair_histograms")) {
        if (!pair.is_array() || pair.size() != 2)
          fail(kExitMalformed, "pair_histograms entries must be [i, j]");
        s.pair_histograms.emplace_back(pair.at(0).get<int>(),
                                       pair.at(1).get<int>());
      }
    config.output_dir = doc.value("output_dir", std::string{});
    config.checkpoint_interval_seconds =
        doc.value("checkpoint_interval_seconds", 300);
    s.validate();
  } catch (const CliError&) {
    throw;
  } catch (const std::exception& e) {
    fail(kExitMalformed, std::string("invalid config: ") + e.what());
  }
  return config;
}

std::string chain_tag(int index) {
  char buffer[16];
  std::snprintf(buffer, sizeof(buffer), "chain_%03d", index);
  return buffer;
}

void write_sidecar(const fs::path& path, const RunConfig& config,
                   int chain_index, const bip::ChainAccumulator& acc,
                   std::int64_t dump_records) {
  json side;
  side["chain_index"] = chain_index;
  side["seed"] = config.sampler.seed;
  side["chain_seed"] = bip::chain_seed(config.sampler.seed, chain_index);
  side["level"] = config.sampler.level.level;
  side["sigma_prop"] = config.sampler.sigma_prop;
  side["chain_length"] = config.sampler.chain_length;
  side["burn_in_discard"] = config.sampler.burn_in_discard;
  side["thin_stride"] = config.sampler.thin_stride;
  side["samples_recorded"] = acc.count();
  side["accepted"] = acc.accepted();
  side["proposals"] = acc.proposals();
  side["acceptance_rate"] = acc.acceptance_rate();
  side["dump_records"] = dump_records;
  auto out = open_output(path);
  out << side.dump(2) << "\n";
}

// One chain with periodic checkpoints. The sampling order (initial sample,
// then step/push/dump) must stay in lockstep with bip::run_chains so the
// two paths produce identical results for the same seed.
void run_chain_with_checkpoints(const RunConfig& config,
                                const bip::Posterior& posterior,
                                int index, const fs::path& dir, bool resume) {
  const auto& s = config.sampler;
  const std::string tag = chain_tag(index);
  const fs::path acc_path = dir / (tag + ".acc");
  const fs::path ckpt_path = dir / (tag + ".ckpt");
  const fs::path dump_path = dir / (tag + ".dump");
  const fs::path side_path = dir / (tag + ".json");

  if (resume && fs::exists(acc_path)) return;  // chain already finished

  const bip::LogTarget target = bip::posterior_target(posterior)(index);
  const std::int64_t total = s.burn_in_discard + s.chain_length;

  std::int64_t done = 0;        // samples processed (index into trajectory)
  std::int64_t dumped = 0;      // dump records written
  std::optional<bip::Chain> chain;
  std::optional<bip::ChainAccumulator> acc;

  if (resume && fs::exists(ckpt_path)) {
    std::ifstream in(ckpt_path, std::ios::binary);
    if (!in) fail(kExitMissingFile, "cannot read " + ckpt_path.string());
    in.read(reinterpret_cast<char*>(&done), sizeof(done));
    in.read(reinterpret_cast<char*>(&dumped), sizeof(dumped));
    if (!in) fail(kExitMalformed, "corrupt checkpoint " + ckpt_path.string());
    chain.emplace(bip::Chain::load_state(in, target, s.sigma_prop));
    acc.emplace(bip::ChainAccumulator::load(in));
    // Drop any dump records past the checkpoint.
    if (s.thin_stride > 0 && fs::exists(dump_path))
      fs::resize_file(dump_path,
                      20 + static_cast<std::uintmax_t>(dumped) * 65 * 8);
  } else {
    chain.emplace(target, s.sigma_prop, s.theta0,
                  bip::Rng(bip::chain_seed(s.seed, index)));
    acc.emplace(s.lag_grid, s.snapshot_points_per_decade, s.pair_histograms);
    if (s.thin_stride > 0) {
      auto out = open_output(dump_path);
      bip::SampleDumpWriter header(out,
                                   static_cast<std::uint64_t>(s.thin_stride));
      (void)header;  // constructor writes the file header
    }
  }

  std::ofstream dump_out;
  std::optional<bip::SampleDumpWriter> dump;
  if (s.thin_stride > 0) {
    dump_out.open(dump_path, std::ios::binary | std::ios::in | std::ios::out);
    if (!dump_out)
      fail(kExitMissingFile, "cannot append to " + dump_path.string());
    dump_out.seekp(0, std::ios::end);
  }

  const auto write_checkpoint = [&] {
    const fs::path tmp = ckpt_path.string() + ".tmp";
    {
      auto out = open_output(tmp);
      out.write(reinterpret_cast<const char*>(&done), sizeof(done));
      out.write(reinterpret_cast<const char*>(&dumped), sizeof(dumped));
      chain->save_state(out);
      acc->save(out);
    }
    if (s.thin_stride > 0) dump_out.flush();
    fs::rename(tmp, ckpt_path);
  };

  auto last_checkpoint = std::chrono::steady_clock::now();
  for (std::int64_t i = done; i < total; ++i) {
    if (i > 0) chain->step();
    if (i >= s.burn_in_discard) {
      acc->push(chain->theta());
      const std::int64_t recorded = i - s.burn_in_discard;
      if (s.thin_stride > 0 && recorded % s.thin_stride == 0) {
        const auto& theta = chain->theta();
        dump_out.write(reinterpret_cast<const char*>(theta.data()),
                       sizeof(double) * bip::kParameterCount);
        const double lp = chain->density().log_posterior;
        dump_out.write(reinterpret_cast<const char*>(&lp), sizeof(lp));
        ++dumped;
      }
    }
    done = i + 1;

    if (config.checkpoint_interval_seconds > 0 && (i % 1024) == 0) {
      const auto now = std::chrono::steady_clock::now();
      if (now - last_checkpoint >=
          std::chrono::seconds(config.checkpoint_interval_seconds)) {
        write_checkpoint();
        last_checkpoint = now;
      }
    }
  }

  acc->set_acceptance(chain->accepted(), chain->steps());
  acc->finalize();
  {
    auto out = open_output(acc_path);
    acc->save(out);
  }
  write_sidecar(side_path, config, index, *acc, dumped);
  std::error_code ec;
  fs::remove(ckpt_path, ec);
}

int cmd_sample(const std::string& config_path, const std::string& out_flag,
               bool resume, int threads,
               std::optional<std::uint64_t> seed_override) {
  RunConfig config = parse_run_config(config_path);
  if (seed_override) config.sampler.seed = *seed_override;
  const fs::path dir = resolve_output_dir(out_flag, config.output_dir);
  fs::create_directories(dir);

  const bip::Posterior posterior(config.sampler.level);

  // Echo the effective configuration for stats/reruns.
  {
    json manifest;
    manifest["level"] = config.sampler.level.level;
    manifest["sigma_prop"] = config.sampler.sigma_prop;
    manifest["n_chains"] = config.sampler.n_chains;
    manifest["chain_length"] = config.sampler.chain_length;
    manifest["seed"] = config.sampler.seed;
    manifest["burn_in_discard"] = config.sampler.burn_in_discard;
    manifest["thin_stride"] = config.sampler.thin_stride;
    manifest["lag_stride"] = config.sampler.lag_grid.stride;
    manifest["lag_count"] = config.sampler.lag_grid.count;
    manifest["snapshot_points_per_decade"] =
        config.sampler.snapshot_points_per_decade;
    json pairs = json::array();
    for (const auto& [a, b] : config.sampler.pair_histograms)
      pairs.push_back({a, b});
    manifest["pair_histograms"] = pairs;
    auto out = open_output(dir / "run.json");
    out << manifest.dump(2) << "\n";
  }

  std::atomic<int> next{0};
  std::mutex error_mutex;
  std::optional<CliError> first_error;
  const auto worker = [&] {
    for (;;) {
      const int index = next.fetch_add(1);
      if (index >= config.sampler.n_chains) return;
      try {
        run_chain_with_checkpoints(config, posterior, index, dir, resume);
      } catch (const CliError& e) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = e;
        return;
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = CliError{kExitMalformed, e.what()};
        return;
      }
    }
  };

  const int n_threads =
      std::max(1, std::min(threads, config.sampler.n_chains));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (first_error) throw *first_error;
  std::cout << "sampled " << config.sampler.n_chains << " chains into "
            << dir.string() << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// stats: diagnostics export

int cmd_stats(const std::string& run_dir, const std::string& out_flag) {
  if (!fs::is_directory(run_dir))
    fail(kExitMissingFile, "run directory not found: " + run_dir);

  std::vector<bip::ChainAccumulator> accs;
  std::vector<std::string> names;
  for (const auto& entry : fs::directory_iterator(run_dir))
    if (entry.path().extension() == ".acc")
      names.push_back(entry.path().string());
  std::sort(names.begin(), names.end());  // chain-index order, fixed folds
  for (const auto& name : names) {
    std::ifstream in(name, std::ios::binary);
    if (!in) fail(kExitMissingFile, "cannot read " + name);
    try {
      accs.push_back(bip::ChainAccumulator::load(in));
    } catch (const std::exception& e) {
      fail(kExitMalformed, name + ": " + e.what());
    }
  }
  if (accs.empty())
    fail(kExitMissingFile, "no chain accumulators (*.acc) in " + run_dir);

  std::vector<const bip::ChainAccumulator*> ptrs;
  for (const auto& a : accs) ptrs.push_back(&a);

  const fs::path dir = resolve_output_dir(out_flag, run_dir);
  fs::create_directories(dir);

  const auto em = bip::ensemble_mean_with_uncertainty(ptrs);
  {
    auto out = open_output(dir / "means.csv");
    out << "k,mean,two_sigma\n";
    for (int k = 0; k < bip::kParameterCount; ++k)
      out << k << ',' << format_double(em.mean[k]) << ','
          << (em.uncertainty_available ? format_double(em.two_sigma[k])
                                       : std::string{})
          << "\n";
  }

  const auto [c, d] = bip::covariance_and_correlation(ptrs);
  {
    auto out = open_output(dir / "covariance.csv");
    out << "i,j,covariance,correlation\n";
    for (int i = 0; i < bip::kParameterCount; ++i)
      for (int j = 0; j < bip::kParameterCount; ++j)
        out << i << ',' << j << ',' << format_double(c(i, j)) << ','
            << format_double(d(i, j)) << "\n";
  }

  const auto spectrum = bip::eigen_spectrum(c);
  {
    auto out = open_output(dir / "eigenvalues.csv");
    out << "i,eigenvalue\n";
    for (int i = 0; i < spectrum.values.size(); ++i)
      out << i << ',' << format_double(spectrum.values[i]) << "\n";
  }

  const bip::LagGrid grid = accs.front().lag_grid();
  {
    auto out = open_output(dir / "ac_trace.csv");
    out << "s,trace\n";
    for (int j = 0; j < grid.count; ++j) {
      const int s = j * grid.stride;
      if (accs.front().count() <= s + 1) break;
      double trace = 0.0;
      for (const auto* a : ptrs) trace += a->autocovariance(s).trace();
      out << s << ',' << format_double(trace / double(ptrs.size())) << "\n";
    }
  }

  const Eigen::MatrixXd iac = bip::integrated_autocovariance(ptrs);
  bip::EssInfo ess_info;
  const double ess = bip::effective_sample_size(
      c, iac, double(accs.front().count()), &ess_info);

  const auto err = bip::convergence_error(ptrs, em.mean);
  {
    auto out = open_output(dir / "error.csv");
    out << "n,e2\n";
    for (size_t i = 0; i < err.n.size(); ++i)
      out << err.n[i] << ',' << format_double(err.mean_square_error[i])
          << "\n";
  }

  {
    auto out = open_output(dir / "histograms.csv");
    out << "component,bin,count\n";
    for (int k = 0; k < bip::kParameterCount; ++k) {
      const auto hist = [&] {
        // Merge histogram counts across chains in index order.
        std::vector<std::int64_t> total = accs.front().histogram(k);
        for (size_t a = 1; a < accs.size(); ++a) {
          const auto h = accs[a].histogram(k);
          for (size_t b = 0; b < total.size(); ++b) total[b] += h[b];
        }
        return total;
      }();
      for (size_t b = 0; b < hist.size(); ++b)
        if (hist[b] != 0) out << k << ',' << b << ',' << hist[b] << "\n";
    }
  }

  double acceptance = 0.0;
  std::int64_t accepted = 0, proposals = 0;
  for (const auto* a : ptrs) {
    accepted += a->accepted();
    proposals += a->proposals();
  }
  if (proposals > 0) acceptance = double(accepted) / double(proposals);

  {
    json summary;
    summary["n_chains"] = accs.size();
    summary["chain_length"] = accs.front().count();
    summary["acceptance_rate"] = acceptance;
    summary["ess_per_chain"] = ess;
    summary["ess_ridge_applied"] = ess_info.ridge_applied;
    summary["ess_ridge"] = ess_info.ridge;
    summary["fitted_k"] = err.fitted_k;
    summary["loglog_slope"] = err.loglog_slope;
    summary["k_prediction"] =
        bip::convergence_constant_prediction(iac, em.mean);
    auto out = open_output(dir / "summary.json");
    out << summary.dump(2) << "\n";
  }

  std::cout << "wrote diagnostics for " << accs.size() << " chains to "
            << dir.string() << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------

int cmd_forward(const std::string& theta_path, int level) {
  const bip::ParameterVector theta = read_theta_file(theta_path);
  bip::MeasurementVector z;
  try {
    z = bip::forward(theta, bip::MeshLevel(level));
  } catch (const std::exception& e) {
    fail(kExitMalformed, e.what());
  }
  std::cout << "k,z\n";
  for (int k = 0; k < bip::kMeasurementCount; ++k)
    std::cout << k << ',' << format_double(z[k]) << "\n";
  return kExitOk;
}

int cmd_posterior(const std::string& theta_path, int level) {
  const bip::ParameterVector theta = read_theta_file(theta_path);
  bip::LogDensityParts parts;
  try {
    parts = bip::log_posterior(theta, bip::MeshLevel(level));
  } catch (const std::exception& e) {
    fail(kExitMalformed, e.what());
  }
  std::cout << "log_likelihood,log_prior,log_posterior\n"
            << format_double(parts.log_likelihood) << ','
            << format_double(parts.log_prior) << ','
            << format_double(parts.log_posterior) << "\n";
  return kExitOk;
}

int cmd_bench1d(double sigma, double theta0, double theta1,
                const std::string& out_flag) {
  const fs::path dir = resolve_output_dir(out_flag);
  fs::create_directories(dir);
  const Eigen::Vector2d theta_hat(theta0, theta1);

  Eigen::VectorXd theta(2);
  theta << theta0, theta1;
  const bip::PiecewiseSolution1D sol = bip::solve_1d(theta);
  {
    auto out = open_output(dir / "bench1d_solution.csv");
    out << "x,u\n";
    for (int i = 0; i <= 1000; ++i) {
      const double x = i / 1000.0;
      out << format_double(x) << ',' << format_double(sol.evaluate(x))
          << "\n";
    }
  }

  const bip::PosteriorGrid1D grid = bip::posterior_grid_1d(theta_hat, sigma);
  {
    auto out = open_output(dir / "bench1d_posterior.csv");
    out << "theta0,theta1,pi\n";
    for (Eigen::Index i = 0; i < grid.theta0.size(); ++i)
      for (Eigen::Index j = 0; j < grid.theta1.size(); ++j)
        out << format_double(grid.theta0[i]) << ','
            << format_double(grid.theta1[j]) << ','
            << format_double(grid.density(i, j)) << "\n";
  }
  std::cout << "wrote 1D benchmark CSVs to " << dir.string() << "\n";
  return kExitOk;
}

int cmd_golden_gen(const std::string& path, int count, std::uint64_t seed,
                   int level) {
  try {
    const auto records =
        bip::generate_golden(count, seed, bip::MeshLevel(level));
    bip::save_golden(records, path);
  } catch (const std::exception& e) {
    fail(kExitMalformed, e.what());
  }
  std::cout << "wrote " << count << " golden records to " << path << "\n";
  return kExitOk;
}

int cmd_golden_check(const std::string& path) {
  if (!fs::exists(path))
    fail(kExitMissingFile, "golden file not found: " + path);
  bip::GoldenReport report;
  try {
    report = bip::check_golden_file(path);
  } catch (const std::exception& e) {
    fail(kExitMalformed, e.what());
  }
  if (!report.pass) {
    for (const auto& issue : report.issues)
      std::cerr << "error: 5 golden mismatch record=" << issue.record
                << " field=" << issue.field
                << " component=" << issue.component
                << " expected=" << format_double(issue.expected)
                << " actual=" << format_double(issue.actual) << "\n";
    return kExitCheckFailed;
  }
  std::cout << "checked " << report.records_checked << " records: pass\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayesian inverse-problem benchmark kit"};
  app.require_subcommand(1);

  int level = 2;
  int threads = static_cast<int>(std::thread::hardware_concurrency());
  if (threads < 1) threads = 1;
  std::string output_dir;
  std::uint64_t seed = 1;
  bool resume = false;

  std::string theta_path, config_path, run_dir, golden_path;
  double sigma = 0.1, theta_hat0 = 0.1, theta_hat1 = 1.0;
  int golden_count = 10;

  auto* forward = app.add_subcommand("forward", "evaluate theta -> z (CSV)");
  forward->add_option("theta-file", theta_path)->required();
  forward->add_option("--level", level, "mesh level (0, 1, 2)");

  auto* posterior =
      app.add_subcommand("posterior", "evaluate log-density parts (CSV)");
  posterior->add_option("theta-file", theta_path)->required();
  posterior->add_option("--level", level, "mesh level (0, 1, 2)");

  auto* sample = app.add_subcommand("sample", "run sampling chains");
  sample->add_option("config", config_path, "JSON run configuration")
      ->required();
  sample->add_option("--threads", threads, "worker pool size");
  sample->add_option("--output-dir", output_dir);
  auto* seed_opt =
      sample->add_option("--seed", seed, "override the config seed");
  sample->add_flag("--resume", resume, "continue from checkpoints");

  auto* stats = app.add_subcommand("stats", "export diagnostics for a run");
  stats->add_option("run-dir", run_dir)->required();
  stats->add_option("--output-dir", output_dir);

  auto* bench1d = app.add_subcommand("bench1d", "1D analytic benchmark CSVs");
  bench1d->add_option("--sigma", sigma, "likelihood noise scale");
  bench1d->add_option("--theta0", theta_hat0, "first reference coefficient");
  bench1d->add_option("--theta1", theta_hat1, "second reference coefficient");
  bench1d->add_option("--output-dir", output_dir);

  auto* golden = app.add_subcommand("golden", "golden vector protocol");
  golden->require_subcommand(1);
  auto* golden_gen = golden->add_subcommand("gen", "generate a golden file");
  golden_gen->add_option("file", golden_path)->required();
  golden_gen->add_option("--count", golden_count);
  golden_gen->add_option("--seed", seed);
  golden_gen->add_option("--level", level);
  auto* golden_check = golden->add_subcommand("check", "verify a golden file");
  golden_check->add_option("file", golden_path)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    std::cerr << "error: " << kExitBadArgs << " bad arguments\n";
    return kExitBadArgs;
  }

  try {
    if (forward->parsed()) return cmd_forward(theta_path, level);
    if (posterior->parsed()) return cmd_posterior(theta_path, level);
    if (sample->parsed())
      return cmd_sample(config_path, output_dir, resume, threads,
                        seed_opt->count() > 0
                            ? std::optional<std::uint64_t>(seed)
                            : std::nullopt);
    if (stats->parsed()) return cmd_stats(run_dir, output_dir);
    if (bench1d->parsed())
      return cmd_bench1d(sigma, theta_hat0, theta_hat1, output_dir);
    if (golden_gen->parsed())
      return cmd_golden_gen(golden_path, golden_count, seed, level);
    if (golden_check->parsed()) return cmd_golden_check(golden_path);
  } catch (const CliError& e) {
    std::cerr << "error: " << e.code << ' ' << e.message << "\n";
    return e.code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << kExitMalformed << ' ' << e.what() << "\n";
    return kExitMalformed;
  }
  std::cerr << "error: " << kExitBadArgs << " unknown subcommand\n";
  return kExitBadArgs;
}
