#include "bip/verify.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "bip/mh_sampler.hpp"
#include "bip/posterior.hpp"

namespace bip {

namespace {

std::string format_double(double v) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", v);
  return buffer;
}

bool close_relative(double expected, double actual, double rel_tol,
                    double abs_floor) {
  const double scale = std::max(std::abs(expected), std::abs(actual));
  return std::abs(expected - actual) <= std::max(rel_tol * scale, abs_floor);
}

}  // namespace

std::vector<GoldenVector> generate_golden(int count, std::uint64_t seed,
                                          MeshLevel level) {
  if (count < 1) throw std::invalid_argument("golden record count must be >= 1");

  const Posterior posterior(level);
  auto evaluator = posterior.make_evaluator();
  Rng rng(seed);

  std::vector<GoldenVector> records;
  records.reserve(static_cast<size_t>(count));
  for (int i = 0; i < count; ++i) {
    GoldenVector record;
    record.level = level.level;
    if (i == 0) {
      record.theta = ParameterVector::Ones();
    } else {
      double xi[kParameterCount];
      rng.gaussians(xi, kParameterCount);
      for (int k = 0; k < kParameterCount; ++k)
        record.theta[k] = std::exp(0.5 * xi[k]);
    }
    record.z = evaluator.forward(record.theta);
    record.log_likelihood = log_likelihood(record.z);
    record.log_prior = log_prior(record.theta);
    records.push_back(record);
  }
  return records;
}

void save_golden(const std::vector<GoldenVector>& records,
                 const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");

  // Hand-rolled writer so every double is printed with exactly 17
  // significant digits: regeneration must be byte-identical.
  out << "[\n";
  for (size_t r = 0; r < records.size(); ++r) {
    const GoldenVector& rec = records[r];
    out << "  {\"theta\": [";
    for (int k = 0; k < kParameterCount; ++k)
      out << (k ? ", " : "") << format_double(rec.theta[k]);
    out << "],\n   \"z\": [";
    for (int k = 0; k < kMeasurementCount; ++k)
      out << (k ? ", " : "") << format_double(rec.z[k]);
    out << "],\n   \"log_likelihood\": " << format_double(rec.log_likelihood)
        << ",\n   \"log_prior\": " << format_double(rec.log_prior)
        << ",\n   \"level\": " << rec.level
        << ",\n   \"tolerance\": " << format_double(rec.tolerance) << "}"
        << (r + 1 < records.size() ? "," : "") << "\n";
  }
  out << "]\n";
  if (!out) throw std::runtime_error("failed writing " + path);
}

std::vector<GoldenVector> load_golden(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);

  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("malformed golden file " + path + ": " +
                             e.what());
  }
  if (!doc.is_array())
    throw std::runtime_error("malformed golden file " + path +
                             ": expected a top-level array");

  std::vector<GoldenVector> records;
  for (const auto& item : doc) {
    GoldenVector rec;
    const auto& theta = item.at("theta");
    const auto& z = item.at("z");
    if (theta.size() != kParameterCount || z.size() != kMeasurementCount)
      throw std::runtime_error("malformed golden file " + path +
                               ": bad vector sizes");
    for (int k = 0; k < kParameterCount; ++k)
      rec.theta[k] = theta.at(k).get<double>();
    for (int k = 0; k < kMeasurementCount; ++k)
      rec.z[k] = z.at(k).get<double>();
    rec.log_likelihood = item.at("log_likelihood").get<double>();
    rec.log_prior = item.at("log_prior").get<double>();
    rec.level = item.at("level").get<int>();
    rec.tolerance = item.at("tolerance").get<double>();
    records.push_back(rec);
  }
  return records;
}

GoldenReport check_golden(const std::vector<GoldenVector>& records) {
  GoldenReport report;
  // Group by level so the forward operator is built once per level.
  for (int level = 0; level <= 2; ++level) {
    bool built = false;
    Posterior posterior{MeshLevel(level)};
    auto evaluator = posterior.make_evaluator();
    for (size_t r = 0; r < records.size(); ++r) {
      const GoldenVector& rec = records[r];
      if (rec.level != level) continue;
      if (!built) built = true;
      ++report.records_checked;

      const MeasurementVector z = evaluator.forward(rec.theta);
      for (int k = 0; k < kMeasurementCount; ++k)
        if (!close_relative(rec.z[k], z[k], 1e-10, 1e-12))
          report.issues.push_back(
              {static_cast<int>(r), "z", k, rec.z[k], z[k]});

      const double ll = log_likelihood(z);
      if (!close_relative(rec.log_likelihood, ll, 1e-10, 0.0))
        report.issues.push_back({static_cast<int>(r), "log_likelihood", -1,
                                 rec.log_likelihood, ll});
      const double lp = log_prior(rec.theta);
      if (!close_relative(rec.log_prior, lp, 1e-10, 0.0))
        report.issues.push_back(
            {static_cast<int>(r), "log_prior", -1, rec.log_prior, lp});
    }
  }
  report.pass = report.issues.empty() &&
                report.records_checked == static_cast<int>(records.size());
  return report;
}

GoldenReport check_golden_file(const std::string& path) {
  return check_golden(load_golden(path));
}

}  // namespace bip
