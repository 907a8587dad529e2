#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bip/grid_fem.hpp"

// Golden input/output verification: embedded reference measurements, and
// generation/checking of frozen (theta, z, log-density) records that
// alternative implementations can verify against.

namespace bip {

/// The 169 reference measurement values, verbatim at full double
/// precision.
const MeasurementVector& embedded_zhat();

/// The inclusion pattern used to generate the reference measurements:
/// background 1, one block at 0.1 (cells 9,10,17,18), one at 10
/// (cells 45,46,53,54).
ParameterVector inclusion_theta_hat();

struct GoldenVector {
  ParameterVector theta;
  MeasurementVector z;
  double log_likelihood = 0.0;
  double log_prior = 0.0;
  int level = 2;
  double tolerance = 1e-12;
};

/// Draws `count` theta vectors (record 0 is all ones, the rest lognormal
/// around 1), evaluates the posterior pipeline, and returns the records.
/// Regeneration with the same seed is byte-identical through save_golden.
std::vector<GoldenVector> generate_golden(int count, std::uint64_t seed,
                                          MeshLevel level);

/// JSON file of records {theta:[64], z:[169], log_likelihood, log_prior,
/// level, tolerance}, numbers printed with 17 significant digits.
void save_golden(const std::vector<GoldenVector>& records,
                 const std::string& path);
std::vector<GoldenVector> load_golden(const std::string& path);

struct GoldenIssue {
  int record = -1;
  std::string field;   // "z", "log_likelihood", "log_prior"
  int component = -1;  // for z
  double expected = 0.0;
  double actual = 0.0;
};

struct GoldenReport {
  bool pass = false;
  int records_checked = 0;
  std::vector<GoldenIssue> issues;
};

/// Recomputes each record; passes when z agrees to 1e-10 relative
/// (absolute floor 1e-12 for near-zero entries) and the log-densities to
/// 1e-10 relative.
GoldenReport check_golden(const std::vector<GoldenVector>& records);
GoldenReport check_golden_file(const std::string& path);

}  // namespace bip
