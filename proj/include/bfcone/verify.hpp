#pragma once

// Identity catalog I1..I25 and the suite runner behind `bfcone verify`.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bfcone/chart.hpp"
#include "bfcone/families.hpp"
#include "bfcone/specio.hpp"

namespace bfcone {

struct CatalogEntry {
  std::string id;
  std::string anchor;  // name of the identity it checks
  std::string what;
  double tolerance = 1e-6;
  std::vector<int> cases;  // applicable family cases
  bool per_family = false;  // evaluated once, not per sample point
};

const std::vector<CatalogEntry>& catalog();
/// Throws UnknownId.
const CatalogEntry& catalog_entry(const std::string& id);
/// Empty when applicable, otherwise the reason.
std::string incompatibility(const CatalogEntry& e, const OperatorFamily& fam);

struct CheckResult {
  std::string id;
  std::string anchor;
  int n_samples = 0;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool pass = true;
  std::string notes;
  std::vector<double> residuals;  // per sample; NaN where a sample was skipped
};

/// Residual of one identity at one sample (index seeds the random parts).
/// Throws IncompatibleCase, UnknownId, or the math error of the sample.
double sample_residual(const std::string& id, const OperatorFamily& fam, const ConeChartPoint& z,
                       std::uint64_t sample_seed);

/// One identity over the given points.
CheckResult run_identity(const std::string& id, const OperatorFamily& fam, const std::vector<ConeChartPoint>& points,
                         std::optional<double> tolerance = std::nullopt, std::uint64_t seed = 1);

struct SuiteOptions {
  std::optional<std::vector<std::string>> ids;  // nullopt = whole catalog
  std::optional<int> samples;
  std::optional<std::uint64_t> seed;
  int threads = 0;  // 0: BFCONE_THREADS or hardware concurrency
  bool timing = false;
};

struct Report {
  FamilySpec spec;
  std::uint64_t seed = 1;
  int sign_convention = -1;
  std::vector<CheckResult> checks;
  int n_pass = 0, n_fail = 0;
  std::optional<double> seconds;
  std::string build_error;  // family or sampler failure
  bool all_pass() const { return n_fail == 0 && build_error.empty(); }
};

Report run_suite(const FamilySpec& spec, const SuiteOptions& opt);

json report_json(const Report& r);
/// check,anchor,sample,residual,tolerance,pass
std::string report_csv(const Report& r);

/// Threads from BFCONE_THREADS, else hardware concurrency (at least 1).
int default_threads();

}  // namespace bfcone
