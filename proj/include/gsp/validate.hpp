#pragma once

// Cross-engine validation: closed forms against the Fock oracle on a
// parameter grid, the lossless and TMSV reductions, and the ordering
// properties that hold in the plotted regimes.

#include <iosfwd>
#include <string>
#include <vector>

namespace gsp {

enum class ValidationGrid { small, full };

struct ValidateOptions {
  ValidationGrid grid = ValidationGrid::full;
  double tolerance = 1e-8;            // closed form vs oracle, relative
  double reduction_tolerance = 1e-10;  // eta = 1 and TMSV reductions
  bool inject_fault = false;          // internal-loss coupling at its bare normalization
};

/// Largest relative deviation seen for one metric.
struct MetricDeviation {
  std::string metric;
  double max_deviation = 0.0;
  std::string worst_point;
  double tolerance = 0.0;

  bool ok() const { return max_deviation <= tolerance; }
};

struct CheckResult {
  std::string name;
  bool passed = true;
  std::string detail;  // first offending point when failed
};

struct ValidationReport {
  std::vector<MetricDeviation> deviations;
  std::vector<CheckResult> checks;

  bool ok() const;
  void print(std::ostream& out) const;
};

/// |a - b| / max(|a|, |b|), zero when both magnitudes are below 1e-12.
double relative_deviation(double a, double b);

ValidationReport run_validation(const ValidateOptions& options);

}  // namespace gsp
