#pragma once

// Metric evaluation on either engine and grid sweeps written as CSV.

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gsp/error.hpp"
#include "gsp/loss.hpp"
#include "gsp/state_spec.hpp"

namespace gsp {

enum class Metric {
  apn,
  antibunch,
  var_db,
  delta_db,
  qfi,
  qcrb,
  parity,
  sensitivity,
  parity_loss,
  sensitivity_loss,
  sql,
  hl,
};

const char* to_string(Metric metric);
Metric parse_metric(std::string_view name);

bool needs_phase(Metric metric);
bool needs_loss(Metric metric);

enum class Engine { closed_form, fock_oracle };

const char* to_string(Engine engine);

/// Engine selection on the command line.
enum class EngineChoice { closed, oracle, both };

EngineChoice parse_engine_choice(std::string_view name);

/// Engines that `choice` evaluates for `state`. Families without a closed
/// form always use the Fock oracle.
std::vector<Engine> engines_for(EngineChoice choice, const StateSpec& state);

struct EvalPoint {
  StateSpec state;
  Metric metric = Metric::apn;
  std::optional<double> phi;  // detection phase
  std::optional<LossConfig> loss;
};

/// Evaluates one metric. sql and hl are the limits at the state's total
/// photon number 2N. Throws gsp::Error.
double evaluate(const EvalPoint& point, Engine engine);

struct ResultRow {
  EvalPoint point;
  Engine engine = Engine::closed_form;
  double value = 0.0;
  std::optional<ErrorKind> error;  // set when the point has no finite value
};

/// Rows in lexicographic order of (family, s, m, n, z, phi, eta1, eta2,
/// metric, engine); absent fields sort first.
void sort_rows(std::vector<ResultRow>& rows);

inline constexpr std::string_view csv_header = "family,s,m,n,z,phi,eta1,eta2,metric,value,engine";

/// Header plus one line per row; floats as %.12e, empty for inapplicable
/// fields, ERR_<kind> in the value column for failed points.
void write_csv(std::ostream& out, const std::vector<ResultRow>& rows);

/// Evaluates every point on every requested engine in parallel and returns
/// sorted rows. Domain errors and cutoff overflows become error rows; any
/// other failure propagates.
std::vector<ResultRow> evaluate_points(const std::vector<EvalPoint>& points, EngineChoice choice);

struct Range {
  double from = 0.0;
  double to = 0.0;
  int steps = 1;

  /// `steps` points from `from` to `to` inclusive; a single point when
  /// steps == 1.
  std::vector<double> values() const;
};

struct SweepConfig {
  std::vector<StateSpec> states;  // z is taken from the z grid
  std::vector<double> z;
  std::vector<double> phi;
  std::vector<LossPlacement> placements;
  std::vector<double> eta;
  std::vector<Metric> metrics;
  EngineChoice engine = EngineChoice::closed;
  std::string output;  // "-" or empty for stdout

  /// Parses the JSON document described in docs/sweep_config.md. Throws
  /// invalid_argument on malformed input.
  static SweepConfig from_json(std::string_view text);

  /// Throws invalid_argument when a metric lacks the phase or loss grid it
  /// needs, or any list is empty.
  void validate() const;

  std::vector<EvalPoint> points() const;
};

std::vector<ResultRow> run_sweep(const SweepConfig& config);

/// Writes rows to `path` through a temporary file that is renamed into
/// place on success and removed on failure.
void write_csv_file(const std::string& path, const std::vector<ResultRow>& rows);

}  // namespace gsp
