#include "gsp/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <tuple>

#include <json.hpp>

#include "gsp/error.hpp"
#include "gsp/parallel.hpp"

namespace gsp {

namespace {

struct MetricName {
  Metric metric;
  const char* name;
};

constexpr MetricName metric_names[] = {
    {Metric::apn, "apn"},
    {Metric::antibunch, "antibunch"},
    {Metric::var_db, "var_db"},
    {Metric::delta_db, "delta_db"},
    {Metric::qfi, "qfi"},
    {Metric::qcrb, "qcrb"},
    {Metric::parity, "parity"},
    {Metric::sensitivity, "sensitivity"},
    {Metric::parity_loss, "parity_loss"},
    {Metric::sensitivity_loss, "sensitivity_loss"},
    {Metric::sql, "sql"},
    {Metric::hl, "hl"},
};

}  // namespace

const char* to_string(Metric metric) {
  for (const auto& entry : metric_names) {
    if (entry.metric == metric) {
      return entry.name;
    }
  }
  return "?";
}

Metric parse_metric(std::string_view name) {
  for (const auto& entry : metric_names) {
    if (name == entry.name) {
      return entry.metric;
    }
  }
  raise(ErrorKind::invalid_argument, "unknown metric '" + std::string(name) + "'");
}

bool needs_phase(Metric metric) {
  return metric == Metric::parity || metric == Metric::sensitivity ||
         metric == Metric::parity_loss || metric == Metric::sensitivity_loss;
}

bool needs_loss(Metric metric) {
  return metric == Metric::parity_loss || metric == Metric::sensitivity_loss;
}

const char* to_string(Engine engine) {
  return engine == Engine::closed_form ? "closed_form" : "fock_oracle";
}

EngineChoice parse_engine_choice(std::string_view name) {
  if (name == "closed") return EngineChoice::closed;
  if (name == "oracle") return EngineChoice::oracle;
  if (name == "both") return EngineChoice::both;
  raise(ErrorKind::invalid_argument,
        "unknown engine '" + std::string(name) + "' (expected closed, oracle or both)");
}

std::vector<Engine> engines_for(EngineChoice choice, const StateSpec& state) {
  if (!state.has_closed_form() || choice == EngineChoice::oracle) {
    return {Engine::fock_oracle};
  }
  if (choice == EngineChoice::closed) {
    return {Engine::closed_form};
  }
  return {Engine::closed_form, Engine::fock_oracle};
}

namespace {

PhasePoint phase_of(const EvalPoint& point) {
  if (!point.phi) {
    raise(ErrorKind::invalid_argument,
          std::string("metric ") + to_string(point.metric) + " needs a phase");
  }
  return PhasePoint::from_detection(*point.phi);
}

const LossConfig& loss_of(const EvalPoint& point) {
  if (!point.loss) {
    raise(ErrorKind::invalid_argument,
          std::string("metric ") + to_string(point.metric) + " needs a loss placement and eta");
  }
  return *point.loss;
}

double decibels(double ratio) { return 10.0 * std::log10(ratio); }

double evaluate_closed(const EvalPoint& point) {
  const GspParams p = point.state.params();
  switch (point.metric) {
    case Metric::apn:
      return average_photon_number(p);
    case Metric::antibunch:
      return antibunching_r(p);
    case Metric::var_db:
      return squeezing_db(p);
    case Metric::delta_db:
      return delta_db_vs_tmsv(p);
    case Metric::qfi:
      return qfi(p);
    case Metric::qcrb:
      return qcrb(p);
    case Metric::parity:
      return parity_expectation(p, phase_of(point));
    case Metric::sensitivity:
      return phase_sensitivity(p, phase_of(point));
    case Metric::parity_loss: {
      const LossConfig& loss = loss_of(point);
      return loss.placement == LossPlacement::external ? parity_external(p, phase_of(point), loss.eta)
                                                       : parity_internal(p, phase_of(point), loss.eta);
    }
    case Metric::sensitivity_loss:
      return sensitivity_lossy(p, phase_of(point), loss_of(point));
    case Metric::sql:
      return sql_hl(2.0 * average_photon_number(p)).first;
    case Metric::hl:
      return sql_hl(2.0 * average_photon_number(p)).second;
  }
  raise(ErrorKind::invalid_argument, "unhandled metric");
}

double evaluate_oracle(const EvalPoint& point) {
  const oracle::SchmidtState st = point.state.schmidt();
  switch (point.metric) {
    case Metric::apn:
      return oracle::oracle_apn(st);
    case Metric::antibunch:
      return oracle::oracle_antibunching(st);
    case Metric::var_db:
      return decibels(oracle::oracle_quadrature_variances(st).first);
    case Metric::delta_db: {
      const double reference =
          oracle::oracle_quadrature_variances(StateSpec::tmsv(point.state.z).schmidt()).first;
      return decibels(oracle::oracle_quadrature_variances(st).first / reference);
    }
    case Metric::qfi:
      return oracle::oracle_qfi(st);
    case Metric::qcrb: {
      const double f = oracle::oracle_qfi(st);
      if (!(f > 0.0)) {
        raise(ErrorKind::domain, "qcrb: quantum Fisher information vanishes");
      }
      return 1.0 / std::sqrt(f);
    }
    case Metric::parity:
      return oracle::oracle_parity(st, phase_of(point));
    case Metric::sensitivity:
      return oracle::oracle_sensitivity(st, phase_of(point));
    case Metric::parity_loss: {
      const LossConfig& loss = loss_of(point);
      return loss.placement == LossPlacement::external
                 ? oracle::oracle_parity_external(st, phase_of(point), loss.eta)
                 : oracle::oracle_parity_internal(st, phase_of(point), loss.eta);
    }
    case Metric::sensitivity_loss:
      return oracle::oracle_sensitivity(st, phase_of(point), loss_of(point));
    case Metric::sql:
      return sql_hl(2.0 * oracle::oracle_apn(st)).first;
    case Metric::hl:
      return sql_hl(2.0 * oracle::oracle_apn(st)).second;
  }
  raise(ErrorKind::invalid_argument, "unhandled metric");
}

}  // namespace

double evaluate(const EvalPoint& point, Engine engine) {
  if (point.loss && !(point.loss->eta > 0.0 && point.loss->eta <= 1.0)) {
    raise(ErrorKind::invalid_argument, "transmissivity eta must lie in (0, 1]");
  }
  const double value = engine == Engine::closed_form ? evaluate_closed(point) : evaluate_oracle(point);
  return require_finite(value, to_string(point.metric));
}

namespace {

struct RowFields {
  std::optional<double> s;
  std::optional<int> m;
  std::optional<int> n;
  std::optional<double> phi;
  std::optional<double> eta1;
  std::optional<double> eta2;
};

RowFields fields_of(const EvalPoint& point) {
  RowFields f;
  if (point.state.family == Family::gsp) {
    f.s = point.state.s;
    f.m = point.state.m;
    f.n = point.state.n;
  }
  if (needs_phase(point.metric)) {
    f.phi = point.phi;
  }
  if (needs_loss(point.metric) && point.loss) {
    (point.loss->placement == LossPlacement::external ? f.eta1 : f.eta2) = point.loss->eta;
  }
  return f;
}

}  // namespace

void sort_rows(std::vector<ResultRow>& rows) {
  auto key = [](const ResultRow& r) {
    const RowFields f = fields_of(r.point);
    return std::make_tuple(std::string(to_string(r.point.state.family)), f.s, f.m, f.n, r.point.state.z,
                           f.phi, f.eta1, f.eta2, std::string(to_string(r.point.metric)),
                           std::string(to_string(r.engine)));
  };
  std::stable_sort(rows.begin(), rows.end(),
                   [&](const ResultRow& a, const ResultRow& b) { return key(a) < key(b); });
}

namespace {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12e", v);
  return buf;
}

template <typename T>
std::string optional_field(const std::optional<T>& v) {
  if (!v) {
    return {};
  }
  if constexpr (std::is_same_v<T, int>) {
    return std::to_string(*v);
  } else {
    return format_double(*v);
  }
}

}  // namespace

void write_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
  out << csv_header << '\n';
  for (const ResultRow& r : rows) {
    const RowFields f = fields_of(r.point);
    out << to_string(r.point.state.family) << ',' << optional_field(f.s) << ','
        << optional_field(f.m) << ',' << optional_field(f.n) << ',' << format_double(r.point.state.z)
        << ',' << optional_field(f.phi) << ',' << optional_field(f.eta1) << ','
        << optional_field(f.eta2) << ',' << to_string(r.point.metric) << ',';
    if (r.error) {
      out << "ERR_" << to_string(*r.error);
    } else {
      out << format_double(r.value);
    }
    out << ',' << to_string(r.engine) << '\n';
  }
}

std::vector<ResultRow> evaluate_points(const std::vector<EvalPoint>& points, EngineChoice choice) {
  std::vector<ResultRow> rows;
  for (const EvalPoint& point : points) {
    for (Engine engine : engines_for(choice, point.state)) {
      rows.push_back({point, engine, 0.0, std::nullopt});
    }
  }
  parallel_for(rows.size(), [&](std::size_t i) {
    ResultRow& row = rows[i];
    try {
      row.value = evaluate(row.point, row.engine);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::domain || e.kind() == ErrorKind::cutoff_overflow) {
        row.error = e.kind();
      } else {
        throw;
      }
    }
  });
  sort_rows(rows);
  return rows;
}

std::vector<double> Range::values() const {
  if (steps < 1) {
    raise(ErrorKind::invalid_argument, "range steps must be at least 1");
  }
  if (!(from < to)) {
    raise(ErrorKind::invalid_argument, "range needs from < to");
  }
  if (steps == 1) {
    return {from};
  }
  std::vector<double> out(static_cast<std::size_t>(steps));
  for (int i = 0; i < steps; ++i) {
    out[static_cast<std::size_t>(i)] = from + (to - from) * i / (steps - 1);
  }
  out.back() = to;
  return out;
}

namespace {

using nlohmann::json;

std::vector<double> grid_from_json(const json& node, const char* name) {
  if (node.is_array()) {
    std::vector<double> out = node.get<std::vector<double>>();
    if (out.empty()) {
      raise(ErrorKind::invalid_argument, std::string(name) + " list is empty");
    }
    return out;
  }
  if (node.is_object()) {
    Range r;
    r.from = node.at("from").get<double>();
    r.to = node.at("to").get<double>();
    r.steps = node.at("steps").get<int>();
    return r.values();
  }
  if (node.is_number()) {
    return {node.get<double>()};
  }
  raise(ErrorKind::invalid_argument, std::string(name) + " must be a number, list or range object");
}

LossPlacement parse_placement(const std::string& name) {
  if (name == "external") return LossPlacement::external;
  if (name == "internal") return LossPlacement::internal;
  raise(ErrorKind::invalid_argument, "unknown loss placement '" + name + "'");
}

}  // namespace

SweepConfig SweepConfig::from_json(std::string_view text) {
  SweepConfig cfg;
  try {
    const json doc = json::parse(text);
    if (!doc.is_object()) {
      raise(ErrorKind::invalid_argument, "sweep config must be a JSON object");
    }
    for (const json& entry : doc.at("states")) {
      StateSpec st;
      st.family = parse_family(entry.at("family").get<std::string>());
      if (st.family == Family::gsp) {
        st.s = entry.at("s").get<double>();
        st.m = entry.at("m").get<int>();
        st.n = entry.at("n").get<int>();
      }
      cfg.states.push_back(st);
    }
    cfg.z = grid_from_json(doc.at("z"), "z");
    if (doc.contains("phi")) {
      cfg.phi = grid_from_json(doc.at("phi"), "phi");
    }
    if (doc.contains("loss")) {
      const json& loss = doc.at("loss");
      for (const json& p : loss.at("placements")) {
        cfg.placements.push_back(parse_placement(p.get<std::string>()));
      }
      cfg.eta = grid_from_json(loss.at("eta"), "eta");
    }
    for (const json& m : doc.at("metrics")) {
      cfg.metrics.push_back(parse_metric(m.get<std::string>()));
    }
    if (doc.contains("engine")) {
      cfg.engine = parse_engine_choice(doc.at("engine").get<std::string>());
    }
    if (doc.contains("output")) {
      cfg.output = doc.at("output").get<std::string>();
    }
  } catch (const json::exception& e) {
    raise(ErrorKind::invalid_argument, std::string("malformed sweep config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

void SweepConfig::validate() const {
  if (states.empty()) raise(ErrorKind::invalid_argument, "sweep needs at least one state");
  if (z.empty()) raise(ErrorKind::invalid_argument, "sweep needs a z grid");
  if (metrics.empty()) raise(ErrorKind::invalid_argument, "sweep needs at least one metric");
  for (Metric m : metrics) {
    if (needs_phase(m) && phi.empty()) {
      raise(ErrorKind::invalid_argument, std::string("metric ") + to_string(m) + " needs a phi grid");
    }
    if (needs_loss(m) && (placements.empty() || eta.empty())) {
      raise(ErrorKind::invalid_argument,
            std::string("metric ") + to_string(m) + " needs loss placements and eta values");
    }
  }
  for (double e : eta) {
    if (!(e > 0.0 && e <= 1.0)) {
      raise(ErrorKind::invalid_argument, "transmissivity eta must lie in (0, 1]");
    }
  }
  // Parameter validation happens here so a bad grid fails before any work.
  for (const StateSpec& st : states) {
    for (double zv : z) {
      const StateSpec at = st.with_z(zv);
      if (at.has_closed_form()) {
        (void)at.params();
      } else if (!(zv > 0.0 && zv < 1.0)) {
        raise(ErrorKind::invalid_argument, "z must satisfy 0 < z < 1");
      }
    }
  }
}

std::vector<EvalPoint> SweepConfig::points() const {
  std::vector<EvalPoint> out;
  for (const StateSpec& st : states) {
    for (double zv : z) {
      for (Metric metric : metrics) {
        EvalPoint base{st.with_z(zv), metric, std::nullopt, std::nullopt};
        if (!needs_phase(metric)) {
          out.push_back(base);
          continue;
        }
        for (double p : phi) {
          base.phi = p;
          if (!needs_loss(metric)) {
            out.push_back(base);
            continue;
          }
          for (LossPlacement placement : placements) {
            for (double e : eta) {
              base.loss = LossConfig{placement, e};
              out.push_back(base);
            }
          }
        }
      }
    }
  }
  return out;
}

std::vector<ResultRow> run_sweep(const SweepConfig& config) {
  config.validate();
  return evaluate_points(config.points(), config.engine);
}

void write_csv_file(const std::string& path, const std::vector<ResultRow>& rows) {
  if (path.empty() || path == "-") {
    write_csv(std::cout, rows);
    return;
  }
  const std::filesystem::path target(path);
  const std::filesystem::path partial = target.string() + ".partial";
  try {
    {
      std::ofstream out(partial, std::ios::binary | std::ios::trunc);
      if (!out) {
        raise(ErrorKind::invalid_argument, "cannot open output file " + partial.string());
      }
      write_csv(out, rows);
      out.flush();
      if (!out) {
        raise(ErrorKind::numeric_failure, "failed writing " + partial.string());
      }
    }
    std::filesystem::rename(partial, target);
  } catch (...) {
    std::error_code ec;
    std::filesystem::remove(partial, ec);
    throw;
  }
}

}  // namespace gsp
