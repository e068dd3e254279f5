// gspmzi: single evaluations, sweeps, figure reproductions and the
// cross-engine validation harness.
//
// Exit codes: 0 success, 1 validation failure, 2 invalid input,
// 3 numeric failure.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "gsp/error.hpp"
#include "gsp/figures.hpp"
#include "gsp/sweep.hpp"
#include "gsp/validate.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_validation = 1;
constexpr int exit_input = 2;
constexpr int exit_numeric = 3;

struct StateFlags {
  std::vector<std::string> families{"gsp"};
  std::optional<double> s;
  std::optional<int> m;
  std::optional<int> n;
};

void add_state_flags(CLI::App* cmd, StateFlags& f, bool many) {
  if (many) {
    cmd->add_option("--family", f.families, "State families: gsp, tmsv, ps-tmsv, pa-tmsv");
  } else {
    cmd->add_option("--family", f.families[0], "State family: gsp, tmsv, ps-tmsv, pa-tmsv");
  }
  cmd->add_option("--s", f.s, "GSP mixing parameter s in [0, 1]");
  cmd->add_option("--m", f.m, "GSP order on mode a");
  cmd->add_option("--n", f.n, "GSP order on mode b");
}

std::vector<gsp::StateSpec> states_from(const StateFlags& f, double z) {
  std::vector<gsp::StateSpec> out;
  for (const std::string& name : f.families) {
    switch (gsp::parse_family(name)) {
      case gsp::Family::gsp:
        if (!f.s || !f.m || !f.n) {
          gsp::raise(gsp::ErrorKind::invalid_argument, "family gsp needs --s, --m and --n");
        }
        out.push_back(gsp::StateSpec::gsp(*f.s, *f.m, *f.n, z));
        break;
      case gsp::Family::tmsv:
        out.push_back(gsp::StateSpec::tmsv(z));
        break;
      case gsp::Family::ps_tmsv:
        out.push_back(gsp::StateSpec::ps_tmsv(z));
        break;
      case gsp::Family::pa_tmsv:
        out.push_back(gsp::StateSpec::pa_tmsv(z));
        break;
    }
  }
  return out;
}

gsp::LossPlacement parse_placement(const std::string& name) {
  if (name == "external") return gsp::LossPlacement::external;
  if (name == "internal") return gsp::LossPlacement::internal;
  gsp::raise(gsp::ErrorKind::invalid_argument, "unknown loss placement '" + name + "'");
}

// Grid given either as a value list or as FROM TO STEPS.
std::vector<double> grid_from(const std::vector<double>& values, const std::vector<double>& range,
                              const char* name) {
  if (!values.empty() && !range.empty()) {
    gsp::raise(gsp::ErrorKind::invalid_argument,
               std::string("give either --") + name + " or --" + name + "-range, not both");
  }
  if (range.empty()) return values;
  if (range[2] != static_cast<int>(range[2])) {
    gsp::raise(gsp::ErrorKind::invalid_argument, std::string(name) + " range steps must be an integer");
  }
  return gsp::Range{range[0], range[1], static_cast<int>(range[2])}.values();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    gsp::raise(gsp::ErrorKind::invalid_argument, "cannot read " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

int exit_code_for(const gsp::Error& e) {
  return e.is_input_error() ? exit_input : exit_numeric;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Phase estimation with GSP-operated two-mode squeezed vacuum in a Mach-Zehnder interferometer"};
  app.require_subcommand(1);
  app.footer(
      "Phases are detection phases (the figure axis). sql and hl are 1/sqrt(2N) and 1/(2N) with\n"
      "2N the total photon number of both modes. GSP_THREADS caps worker threads (0 = auto).\n"
      "Exit codes: 0 ok, 1 validation failure, 2 invalid input, 3 numeric failure.");

  std::string engine_name = "closed";
  auto add_engine = [&](CLI::App* cmd) {
    cmd->add_option("--engine", engine_name, "closed, oracle or both")->capture_default_str();
  };

  // metric
  CLI::App* metric_cmd = app.add_subcommand("metric", "Evaluate one metric at one point");
  std::string metric_name;
  StateFlags metric_state;
  double metric_z = 0.0;
  std::optional<double> metric_phi;
  std::optional<std::string> metric_placement;
  std::optional<double> metric_eta;
  metric_cmd->add_option("name", metric_name,
                         "apn, antibunch, var_db, delta_db, qfi, qcrb, parity, sensitivity, "
                         "parity_loss, sensitivity_loss, sql, hl")
      ->required();
  add_state_flags(metric_cmd, metric_state, false);
  metric_cmd->add_option("--z", metric_z, "Squeezing parameter in (0, 1)")->required();
  metric_cmd->add_option("--phi", metric_phi, "Detection phase");
  metric_cmd->add_option("--placement", metric_placement, "Loss placement: external or internal");
  metric_cmd->add_option("--eta", metric_eta, "Loss transmissivity in (0, 1]");
  add_engine(metric_cmd);

  // sweep
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "Evaluate a parameter grid and write CSV");
  std::string config_path;
  StateFlags sweep_state;
  std::vector<double> z_values, z_range, phi_values, phi_range, eta_values;
  std::vector<std::string> placements, metric_names;
  std::optional<std::string> sweep_out;
  sweep_cmd->add_option("--config", config_path, "JSON sweep description (docs/sweep_config.md)");
  add_state_flags(sweep_cmd, sweep_state, true);
  sweep_cmd->add_option("--z", z_values, "z values");
  sweep_cmd->add_option("--z-range", z_range, "z grid as FROM TO STEPS")->expected(3);
  sweep_cmd->add_option("--phi", phi_values, "Detection phase values");
  sweep_cmd->add_option("--phi-range", phi_range, "Detection phase grid as FROM TO STEPS")->expected(3);
  sweep_cmd->add_option("--placement", placements, "Loss placements");
  sweep_cmd->add_option("--eta", eta_values, "Loss transmissivities");
  sweep_cmd->add_option("--metric", metric_names, "Metrics to evaluate");
  sweep_cmd->add_option("--out", sweep_out, "Output CSV path, - for stdout");
  CLI::Option* sweep_engine =
      sweep_cmd->add_option("--engine", engine_name, "closed, oracle or both")->capture_default_str();

  // figure
  CLI::App* figure_cmd = app.add_subcommand("figure", "Reproduce one figure as per-panel CSV files");
  std::string figure_name;
  std::string figure_dir = "figures";
  bool list_figures = false;
  figure_cmd->add_option("name", figure_name, "fig2..fig12, fig14..fig18 or all");
  figure_cmd->add_option("--out", figure_dir, "Output directory")->capture_default_str();
  figure_cmd->add_flag("--list", list_figures, "List figure names");
  add_engine(figure_cmd);

  // validate
  CLI::App* validate_cmd = app.add_subcommand("validate", "Cross-check the closed forms against the Fock oracle");
  std::string grid_name = "full";
  gsp::ValidateOptions vopt;
  validate_cmd->add_option("--grid", grid_name, "small or full")->capture_default_str();
  validate_cmd->add_option("--tol", vopt.tolerance, "Cross-engine relative tolerance")->capture_default_str();
  validate_cmd->add_option("--reduction-tol", vopt.reduction_tolerance, "Tolerance for exact reductions")
      ->capture_default_str();
  validate_cmd->add_flag("--inject-fault", vopt.inject_fault,
                         "Evaluate internal loss with a wrong coupling to check the harness detects it");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_input;
  }

  try {
    if (*metric_cmd) {
      const gsp::EngineChoice choice = gsp::parse_engine_choice(engine_name);
      gsp::EvalPoint point{states_from(metric_state, metric_z).front(), gsp::parse_metric(metric_name),
                           metric_phi, std::nullopt};
      if (gsp::needs_phase(point.metric) && !point.phi) {
        gsp::raise(gsp::ErrorKind::invalid_argument, "metric " + metric_name + " needs --phi");
      }
      if (gsp::needs_loss(point.metric)) {
        if (!metric_placement || !metric_eta) {
          gsp::raise(gsp::ErrorKind::invalid_argument, "metric " + metric_name + " needs --placement and --eta");
        }
        point.loss = gsp::LossConfig::make(parse_placement(*metric_placement), *metric_eta);
      }
      for (gsp::Engine engine : gsp::engines_for(choice, point.state)) {
        std::printf("%#.12g %s\n", gsp::evaluate(point, engine), gsp::to_string(engine));
      }
      return exit_ok;
    }

    if (*sweep_cmd) {
      gsp::SweepConfig cfg;
      if (!config_path.empty()) {
        cfg = gsp::SweepConfig::from_json(read_file(config_path));
        if (sweep_engine->count() > 0) cfg.engine = gsp::parse_engine_choice(engine_name);
      } else {
        cfg.states = states_from(sweep_state, 0.5);
        cfg.z = grid_from(z_values, z_range, "z");
        cfg.phi = grid_from(phi_values, phi_range, "phi");
        for (const std::string& p : placements) cfg.placements.push_back(parse_placement(p));
        cfg.eta = eta_values;
        for (const std::string& m : metric_names) cfg.metrics.push_back(gsp::parse_metric(m));
        cfg.engine = gsp::parse_engine_choice(engine_name);
      }
      if (sweep_out) cfg.output = *sweep_out;
      cfg.validate();
      gsp::write_csv_file(cfg.output, gsp::run_sweep(cfg));
      return exit_ok;
    }

    if (*figure_cmd) {
      if (list_figures) {
        for (const std::string& name : gsp::figure_names()) std::cout << name << '\n';
        return exit_ok;
      }
      if (figure_name.empty()) {
        gsp::raise(gsp::ErrorKind::invalid_argument, "figure needs a name or --list");
      }
      const gsp::EngineChoice choice = gsp::parse_engine_choice(engine_name);
      std::vector<std::string> names{figure_name};
      if (figure_name == "all") names = gsp::figure_names();
      for (const std::string& name : names) {
        const gsp::FigureSpec fig = gsp::figure_spec(name);
        for (const std::string& path : gsp::write_figure(fig, figure_dir, choice)) {
          std::cout << path << '\n';
        }
      }
      return exit_ok;
    }

    if (*validate_cmd) {
      if (grid_name == "small") {
        vopt.grid = gsp::ValidationGrid::small;
      } else if (grid_name != "full") {
        gsp::raise(gsp::ErrorKind::invalid_argument, "grid must be small or full");
      }
      const gsp::ValidationReport report = gsp::run_validation(vopt);
      report.print(std::cout);
      std::cout << (report.ok() ? "validation passed" : "validation FAILED") << '\n';
      return report.ok() ? exit_ok : exit_validation;
    }
  } catch (const gsp::Error& e) {
    std::cerr << "gspmzi: " << gsp::to_string(e.kind()) << ": " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "gspmzi: " << e.what() << '\n';
    return exit_numeric;
  }
  return exit_ok;
}
