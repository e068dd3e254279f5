#pragma once

// Fixed reproduction recipes: every figure is a list of panels, each panel
// a list of evaluation points whose parameters are hard-coded.

#include <string>
#include <string_view>
#include <vector>

#include "gsp/sweep.hpp"

namespace gsp {

struct FigurePanel {
  std::string id;  // file stem, e.g. "fig8a"
  std::string title;
  std::vector<StateSpec> states;  // z of each entry is ignored
  std::vector<Metric> metrics;
  std::vector<double> z;
  std::vector<double> phi;
  std::vector<LossPlacement> placements;
  std::vector<double> eta;
  std::string x_axis;  // column the panel is plotted against

  std::vector<EvalPoint> points() const;
};

struct FigureSpec {
  std::string name;
  std::string title;
  std::vector<FigurePanel> panels;
};

const std::vector<std::string>& figure_names();

/// Throws invalid_argument for unknown names.
FigureSpec figure_spec(std::string_view name);

/// Writes <dir>/<panel>.csv for every panel plus <dir>/<name>.manifest.json
/// and returns the written paths.
std::vector<std::string> write_figure(const FigureSpec& figure, const std::string& dir,
                                      EngineChoice engine);

/// Manifest document (deterministic, no timestamps).
std::string figure_manifest(const FigureSpec& figure, EngineChoice engine);

}  // namespace gsp
