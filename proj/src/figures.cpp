#include "gsp/figures.hpp"

#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "gsp/error.hpp"

namespace gsp {

std::vector<EvalPoint> FigurePanel::points() const {
  SweepConfig cfg;
  cfg.states = states;
  cfg.z = z;
  cfg.phi = phi;
  cfg.placements = placements;
  cfg.eta = eta;
  cfg.metrics = metrics;
  return cfg.points();
}

namespace {

const double z_caption = 0.6;
const double phi_fixed = 0.05;

std::vector<double> z_curve() { return Range{0.01, 0.90, 90}.values(); }
std::vector<double> phi_parity() { return Range{-1.0, 1.0, 201}.values(); }
std::vector<double> phi_sensitivity() { return Range{0.01, 1.0, 100}.values(); }
std::vector<double> eta_curve() { return Range{0.5, 1.0, 51}.values(); }

std::vector<StateSpec> gsp_family(std::initializer_list<std::pair<int, int>> orders) {
  std::vector<StateSpec> out;
  for (const auto& [m, n] : orders) {
    for (double s : {0.0, 0.5, 1.0}) {
      out.push_back(StateSpec::gsp(s, m, n, z_caption));
    }
  }
  out.push_back(StateSpec::tmsv(z_caption));
  return out;
}

std::vector<StateSpec> single_side() { return gsp_family({{0, 1}, {0, 2}}); }
std::vector<StateSpec> two_side() { return gsp_family({{1, 1}, {2, 2}}); }

// m = n = 1 against the single-pair baselines.
std::vector<StateSpec> comparison() {
  std::vector<StateSpec> out = gsp_family({{1, 1}});
  out.push_back(StateSpec::pa_tmsv(z_caption));
  out.push_back(StateSpec::ps_tmsv(z_caption));
  return out;
}

FigurePanel panel(std::string id, std::string title, std::vector<StateSpec> states,
                  std::vector<Metric> metrics, std::vector<double> z, std::string x_axis) {
  FigurePanel p;
  p.id = std::move(id);
  p.title = std::move(title);
  p.states = std::move(states);
  p.metrics = std::move(metrics);
  p.z = std::move(z);
  p.x_axis = std::move(x_axis);
  return p;
}

FigureSpec versus_z(const std::string& name, const std::string& title, std::vector<Metric> metrics) {
  return {name, title,
          {panel(name + "a", title + ", single-side orders (0,1) and (0,2)", single_side(), metrics,
                 z_curve(), "z"),
           panel(name + "b", title + ", two-side orders (1,1) and (2,2)", two_side(), metrics,
                 z_curve(), "z")}};
}

FigureSpec comparison_versus_z(const std::string& name, const std::string& title, Metric metric) {
  return {name, title, {panel(name, title, comparison(), {metric}, z_curve(), "z")}};
}

FigureSpec versus_phi(const std::string& name, const std::string& title, Metric metric,
                      const std::vector<double>& phi) {
  FigurePanel a = panel(name + "a", title + ", single-side orders (0,1) and (0,2)", single_side(),
                        {metric}, {z_caption}, "phi");
  FigurePanel b = panel(name + "b", title + ", two-side orders (1,1) and (2,2)", two_side(),
                        {metric}, {z_caption}, "phi");
  a.phi = phi;
  b.phi = phi;
  return {name, title, {a, b}};
}

FigureSpec comparison_versus_phi(const std::string& name, const std::string& title, Metric metric,
                                 const std::vector<double>& phi) {
  FigurePanel p = panel(name, title, comparison(), {metric}, {z_caption}, "phi");
  p.phi = phi;
  return {name, title, {p}};
}

// One panel per loss placement.
FigureSpec lossy(const std::string& name, const std::string& title, std::vector<StateSpec> states,
                 Metric metric, std::vector<double> z, std::vector<double> phi, std::vector<double> eta,
                 const std::string& x_axis, std::vector<Metric> extra = {}) {
  FigureSpec fig{name, title, {}};
  for (LossPlacement placement : {LossPlacement::external, LossPlacement::internal}) {
    std::vector<Metric> metrics{metric};
    metrics.insert(metrics.end(), extra.begin(), extra.end());
    FigurePanel p = panel(name + (placement == LossPlacement::external ? "a" : "b"),
                          title + ", " + to_string(placement) + " loss", states, metrics, z, x_axis);
    p.phi = phi;
    p.placements = {placement};
    p.eta = eta;
    fig.panels.push_back(std::move(p));
  }
  return fig;
}

FigureSpec figure12() {
  std::vector<StateSpec> a = gsp_family({{0, 1}, {1, 0}});
  std::vector<StateSpec> b = gsp_family({{1, 1}});
  const std::vector<Metric> metrics{Metric::sensitivity, Metric::apn, Metric::sql, Metric::hl};
  FigurePanel pa = panel("fig12a", "phase sensitivity vs total photon number, orders (0,1) and (1,0)",
                         a, metrics, z_curve(), "apn");
  FigurePanel pb =
      panel("fig12b", "phase sensitivity vs total photon number, orders (1,1)", b, metrics, z_curve(), "apn");
  pa.phi = {phi_fixed};
  pb.phi = {phi_fixed};
  return {"fig12", "ideal phase sensitivity against the SQL and HL", {pa, pb}};
}

FigureSpec make_figure(std::string_view name) {
  if (name == "fig2") return versus_z("fig2", "average photon number vs z", {Metric::apn});
  if (name == "fig3")
    return comparison_versus_z("fig3", "average photon number vs z against PA/PS baselines", Metric::apn);
  if (name == "fig4") return versus_z("fig4", "antibunching R vs z", {Metric::antibunch});
  if (name == "fig5")
    return versus_z("fig5", "two-mode squeezing vs z", {Metric::var_db, Metric::delta_db});
  if (name == "fig6") return versus_z("fig6", "quantum Fisher information vs z", {Metric::qfi});
  if (name == "fig7")
    return comparison_versus_z("fig7", "quantum Fisher information vs z against PA/PS baselines",
                               Metric::qfi);
  if (name == "fig8") return versus_phi("fig8", "parity signal vs phase", Metric::parity, phi_parity());
  if (name == "fig9")
    return comparison_versus_phi("fig9", "parity signal vs phase against PA/PS baselines", Metric::parity,
                                 phi_parity());
  if (name == "fig10")
    return versus_phi("fig10", "phase sensitivity vs phase", Metric::sensitivity, phi_sensitivity());
  if (name == "fig11")
    return comparison_versus_phi("fig11", "phase sensitivity vs phase against PA/PS baselines",
                                 Metric::sensitivity, phi_sensitivity());
  if (name == "fig12") return figure12();
  if (name == "fig14")
    return lossy("fig14", "lossy parity signal vs phase", comparison(), Metric::parity_loss, {z_caption},
                 phi_parity(), {0.9}, "phi");
  if (name == "fig15")
    return lossy("fig15", "lossy phase sensitivity vs phase", gsp_family({{1, 1}}),
                 Metric::sensitivity_loss, {z_caption}, phi_sensitivity(), {1.0, 0.9, 0.8}, "phi");
  if (name == "fig16")
    return lossy("fig16", "lossy phase sensitivity vs phase against PA/PS baselines", comparison(),
                 Metric::sensitivity_loss, {z_caption}, phi_sensitivity(), {0.9}, "phi");
  if (name == "fig17")
    return lossy("fig17", "lossy phase sensitivity vs transmissivity", comparison(),
                 Metric::sensitivity_loss, {z_caption}, {phi_fixed}, eta_curve(), "eta");
  if (name == "fig18")
    return lossy("fig18", "lossy phase sensitivity vs total photon number",
                 {StateSpec::gsp(1.0, 1, 1, z_caption)}, Metric::sensitivity_loss, z_curve(), {phi_fixed},
                 {1.0, 0.99, 0.98, 0.97, 0.96, 0.95}, "apn", {Metric::apn, Metric::sql, Metric::hl});
  raise(ErrorKind::invalid_argument, "unknown figure '" + std::string(name) + "'");
}

}  // namespace

const std::vector<std::string>& figure_names() {
  static const std::vector<std::string> names{"fig2",  "fig3",  "fig4",  "fig5",  "fig6",  "fig7",
                                              "fig8",  "fig9",  "fig10", "fig11", "fig12", "fig14",
                                              "fig15", "fig16", "fig17", "fig18"};
  return names;
}

FigureSpec figure_spec(std::string_view name) { return make_figure(name); }

std::string figure_manifest(const FigureSpec& figure, EngineChoice engine) {
  using nlohmann::ordered_json;
  ordered_json doc;
  doc["figure"] = figure.name;
  doc["title"] = figure.title;
  doc["engine"] = engine == EngineChoice::closed ? "closed" : engine == EngineChoice::oracle ? "oracle" : "both";
  doc["columns"] = std::string(csv_header);
  ordered_json panels = ordered_json::array();
  for (const FigurePanel& p : figure.panels) {
    ordered_json entry;
    entry["panel"] = p.id;
    entry["file"] = p.id + ".csv";
    entry["title"] = p.title;
    entry["x_axis"] = p.x_axis;
    ordered_json states = ordered_json::array();
    for (const StateSpec& st : p.states) {
      states.push_back(st.label());
    }
    entry["states"] = states;
    ordered_json metrics = ordered_json::array();
    for (Metric m : p.metrics) {
      metrics.push_back(to_string(m));
    }
    entry["metrics"] = metrics;
    entry["z"] = p.z;
    if (!p.phi.empty()) entry["phi"] = p.phi;
    if (!p.placements.empty()) {
      ordered_json placements = ordered_json::array();
      for (LossPlacement pl : p.placements) {
        placements.push_back(to_string(pl));
      }
      entry["placements"] = placements;
      entry["eta"] = p.eta;
    }
    panels.push_back(entry);
  }
  doc["panels"] = panels;
  return doc.dump(2) + "\n";
}

std::vector<std::string> write_figure(const FigureSpec& figure, const std::string& dir,
                                      EngineChoice engine) {
  std::filesystem::create_directories(dir);
  std::vector<std::string> written;
  for (const FigurePanel& p : figure.panels) {
    const std::string path = (std::filesystem::path(dir) / (p.id + ".csv")).string();
    write_csv_file(path, evaluate_points(p.points(), engine));
    written.push_back(path);
  }
  const std::string manifest = (std::filesystem::path(dir) / (figure.name + ".manifest.json")).string();
  std::ofstream(manifest, std::ios::binary | std::ios::trunc) << figure_manifest(figure, engine);
  written.push_back(manifest);
  return written;
}

}  // namespace gsp
