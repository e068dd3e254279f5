#include <doctest.h>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "gsp/error.hpp"
#include "gsp/figures.hpp"
#include "gsp/parallel.hpp"
#include "gsp/sweep.hpp"

using namespace gsp;
namespace fs = std::filesystem;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no gsp::Error thrown");
  return ErrorKind::numeric_failure;
}

std::string to_csv(const std::vector<ResultRow>& rows) {
  std::ostringstream out;
  write_csv(out, rows);
  return out.str();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return lines;
}

SweepConfig apn_sweep(EngineChoice engine) {
  SweepConfig cfg;
  cfg.states = {StateSpec::tmsv(0.5), StateSpec::gsp(0.0, 1, 1, 0.5)};
  cfg.z = Range{0.1, 0.9, 9}.values();
  cfg.metrics = {Metric::apn};
  cfg.engine = engine;
  return cfg;
}

struct ScopedEnv {
  ScopedEnv(const char* name, const char* value) : name_(name) {
    if (const char* old = std::getenv(name)) old_ = old;
    ::setenv(name, value, 1);
  }
  ~ScopedEnv() {
    if (old_.empty()) {
      ::unsetenv(name_);
    } else {
      ::setenv(name_, old_.c_str(), 1);
    }
  }
  const char* name_;
  std::string old_;
};

}  // namespace

TEST_CASE("vocabularies") {
  for (const char* name : {"apn", "antibunch", "var_db", "delta_db", "qfi", "qcrb", "parity", "sensitivity",
                           "parity_loss", "sensitivity_loss", "sql", "hl"}) {
    CHECK(std::string(to_string(parse_metric(name))) == name);
  }
  CHECK(kind_of([] { parse_metric("fisher"); }) == ErrorKind::invalid_argument);
  CHECK(needs_phase(Metric::sensitivity_loss));
  CHECK_FALSE(needs_phase(Metric::qfi));
  CHECK(needs_loss(Metric::parity_loss));
  CHECK_FALSE(needs_loss(Metric::parity));

  for (const char* name : {"gsp", "tmsv", "ps-tmsv", "pa-tmsv"}) {
    CHECK(std::string(to_string(parse_family(name))) == name);
  }
  CHECK(kind_of([] { parse_family("nope"); }) == ErrorKind::invalid_argument);
  CHECK(kind_of([] { parse_engine_choice("fast"); }) == ErrorKind::invalid_argument);

  CHECK(engines_for(EngineChoice::both, StateSpec::gsp(0.5, 1, 1, 0.5)).size() == 2);
  CHECK(engines_for(EngineChoice::closed, StateSpec::pa_tmsv(0.5)) == std::vector{Engine::fock_oracle});
  CHECK(engines_for(EngineChoice::both, StateSpec::ps_tmsv(0.5)) == std::vector{Engine::fock_oracle});
}

TEST_CASE("ranges") {
  const auto v = Range{0.1, 0.9, 9}.values();
  REQUIRE(v.size() == 9);
  CHECK(v.front() == 0.1);
  CHECK(v.back() == 0.9);
  CHECK(v[4] == doctest::Approx(0.5));
  CHECK(Range{0.2, 0.4, 1}.values() == std::vector{0.2});
  CHECK(kind_of([] { Range{0.5, 0.5, 3}.values(); }) == ErrorKind::invalid_argument);
  CHECK(kind_of([] { Range{0.1, 0.5, 0}.values(); }) == ErrorKind::invalid_argument);
}

TEST_CASE("single evaluations") {
  CHECK(evaluate({StateSpec::tmsv(0.6), Metric::qfi, {}, {}}, Engine::closed_form) ==
        doctest::Approx(3.515625).epsilon(1e-12));
  CHECK(evaluate({StateSpec::tmsv(0.6), Metric::qfi, {}, {}}, Engine::fock_oracle) ==
        doctest::Approx(3.515625).epsilon(1e-12));
  CHECK(evaluate({StateSpec::gsp(0.0, 1, 0, 0.5), Metric::apn, {}, {}}, Engine::closed_form) ==
        doctest::Approx(2.2).epsilon(1e-12));
  // sql and hl use the total photon number 2N
  const double total = 2 * 0.5625;
  CHECK(evaluate({StateSpec::tmsv(0.6), Metric::sql, {}, {}}, Engine::closed_form) ==
        doctest::Approx(1 / std::sqrt(total)));
  CHECK(evaluate({StateSpec::tmsv(0.6), Metric::hl, {}, {}}, Engine::fock_oracle) == doctest::Approx(1 / total));
  CHECK(evaluate({StateSpec::tmsv(0.6), Metric::delta_db, {}, {}}, Engine::fock_oracle) ==
        doctest::Approx(0.0).epsilon(1e-12));
  CHECK(kind_of([] { evaluate({StateSpec::pa_tmsv(0.6), Metric::apn, {}, {}}, Engine::closed_form); }) ==
        ErrorKind::invalid_argument);
  const EvalPoint lossy{StateSpec::gsp(0.5, 1, 1, 0.6), Metric::sensitivity_loss, 0.1,
                        LossConfig{LossPlacement::internal, 0.9}};
  CHECK(evaluate(lossy, Engine::closed_form) == doctest::Approx(evaluate(lossy, Engine::fock_oracle)).epsilon(1e-9));
}

TEST_CASE("sweep row counts and cross-engine agreement") {
  const auto closed = run_sweep(apn_sweep(EngineChoice::closed));
  CHECK(closed.size() == 18);
  const auto both = run_sweep(apn_sweep(EngineChoice::both));
  REQUIRE(both.size() == 36);
  // both engines of one point are adjacent after sorting
  for (std::size_t i = 0; i < both.size(); i += 2) {
    CHECK(both[i].engine == Engine::closed_form);
    CHECK(both[i + 1].engine == Engine::fock_oracle);
    CHECK(std::abs(both[i].value - both[i + 1].value) < 1e-9);
  }
}

TEST_CASE("CSV layout") {
  const auto csv = to_csv(run_sweep(apn_sweep(EngineChoice::closed)));
  const auto lines = lines_of(csv);
  REQUIRE(lines.size() == 19);
  CHECK(lines[0] == "family,s,m,n,z,phi,eta1,eta2,metric,value,engine");
  CHECK(lines[1] == "gsp,0.000000000000e+00,1,1,1.000000000000e-01,,,,apn,1.151488669456e+00,closed_form");
  CHECK(lines.back().rfind("tmsv,,,,9.000000000000e-01,,,,apn,", 0) == 0);

  SweepConfig lossy;
  lossy.states = {StateSpec::gsp(1.0, 1, 1, 0.5)};
  lossy.z = {0.6};
  lossy.phi = {0.1};
  lossy.placements = {LossPlacement::external, LossPlacement::internal};
  lossy.eta = {0.9};
  lossy.metrics = {Metric::parity_loss};
  const auto rows = lines_of(to_csv(run_sweep(lossy)));
  REQUIRE(rows.size() == 3);
  CHECK(rows[1].find(",1.000000000000e-01,,9.000000000000e-01,parity_loss,") != std::string::npos);
  CHECK(rows[2].find(",1.000000000000e-01,9.000000000000e-01,,parity_loss,") != std::string::npos);
}

TEST_CASE("failed points become error rows") {
  // the TMSV parity is stationary at phi' = pi/2
  const auto rows = evaluate_points({{StateSpec::tmsv(0.6), Metric::sensitivity, std::numbers::pi / 2, {}},
                                     {StateSpec::tmsv(0.6), Metric::sensitivity, 0.1, {}}},
                                    EngineChoice::closed);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].error == std::nullopt);
  REQUIRE(rows[1].error.has_value());
  CHECK(*rows[1].error == ErrorKind::domain);
  CHECK(to_csv(rows).find(",sensitivity,ERR_domain-error,closed_form") != std::string::npos);

  const auto overflow = evaluate_points({{StateSpec::gsp(0.5, 2, 2, 0.99), Metric::apn, {}, {}}}, EngineChoice::oracle);
  REQUIRE(overflow.size() == 1);
  CHECK(overflow[0].error == ErrorKind::cutoff_overflow);
}

TEST_CASE("row order does not depend on input order") {
  SweepConfig cfg = apn_sweep(EngineChoice::both);
  cfg.metrics = {Metric::apn, Metric::qfi, Metric::parity};
  cfg.phi = {0.0, 0.2};
  auto points = cfg.points();
  const std::string reference = to_csv(evaluate_points(points, EngineChoice::both));
  std::mt19937 rng(9);
  std::shuffle(points.begin(), points.end(), rng);
  CHECK(to_csv(evaluate_points(points, EngineChoice::both)) == reference);
}

TEST_CASE("JSON sweep configuration") {
  const auto cfg = SweepConfig::from_json(R"({
    "states": [{"family": "gsp", "s": 0.5, "m": 1, "n": 1}, {"family": "pa-tmsv"}],
    "z": {"from": 0.2, "to": 0.6, "steps": 3},
    "phi": [0.05, 0.1],
    "loss": {"placements": ["internal"], "eta": 0.9},
    "metrics": ["parity_loss", "qfi"],
    "engine": "both",
    "output": "out.csv"
  })");
  CHECK(cfg.states.size() == 2);
  CHECK(cfg.z.size() == 3);
  CHECK(cfg.phi == std::vector{0.05, 0.1});
  CHECK(cfg.eta == std::vector{0.9});
  CHECK(cfg.engine == EngineChoice::both);
  CHECK(cfg.output == "out.csv");
  cfg.validate();
  // parity_loss: 2 states x 3 z x 2 phi x 1 loss; qfi: 2 x 3
  CHECK(cfg.points().size() == 18);

  CHECK(kind_of([] { SweepConfig::from_json("{\"states\": ["); }) == ErrorKind::invalid_argument);
  CHECK(kind_of([] { SweepConfig::from_json("[]"); }) == ErrorKind::invalid_argument);
  CHECK(kind_of([] { SweepConfig::from_json(R"({"states":[{"family":"tmsv"}],"z":0.5,"metrics":["bogus"]})"); }) ==
        ErrorKind::invalid_argument);
  CHECK(kind_of([] {
          SweepConfig::from_json(R"({"states":[{"family":"tmsv"}],"z":0.5,"metrics":["parity"]})").validate();
        }) == ErrorKind::invalid_argument);
  CHECK(kind_of([] {
          SweepConfig::from_json(R"({"states":[{"family":"gsp","s":0.5,"m":1,"n":1}],"z":1.5,"metrics":["apn"]})")
              .validate();
        }) == ErrorKind::invalid_argument);
}

TEST_CASE("CSV files are written atomically") {
  const fs::path dir = fs::temp_directory_path() / "gspmzi_test_sweep";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const auto rows = run_sweep(apn_sweep(EngineChoice::closed));
  const std::string path = (dir / "out.csv").string();
  write_csv_file(path, rows);
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  CHECK(buf.str() == to_csv(rows));
  CHECK_FALSE(fs::exists(path + ".partial"));

  const std::string bad = (dir / "missing" / "out.csv").string();
  CHECK_THROWS_AS(write_csv_file(bad, rows), Error);
  CHECK_FALSE(fs::exists(bad + ".partial"));
  fs::remove_all(dir);
}

TEST_CASE("figure recipes") {
  CHECK(figure_names().size() == 16);
  CHECK(kind_of([] { figure_spec("fig13"); }) == ErrorKind::invalid_argument);

  const FigureSpec fig8 = figure_spec("fig8");
  REQUIRE(fig8.panels.size() == 2);
  CHECK(fig8.panels[0].z == std::vector{0.6});
  CHECK(fig8.panels[0].states.size() == 7);  // (0,1), (0,2) x three s, plus TMSV
  for (const auto& st : fig8.panels[1].states) {
    if (st.family == Family::gsp) CHECK(st.m == st.n);
  }

  const FigureSpec fig12 = figure_spec("fig12");
  bool has_01 = false, has_10 = false;
  for (const auto& st : fig12.panels[0].states) {
    has_01 |= st.family == Family::gsp && st.m == 0 && st.n == 1;
    has_10 |= st.family == Family::gsp && st.m == 1 && st.n == 0;
  }
  CHECK(has_01);
  CHECK(has_10);
  CHECK(fig12.panels[0].phi == std::vector{0.05});

  const FigureSpec fig18 = figure_spec("fig18");
  CHECK(fig18.panels[0].eta == std::vector{1.0, 0.99, 0.98, 0.97, 0.96, 0.95});
  CHECK(fig18.panels[0].placements == std::vector{LossPlacement::external});
  CHECK(fig18.panels[1].placements == std::vector{LossPlacement::internal});

  for (const std::string& name : figure_names()) {
    const FigureSpec fig = figure_spec(name);
    CHECK_FALSE(fig.panels.empty());
    const auto manifest = nlohmann::json::parse(figure_manifest(fig, EngineChoice::closed));
    CHECK(manifest["figure"] == name);
    CHECK(manifest["panels"].size() == fig.panels.size());
    CHECK(figure_manifest(fig, EngineChoice::closed) == figure_manifest(fig, EngineChoice::closed));
  }
}

TEST_CASE("worker pool") {
  {
    ScopedEnv env("GSP_THREADS", "3");
    CHECK(worker_count() == 3);
  }
  {
    ScopedEnv env("GSP_THREADS", "0");
    CHECK(worker_count() >= 1);
  }
  {
    ScopedEnv env("GSP_THREADS", "many");
    CHECK(kind_of([] { worker_count(); }) == ErrorKind::invalid_argument);
  }
  ScopedEnv env("GSP_THREADS", "4");
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; });
  CHECK(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));

  try {
    parallel_for(100, [](std::size_t i) {
      if (i == 17 || i == 60) throw std::runtime_error(std::to_string(i));
    });
    FAIL("exception swallowed");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()) == "17");
  }
}
