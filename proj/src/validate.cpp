#include "gsp/validate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>

#include "gsp/error.hpp"
#include "gsp/fock_oracle.hpp"
#include "gsp/loss.hpp"
#include "gsp/metrology.hpp"
#include "gsp/parallel.hpp"
#include "gsp/state_spec.hpp"

namespace gsp {

double relative_deviation(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  if (scale < 1e-12) {
    return 0.0;
  }
  return std::abs(a - b) / scale;
}

bool ValidationReport::ok() const {
  return std::all_of(deviations.begin(), deviations.end(), [](const auto& d) { return d.ok(); }) &&
         std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

void ValidationReport::print(std::ostream& out) const {
  char buf[512];
  for (const MetricDeviation& d : deviations) {
    std::snprintf(buf, sizeof buf, "%-4s %-24s max rel dev %.3e (tol %.1e) at %s\n",
                  d.ok() ? "ok" : "FAIL", d.metric.c_str(), d.max_deviation, d.tolerance,
                  d.worst_point.c_str());
    out << buf;
  }
  for (const CheckResult& c : checks) {
    out << (c.passed ? "ok   " : "FAIL ") << c.name;
    if (!c.detail.empty()) {
      out << ": " << c.detail;
    }
    out << '\n';
  }
}

namespace {

struct Grid {
  std::vector<double> s;
  std::vector<std::pair<int, int>> orders;
  std::vector<double> z;
  std::vector<double> phi;
  std::vector<double> eta;
};

Grid make_grid(ValidationGrid which) {
  if (which == ValidationGrid::small) {
    return {{0.0, 1.0}, {{0, 1}, {1, 1}}, {0.3, 0.6}, {0.2}, {0.9, 1.0}};
  }
  Grid g{{0.0, 0.5, 1.0}, {{0, 1}, {0, 2}, {1, 1}, {2, 2}}, {}, {0.05, 0.2, 0.4}, {0.8, 0.9, 1.0}};
  for (int i = 1; i <= 8; ++i) {
    g.z.push_back(0.1 * i);
  }
  return g;
}

struct Sample {
  std::string metric;
  std::string point;
  double deviation;
  double tolerance;
};

std::string describe(const GspParams& p, const char* extra = "") {
  char buf[160];
  std::snprintf(buf, sizeof buf, "s=%g m=%d n=%d z=%g%s", p.s, p.m, p.n, p.z, extra);
  return buf;
}

std::string with_phase(const GspParams& p, double phi, const LossConfig* loss = nullptr) {
  char buf[96];
  if (loss) {
    std::snprintf(buf, sizeof buf, " phi=%g eta=%g", phi, loss->eta);
  } else {
    std::snprintf(buf, sizeof buf, " phi=%g", phi);
  }
  return describe(p, buf);
}

// Every closed-form metric against its oracle counterpart, plus the
// lossless reductions, for one state.
std::vector<Sample> state_samples(const GspParams& p, const Grid& grid, const ValidateOptions& opt) {
  std::vector<Sample> out;
  const oracle::SchmidtState st = oracle::build_gsp_schmidt(p, oracle::choose_cutoff(p));
  const std::string where = describe(p);
  auto cross = [&](const char* metric, const std::string& point, double closed, double reference) {
    out.push_back({metric, point, relative_deviation(closed, reference), opt.tolerance});
  };
  auto reduction = [&](const char* metric, const std::string& point, double a, double b) {
    out.push_back({metric, point, relative_deviation(a, b), opt.reduction_tolerance});
  };

  cross("apn", where, average_photon_number(p), oracle::oracle_apn(st));
  cross("antibunch", where, antibunching_r(p), oracle::oracle_antibunching(st));
  const auto [v1, v2] = quadrature_variances(p);
  const auto [o1, o2] = oracle::oracle_quadrature_variances(st);
  cross("var_x1", where, v1, o1);
  cross("var_x2", where, v2, o2);
  cross("qfi", where, qfi(p), oracle::oracle_qfi(st));
  out.push_back({"j2_mean", where, std::abs(j2_mean(p)) > 1e-12 ? 1.0 : 0.0, 0.0});

  for (double phi : grid.phi) {
    const PhasePoint pp = PhasePoint::from_detection(phi);
    const PhaseJet ideal = parity_jet(p, pp, 1);
    const PhaseJet ideal_oracle = oracle::oracle_parity_jet(st, pp, std::nullopt);
    const double ideal_sens = sensitivity_from_jet(ideal, phi, "phase_sensitivity");
    cross("parity", with_phase(p, phi), ideal.value, ideal_oracle.value);
    cross("sensitivity", with_phase(p, phi), ideal_sens,
          sensitivity_from_jet(ideal_oracle, phi, "oracle_sensitivity"));

    for (LossPlacement placement : {LossPlacement::external, LossPlacement::internal}) {
      const bool internal = placement == LossPlacement::internal;
      for (double eta : grid.eta) {
        const LossConfig loss{placement, eta};
        const std::string point = with_phase(p, phi, &loss);
        const PhaseJet closed =
            internal ? detail::parity_internal_jet(p, pp, eta, 1, opt.inject_fault ? 1.0 : 4.0)
                     : parity_lossy_jet(p, pp, loss, 1);
        const PhaseJet reference = oracle::oracle_parity_jet(st, pp, loss);
        cross(internal ? "parity_internal" : "parity_external", point, closed.value, reference.value);
        const double closed_sens = sensitivity_from_jet(closed, phi, "sensitivity_lossy");
        cross(internal ? "sensitivity_internal" : "sensitivity_external", point, closed_sens,
              sensitivity_from_jet(reference, phi, "oracle_sensitivity"));
        if (eta == 1.0) {
          reduction(internal ? "lossless_internal" : "lossless_external", point, closed.value, ideal.value);
          reduction(internal ? "lossless_internal" : "lossless_external", point, closed_sens, ideal_sens);
        }
      }
    }
  }
  return out;
}

std::vector<Sample> tmsv_samples(const Grid& grid, const ValidateOptions& opt) {
  std::vector<Sample> out;
  std::vector<double> zs = grid.z;
  for (double z : {0.3, 0.6, 0.8}) {
    if (std::find(zs.begin(), zs.end(), z) == zs.end()) zs.push_back(z);
  }
  for (double z : zs) {
    const GspParams p = GspParams::tmsv(z);
    const double q = z * z;
    const std::string where = describe(p);
    auto add = [&](const char* metric, const std::string& point, double a, double b) {
      out.push_back({metric, point, relative_deviation(a, b), opt.reduction_tolerance});
    };
    add("tmsv_qfi", where, qfi(p), 4.0 * q / ((1.0 - q) * (1.0 - q)));
    add("tmsv_var_x1", where, quadrature_variances(p).first, (1.0 - z) / (1.0 + z));
    add("tmsv_peak_sensitivity", where, phase_sensitivity(p, PhasePoint::from_detection(0.0)),
        (1.0 - q) / (2.0 * z));
    for (double phi : {0.1, 0.3}) {
      const double expected = (1.0 - q) / std::sqrt(1.0 - 2.0 * q * std::cos(2.0 * phi) + q * q);
      add("tmsv_parity", with_phase(p, phi), parity_expectation(p, PhasePoint::from_detection(phi)),
          expected);
    }
  }
  return out;
}

CheckResult check_qfi_ordering(const Grid& grid) {
  CheckResult r{"qfi ordering s=0 >= s=0.5 >= s=1 >= tmsv (z >= 0.2)", true, {}};
  for (const auto& [m, n] : grid.orders) {
    for (double z : grid.z) {
      if (z < 0.2 - 1e-12) continue;
      std::vector<double> f;
      for (double s : {0.0, 0.5, 1.0}) {
        f.push_back(qfi(GspParams::make(s, m, n, z)));
      }
      f.push_back(qfi(GspParams::tmsv(z)));
      if (!std::is_sorted(f.rbegin(), f.rend())) {
        r.passed = false;
        r.detail = describe(GspParams::make(0.0, m, n, z));
        return r;
      }
    }
  }
  return r;
}

CheckResult check_sql_and_crb(const Grid& grid) {
  CheckResult r{"ideal sensitivity below SQL at phi=0.05, bounded by and saturating the QCRB", true, {}};
  for (double s : grid.s) {
    for (const auto& [m, n] : grid.orders) {
      for (double z : grid.z) {
        const GspParams p = GspParams::make(s, m, n, z);
        const double sql = sql_hl(2.0 * average_photon_number(p)).first;
        if (!(phase_sensitivity(p, PhasePoint::from_detection(0.05)) < sql)) {
          r.passed = false;
          r.detail = "SQL not broken at " + describe(p);
          return r;
        }
        const double bound = qcrb(p);
        if (relative_deviation(phase_sensitivity(p, PhasePoint::from_detection(1e-3)), bound) >= 1e-4) {
          r.passed = false;
          r.detail = "QCRB not approached at phi=1e-3 for " + describe(p);
          return r;
        }
        if (std::abs(parity_expectation(p, PhasePoint::from_detection(0.0)) - 1.0) > 1e-9) {
          r.passed = false;
          r.detail = "parity peak differs from 1 at " + describe(p);
          return r;
        }
        for (double phi : grid.phi) {
          if (std::abs(parity_expectation(p, PhasePoint::from_detection(phi))) > 1.0 + 1e-12) {
            r.passed = false;
            r.detail = "|parity| > 1 at " + with_phase(p, phi);
            return r;
          }
          if (phase_sensitivity(p, PhasePoint::from_detection(phi)) < bound - 1e-9) {
            r.passed = false;
            r.detail = "below QCRB at " + with_phase(p, phi);
            return r;
          }
        }
      }
    }
  }
  return r;
}

CheckResult check_loss_peak(const Grid& grid) {
  CheckResult r{"lossy parity peak non-increasing in loss", true, {}};
  const PhasePoint peak = PhasePoint::from_detection(0.0);
  for (double s : grid.s) {
    for (const auto& [m, n] : grid.orders) {
      for (double z : grid.z) {
        const GspParams p = GspParams::make(s, m, n, z);
        for (LossPlacement placement : {LossPlacement::external, LossPlacement::internal}) {
          double previous = 2.0;
          for (double eta : {1.0, 0.95, 0.9, 0.8}) {
            const double v = placement == LossPlacement::external ? parity_external(p, peak, eta)
                                                                  : parity_internal(p, peak, eta);
            if (std::abs(v) > 1.0 + 1e-12 || v > previous + 1e-12) {
              r.passed = false;
              r.detail = std::string(to_string(placement)) + " at " + describe(p);
              return r;
            }
            previous = v;
          }
        }
      }
    }
  }
  return r;
}

CheckResult check_apn_and_uncertainty(const Grid& grid) {
  CheckResult r{"apn increasing in z and variance product >= 1", true, {}};
  for (double s : grid.s) {
    for (const auto& [m, n] : grid.orders) {
      double previous = -1.0;
      for (double z : grid.z) {
        const GspParams p = GspParams::make(s, m, n, z);
        const double apn = average_photon_number(p);
        const auto [v1, v2] = quadrature_variances(p);
        if (!(apn > previous) || v1 * v2 < 1.0 - 1e-12) {
          r.passed = false;
          r.detail = describe(p);
          return r;
        }
        previous = apn;
      }
    }
  }
  return r;
}

// Minimum lossy sensitivity over phi' in [0.02, 0.4] at z = 0.6, m = n = 1,
// eta = 0.9 must rise along s=0, s=0.5, s=1, PA, PS, TMSV.
CheckResult check_lossy_ordering() {
  CheckResult r{"lossy sensitivity ordering s=0 <= s=0.5 <= s=1 <= PA <= PS <= TMSV", true, {}};
  const std::vector<StateSpec> states{StateSpec::gsp(0.0, 1, 1, 0.6), StateSpec::gsp(0.5, 1, 1, 0.6),
                                      StateSpec::gsp(1.0, 1, 1, 0.6), StateSpec::pa_tmsv(0.6),
                                      StateSpec::ps_tmsv(0.6),        StateSpec::tmsv(0.6)};
  for (LossPlacement placement : {LossPlacement::external, LossPlacement::internal}) {
    const LossConfig loss{placement, 0.9};
    std::vector<double> minima(states.size(), 0.0);
    parallel_for(states.size(), [&](std::size_t i) {
      const oracle::SchmidtState st = states[i].schmidt();
      double best = INFINITY;
      for (int k = 1; k <= 20; ++k) {
        best = std::min(best, oracle::oracle_sensitivity(st, PhasePoint::from_detection(0.02 * k), loss));
      }
      minima[i] = best;
    });
    if (!std::is_sorted(minima.begin(), minima.end())) {
      r.passed = false;
      r.detail = std::string(to_string(placement)) + " loss";
      return r;
    }
  }
  return r;
}

}  // namespace

ValidationReport run_validation(const ValidateOptions& options) {
  const Grid grid = make_grid(options.grid);
  std::vector<GspParams> states;
  for (double s : grid.s) {
    for (const auto& [m, n] : grid.orders) {
      for (double z : grid.z) {
        states.push_back(GspParams::make(s, m, n, z));
      }
    }
  }
  std::vector<std::vector<Sample>> per_state(states.size());
  parallel_for(states.size(), [&](std::size_t i) { per_state[i] = state_samples(states[i], grid, options); });
  per_state.push_back(tmsv_samples(grid, options));

  // Reduce in a fixed order so the report is reproducible.
  ValidationReport report;
  std::map<std::string, std::size_t> slot;
  for (const auto& samples : per_state) {
    for (const Sample& s : samples) {
      auto [it, inserted] = slot.try_emplace(s.metric, report.deviations.size());
      if (inserted) {
        report.deviations.push_back({s.metric, s.deviation, s.point, s.tolerance});
        continue;
      }
      MetricDeviation& d = report.deviations[it->second];
      if (s.deviation > d.max_deviation) {
        d.max_deviation = s.deviation;
        d.worst_point = s.point;
      }
    }
  }
  report.checks.push_back(check_qfi_ordering(grid));
  report.checks.push_back(check_sql_and_crb(grid));
  report.checks.push_back(check_loss_peak(grid));
  report.checks.push_back(check_apn_and_uncertainty(grid));
  report.checks.push_back(check_lossy_ordering());
  return report;
}

}  // namespace gsp
