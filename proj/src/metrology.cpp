#include "gsp/metrology.hpp"

#include <cmath>
#include <string>

#include "gsp/error.hpp"
#include "internal/phase_series.hpp"

namespace gsp {

using series::TruncatedSeries;

namespace detail {

TruncatedSeries guarded_pow(const TruncatedSeries& f, double alpha, const char* context) {
  const Complex c0 = f.constant_term();
  if (std::abs(c0.imag()) <= 1e-12 * std::max(1.0, std::abs(c0.real())) && c0.real() <= 0.0) {
    raise(ErrorKind::numeric_failure,
          std::string(context) + ": radicand " + std::to_string(c0.real()) + " is not positive");
  }
  return series::series_pow(f, alpha);
}

PhaseJet phase_signal(const GspParams& p, double mzi_angle, int order, const PhaseKernel& kernel,
                      const char* context) {
  if (order < 0 || order > 2) {
    raise(ErrorKind::invalid_argument, "phase derivative order must be 0, 1 or 2");
  }
  const double pd = normalization_pd(p);
  const series::SeriesShape shape = tau_shape(p, {order});
  const GeneratingFunctions gf = make_generating_functions(p, shape);
  const TruncatedSeries angle = series::linear_series(mzi_angle, {{4, 1.0}}, shape);
  const TruncatedSeries integrand = gf.u * gf.u1 * kernel(gf, angle);

  double out[3] = {0.0, 0.0, 0.0};
  for (int j = 0; j <= order; ++j) {
    const Complex raw = extract_tau(p, integrand, {j}) / pd;
    require_finite(raw.real(), context);
    if (std::abs(raw.imag()) > 1e-10 * std::max(1.0, std::abs(raw.real()))) {
      raise(ErrorKind::numeric_failure, std::string(context) + ": imaginary residue " +
                                            std::to_string(raw.imag()) + " exceeds tolerance");
    }
    out[j] = raw.real();
  }
  return {out[0], out[1], out[2]};
}

}  // namespace detail

namespace {

// <a† b> and <a b†>, from the anti-normal moments.
std::pair<Complex, Complex> hopping_moments(const GspParams& p) {
  return {general_moment(p, {0, 1, 1, 0}), general_moment(p, {1, 0, 0, 1})};
}

}  // namespace

double j2_mean(const GspParams& p) {
  const auto [adag_b, a_bdag] = hopping_moments(p);
  return ((adag_b - a_bdag) / Complex(0.0, 2.0)).real();
}

double qfi(const GspParams& p) {
  auto moment = [&](MomentOrders o) { return general_moment(p, o); };
  const double aad = moment({1, 0, 1, 0}).real();
  const double bbd = moment({0, 1, 0, 1}).real();
  const double na = aad - 1.0;
  const double nb = bbd - 1.0;
  const double nanb = moment({1, 1, 1, 1}).real() - aad - bbd + 1.0;
  const Complex adag2_b2 = moment({0, 2, 2, 0});
  const Complex a2_bdag2 = moment({2, 0, 0, 2});
  // 4 J2² = 2 na nb + na + nb - a†² b² - a² b†²
  const double j2_sq4 = 2.0 * nanb + na + nb - (adag2_b2 + a2_bdag2).real();
  const double mean = j2_mean(p);
  const double f = j2_sq4 - 4.0 * mean * mean;
  return require_finite(f, "qfi");
}

double qcrb(const GspParams& p) {
  const double f = qfi(p);
  if (!(f > 0.0)) {
    raise(ErrorKind::domain, "qcrb: quantum Fisher information vanishes");
  }
  return 1.0 / std::sqrt(f);
}

PhaseJet parity_jet(const GspParams& p, const PhasePoint& pp, int order) {
  auto kernel = [](const GeneratingFunctions& gf, const TruncatedSeries& angle) {
    const TruncatedSeries x = gf.v * gf.v1;
    const TruncatedSeries sin_phi = series::series_sin(angle);
    const TruncatedSeries sin2 = sin_phi * sin_phi;
    const TruncatedSeries cos2phi = series::series_cos(angle * Complex(2.0));
    const TruncatedSeries omega1 = detail::guarded_pow(1.0 - x * sin2, 0.5, "parity_expectation");
    const TruncatedSeries shifted = x * cos2phi + Complex(1.0);
    const TruncatedSeries omega2 = shifted * shifted;
    const TruncatedSeries x_minus_1 = x - Complex(1.0);
    const TruncatedSeries omega3 = x * x_minus_1 * x_minus_1 * sin2;
    return omega1 * detail::guarded_pow(omega2 - omega3, -0.5, "parity_expectation");
  };
  return detail::phase_signal(p, pp.mzi_angle(), order, kernel, "parity_expectation");
}

double parity_expectation(const GspParams& p, const PhasePoint& pp) {
  return parity_jet(p, pp, 0).value;
}

double sensitivity_from_jet(const PhaseJet& jet, double detection_phase, const char* context) {
  if (detection_phase == 0.0 && std::abs(1.0 - std::abs(jet.value)) <= 1e-9) {
    // 1 - Pi² ~ |Pi''| phi² and |Pi'| ~ |Pi''| |phi| near a saturated peak.
    if (!(std::abs(jet.d2) > 0.0)) {
      raise(ErrorKind::domain, std::string(context) + ": flat peak at zero phase");
    }
    return 1.0 / std::sqrt(std::abs(jet.d2));
  }
  if (std::abs(jet.d1) <= 1e-14) {
    raise(ErrorKind::domain, std::string(context) + ": signal is stationary at phase " +
                                 std::to_string(detection_phase));
  }
  const double spread = std::sqrt(std::max(0.0, 1.0 - jet.value * jet.value));
  return require_finite(spread / std::abs(jet.d1), context);
}

double phase_sensitivity(const GspParams& p, const PhasePoint& pp) {
  const int order = pp.detection_phase() == 0.0 ? 2 : 1;
  return sensitivity_from_jet(parity_jet(p, pp, order), pp.detection_phase(), "phase_sensitivity");
}

std::pair<double, double> sql_hl(double total_apn) {
  if (!(total_apn > 0.0) || !std::isfinite(total_apn)) {
    raise(ErrorKind::invalid_argument, "sql_hl: total photon number must be positive");
  }
  return {1.0 / std::sqrt(total_apn), 1.0 / total_apn};
}

}  // namespace gsp
