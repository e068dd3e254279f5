#include "gsp/loss.hpp"

#include <cmath>

#include "gsp/error.hpp"
#include "internal/phase_series.hpp"

namespace gsp {

using series::TruncatedSeries;

const char* to_string(LossPlacement placement) {
  return placement == LossPlacement::external ? "external" : "internal";
}

namespace {

void check_eta(double eta) {
  if (!(eta > 0.0 && eta <= 1.0)) {
    raise(ErrorKind::invalid_argument, "transmissivity eta must lie in (0, 1]");
  }
}

}  // namespace

LossConfig LossConfig::make(LossPlacement placement, double eta) {
  check_eta(eta);
  return {placement, eta};
}

LossCoeffs omega_coeffs(const PhasePoint& pp, double eta) {
  check_eta(eta);
  const double phi = pp.mzi_angle();
  const double root = std::sqrt(eta);
  const double mid = (1.0 + eta) / 2.0;
  return {Complex(root * std::cos(phi) - mid),
          Complex(2.0 * root * std::sin(phi), -(eta - 1.0)) / 4.0,
          Complex(-root * std::cos(phi) - mid)};
}

Complex omega_second_literal(const PhasePoint& pp, double eta) {
  check_eta(eta);
  const double phi = pp.mzi_angle();
  const double c = std::cos(phi);
  const Complex numerator = (eta + 1.0) * (eta + 1.0) - 4.0 * eta * c * c;
  const Complex denominator = 4.0 * Complex(2.0 * std::sqrt(eta) * std::sin(phi), eta - 1.0);
  return numerator / denominator;
}

namespace {

PhaseJet parity_external_jet(const GspParams& p, const PhasePoint& pp, double eta, int order) {
  check_eta(eta);
  auto kernel = [eta](const GeneratingFunctions& gf, const TruncatedSeries& angle) {
    const TruncatedSeries x = gf.v * gf.v1;
    const TruncatedSeries sin_phi = series::series_sin(angle);
    const TruncatedSeries cos_phi = series::series_cos(angle);
    const TruncatedSeries sin2 = sin_phi * sin_phi;
    const TruncatedSeries theta1 = 1.0 - x * sin2;
    const TruncatedSeries theta2 = 1.0 - x + x * cos_phi * cos_phi * Complex(2.0 * eta);
    const TruncatedSeries one_minus_x = 1.0 - x;
    const double base = 1.0 - 2.0 * eta;
    const TruncatedSeries theta3 = sin2 * x * one_minus_x * one_minus_x * Complex(base * base);
    return detail::guarded_pow(theta1, 0.5, "parity_external") *
           detail::guarded_pow(theta2 * theta2 - theta3, -0.5, "parity_external");
  };
  return detail::phase_signal(p, pp.mzi_angle(), order, kernel, "parity_external");
}

}  // namespace

namespace detail {

PhaseJet parity_internal_jet(const GspParams& p, const PhasePoint& pp, double eta, int order,
                             double coupling_scale) {
  check_eta(eta);
  auto kernel = [eta, coupling_scale](const GeneratingFunctions& gf,
                                      const TruncatedSeries& angle) {
    const TruncatedSeries x = gf.v * gf.v1;
    const double root = std::sqrt(eta);
    const double mid = (1.0 + eta) / 2.0;
    const TruncatedSeries cos_phi = series::series_cos(angle);
    const TruncatedSeries sin_phi = series::series_sin(angle);
    const TruncatedSeries first = cos_phi * Complex(root) - Complex(mid);
    const TruncatedSeries third = cos_phi * Complex(-root) - Complex(mid);
    // |middle|² = (4 eta sin² + (eta - 1)²) / 16, real on the real axis.
    const TruncatedSeries middle_sq =
        (sin_phi * sin_phi * Complex(4.0 * eta) + Complex((eta - 1.0) * (eta - 1.0))) *
        Complex(1.0 / 16.0);
    const TruncatedSeries kappa_sq = middle_sq * Complex(coupling_scale);
    const TruncatedSeries product = first * third - Complex(eta);
    const TruncatedSeries w1 = x * (product + kappa_sq);
    const TruncatedSeries w2 = kappa_sq * x * x * product * Complex(4.0);
    const TruncatedSeries one_minus_w1 = 1.0 - w1;
    return guarded_pow(one_minus_w1 * one_minus_w1 - w2, -0.5, "parity_internal");
  };
  return phase_signal(p, pp.mzi_angle(), order, kernel, "parity_internal");
}

}  // namespace detail

double parity_external(const GspParams& p, const PhasePoint& pp, double eta) {
  return parity_external_jet(p, pp, eta, 0).value;
}

double parity_internal(const GspParams& p, const PhasePoint& pp, double eta) {
  return detail::parity_internal_jet(p, pp, eta, 0, 4.0).value;
}

PhaseJet parity_lossy_jet(const GspParams& p, const PhasePoint& pp, const LossConfig& loss,
                          int order) {
  if (loss.placement == LossPlacement::external) {
    return parity_external_jet(p, pp, loss.eta, order);
  }
  return detail::parity_internal_jet(p, pp, loss.eta, order, 4.0);
}

double sensitivity_lossy(const GspParams& p, const PhasePoint& pp, const LossConfig& loss) {
  const int order = pp.detection_phase() == 0.0 ? 2 : 1;
  return sensitivity_from_jet(parity_lossy_jet(p, pp, loss, order), pp.detection_phase(),
                              "sensitivity_lossy");
}

}  // namespace gsp
