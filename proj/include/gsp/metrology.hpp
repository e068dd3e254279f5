#pragma once

// Ideal-interferometer figures of merit for the GSP-TMSV: quantum Fisher
// information, parity detection on mode b and its error-propagation
// sensitivity.
//
// Convention: J2 = (a†b - ab†)/(2i), U(phi) = exp(-i phi J2), parity
// detected on mode b. User-facing phases are detection phases; the
// rotation angle is detection + pi/2.

#include <numbers>
#include <utility>

#include "gsp/gsp_core.hpp"

namespace gsp {

class PhasePoint {
 public:
  static PhasePoint from_detection(double detection_phase) {
    return PhasePoint(detection_phase, detection_phase + std::numbers::pi / 2);
  }
  static PhasePoint from_mzi(double mzi_angle) {
    return PhasePoint(mzi_angle - std::numbers::pi / 2, mzi_angle);
  }

  double detection_phase() const noexcept { return detection_; }
  double mzi_angle() const noexcept { return mzi_; }

 private:
  PhasePoint(double detection, double mzi) : detection_(detection), mzi_(mzi) {}
  double detection_;
  double mzi_;
};

/// Value and first two phase derivatives of a signal at one point.
struct PhaseJet {
  double value = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

/// <J2>, which vanishes for Schmidt-diagonal states.
double j2_mean(const GspParams& p);

/// 4 (<J2²> - <J2>²).
double qfi(const GspParams& p);

/// 1 / sqrt(F_Q). Throws domain when F_Q vanishes.
double qcrb(const GspParams& p);

double parity_expectation(const GspParams& p, const PhasePoint& pp);

/// Parity together with d/dphi and d²/dphi² (second only when order == 2).
PhaseJet parity_jet(const GspParams& p, const PhasePoint& pp, int order);

/// sqrt(1 - <Pi>²) / |d<Pi>/dphi|. At detection phase 0 with a saturated
/// peak the ratio is 0/0 and its limit 1/sqrt(|<Pi>''|) is returned.
double phase_sensitivity(const GspParams& p, const PhasePoint& pp);

/// Error propagation from a signal jet. `jet` must carry d2 when the
/// detection phase is exactly zero.
double sensitivity_from_jet(const PhaseJet& jet, double detection_phase, const char* context);

/// (SQL, HL) = (1/sqrt(x), 1/x) for total photon number x = 2N.
std::pair<double, double> sql_hl(double total_apn);

}  // namespace gsp
