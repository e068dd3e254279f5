#pragma once

// Parity detection and phase sensitivity with photon loss on mode b.
//
// External loss sits in front of the detector and turns the observable into
// (1 - 2 eta)^{b†b}. Internal loss sits between the phase shift and the
// second beam splitter.

#include <complex>

#include "gsp/gsp_core.hpp"
#include "gsp/metrology.hpp"

namespace gsp {

enum class LossPlacement { external, internal };

const char* to_string(LossPlacement placement);

/// Loss placement and transmissivity eta in (0, 1]. eta = 1 is lossless.
struct LossConfig {
  LossPlacement placement = LossPlacement::external;
  double eta = 1.0;

  static LossConfig make(LossPlacement placement, double eta);
};

/// Coefficients of the internal-loss observable. first and third are real.
struct LossCoeffs {
  Complex first;
  Complex second;
  Complex third;
};

/// Coefficients at the rotation angle of `pp`, with the middle one in the
/// factored form (2 sqrt(eta) sin(phi) - i (eta - 1)) / 4.
LossCoeffs omega_coeffs(const PhasePoint& pp, double eta);

/// The middle coefficient as a ratio of the two quadratics it was factored
/// from; singular at eta = 1, phi = 0. Kept as a reference for tests.
Complex omega_second_literal(const PhasePoint& pp, double eta);

double parity_external(const GspParams& p, const PhasePoint& pp, double eta);
double parity_internal(const GspParams& p, const PhasePoint& pp, double eta);

PhaseJet parity_lossy_jet(const GspParams& p, const PhasePoint& pp, const LossConfig& loss,
                          int order);

double sensitivity_lossy(const GspParams& p, const PhasePoint& pp, const LossConfig& loss);

namespace detail {

/// Internal-loss parity with the cross-coupling |kappa|² = coupling_scale
/// |middle|². The physical value is 4; other scales exist only so the
/// validation harness can inject a known fault.
PhaseJet parity_internal_jet(const GspParams& p, const PhasePoint& pp, double eta, int order,
                             double coupling_scale);

}  // namespace detail

}  // namespace gsp
