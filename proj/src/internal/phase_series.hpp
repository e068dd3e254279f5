#pragma once

#include <functional>

#include "gsp/gsp_core.hpp"
#include "gsp/metrology.hpp"

namespace gsp::detail {

/// Multiplier applied to u u1 for a parity-like signal; receives the
/// generating functions and the rotation angle as a series in the phase
/// variable (index 4).
using PhaseKernel = std::function<series::TruncatedSeries(const GeneratingFunctions&,
                                                          const series::TruncatedSeries&)>;

/// Re[ extract(u u1 kernel) ] / P_d together with up to two phase
/// derivatives. Throws numeric_failure when the imaginary residue exceeds
/// 1e-10 relative.
PhaseJet phase_signal(const GspParams& p, double mzi_angle, int order, const PhaseKernel& kernel,
                      const char* context);

/// f^alpha with a real-radicand guard: throws numeric_failure when the
/// constant term is real and not positive.
series::TruncatedSeries guarded_pow(const series::TruncatedSeries& f, double alpha,
                                    const char* context);

}  // namespace gsp::detail
