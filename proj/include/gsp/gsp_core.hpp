#pragma once

// Closed-form statistics of the GSP-operated two-mode squeezed vacuum,
//
//   |psi> ∝ (s a a† + t a† a)^m (s b b† + t b† b)^n S2(z) |00>,
//
// evaluated by extracting mixed derivatives of exponential generating
// functions with the truncated-series engine.

#include <complex>
#include <numbers>
#include <optional>
#include <utility>

#include "gsp/series.hpp"

namespace gsp {

using Complex = std::complex<double>;

/// Physical state parameters. Always built through make(), which
/// enforces s in [0, 1], t = +sqrt(1 - s^2), 0 < z < 1 and m, n <= 6.
struct GspParams {
  double s = 1.0;
  double t = 0.0;
  int m = 0;
  int n = 0;
  double z = 0.5;

  static constexpr int max_order = 6;

  static GspParams make(double s, int m, int n, double z);
  static GspParams tmsv(double z) { return make(1.0, 0, 0, z); }

  bool is_tmsv() const noexcept { return m == 0 && n == 0; }
};

/// Quadrature angles for X_a, X_b. The default sum is pi.
struct QuadraturePhases {
  double theta1 = std::numbers::pi / 2;
  double theta2 = std::numbers::pi / 2;
};

/// Orders of a^l b^k a†^h b†^g (annihilators to the left).
struct MomentOrders {
  int l = 0;
  int k = 0;
  int h = 0;
  int g = 0;

  static constexpr int max_order = 4;
};

/// Generating functions on a shape whose first four variables are
/// tau1..tau4 (orders m, n, m, n). When the shape has at least eight
/// variables, tau5..tau8 occupy positions 4..7 and `w` is populated.
struct GeneratingFunctions {
  series::TruncatedSeries u;
  series::TruncatedSeries v;
  series::TruncatedSeries u1;
  series::TruncatedSeries v1;
  series::TruncatedSeries delta;  // (1 - v v1)^{-1}
  std::optional<series::TruncatedSeries> w;
};

GeneratingFunctions make_generating_functions(const GspParams& p,
                                              const series::SeriesShape& shape);

/// Shape (m, n, m, n, extra...) used for every extraction over tau1..tau4.
series::SeriesShape tau_shape(const GspParams& p, std::initializer_list<int> extra = {});

/// Applies the four-fold extraction (m, n, m, n) and any extra degrees.
Complex extract_tau(const GspParams& p, const series::TruncatedSeries& f,
                    std::initializer_list<int> extra = {});

double normalization_pd(const GspParams& p);

Complex general_moment(const GspParams& p, MomentOrders orders);

/// Per-mode average photon number N = <a a†> - 1 (equal for both modes).
double average_photon_number(const GspParams& p);

/// (<a†² a²> + <b†² b²>) / (2 <a† a b† b>) - 1.
double antibunching_r(const GspParams& p);

/// (<ΔX1²>, <ΔX2²>) with X1,2 = X_a ± X_b.
std::pair<double, double> quadrature_variances(const GspParams& p, QuadraturePhases q = {});

/// 10 log10 of <ΔX1²> relative to vacuum noise.
double squeezing_db(const GspParams& p);

/// 10 log10 of <ΔX1²> relative to the TMSV with the same z.
double delta_db_vs_tmsv(const GspParams& p);

}  // namespace gsp
