#include "gsp/gsp_core.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "gsp/error.hpp"

namespace gsp {

using series::SeriesShape;
using series::TruncatedSeries;

GspParams GspParams::make(double s, int m, int n, double z) {
  if (!(s >= 0.0 && s <= 1.0)) {
    raise(ErrorKind::invalid_argument, "s must lie in [0, 1]");
  }
  if (!(z > 0.0 && z < 1.0)) {
    raise(ErrorKind::invalid_argument, "z must satisfy 0 < z < 1");
  }
  if (m < 0 || n < 0 || m > max_order || n > max_order) {
    raise(ErrorKind::invalid_argument,
          "operation orders m, n must lie in [0, " + std::to_string(max_order) + "]");
  }
  GspParams p;
  p.s = s;
  p.t = std::sqrt(std::max(0.0, 1.0 - s * s));
  p.m = m;
  p.n = n;
  p.z = z;
  return p;
}

namespace {

// tau_i * tau_j, or the zero series when either variable cannot appear.
TruncatedSeries product_of_vars(std::size_t i, std::size_t j, const SeriesShape& shape) {
  if (shape.order(i) < 1 || shape.order(j) < 1) {
    return TruncatedSeries(shape);
  }
  return series::var_series(i, shape) * series::var_series(j, shape);
}

}  // namespace

SeriesShape tau_shape(const GspParams& p, std::initializer_list<int> extra) {
  std::vector<int> orders{p.m, p.n, p.m, p.n};
  orders.insert(orders.end(), extra.begin(), extra.end());
  return SeriesShape(std::move(orders));
}

Complex extract_tau(const GspParams& p, const TruncatedSeries& f, std::initializer_list<int> extra) {
  std::vector<int> degrees{p.m, p.n, p.m, p.n};
  degrees.insert(degrees.end(), extra.begin(), extra.end());
  return series::extract_derivative(f, degrees);
}

GeneratingFunctions make_generating_functions(const GspParams& p, const SeriesShape& shape) {
  if (shape.variables() < 4) {
    raise(ErrorKind::shape_mismatch, "generating functions need tau1..tau4");
  }
  const double prefactor = std::sqrt(1.0 - p.z * p.z);
  const double st = p.s + p.t;
  using series::linear_series;
  using series::series_exp;

  TruncatedSeries u = series_exp(linear_series(0.0, {{0, p.s}, {1, p.s}}, shape)) * prefactor;
  TruncatedSeries u1 = series_exp(linear_series(0.0, {{2, p.s}, {3, p.s}}, shape)) * prefactor;
  TruncatedSeries v = series_exp(linear_series(0.0, {{0, st}, {1, st}}, shape)) * p.z;
  TruncatedSeries v1 = series_exp(linear_series(0.0, {{2, st}, {3, st}}, shape)) * p.z;
  TruncatedSeries delta = series::series_pow(1.0 - v * v1, -1.0);

  std::optional<TruncatedSeries> w;
  if (shape.variables() >= 8) {
    // w = tau7 tau8 v1 + tau5 tau6 v + tau6 tau8 + tau5 tau7
    w = product_of_vars(6, 7, shape) * v1 + product_of_vars(4, 5, shape) * v +
        product_of_vars(5, 7, shape) + product_of_vars(4, 6, shape);
  }
  return {std::move(u), std::move(v), std::move(u1), std::move(v1), std::move(delta), std::move(w)};
}

double normalization_pd(const GspParams& p) {
  if (p.is_tmsv()) {
    return 1.0;
  }
  const SeriesShape shape = tau_shape(p);
  const GeneratingFunctions gf = make_generating_functions(p, shape);
  const double pd = extract_tau(p, gf.u * gf.u1 * gf.delta).real();
  require_finite(pd, "normalization_pd");
  if (!(pd > 0.0)) {
    raise(ErrorKind::numeric_failure, "normalization_pd: non-positive normalization");
  }
  return pd;
}

namespace {

void check_moment_orders(const MomentOrders& o) {
  for (int x : {o.l, o.k, o.h, o.g}) {
    if (x < 0 || x > MomentOrders::max_order) {
      raise(ErrorKind::invalid_argument,
            "moment orders must lie in [0, " + std::to_string(MomentOrders::max_order) + "]");
    }
  }
}

Complex moment_unchecked(const GspParams& p, const MomentOrders& o, double pd) {
  const SeriesShape shape = tau_shape(p, {o.l, o.k, o.h, o.g});
  const GeneratingFunctions gf = make_generating_functions(p, shape);
  const TruncatedSeries integrand =
      gf.u * gf.u1 * gf.delta * series::series_exp(gf.delta * *gf.w);
  const Complex value = extract_tau(p, integrand, {o.l, o.k, o.h, o.g}) / pd;
  require_finite(value.real(), "general_moment");
  require_finite(value.imag(), "general_moment");
  return value;
}

// Evaluates only the ordering with (l, k) <= (h, g); the other half follows
// from <A>* = <A†>, so the Hermitian pair agrees exactly.
Complex moment_with_pd(const GspParams& p, const MomentOrders& o, double pd) {
  check_moment_orders(o);
  if (std::pair(o.l, o.k) > std::pair(o.h, o.g)) {
    return std::conj(moment_unchecked(p, {o.h, o.g, o.l, o.k}, pd));
  }
  return moment_unchecked(p, o, pd);
}

}  // namespace

Complex general_moment(const GspParams& p, MomentOrders orders) {
  return moment_with_pd(p, orders, normalization_pd(p));
}

double average_photon_number(const GspParams& p) {
  return general_moment(p, {1, 0, 1, 0}).real() - 1.0;
}

double antibunching_r(const GspParams& p) {
  const double pd = normalization_pd(p);
  auto moment = [&](MomentOrders o) { return moment_with_pd(p, o, pd).real(); };
  const double aad = moment({1, 0, 1, 0});
  const double bbd = moment({0, 1, 0, 1});
  // Normal-ordered moments from the anti-normal ones.
  const double a2 = moment({2, 0, 2, 0}) - 4.0 * aad + 2.0;
  const double b2 = moment({0, 2, 0, 2}) - 4.0 * bbd + 2.0;
  const double cross = moment({1, 1, 1, 1}) - aad - bbd + 1.0;
  if (!(cross > 0.0)) {
    raise(ErrorKind::domain, "antibunching_r: <a†a b†b> vanishes");
  }
  return require_finite((a2 + b2) / (2.0 * cross) - 1.0, "antibunching_r");
}

std::pair<double, double> quadrature_variances(const GspParams& p, QuadraturePhases q) {
  const double pd = normalization_pd(p);
  const double na = moment_with_pd(p, {1, 0, 1, 0}, pd).real() - 1.0;
  const double nb = moment_with_pd(p, {0, 1, 0, 1}, pd).real() - 1.0;
  const Complex ab = moment_with_pd(p, {1, 1, 0, 0}, pd);
  const double cross = 2.0 * (ab * std::polar(1.0, -(q.theta1 + q.theta2))).real();
  const double base = 1.0 + na + nb;
  return {require_finite(base + cross, "quadrature_variances"),
          require_finite(base - cross, "quadrature_variances")};
}

double squeezing_db(const GspParams& p) {
  return 10.0 * std::log10(quadrature_variances(p).first);
}

double delta_db_vs_tmsv(const GspParams& p) {
  const double reference = quadrature_variances(GspParams::tmsv(p.z)).first;
  return 10.0 * std::log10(quadrature_variances(p).first / reference);
}

}  // namespace gsp
