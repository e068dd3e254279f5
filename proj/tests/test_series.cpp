#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "gsp/error.hpp"
#include "gsp/series.hpp"

using namespace gsp::series;
using gsp::ErrorKind;

namespace {

constexpr int instances_per_shape = 128;

const std::vector<SeriesShape>& fuzz_shapes() {
  static const std::vector<SeriesShape> shapes{
      SeriesShape{2, 2}, SeriesShape{3, 3}, SeriesShape{2, 2, 2, 2},
      SeriesShape{1, 1, 1, 1, 1, 1, 1, 1}};
  return shapes;
}

TruncatedSeries random_series(const SeriesShape& shape, std::mt19937_64& rng, double constant_floor = 0.0) {
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  TruncatedSeries f(shape);
  for (Complex& c : f.coeffs()) c = {u(rng), u(rng)};
  if (constant_floor > 0.0) {
    // keep |f0| away from zero for pow
    const double mag = constant_floor + std::abs(u(rng));
    f.coeffs()[0] = std::polar(mag, 2.0 * M_PI * u(rng));
  }
  return f;
}

double max_abs(const TruncatedSeries& f) {
  double m = 0.0;
  for (Complex c : f.coeffs()) m = std::max(m, std::abs(c));
  return m;
}

double l1(const TruncatedSeries& f) {
  double s = 0.0;
  for (Complex c : f.coeffs()) s += std::abs(c);
  return s;
}

// max coefficient gap, relative to the larger magnitude of the two sides
double gap(const TruncatedSeries& a, const TruncatedSeries& b) {
  const double scale = std::max({1.0, max_abs(a), max_abs(b)});
  return max_abs(a - b) / scale;
}

// Gap of a product against its expected value, relative to ||a||_1 ||b||_1,
// which bounds every coefficient of a * b and hence its rounding error.
double product_gap(const TruncatedSeries& a, const TruncatedSeries& b, const TruncatedSeries& expected) {
  return max_abs(a * b - expected) / std::max(1.0, l1(a) * l1(b));
}

Complex evaluate(const TruncatedSeries& f, const std::vector<double>& x) {
  const SeriesShape& shape = f.shape();
  Complex sum = 0.0;
  std::vector<int> deg(shape.variables(), 0);
  for (std::size_t flat = 0; flat < shape.size(); ++flat) {
    std::size_t rest = flat;
    double mono = 1.0;
    for (std::size_t v = 0; v < shape.variables(); ++v) {
      deg[v] = static_cast<int>(rest / shape.stride(v));
      rest %= shape.stride(v);
      mono *= std::pow(x[v], deg[v]);
    }
    sum += f.coeffs()[flat] * mono;
  }
  return sum;
}

}  // namespace

TEST_CASE("constants and variables") {
  const TruncatedSeries one = const_series(1.0, SeriesShape{1, 1});
  CHECK(one.coefficient({0, 0}) == Complex(1.0));
  CHECK(one.coefficient({1, 0}) == Complex(0.0));
  CHECK(one.coefficient({1, 1}) == Complex(0.0));
  CHECK(const_series(0.0, SeriesShape{3, 2}).is_zero());
  const TruncatedSeries two = const_series(2.0, SeriesShape{2});
  CHECK(two.coefficient({0}) == Complex(2.0));
  CHECK(two.coefficient({1}) == Complex(0.0));
  CHECK(two.coefficient({2}) == Complex(0.0));

  const TruncatedSeries t1 = var_series(0, SeriesShape{1, 1});
  CHECK(t1.coefficient({1, 0}) == Complex(1.0));
  CHECK(t1.coefficient({0, 0}) == Complex(0.0));
  const TruncatedSeries t2 = var_series(1, SeriesShape{2, 2});
  CHECK(t2.coefficient({0, 1}) == Complex(1.0));
  CHECK(max_abs(t2) == 1.0);

  try {
    var_series(0, SeriesShape{0});
    FAIL("order-0 variable accepted");
  } catch (const gsp::Error& e) {
    CHECK(e.kind() == ErrorKind::invalid_argument);
  }
  CHECK_THROWS_AS(var_series(2, SeriesShape{1, 1}), gsp::Error);
  CHECK_THROWS_AS(SeriesShape(std::vector<int>(10, 1)), gsp::Error);
  CHECK_THROWS_AS(SeriesShape({1, -1}), gsp::Error);
  CHECK(SeriesShape({2, 3, 1}).size() == 24u);
}

TEST_CASE("ring operations and truncation") {
  const SeriesShape s2{2};
  const TruncatedSeries t = var_series(0, s2);
  const TruncatedSeries p = (1.0 + t) * (1.0 - t);
  CHECK(p.coefficient({0}) == Complex(1.0));
  CHECK(p.coefficient({1}) == Complex(0.0));
  CHECK(p.coefficient({2}) == Complex(-1.0));

  const SeriesShape s1{1};
  const TruncatedSeries t_short = var_series(0, s1);
  const TruncatedSeries q = (1.0 + t_short) * (1.0 - t_short);
  CHECK(q.coefficient({0}) == Complex(1.0));
  CHECK(q.coefficient({1}) == Complex(0.0));
  CHECK(q.shape() == s1);

  const SeriesShape s11{1, 1};
  const TruncatedSeries sum = series_add(var_series(0, s11), var_series(1, s11));
  CHECK(sum.coefficient({1, 0}) == Complex(1.0));
  CHECK(sum.coefficient({0, 1}) == Complex(1.0));
  CHECK(sum.coefficient({1, 1}) == Complex(0.0));

  try {
    series_mul(var_series(0, s11), var_series(0, s2));
    FAIL("mismatched shapes accepted");
  } catch (const gsp::Error& e) {
    CHECK(e.kind() == ErrorKind::shape_mismatch);
  }
  CHECK_THROWS_AS(series_add(var_series(0, s11), var_series(0, s2)), gsp::Error);
}

TEST_CASE("exp, pow, sin and cos examples") {
  const SeriesShape s{2, 2};
  CHECK(series_exp(TruncatedSeries(s)).coefficient({0, 0}) == Complex(1.0));
  const TruncatedSeries e = series_exp(linear_series(0.0, {{0, 1.0}, {1, 2.0}}, s));
  CHECK(std::abs(e.coefficient({1, 2}) - 2.0) < 1e-15);
  CHECK(std::abs(extract_derivative(e, {1, 2}) - 4.0) < 1e-14);
  CHECK(extract_derivative(e, {0, 0}) == e.constant_term());
  CHECK_THROWS_AS(extract_derivative(e, {3, 0}), gsp::Error);

  const SeriesShape s3{3};
  const TruncatedSeries geo = series_pow(1.0 - var_series(0, s3), -1.0);
  for (int k = 0; k <= 3; ++k) CHECK(std::abs(geo.coefficient({k}) - 1.0) < 1e-15);
  const TruncatedSeries root = series_pow(1.0 + var_series(0, s3), 0.5);
  CHECK(std::abs(root.coefficient({1}) - 0.5) < 1e-15);
  try {
    series_pow(var_series(0, s3), -0.5);
    FAIL("vanishing constant accepted");
  } catch (const gsp::Error& err) {
    CHECK(err.kind() == ErrorKind::singular_series);
  }

  const double phi0 = 0.7;
  const SeriesShape s1{1};
  const TruncatedSeries sn = series_sin(linear_series(phi0, {{0, 1.0}}, s1));
  CHECK(std::abs(sn.coefficient({0}) - std::sin(phi0)) < 1e-15);
  CHECK(std::abs(sn.coefficient({1}) - std::cos(phi0)) < 1e-15);
  CHECK(std::abs(series_cos(TruncatedSeries(s1)).constant_term() - 1.0) < 1e-15);
}

TEST_CASE("ring laws on random series") {
  std::mt19937_64 rng(11);
  for (const SeriesShape& shape : fuzz_shapes()) {
    for (int i = 0; i < instances_per_shape; ++i) {
      const TruncatedSeries a = random_series(shape, rng);
      const TruncatedSeries b = random_series(shape, rng);
      const TruncatedSeries c = random_series(shape, rng);
      CHECK(gap(a * b, b * a) < 1e-13);
      CHECK(gap((a * b) * c, a * (b * c)) < 1e-13);
      CHECK(gap(a * (b + c), a * b + a * c) < 1e-13);
      CHECK(gap(a + b, b + a) == 0.0);
    }
  }
}

TEST_CASE("analytic function identities on random series") {
  std::mt19937_64 rng(12);
  for (const SeriesShape& shape : fuzz_shapes()) {
    CAPTURE(shape.size());
    const TruncatedSeries one = const_series(1.0, shape);
    for (int i = 0; i < instances_per_shape; ++i) {
      const TruncatedSeries f = random_series(shape, rng);
      CHECK(product_gap(series_exp(f), series_exp(-f), one) < 1e-14);
      const TruncatedSeries sn = series_sin(f);
      const TruncatedSeries cs = series_cos(f);
      const double trig_scale = std::max(1.0, l1(sn) * l1(sn) + l1(cs) * l1(cs));
      CHECK(max_abs(sn * sn + cs * cs - one) / trig_scale < 1e-14);

      const TruncatedSeries g = random_series(shape, rng, 0.1);
      CHECK(product_gap(series_pow(g, -1.0), g, one) < 1e-14);
      const TruncatedSeries r = series_pow(g, 0.5);
      CHECK(product_gap(r, r, g) < 1e-14);
      CHECK(product_gap(series_pow(g, -0.5), r, one) < 1e-14);
    }
  }
}

TEST_CASE("Leibniz rule for first-order derivatives") {
  std::mt19937_64 rng(13);
  for (const SeriesShape& shape : fuzz_shapes()) {
    const std::vector<int> zero(shape.variables(), 0);
    for (int i = 0; i < instances_per_shape; ++i) {
      const TruncatedSeries f = random_series(shape, rng);
      const TruncatedSeries g = random_series(shape, rng);
      const TruncatedSeries fg = f * g;
      for (std::size_t v = 0; v < shape.variables(); ++v) {
        std::vector<int> unit = zero;
        unit[v] = 1;
        const Complex lhs = extract_derivative(fg, unit);
        const Complex rhs = extract_derivative(f, unit) * g.constant_term() +
                            f.constant_term() * extract_derivative(g, unit);
        CHECK(std::abs(lhs - rhs) < 1e-14);
      }
    }
  }
}

TEST_CASE("derivatives match central finite differences") {
  std::mt19937_64 rng(14);
  const SeriesShape shape{2, 2};
  const double h1 = 1e-4;
  const double h = 1e-3;
  for (int i = 0; i < instances_per_shape; ++i) {
    const TruncatedSeries p = random_series(shape, rng, 0.5);
    auto f = [&](double x, double y) {
      const Complex v = evaluate(p, {x, y});
      return std::exp(v) + std::pow(v, -0.5);
    };
    const TruncatedSeries jet = series_exp(p) + series_pow(p, -0.5);
    const Complex dx = (f(h1, 0) - f(-h1, 0)) / (2 * h1);
    const Complex dy = (f(0, h1) - f(0, -h1)) / (2 * h1);
    const Complex dxx = (f(h, 0) - 2.0 * f(0, 0) + f(-h, 0)) / (h * h);
    const Complex dxy = (f(h, h) - f(h, -h) - f(-h, h) + f(-h, -h)) / (4 * h * h);
    auto rel = [](Complex a, Complex b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); };
    CHECK(rel(dx, extract_derivative(jet, {1, 0})) < 1e-6);
    CHECK(rel(dy, extract_derivative(jet, {0, 1})) < 1e-6);
    CHECK(rel(dxx, extract_derivative(jet, {2, 0})) < 1e-5);
    CHECK(rel(dxy, extract_derivative(jet, {1, 1})) < 1e-5);
  }
}

TEST_CASE("results keep the operand shape") {
  std::mt19937_64 rng(15);
  for (const SeriesShape& shape : fuzz_shapes()) {
    const TruncatedSeries f = random_series(shape, rng, 0.2);
    for (const TruncatedSeries& r : {f * f, series_exp(f), series_pow(f, -0.5), series_sin(f), series_cos(f)}) {
      CHECK(r.shape() == shape);
      CHECK(r.coeffs().size() == shape.size());
    }
  }
}
