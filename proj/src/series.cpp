#include "gsp/series.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "gsp/error.hpp"
#include "gsp/simd/kernels.hpp"

namespace gsp::series {

SeriesShape::SeriesShape(std::vector<int> orders) : orders_(std::move(orders)) {
  if (orders_.empty() || orders_.size() > max_variables) {
    raise(ErrorKind::invalid_argument,
          "series shape needs between 1 and " + std::to_string(max_variables) + " variables");
  }
  strides_.assign(orders_.size(), 1);
  for (std::size_t i = orders_.size(); i-- > 0;) {
    if (orders_[i] < 0) {
      raise(ErrorKind::invalid_argument, "series orders must be non-negative");
    }
    strides_[i] = size_;
    size_ *= static_cast<std::size_t>(orders_[i]) + 1;
    total_degree_ += orders_[i];
  }
}

std::size_t SeriesShape::flat_index(std::span<const int> degrees) const {
  if (degrees.size() != orders_.size()) {
    raise(ErrorKind::shape_mismatch, "multi-degree length does not match the series shape");
  }
  std::size_t index = 0;
  for (std::size_t i = 0; i < degrees.size(); ++i) {
    if (degrees[i] < 0 || degrees[i] > orders_[i]) {
      raise(ErrorKind::invalid_argument, "degree " + std::to_string(degrees[i]) +
                                             " outside the shape of variable " + std::to_string(i));
    }
    index += static_cast<std::size_t>(degrees[i]) * strides_[i];
  }
  return index;
}

TruncatedSeries::TruncatedSeries(SeriesShape shape)
    : shape_(std::move(shape)), coeffs_(shape_.size(), Complex{}) {}

Complex TruncatedSeries::coefficient(std::span<const int> degrees) const {
  return coeffs_[shape_.flat_index(degrees)];
}

bool TruncatedSeries::is_zero() const noexcept {
  return std::all_of(coeffs_.begin(), coeffs_.end(),
                     [](const Complex& c) { return c == Complex{}; });
}

namespace {

void require_same_shape(const TruncatedSeries& a, const TruncatedSeries& b) {
  if (!(a.shape() == b.shape())) {
    raise(ErrorKind::shape_mismatch, "series operands have different shapes");
  }
}

}  // namespace

TruncatedSeries& TruncatedSeries::operator+=(const TruncatedSeries& other) {
  require_same_shape(*this, other);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    coeffs_[i] += other.coeffs_[i];
  }
  return *this;
}

TruncatedSeries& TruncatedSeries::operator-=(const TruncatedSeries& other) {
  require_same_shape(*this, other);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    coeffs_[i] -= other.coeffs_[i];
  }
  return *this;
}

TruncatedSeries& TruncatedSeries::operator*=(const TruncatedSeries& other) {
  *this = series_mul(*this, other);
  return *this;
}

TruncatedSeries& TruncatedSeries::operator+=(Complex value) noexcept {
  coeffs_.front() += value;
  return *this;
}

TruncatedSeries& TruncatedSeries::operator-=(Complex value) noexcept {
  coeffs_.front() -= value;
  return *this;
}

TruncatedSeries& TruncatedSeries::operator*=(Complex value) noexcept {
  for (auto& c : coeffs_) {
    c *= value;
  }
  return *this;
}

TruncatedSeries const_series(Complex value, const SeriesShape& shape) {
  TruncatedSeries out(shape);
  out.coeffs().front() = value;
  return out;
}

TruncatedSeries var_series(std::size_t index, const SeriesShape& shape) {
  if (index >= shape.variables()) {
    raise(ErrorKind::invalid_argument, "variable index " + std::to_string(index) + " out of range");
  }
  if (shape.order(index) < 1) {
    raise(ErrorKind::invalid_argument,
          "variable " + std::to_string(index) + " has order 0 and cannot be represented");
  }
  TruncatedSeries out(shape);
  out.coeffs()[shape.stride(index)] = 1.0;
  return out;
}

TruncatedSeries linear_series(Complex constant, std::initializer_list<LinearTerm> terms,
                              const SeriesShape& shape) {
  TruncatedSeries out = const_series(constant, shape);
  for (const auto& term : terms) {
    if (term.var >= shape.variables()) {
      raise(ErrorKind::invalid_argument, "linear term refers to a missing variable");
    }
    if (shape.order(term.var) >= 1) {
      out.coeffs()[shape.stride(term.var)] += term.coeff;
    }
  }
  return out;
}

TruncatedSeries series_add(const TruncatedSeries& a, const TruncatedSeries& b) { return a + b; }

TruncatedSeries series_scale(const TruncatedSeries& a, Complex factor) { return a * factor; }

TruncatedSeries series_mul(const TruncatedSeries& a, const TruncatedSeries& b) {
  require_same_shape(a, b);
  const SeriesShape& shape = a.shape();
  const std::size_t vars = shape.variables();
  const std::size_t last = vars - 1;
  const auto& kernels = simd::active();

  TruncatedSeries out(shape);
  const auto ac = a.coeffs();
  const auto bc = b.coeffs();
  auto oc = out.coeffs();

  // The flat index is linear in the multi-degree, so the product term
  // a[i] * b[j] lands at flat(i) + flat(j) whenever i + j stays in the box.
  std::array<int, max_variables> deg_a{};
  std::array<int, max_variables> limit{};
  std::array<int, max_variables> deg_b{};
  for (std::size_t fa = 0; fa < ac.size(); ++fa) {
    if (fa != 0) {
      for (std::size_t v = last + 1; v-- > 0;) {
        if (++deg_a[v] <= shape.order(v)) {
          break;
        }
        deg_a[v] = 0;
      }
    }
    const Complex coeff = ac[fa];
    if (coeff == Complex{}) {
      continue;
    }
    for (std::size_t v = 0; v < vars; ++v) {
      limit[v] = shape.order(v) - deg_a[v];
      deg_b[v] = 0;
    }
    const std::size_t run = static_cast<std::size_t>(limit[last]) + 1;
    std::size_t fb = 0;
    while (true) {
      kernels.caxpy(run, coeff, bc.data() + fb, oc.data() + fa + fb);
      // Advance the odometer over every variable except the contiguous one.
      std::size_t v = last;
      while (v-- > 0) {
        if (deg_b[v] < limit[v]) {
          ++deg_b[v];
          fb += shape.stride(v);
          break;
        }
        fb -= static_cast<std::size_t>(deg_b[v]) * shape.stride(v);
        deg_b[v] = 0;
      }
      if (v == static_cast<std::size_t>(-1)) {
        break;
      }
    }
  }
  return out;
}

namespace {

// Splits f into its constant term and the nilpotent remainder.
std::pair<Complex, TruncatedSeries> split_constant(const TruncatedSeries& f) {
  TruncatedSeries rest = f;
  const Complex c0 = rest.constant_term();
  rest.coeffs().front() = Complex{};
  return {c0, std::move(rest)};
}

// sum_j weights[j] * r^j for nilpotent r; stops early once r^j vanishes.
template <typename Weight>
TruncatedSeries nilpotent_sum(const TruncatedSeries& r, Weight weight) {
  const int max_power = r.shape().total_degree();
  TruncatedSeries total = const_series(weight(0), r.shape());
  TruncatedSeries power = const_series(1.0, r.shape());
  for (int j = 1; j <= max_power; ++j) {
    power = series_mul(power, r);
    if (power.is_zero()) {
      break;
    }
    const Complex w = weight(j);
    if (w != Complex{}) {
      total += power * w;
    }
  }
  return total;
}

}  // namespace

TruncatedSeries series_exp(const TruncatedSeries& f) {
  auto [c0, rest] = split_constant(f);
  std::vector<double> inv_factorial(static_cast<std::size_t>(f.shape().total_degree()) + 1, 1.0);
  for (std::size_t j = 1; j < inv_factorial.size(); ++j) {
    inv_factorial[j] = inv_factorial[j - 1] / static_cast<double>(j);
  }
  TruncatedSeries out = nilpotent_sum(rest, [&](int j) { return Complex(inv_factorial[j]); });
  return out * std::exp(c0);
}

TruncatedSeries series_pow(const TruncatedSeries& f, double alpha) {
  auto [c0, rest] = split_constant(f);
  if (std::abs(c0) < 1e-300) {
    raise(ErrorKind::singular_series, "series_pow: constant term vanishes");
  }
  rest *= 1.0 / c0;
  // Generalized binomial coefficients C(alpha, j).
  std::vector<double> binom(static_cast<std::size_t>(f.shape().total_degree()) + 1, 1.0);
  for (std::size_t j = 1; j < binom.size(); ++j) {
    binom[j] = binom[j - 1] * (alpha - static_cast<double>(j - 1)) / static_cast<double>(j);
  }
  TruncatedSeries out = nilpotent_sum(rest, [&](int j) { return Complex(binom[j]); });
  return out * std::pow(c0, alpha);
}

namespace {

// sin and cos of a nilpotent series, from their Taylor tails.
std::pair<TruncatedSeries, TruncatedSeries> sin_cos_nilpotent(const TruncatedSeries& r) {
  const int max_power = r.shape().total_degree();
  std::vector<double> sin_w(static_cast<std::size_t>(max_power) + 1, 0.0);
  std::vector<double> cos_w(static_cast<std::size_t>(max_power) + 1, 0.0);
  double inv_fact = 1.0;
  for (int j = 0; j <= max_power; ++j) {
    if (j > 0) {
      inv_fact /= static_cast<double>(j);
    }
    const double sign = ((j / 2) % 2 == 0) ? 1.0 : -1.0;
    (j % 2 == 0 ? cos_w : sin_w)[static_cast<std::size_t>(j)] = sign * inv_fact;
  }
  return {nilpotent_sum(r, [&](int j) { return Complex(sin_w[j]); }),
          nilpotent_sum(r, [&](int j) { return Complex(cos_w[j]); })};
}

}  // namespace

TruncatedSeries series_sin(const TruncatedSeries& f) {
  auto [c0, rest] = split_constant(f);
  auto [s, c] = sin_cos_nilpotent(rest);
  return s * std::cos(c0) + c * std::sin(c0);
}

TruncatedSeries series_cos(const TruncatedSeries& f) {
  auto [c0, rest] = split_constant(f);
  auto [s, c] = sin_cos_nilpotent(rest);
  return c * std::cos(c0) - s * std::sin(c0);
}

Complex extract_derivative(const TruncatedSeries& f, std::span<const int> degrees) {
  const Complex coeff = f.coefficient(degrees);
  double factorial = 1.0;
  for (int d : degrees) {
    for (int k = 2; k <= d; ++k) {
      factorial *= static_cast<double>(k);
    }
  }
  return coeff * factorial;
}

}  // namespace gsp::series
