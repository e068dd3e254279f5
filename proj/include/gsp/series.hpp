#pragma once

// Dense truncated multivariate power series ("jets").
//
// A series carries one complex coefficient per multi-degree inside a box
// [0, order_0] x ... x [0, order_{d-1}]. Products are truncated to the same
// box, so every mixed partial derivative at the origin up to the box orders
// is exact: the coefficient at multi-degree k times prod(k_i!) equals
// d^{|k|} f / d tau^k at tau = 0.

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace gsp::series {

using Complex = std::complex<double>;

inline constexpr std::size_t max_variables = 9;

class SeriesShape {
 public:
  explicit SeriesShape(std::vector<int> orders);
  SeriesShape(std::initializer_list<int> orders) : SeriesShape(std::vector<int>(orders)) {}

  std::size_t variables() const noexcept { return orders_.size(); }
  int order(std::size_t var) const { return orders_.at(var); }
  const std::vector<int>& orders() const noexcept { return orders_; }

  /// Number of stored coefficients, prod(order_i + 1).
  std::size_t size() const noexcept { return size_; }

  /// Row-major stride of a variable; the last variable is contiguous.
  std::size_t stride(std::size_t var) const noexcept { return strides_[var]; }

  /// Sum of the per-variable orders; no monomial in the box has higher degree.
  int total_degree() const noexcept { return total_degree_; }

  std::size_t flat_index(std::span<const int> degrees) const;

  friend bool operator==(const SeriesShape& a, const SeriesShape& b) noexcept {
    return a.orders_ == b.orders_;
  }

 private:
  std::vector<int> orders_;
  std::vector<std::size_t> strides_;
  std::size_t size_ = 1;
  int total_degree_ = 0;
};

class TruncatedSeries {
 public:
  /// The zero series.
  explicit TruncatedSeries(SeriesShape shape);

  const SeriesShape& shape() const noexcept { return shape_; }
  std::span<const Complex> coeffs() const noexcept { return coeffs_; }
  std::span<Complex> coeffs() noexcept { return coeffs_; }

  Complex constant_term() const noexcept { return coeffs_.front(); }
  Complex coefficient(std::span<const int> degrees) const;
  Complex coefficient(std::initializer_list<int> degrees) const {
    return coefficient(std::span<const int>(degrees.begin(), degrees.size()));
  }

  bool is_zero() const noexcept;

  TruncatedSeries& operator+=(const TruncatedSeries& other);
  TruncatedSeries& operator-=(const TruncatedSeries& other);
  TruncatedSeries& operator*=(const TruncatedSeries& other);
  TruncatedSeries& operator+=(Complex value) noexcept;
  TruncatedSeries& operator-=(Complex value) noexcept;
  TruncatedSeries& operator*=(Complex value) noexcept;

 private:
  SeriesShape shape_;
  std::vector<Complex> coeffs_;
};

TruncatedSeries const_series(Complex value, const SeriesShape& shape);

/// tau_index as a series. Throws invalid_argument when the index is out of
/// range or the variable has order 0 (it could never appear).
TruncatedSeries var_series(std::size_t index, const SeriesShape& shape);

/// constant + sum_j coeff_j * tau_j. Variables with order 0 are skipped,
/// which leaves every derivative the box can express unchanged.
struct LinearTerm {
  std::size_t var;
  Complex coeff;
};
TruncatedSeries linear_series(Complex constant, std::initializer_list<LinearTerm> terms,
                              const SeriesShape& shape);

TruncatedSeries series_add(const TruncatedSeries& a, const TruncatedSeries& b);
TruncatedSeries series_mul(const TruncatedSeries& a, const TruncatedSeries& b);
TruncatedSeries series_scale(const TruncatedSeries& a, Complex factor);

TruncatedSeries series_exp(const TruncatedSeries& f);

/// f^alpha around the constant term (principal branch). Throws
/// singular_series when the constant term vanishes.
TruncatedSeries series_pow(const TruncatedSeries& f, double alpha);

TruncatedSeries series_sin(const TruncatedSeries& f);
TruncatedSeries series_cos(const TruncatedSeries& f);

/// Mixed partial derivative at the origin: coefficient * prod(degree_i!).
Complex extract_derivative(const TruncatedSeries& f, std::span<const int> degrees);
inline Complex extract_derivative(const TruncatedSeries& f, std::initializer_list<int> degrees) {
  return extract_derivative(f, std::span<const int>(degrees.begin(), degrees.size()));
}

inline TruncatedSeries operator+(TruncatedSeries a, const TruncatedSeries& b) { return a += b; }
inline TruncatedSeries operator-(TruncatedSeries a, const TruncatedSeries& b) { return a -= b; }
inline TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) {
  return series_mul(a, b);
}
inline TruncatedSeries operator+(TruncatedSeries a, Complex b) { return a += b; }
inline TruncatedSeries operator-(TruncatedSeries a, Complex b) { return a -= b; }
inline TruncatedSeries operator*(TruncatedSeries a, Complex b) { return a *= b; }
inline TruncatedSeries operator+(Complex a, TruncatedSeries b) { return b += a; }
inline TruncatedSeries operator*(Complex a, TruncatedSeries b) { return b *= a; }
inline TruncatedSeries operator-(Complex a, const TruncatedSeries& b) {
  return const_series(a, b.shape()) - b;
}
inline TruncatedSeries operator-(const TruncatedSeries& a) { return series_scale(a, -1.0); }

}  // namespace gsp::series
