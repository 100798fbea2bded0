#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "upade/error.hpp"

namespace upade {

using Complex = std::complex<double>;

/// Degree reported for the zero polynomial (stands in for -infinity).
inline constexpr int kZeroDegree = std::numeric_limits<int>::min();

inline bool is_finite(Complex z) noexcept { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

inline void require_finite(Complex z, const char* operation) {
  if (!is_finite(z)) throw InvalidArgument("non-finite complex input", {operation, {}, {}});
}

/// Dense complex polynomial sum_v coeffs[v] * (z - center)^v.
///
/// Trailing zero coefficients are trimmed exactly (no numeric threshold), so
/// degree() == coeffs().size() - 1 for a nonzero polynomial and the zero
/// polynomial has an empty coefficient list.
class Polynomial {
 public:
  Polynomial() = default;

  explicit Polynomial(std::vector<Complex> coeffs, Complex center = {})
      : center_(center), coeffs_(std::move(coeffs)) {
    require_finite(center_, "Polynomial");
    for (const auto& c : coeffs_) require_finite(c, "Polynomial");
    trim();
  }

  static Polynomial constant(Complex c, Complex center = {}) { return Polynomial({c}, center); }

  /// c * (z - center)^power
  static Polynomial monomial(Complex c, int power, Complex center = {}) {
    if (power < 0) throw InvalidArgument("negative monomial power", {"Polynomial::monomial", {}, {}});
    std::vector<Complex> v(static_cast<std::size_t>(power) + 1, Complex{});
    v.back() = c;
    return Polynomial(std::move(v), center);
  }

  Complex center() const noexcept { return center_; }
  std::span<const Complex> coeffs() const noexcept { return coeffs_; }
  const std::vector<Complex>& coeff_vector() const noexcept { return coeffs_; }

  bool is_zero() const noexcept { return coeffs_.empty(); }
  int degree() const noexcept { return is_zero() ? kZeroDegree : static_cast<int>(coeffs_.size()) - 1; }

  /// Coefficient of (z - center)^v; zero outside the stored range.
  Complex coeff(int v) const noexcept {
    if (v < 0 || v >= static_cast<int>(coeffs_.size())) return {};
    return coeffs_[static_cast<std::size_t>(v)];
  }

  double max_abs_coeff() const noexcept {
    double m = 0.0;
    for (const auto& c : coeffs_) m = std::max(m, std::abs(c));
    return m;
  }

  /// Horner evaluation in (z - center).
  Complex operator()(Complex z) const {
    require_finite(z, "poly_eval");
    const Complex w = z - center_;
    Complex acc{};
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * w + *it;
    return acc;
  }

  friend bool operator==(const Polynomial&, const Polynomial&) = default;

 private:
  void trim() {
    while (!coeffs_.empty() && coeffs_.back() == Complex{}) coeffs_.pop_back();
  }

  Complex center_{};
  std::vector<Complex> coeffs_;
};

namespace detail {

inline void require_same_center(const Polynomial& a, const Polynomial& b, const char* operation) {
  if (a.center() != b.center()) throw CenterMismatch({operation, {}, {}});
}

}  // namespace detail

inline Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  detail::require_same_center(a, b, "poly_add");
  const auto n = std::max(a.coeffs().size(), b.coeffs().size());
  std::vector<Complex> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = a.coeff(static_cast<int>(i)) + b.coeff(static_cast<int>(i));
  return Polynomial(std::move(out), a.center());
}

inline Polynomial operator-(const Polynomial& a, const Polynomial& b) {
  detail::require_same_center(a, b, "poly_sub");
  const auto n = std::max(a.coeffs().size(), b.coeffs().size());
  std::vector<Complex> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = a.coeff(static_cast<int>(i)) - b.coeff(static_cast<int>(i));
  return Polynomial(std::move(out), a.center());
}

inline Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  detail::require_same_center(a, b, "poly_mul");
  if (a.is_zero() || b.is_zero()) return Polynomial({}, a.center());
  const auto ca = a.coeffs();
  const auto cb = b.coeffs();
  std::vector<Complex> out(ca.size() + cb.size() - 1);
  for (std::size_t i = 0; i < ca.size(); ++i)
    for (std::size_t j = 0; j < cb.size(); ++j) out[i + j] += ca[i] * cb[j];
  return Polynomial(std::move(out), a.center());
}

inline Polynomial scale(const Polynomial& a, Complex d) {
  require_finite(d, "poly_scale");
  std::vector<Complex> out(a.coeffs().begin(), a.coeffs().end());
  for (auto& c : out) c *= d;
  return Polynomial(std::move(out), a.center());
}

inline Polynomial operator*(Complex d, const Polynomial& a) { return scale(a, d); }

enum class ArithOp { add, sub, mul };

inline Polynomial arith(const Polynomial& a, const Polynomial& b, ArithOp op) {
  switch (op) {
    case ArithOp::add: return a + b;
    case ArithOp::sub: return a - b;
    case ArithOp::mul: return a * b;
  }
  return {};
}

/// Re-expands p about new_center by repeated synthetic division (Taylor
/// shift). Evaluation-preserving; the exact degree is preserved since the
/// leading coefficient is never touched. The O(n^2) shift accumulates in
/// long double so that only the final rounding to double remains.
inline Polynomial recenter(const Polynomial& p, Complex new_center) {
  require_finite(new_center, "recenter");
  if (new_center == p.center()) return p;
  using Wide = std::complex<long double>;
  std::vector<Wide> a(p.coeffs().begin(), p.coeffs().end());
  const Wide shift = Wide(new_center) - Wide(p.center());
  const std::size_t n = a.size();
  for (std::size_t i = 0; i + 1 < n; ++i)
    for (std::size_t j = n - 1; j-- > i;) a[j] += shift * a[j + 1];
  std::vector<Complex> out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = Complex(a[k]);
  return Polynomial(std::move(out), new_center);
}

/// Sampled sup of |a(z) - b(z)| over the given points. Centers may differ.
inline double sup_difference(const Polynomial& a, const Polynomial& b, std::span<const Complex> points) {
  double m = 0.0;
  for (const auto& z : points) m = std::max(m, std::abs(a(z) - b(z)));
  return m;
}

}  // namespace upade
