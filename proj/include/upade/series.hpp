#pragma once

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "upade/polynomial.hpp"

namespace upade {

/// Taylor prefix a_0 ... a_N of a power series about `center`.
///
/// Coefficients with negative index read as zero. Coefficients past the
/// truncation order N are never fabricated: asking for one throws
/// InsufficientOrder.
class TruncatedSeries {
 public:
  TruncatedSeries(Complex center, std::vector<Complex> coeffs)
      : center_(center), coeffs_(std::move(coeffs)) {
    require_finite(center_, "TruncatedSeries");
    if (coeffs_.empty())
      throw InvalidArgument("a truncated series needs at least a_0", {"TruncatedSeries", {}, {}});
    for (const auto& c : coeffs_) require_finite(c, "TruncatedSeries");
  }

  Complex center() const noexcept { return center_; }
  int order() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  std::span<const Complex> coeffs() const noexcept { return coeffs_; }

  Complex coeff(int v, const ErrorContext& ctx = {"TruncatedSeries::coeff", {}, {}}) const {
    if (v < 0) return {};
    if (v > order()) throw InsufficientOrder(v, order(), ctx);
    return coeffs_[static_cast<std::size_t>(v)];
  }

  double max_abs_coeff() const noexcept {
    double m = 0.0;
    for (const auto& c : coeffs_) m = std::max(m, std::abs(c));
    return m;
  }

  /// The prefix a_0 ... a_needed, or InsufficientOrder{needed}.
  TruncatedSeries demand(int needed_order, ErrorContext ctx = {"series_truncate_or_demand", {}, {}}) const {
    if (needed_order < 0)
      throw InvalidArgument("negative order " + std::to_string(needed_order), std::move(ctx));
    if (needed_order > order()) throw InsufficientOrder(needed_order, order(), std::move(ctx));
    return TruncatedSeries(center_, {coeffs_.begin(), coeffs_.begin() + needed_order + 1});
  }

  /// S_k: the partial sum through degree k as a polynomial; zero for k < 0.
  Polynomial partial_sum(int k) const {
    if (k < 0) return Polynomial({}, center_);
    if (k > order()) throw InsufficientOrder(k, order(), {"partial_sum", {}, {}});
    return Polynomial({coeffs_.begin(), coeffs_.begin() + k + 1}, center_);
  }

 private:
  Complex center_;
  std::vector<Complex> coeffs_;
};

inline TruncatedSeries series_truncate_or_demand(const TruncatedSeries& s, int needed_order) {
  return s.demand(needed_order);
}

/// Relative threshold below which den(center) counts as zero.
inline constexpr double kNearPoleRel = 1e-12;

/// Taylor coefficients b_0 ... b_N of num/den about `center`, from the
/// convolution recurrence den * b == num through order N.
inline TruncatedSeries taylor_of_rational(const Polynomial& num, const Polynomial& den, Complex center,
                                          int order) {
  if (order < 0) throw InvalidArgument("negative order", {"taylor_of_rational", {}, {}});
  const Polynomial n = recenter(num, center);
  const Polynomial d = recenter(den, center);
  const Complex d0 = d.coeff(0);
  if (d.is_zero() || std::abs(d0) <= kNearPoleRel * std::max(1.0, d.max_abs_coeff()))
    throw NearPole("denominator vanishes at the expansion center", {"taylor_of_rational", {}, {}});

  std::vector<Complex> b(static_cast<std::size_t>(order) + 1);
  const int dd = d.degree();
  for (int v = 0; v <= order; ++v) {
    Complex acc = n.coeff(v);
    for (int k = 1; k <= std::min(v, dd); ++k) acc -= d.coeff(k) * b[static_cast<std::size_t>(v - k)];
    b[static_cast<std::size_t>(v)] = acc / d0;
  }
  return TruncatedSeries(center, std::move(b));
}

/// The Taylor prefix of a polynomial about its own center, zero-padded or
/// truncated to the requested order. Exact: a polynomial's series terminates.
inline TruncatedSeries series_of(const Polynomial& p, int order) {
  if (order < 0) throw InvalidArgument("negative order", {"series_of", {}, {}});
  std::vector<Complex> c(static_cast<std::size_t>(order) + 1);
  for (int v = 0; v <= order; ++v) c[static_cast<std::size_t>(v)] = p.coeff(v);
  return TruncatedSeries(p.center(), std::move(c));
}

}  // namespace upade
