#pragma once

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "upade/pade.hpp"

namespace upade {

inline constexpr double kRatEvalPoleRel = 1e-12;

/// num(z) / den(z), or nullopt when |den(z)| < 1e-12 * max(1, |num(z)|).
/// A near pole is a value for the caller to interpret, not a failure.
inline std::optional<Complex> rat_eval(const RationalApproximant& r, Complex z) {
  const Complex a = r.num(z);
  const Complex b = r.den(z);
  if (std::abs(b) < kRatEvalPoleRel * std::max(1.0, std::abs(a))) return std::nullopt;
  return a / b;
}

struct PoleSet {
  std::vector<Complex> poles;
  std::vector<double> residual_norms;

  int count() const noexcept { return static_cast<int>(poles.size()); }
};

/// Derivative of p, same center.
inline Polynomial derivative(const Polynomial& p) {
  if (p.degree() <= 0) return Polynomial({}, p.center());
  std::vector<Complex> d(static_cast<std::size_t>(p.degree()));
  for (int v = 1; v <= p.degree(); ++v) d[static_cast<std::size_t>(v - 1)] = p.coeff(v) * static_cast<double>(v);
  return Polynomial(std::move(d), p.center());
}

/// All roots of p (multiplicity counted): companion-matrix eigenvalues in
/// the shifted variable, then one Newton step each.
inline PoleSet polynomial_roots(const Polynomial& p) {
  PoleSet out;
  const int n = p.degree();
  if (n <= 0) return out;
  const Complex lead = p.coeff(n);
  std::vector<Complex> w;
  if (n == 1) {
    w.push_back(-p.coeff(0) / lead);
  } else {
    Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(n, n);
    for (int i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
    for (int i = 0; i < n; ++i) comp(i, n - 1) = -p.coeff(i) / lead;
    const Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
    for (int i = 0; i < n; ++i) w.push_back(es.eigenvalues()(i));
  }
  const Polynomial dp = derivative(p);
  for (const auto& wi : w) {
    Complex z = p.center() + wi;
    const Complex slope = dp(z);
    if (slope != Complex{}) {
      const Complex step = z - p(z) / slope;
      if (is_finite(step) && std::abs(p(step)) <= std::abs(p(z))) z = step;
    }
    out.poles.push_back(z);
    out.residual_norms.push_back(std::abs(p(z)));
  }
  return out;
}

/// Roots of the approximant's denominator. A constant denominator yields an
/// empty set.
inline PoleSet poles(const RationalApproximant& r) { return polynomial_roots(r.den); }

/// min over poles w of |num(w)| / max|num coeff|; small values flag a
/// near-common zero of numerator and denominator. +inf without poles.
inline double near_common_zero(const RationalApproximant& r) {
  const PoleSet ps = poles(r);
  if (ps.poles.empty()) return std::numeric_limits<double>::infinity();
  const double scale = r.num.max_abs_coeff();
  if (scale == 0.0) return 0.0;
  double m = std::numeric_limits<double>::infinity();
  for (const auto& w : ps.poles) m = std::min(m, std::abs(r.num(w)) / scale);
  return m;
}

/// Sampled sup of |r(z) - target(z)|; +inf if any sample is a near pole.
inline double sup_distance(const RationalApproximant& r, const Polynomial& target, const SampledCompact& region) {
  if (region.points.empty()) throw InvalidArgument("empty region", {"sup_distance", r.index(), region.label});
  double m = 0.0;
  for (const auto& z : region.points) {
    const auto v = rat_eval(r, z);
    if (!v) return std::numeric_limits<double>::infinity();
    m = std::max(m, std::abs(*v - target(z)));
  }
  return m;
}

}  // namespace upade
