#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "upade/region.hpp"
#include "upade/series.hpp"

namespace upade {

/// Finite stand-in for the index set F: its members plus a witness list with
/// strictly increasing p (the finite trace of a sequence with p -> infinity).
struct PadeIndexFamily {
  std::set<PadeIndex> members;
  std::vector<PadeIndex> witness;

  /// Throws unless the witness is nonempty, drawn from members, and strictly
  /// increasing in p.
  void validate() const {
    if (witness.empty()) throw InvalidArgument("empty witness sequence", {"PadeIndexFamily", {}, {}});
    for (std::size_t i = 0; i < witness.size(); ++i) {
      const auto& w = witness[i];
      if (w.p < 0 || w.q < 0) throw InvalidArgument("negative index", {"PadeIndexFamily", w, {}});
      if (!members.contains(w)) throw InvalidArgument("witness index not a member", {"PadeIndexFamily", w, {}});
      if (i > 0 && witness[i - 1].p >= w.p)
        throw InvalidArgument("witness p must be strictly increasing", {"PadeIndexFamily", w, {}});
    }
  }
};

/// Floating-point stand-in for "the Hankel determinant is nonzero".
///
/// member <=> |det| > tol_rel * scale, with scale the product of the row
/// 2-norms (the Hadamard bound, so |det| / scale lies in [0, 1]). A
/// determinant in (near_degenerate_floor * scale, tol_rel * scale] is a
/// non-member carrying a NearDegenerate warning.
struct TolerancePolicy {
  double tol_rel = 1e-9;
  double near_degenerate_floor = 1e-12;
};

enum class HankelWarning { none, near_degenerate };

struct HankelReport {
  int p = 0;
  int q = 0;
  Complex det{1.0, 0.0};
  double scale = 1.0;
  bool member = true;
  HankelWarning warning = HankelWarning::none;

  /// |det| / scale, or 0 for an all-zero matrix.
  double ratio() const noexcept { return scale > 0.0 ? std::abs(det) / scale : 0.0; }
};

/// [p/q] = num / den, both expanded about `center`.
struct RationalApproximant {
  Polynomial num;
  Polynomial den;
  Complex center{};
  int p = 0;
  int q = 0;
  bool normalized = false;

  PadeIndex index() const noexcept { return {p, q}; }
};

/// Largest Jacobi cofactor expansion the reference route accepts.
inline constexpr int kJacobiMaxQ = 12;

namespace detail {

inline void require_valid_index(PadeIndex idx, const char* operation) {
  if (idx.p < 0 || idx.q < 0) throw InvalidArgument("negative Padé index", {operation, idx, {}});
}

/// Determinant by Gaussian elimination with row pivoting (row swaps flip the sign).
inline Complex determinant(Eigen::MatrixXcd m) {
  const Eigen::Index n = m.rows();
  Complex det{1.0, 0.0};
  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::Index piv = k;
    double best = std::abs(m(k, k));
    for (Eigen::Index r = k + 1; r < n; ++r) {
      if (std::abs(m(r, k)) > best) {
        best = std::abs(m(r, k));
        piv = r;
      }
    }
    if (best == 0.0) return Complex{};
    if (piv != k) {
      m.row(k).swap(m.row(piv));
      det = -det;
    }
    det *= m(k, k);
    for (Eigen::Index r = k + 1; r < n; ++r) {
      const Complex f = m(r, k) / m(k, k);
      if (f != Complex{}) m.row(r).tail(n - k - 1) -= f * m.row(k).tail(n - k - 1);
    }
  }
  return det;
}

inline double row_norm_product(const Eigen::MatrixXcd& m) {
  double s = 1.0;
  for (Eigen::Index r = 0; r < m.rows(); ++r) s *= m.row(r).norm();
  return s;
}

inline HankelReport classify(int p, int q, Complex det, double scale, const TolerancePolicy& tol) {
  HankelReport rep{p, q, det, scale, false, HankelWarning::none};
  const double a = std::abs(det);
  rep.member = a > tol.tol_rel * scale;
  if (!rep.member && a > tol.near_degenerate_floor * scale) rep.warning = HankelWarning::near_degenerate;
  return rep;
}

}  // namespace detail

/// The q x q Hankel matrix with entries a_{p-q+1+r+c}, zero at negative index.
inline Eigen::MatrixXcd hankel_matrix(const TruncatedSeries& s, PadeIndex idx) {
  detail::require_valid_index(idx, "hankel_matrix");
  if (idx.q < 1) throw InvalidArgument("Hankel matrix needs q >= 1", {"hankel_matrix", idx, {}});
  const ErrorContext ctx{"hankel_matrix", idx, {}};
  if (s.order() < idx.p + idx.q - 1) throw InsufficientOrder(idx.p + idx.q - 1, s.order(), ctx);
  Eigen::MatrixXcd h(idx.q, idx.q);
  for (int r = 0; r < idx.q; ++r)
    for (int c = 0; c < idx.q; ++c) h(r, c) = s.coeff(idx.p - idx.q + 1 + r + c, ctx);
  return h;
}

/// Existence test for [p/q]: is the series in the class D_{p,q}(center)?
inline HankelReport membership(const TruncatedSeries& s, PadeIndex idx, const TolerancePolicy& tol = {}) {
  detail::require_valid_index(idx, "membership");
  if (idx.q == 0) return HankelReport{idx.p, 0, Complex{1.0, 0.0}, 1.0, true, HankelWarning::none};
  const Eigen::MatrixXcd h = hankel_matrix(s, idx);
  return detail::classify(idx.p, idx.q, detail::determinant(h), detail::row_norm_product(h), tol);
}

inline RationalApproximant partial_sum_approximant(const TruncatedSeries& s, int p) {
  return {s.partial_sum(p), Polynomial::constant(1.0, s.center()), s.center(), p, 0, true};
}

namespace detail {

inline RationalApproximant normalize(Polynomial num, Polynomial den, Complex center, PadeIndex idx,
                                     const char* operation) {
  const Complex b0 = den.coeff(0);
  if (b0 == Complex{}) throw NotInExistenceClass("denominator vanishes at the center", {operation, idx, {}});
  return {scale(num, 1.0 / b0), scale(den, 1.0 / b0), center, idx.p, idx.q, true};
}

}  // namespace detail

/// Reference route: Jacobi's determinant formulas, expanded along the
/// symbolic first row. Each cofactor is a numeric q x q determinant; the
/// first-row entries (z-c)^{q-j} S_{p-q+j} (numerator) and (z-c)^{q-j}
/// (denominator) multiply it as polynomials. The raw denominator has
/// den(center) = +-det(Hankel); both parts are divided by it at the end.
inline RationalApproximant pade_jacobi(const TruncatedSeries& s, PadeIndex idx, const TolerancePolicy& tol = {}) {
  detail::require_valid_index(idx, "pade_jacobi");
  const ErrorContext ctx{"pade_jacobi", idx, {}};
  if (idx.q > kJacobiMaxQ)
    throw InvalidArgument("Jacobi route is limited to q <= " + std::to_string(kJacobiMaxQ), ctx);
  if (s.order() < idx.p + idx.q) throw InsufficientOrder(idx.p + idx.q, s.order(), ctx);
  if (idx.q == 0) return partial_sum_approximant(s, idx.p);

  const auto rep = membership(s, idx, tol);
  if (!rep.member) throw NotInExistenceClass("Hankel ratio " + std::to_string(rep.ratio()) + " below tolerance", ctx);

  const int p = idx.p;
  const int q = idx.q;
  const Complex c = s.center();
  // Rows 2..q+1 of the (q+1) x (q+1) Jacobi matrices.
  Eigen::MatrixXcd lower(q, q + 1);
  for (int i = 1; i <= q; ++i)
    for (int j = 0; j <= q; ++j) lower(i - 1, j) = s.coeff(p - q + i + j, ctx);

  Polynomial num({}, c);
  Polynomial den({}, c);
  Eigen::MatrixXcd minor(q, q);
  for (int j = 0; j <= q; ++j) {
    for (int col = 0, m = 0; col <= q; ++col) {
      if (col == j) continue;
      minor.col(m++) = lower.col(col);
    }
    Complex cof = detail::determinant(minor);
    if (j % 2 == 1) cof = -cof;
    const Polynomial shift = Polynomial::monomial(cof, q - j, c);
    den = den + shift;
    num = num + shift * s.partial_sum(p - q + j);
  }
  return detail::normalize(std::move(num), std::move(den), c, idx, "pade_jacobi");
}

/// Production route: solve for den = 1 + b_1 w + ... + b_q w^q from the
/// vanishing of the coefficients p+1 ... p+q of den * f - num, then read num
/// off as the degree-p truncation of den * f.
inline RationalApproximant pade_linear_solve(const TruncatedSeries& s, PadeIndex idx,
                                             const TolerancePolicy& tol = {}) {
  detail::require_valid_index(idx, "pade_linear_solve");
  const ErrorContext ctx{"pade_linear_solve", idx, {}};
  const int p = idx.p;
  const int q = idx.q;
  if (s.order() < p + q) throw InsufficientOrder(p + q, s.order(), ctx);
  if (q == 0) return partial_sum_approximant(s, p);

  Eigen::MatrixXcd sys(q, q);
  Eigen::VectorXcd rhs(q);
  for (int r = 0; r < q; ++r) {
    for (int col = 0; col < q; ++col) sys(r, col) = s.coeff(p + r - col, ctx);
    rhs(r) = -s.coeff(p + 1 + r, ctx);
  }
  const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(sys);
  const Complex det = lu.determinant();
  const double hadamard = detail::row_norm_product(sys);
  if (!(std::abs(det) > tol.tol_rel * hadamard))
    throw SingularSystem("denominator system ratio " + std::to_string(hadamard > 0 ? std::abs(det) / hadamard : 0.0) +
                             " below tolerance",
                         ctx);
  const Eigen::VectorXcd b = lu.solve(rhs);

  std::vector<Complex> den(static_cast<std::size_t>(q) + 1);
  den[0] = 1.0;
  for (int k = 1; k <= q; ++k) den[static_cast<std::size_t>(k)] = b(k - 1);
  std::vector<Complex> num(static_cast<std::size_t>(p) + 1);
  for (int i = 0; i <= p; ++i) {
    Complex acc{};
    for (int j = 0; j <= std::min(i, q); ++j) acc += den[static_cast<std::size_t>(j)] * s.coeff(i - j, ctx);
    num[static_cast<std::size_t>(i)] = acc;
  }
  return {Polynomial(std::move(num), s.center()), Polynomial(std::move(den), s.center()), s.center(), p, q, true};
}

/// Max coefficient difference between two approximants (numerator and
/// denominator), relative to the largest coefficient of `reference`.
inline double route_difference(const RationalApproximant& a, const RationalApproximant& reference) {
  auto rel = [](const Polynomial& x, const Polynomial& ref) {
    const int n = std::max(std::max(x.degree(), ref.degree()), 0);
    double diff = 0.0;
    for (int v = 0; v <= n; ++v) diff = std::max(diff, std::abs(x.coeff(v) - ref.coeff(v)));
    const double m = ref.max_abs_coeff();
    return m > 0.0 ? diff / m : diff;
  };
  return std::max(rel(a.num, reference.num), rel(a.den, reference.den));
}

/// min over the region of |num(z)|^2 + |den(z)|^2.
inline double separation_bound(const RationalApproximant& r, const SampledCompact& region) {
  if (region.points.empty()) throw InvalidArgument("empty region", {"separation_bound", r.index(), region.label});
  double m = std::numeric_limits<double>::infinity();
  for (const auto& z : region.points) m = std::min(m, std::norm(r.num(z)) + std::norm(r.den(z)));
  return m;
}

/// Membership grid for 0 <= p <= p_max, 0 <= q <= q_max; table[p][q].
inline std::vector<std::vector<HankelReport>> pade_table(const TruncatedSeries& s, int p_max, int q_max,
                                                         const TolerancePolicy& tol = {}) {
  if (p_max < 0 || q_max < 0) throw InvalidArgument("negative table bounds", {"pade_table", {}, {}});
  if (s.order() < p_max + q_max)
    throw InsufficientOrder(p_max + q_max, s.order(), {"pade_table", PadeIndex{p_max, q_max}, {}});
  std::vector<std::vector<HankelReport>> t(static_cast<std::size_t>(p_max) + 1);
  for (int p = 0; p <= p_max; ++p)
    for (int q = 0; q <= q_max; ++q) t[static_cast<std::size_t>(p)].push_back(membership(s, {p, q}, tol));
  return t;
}

}  // namespace upade
