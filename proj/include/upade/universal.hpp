#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "upade/rational.hpp"

namespace upade {

/// One demand of the schedule: make the approximants hit `target_h` on
/// `region_K` to within 1 / tolerance_s.
struct Demand {
  Polynomial target_h;
  SampledCompact region_K;
  int tolerance_s = 1;
};

struct Sample {
  Complex point;
  Complex value;
};

/// Pointwise data of a Padé approximant evaluation at one center.
struct ZetaReport {
  Complex zeta;
  HankelReport hankel;
};

/// Numeric evidence that one stage function g = P + d z^p satisfies the
/// three stage conditions at sampled resolution:
///   membership at every sampled center in L,
///   sup_{zeta in L, z in K}  |[p/q]_{g,zeta}(z) - h(z)| < 1/s,
///   sup_{zeta in L, z in L'} |[p/q]_{g,zeta}(z) - g(z)| < 1/s,
/// plus closeness to the previous stage on L'' (sup |g - prev| < eps).
///
/// The audit fields satisfy err_on_K <= fit_error_on_K +
/// perturbation_bound_on_K + route_discrepancy_on_K by the triangle
/// inequality, so the certificate can be checked on its own.
struct UniversalityCertificate {
  int stage = 0;
  PadeIndex index;
  Complex d_used{};
  int d_halvings = 0;
  int fit_degree = 0;

  bool membership_ok = false;
  std::vector<ZetaReport> zeta_reports;

  double err_on_K = std::numeric_limits<double>::infinity();
  double err_on_Lprime = std::numeric_limits<double>::infinity();
  double err_vs_previous_on_Ldoubleprime = std::numeric_limits<double>::infinity();

  double fit_error_on_K = 0.0;
  double perturbation_bound_on_K = 0.0;
  double route_discrepancy_on_K = std::numeric_limits<double>::infinity();
  double fit_error_on_Ldoubleprime = 0.0;
  double perturbation_bound_on_Ldoubleprime = 0.0;

  /// max over centers and every sampled region of |[p/q]_{g,zeta} - g|.
  double exactness_sup = std::numeric_limits<double>::infinity();
  /// max over centers of the Jacobi vs linear-solve coefficient difference.
  double route_agreement = std::numeric_limits<double>::infinity();

  double inv_s = 0.0;
  double eps_stage = 0.0;
  TolerancePolicy tolerance;

  std::string label_K, label_L, label_Lprime, label_Ldoubleprime;
  bool K_connected_complement = false;
  bool Ldoubleprime_connected_complement = true;

  bool pass() const noexcept {
    return membership_ok && err_on_K < inv_s && err_on_Lprime < inv_s && err_vs_previous_on_Ldoubleprime < eps_stage;
  }
};

class CertificationFailed : public Error {
 public:
  explicit CertificationFailed(UniversalityCertificate cert, const std::string& why, ErrorContext ctx = {})
      : Error("CertificationFailed", why, std::move(ctx)), certificate_(std::move(cert)) {}

  const UniversalityCertificate& certificate() const noexcept { return certificate_; }

 private:
  UniversalityCertificate certificate_;
};

struct StageResult {
  Polynomial g;
  PadeIndex pq;
  Complex d_used{};
  int fit_degree = 0;
  UniversalityCertificate certificate;
  std::vector<PadeIndex> indices_tried;
};

struct StageRegions {
  SampledCompact L;
  SampledCompact Lprime;
  SampledCompact K;
  SampledCompact Ldoubleprime;
};

inline constexpr double kGlueMargin = 1e-6;

/// Samples of the glued target: h on K, phi on L''. K and L'' must be
/// disjoint by more than `margin`.
inline std::vector<Sample> glue_target(const Polynomial& h, const SampledCompact& region_K, const Polynomial& phi,
                                       const SampledCompact& region_Ldd, double margin = kGlueMargin) {
  if (!check_disjoint(region_K, region_Ldd, margin))
    throw RegionsOverlap("K and L'' are not separated by margin " + std::to_string(margin),
                         {"glue_target", {}, region_K.label + "/" + region_Ldd.label});
  std::vector<Sample> out;
  out.reserve(region_K.points.size() + region_Ldd.points.size());
  for (const auto& z : region_K.points) out.push_back({z, h(z)});
  for (const auto& z : region_Ldd.points) out.push_back({z, phi(z)});
  return out;
}

struct PolynomialFit {
  Polynomial poly;
  int fit_degree = 0;
  double sup_error = 0.0;
};

/// Discrete least-squares polynomial fit with degree escalation.
///
/// The basis is ((z - c) / rho)^k with c the samples' centroid and rho their
/// radius about it. Degrees 0, 1, ... are tried in turn and the first whose
/// sampled sup error is below `budget` is returned. One Householder QR of the
/// full basis serves every degree: the leading block of R is the R factor of
/// the leading columns.
inline PolynomialFit fit_polynomial(const std::vector<Sample>& samples, int max_degree, double budget) {
  const ErrorContext ctx{"fit_polynomial", {}, {}};
  if (samples.empty()) throw InvalidArgument("no samples", ctx);
  if (!(budget > 0.0)) throw InvalidArgument("budget must be positive", ctx);
  if (max_degree < 0) throw InvalidArgument("negative max degree", ctx);

  std::vector<Complex> pts;
  pts.reserve(samples.size());
  for (const auto& s : samples) {
    require_finite(s.point, "fit_polynomial");
    require_finite(s.value, "fit_polynomial");
    pts.push_back(s.point);
  }
  const Complex c = centroid(pts);
  double rho = 0.0;
  for (const auto& z : pts) rho = std::max(rho, std::abs(z - c));
  if (rho == 0.0) rho = 1.0;

  const auto m = static_cast<Eigen::Index>(samples.size());
  const Eigen::Index ncols = std::min<Eigen::Index>(max_degree + 1, m);
  Eigen::MatrixXcd basis(m, ncols);
  Eigen::VectorXcd y(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const Complex t = (samples[static_cast<std::size_t>(i)].point - c) / rho;
    Complex pw = 1.0;
    for (Eigen::Index k = 0; k < ncols; ++k) {
      basis(i, k) = pw;
      pw *= t;
    }
    y(i) = samples[static_cast<std::size_t>(i)].value;
  }
  const Eigen::HouseholderQR<Eigen::MatrixXcd> qr(basis);
  const Eigen::VectorXcd qty = qr.householderQ().adjoint() * y;
  const Eigen::MatrixXcd r = qr.matrixQR().topRows(ncols).triangularView<Eigen::Upper>();

  double best = std::numeric_limits<double>::infinity();
  int best_deg = 0;
  for (Eigen::Index k = 0; k < ncols; ++k) {
    const auto n = k + 1;
    const Eigen::VectorXcd x =
        r.topLeftCorner(n, n).triangularView<Eigen::Upper>().solve(qty.head(n));
    if (!x.allFinite()) continue;
    std::vector<Complex> coeffs(static_cast<std::size_t>(n));
    double rk = 1.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      coeffs[static_cast<std::size_t>(j)] = x(j) / rk;
      rk *= rho;
    }
    Polynomial poly(std::move(coeffs), c);
    double err = 0.0;
    for (const auto& s : samples) err = std::max(err, std::abs(poly(s.point) - s.value));
    if (err < best) {
      best = err;
      best_deg = static_cast<int>(k);
    }
    if (err < budget) return {std::move(poly), static_cast<int>(k), err};
  }
  throw BudgetUnreachable(best, best_deg, budget, ctx);
}

/// First witness index with p > min_p_exclusive.
inline PadeIndex choose_index(const PadeIndexFamily& family, int min_p_exclusive) {
  family.validate();
  for (const auto& w : family.witness)
    if (w.p > min_p_exclusive) return w;
  throw FamilyExhausted(min_p_exclusive, {"choose_index", {}, {}});
}

/// g = P + d z^p about the origin. Requires d != 0 and p > deg P, so g has
/// exact degree p.
inline Polynomial make_stage_function(const Polynomial& P, Complex d, int p) {
  const ErrorContext ctx{"make_stage_function", PadeIndex{p, 0}, {}};
  if (d == Complex{}) throw InvalidArgument("perturbation coefficient d must be nonzero", ctx);
  if (p <= P.degree()) throw InvalidArgument("perturbation power must exceed deg P", ctx);
  return recenter(P, 0.0) + Polynomial::monomial(d, p, 0.0);
}

struct CertifyOptions {
  TolerancePolicy tol;
  int max_d_halvings = 40;
  /// |d| * max|z|^p over all regions is set to this fraction of the
  /// remaining error budget (strictly less than half).
  double d_budget_fraction = 0.45;
};

namespace detail {

inline double max_power_over(const StageRegions& rg, int p) {
  return std::max({max_modulus_power(rg.L, p), max_modulus_power(rg.Lprime, p), max_modulus_power(rg.K, p),
                   max_modulus_power(rg.Ldoubleprime, p)});
}

/// Membership and error sweep for one candidate g over every center in L.
inline void certify_centers(const Polynomial& g, PadeIndex idx, const StageRegions& rg, const Polynomial& h,
                            const TolerancePolicy& tol, UniversalityCertificate& cert) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  cert.zeta_reports.clear();
  cert.membership_ok = true;
  cert.err_on_K = cert.err_on_Lprime = cert.route_discrepancy_on_K = cert.exactness_sup = 0.0;
  cert.route_agreement = idx.q <= kJacobiMaxQ ? 0.0 : std::numeric_limits<double>::quiet_NaN();

  for (const auto& zeta : rg.L.points) {
    const TruncatedSeries series = series_of(recenter(g, zeta), idx.p + idx.q);
    const HankelReport rep = membership(series, idx, tol);
    cert.zeta_reports.push_back({zeta, rep});
    if (!rep.member) {
      cert.membership_ok = false;
      cert.err_on_K = cert.err_on_Lprime = cert.route_discrepancy_on_K = cert.exactness_sup = inf;
      continue;
    }
    RationalApproximant approx;
    try {
      approx = pade_linear_solve(series, idx, tol);
    } catch (const SingularSystem&) {
      cert.membership_ok = false;
      cert.err_on_K = cert.err_on_Lprime = cert.route_discrepancy_on_K = cert.exactness_sup = inf;
      continue;
    }
    cert.err_on_K = std::max(cert.err_on_K, sup_distance(approx, h, rg.K));
    cert.err_on_Lprime = std::max(cert.err_on_Lprime, sup_distance(approx, g, rg.Lprime));
    const double disc_K = sup_distance(approx, g, rg.K);
    cert.route_discrepancy_on_K = std::max(cert.route_discrepancy_on_K, disc_K);
    cert.exactness_sup = std::max({cert.exactness_sup, disc_K, sup_distance(approx, g, rg.Lprime),
                                   sup_distance(approx, g, rg.L), sup_distance(approx, g, rg.Ldoubleprime)});
    if (idx.q <= kJacobiMaxQ)
      cert.route_agreement = std::max(cert.route_agreement, route_difference(pade_jacobi(series, idx, tol), approx));
  }
}

inline bool any_near_degenerate(const UniversalityCertificate& cert) {
  return std::any_of(cert.zeta_reports.begin(), cert.zeta_reports.end(),
                     [](const ZetaReport& z) { return z.hankel.warning == HankelWarning::near_degenerate; });
}

}  // namespace detail

/// Builds g = P + d z^p and certifies it.
///
/// |d| is the largest real positive value with |d| * max|z|^p below half of
/// the error budget left after the fit; it is halved and the sweep repeated
/// while any center reports a NearDegenerate Hankel determinant. Throws
/// CertificationFailed carrying the full certificate when a condition fails.
inline StageResult perturb_and_certify(const Polynomial& P, PadeIndex idx, const StageRegions& regions,
                                       const Polynomial& h, int s, double eps_stage, const Polynomial& prev,
                                       const CertifyOptions& opt = {}, int stage = 1) {
  const ErrorContext ctx{"perturb_and_certify", idx, regions.K.label};
  if (s < 1) throw InvalidArgument("tolerance_s must be >= 1", ctx);
  if (!(eps_stage > 0.0)) throw InvalidArgument("stage epsilon must be positive", ctx);
  if (idx.p <= P.degree()) throw InvalidArgument("index p must exceed deg P", ctx);
  for (const auto* r : {&regions.L, &regions.Lprime, &regions.K, &regions.Ldoubleprime})
    if (r->points.empty()) throw InvalidArgument("empty region", {ctx.operation, idx, r->label});

  const Polynomial base = recenter(P, 0.0);
  UniversalityCertificate cert;
  cert.stage = stage;
  cert.index = idx;
  cert.fit_degree = P.is_zero() ? 0 : P.degree();
  cert.inv_s = 1.0 / s;
  cert.eps_stage = eps_stage;
  cert.tolerance = opt.tol;
  cert.label_K = regions.K.label;
  cert.label_L = regions.L.label;
  cert.label_Lprime = regions.Lprime.label;
  cert.label_Ldoubleprime = regions.Ldoubleprime.label;
  cert.K_connected_complement = regions.K.asserted_connected_complement;
  cert.Ldoubleprime_connected_complement = regions.Ldoubleprime.asserted_connected_complement;
  cert.fit_error_on_K = sup_difference(base, h, regions.K.points);
  cert.fit_error_on_Ldoubleprime = sup_difference(base, prev, regions.Ldoubleprime.points);

  const double remaining =
      std::min(cert.inv_s - cert.fit_error_on_K, eps_stage - cert.fit_error_on_Ldoubleprime);
  const double budget = remaining > 0.0 ? remaining : std::min(cert.inv_s, eps_stage);
  const double max_pow = std::max(detail::max_power_over(regions, idx.p), std::numeric_limits<double>::min());
  double d = opt.d_budget_fraction * budget / max_pow;

  Polynomial g;
  for (int attempt = 0;; ++attempt) {
    if (!(d > 0.0) || !std::isfinite(d)) {
      cert.d_used = d;
      cert.membership_ok = false;
      throw CertificationFailed(cert, "perturbation coefficient underflowed to zero", ctx);
    }
    g = make_stage_function(base, d, idx.p);
    detail::certify_centers(g, idx, regions, h, opt.tol, cert);
    cert.d_used = d;
    cert.d_halvings = attempt;
    if (!detail::any_near_degenerate(cert) || attempt >= opt.max_d_halvings) break;
    d *= 0.5;
  }
  cert.perturbation_bound_on_K = d * max_modulus_power(regions.K, idx.p);
  cert.perturbation_bound_on_Ldoubleprime = d * max_modulus_power(regions.Ldoubleprime, idx.p);
  cert.err_vs_previous_on_Ldoubleprime = sup_difference(g, prev, regions.Ldoubleprime.points);

  if (!cert.pass()) {
    std::string why = !cert.membership_ok                      ? "membership failed at some center"
                      : !(cert.err_on_K < cert.inv_s)          ? "err_on_K not below 1/s"
                      : !(cert.err_on_Lprime < cert.inv_s)     ? "err_on_Lprime not below 1/s"
                                                               : "err_vs_previous_on_Ldoubleprime not below eps";
    throw CertificationFailed(cert, why, ctx);
  }
  return {g, idx, cert.d_used, cert.fit_degree, cert, {idx}};
}

// ---------------------------------------------------------------------------
// Schedules

struct ScheduleGeometry {
  SampledCompact L;
  SampledCompact Lprime;
  Omega omega;
};

struct ScheduleOptions {
  int max_fit_degree = 60;
  /// The fit budget is this fraction of min(1/s, eps_n).
  double fit_budget_fraction = 0.5;
  /// L''_n radius: r0 + (room - r0) * growth * (1 - 2^-n), where r0 is the
  /// radius of L u L' about its centroid and room the distance from that
  /// centroid to the boundary of Omega.
  double ldd_growth = 0.5;
  /// Grid step of L''_n as a fraction of its diameter.
  double ldd_step_fraction = 0.02;
  double glue_margin = kGlueMargin;
  /// Default eps_n = 2^-n * eps0 when no explicit schedule is given.
  double eps0 = 0.02;
  CertifyOptions certify;
};

struct LddDisc {
  Complex center;
  double radius = 0.0;
};

struct TelescopeCheck {
  int m = 0;
  int n = 0;
  double sup = 0.0;
  double bound = 0.0;
  bool ok() const noexcept { return sup <= bound; }
};

struct ScheduleResult {
  std::vector<StageResult> stages;
  std::vector<LddDisc> ldd;
  std::vector<double> eps;
  std::vector<TelescopeCheck> telescope;

  bool all_pass() const {
    return std::all_of(stages.begin(), stages.end(), [](const StageResult& s) { return s.certificate.pass(); }) &&
           std::all_of(telescope.begin(), telescope.end(), [](const TelescopeCheck& t) { return t.ok(); });
  }
};

/// Closed disc L''_n about the centroid of L u L', growing with n and
/// staying inside Omega.
inline LddDisc ldd_disc(const ScheduleGeometry& geo, int n, const ScheduleOptions& opt) {
  std::vector<Complex> pts = geo.L.points;
  pts.insert(pts.end(), geo.Lprime.points.begin(), geo.Lprime.points.end());
  const Complex c = centroid(pts);
  double r0 = 0.0;
  for (const auto& z : pts) r0 = std::max(r0, std::abs(z - c));
  const double room = geo.omega.radius - std::abs(c - geo.omega.center);
  if (!(r0 < room)) throw InvalidArgument("L u L' does not fit inside Omega", {"ldd_disc", {}, geo.Lprime.label});
  return {c, r0 + (room - r0) * opt.ldd_growth * (1.0 - std::ldexp(1.0, -n))};
}

/// Runs the demand schedule stage by stage: fit the glued target, pick the
/// first witness index with p > deg P, perturb and certify. When a candidate
/// index fails certification the next witness index is tried before the
/// stage is declared failed.
inline ScheduleResult run_schedule(const std::vector<Demand>& demands, const PadeIndexFamily& family,
                                   const ScheduleGeometry& geo, const Polynomial& phi0,
                                   std::vector<double> eps_schedule = {}, const ScheduleOptions& opt = {}) {
  if (demands.empty()) throw InvalidArgument("empty demand list", {"run_schedule", {}, {}});
  family.validate();
  validate_against_omega(geo.L, geo.omega);
  validate_against_omega(geo.Lprime, geo.omega);
  if (geo.L.points.empty() || geo.Lprime.points.empty())
    throw InvalidArgument("empty L or L'", {"run_schedule", {}, geo.L.label});
  if (eps_schedule.empty()) {
    for (std::size_t n = 1; n <= demands.size(); ++n) eps_schedule.push_back(std::ldexp(opt.eps0, -static_cast<int>(n)));
  }
  if (eps_schedule.size() < demands.size())
    throw InvalidArgument("eps schedule shorter than the demand list", {"run_schedule", {}, {}});
  for (double e : eps_schedule)
    if (!(e > 0.0)) throw InvalidArgument("eps schedule entries must be positive", {"run_schedule", {}, {}});

  const int max_fit_degree = std::min(opt.max_fit_degree, family.witness.back().p - 1);

  ScheduleResult out;
  out.eps.assign(eps_schedule.begin(), eps_schedule.begin() + static_cast<std::ptrdiff_t>(demands.size()));
  Polynomial prev = recenter(phi0, 0.0);
  for (std::size_t i = 0; i < demands.size(); ++i) {
    const int n = static_cast<int>(i) + 1;
    const std::string where = "run_schedule stage " + std::to_string(n);
    const Demand& dem = demands[i];
    if (dem.tolerance_s < 1) throw InvalidArgument("tolerance_s must be >= 1", {where, {}, dem.region_K.label});
    if (!dem.region_K.asserted_outside_omega)
      throw InvalidArgument("demand region K must be asserted outside Omega", {where, {}, dem.region_K.label});
    validate_against_omega(dem.region_K, geo.omega);

    const LddDisc disc = ldd_disc(geo, n, opt);
    out.ldd.push_back(disc);
    StageRegions rg{geo.L, geo.Lprime, dem.region_K,
                    make_region(DiscSpec{disc.center, disc.radius, opt.ldd_step_fraction * 2.0 * disc.radius},
                                "L''_" + std::to_string(n))};
    const double eps_n = eps_schedule[i];
    const double tau = std::min(1.0 / dem.tolerance_s, eps_n);

    const auto samples = [&] {
      try {
        return glue_target(dem.target_h, rg.K, prev, rg.Ldoubleprime, opt.glue_margin);
      } catch (const RegionsOverlap& e) {
        throw RegionsOverlap(e.detail(), {where + ": glue_target", {}, e.context().region});
      }
    }();
    PolynomialFit fit;
    try {
      fit = fit_polynomial(samples, max_fit_degree, opt.fit_budget_fraction * tau);
    } catch (const BudgetUnreachable& e) {
      throw BudgetUnreachable(e.best_error(), e.at_degree(), opt.fit_budget_fraction * tau,
                              {where + ": fit_polynomial", {}, rg.K.label + "/" + rg.Ldoubleprime.label});
    }
    const Polynomial P = recenter(fit.poly, 0.0);

    PadeIndex idx;
    try {
      idx = choose_index(family, P.degree());
    } catch (const FamilyExhausted& e) {
      throw FamilyExhausted(e.min_p_exclusive(), {where + ": choose_index", {}, rg.K.label});
    }
    std::vector<PadeIndex> tried;
    for (;;) {
      tried.push_back(idx);
      try {
        StageResult res = perturb_and_certify(P, idx, rg, dem.target_h, dem.tolerance_s, eps_n, prev, opt.certify, n);
        res.fit_degree = fit.fit_degree;
        res.certificate.fit_degree = fit.fit_degree;
        res.indices_tried = tried;
        prev = res.g;
        out.stages.push_back(std::move(res));
        break;
      } catch (const CertificationFailed& e) {
        PadeIndex next;
        try {
          next = choose_index(family, idx.p);
        } catch (const FamilyExhausted&) {
          throw CertificationFailed(e.certificate(), e.detail(), {where + ": perturb_and_certify", idx, rg.K.label});
        }
        idx = next;
      }
    }
  }

  for (std::size_t n = 1; n < out.stages.size(); ++n) {
    for (std::size_t m = 0; m < n; ++m) {
      const auto ldd_m = make_region(
          DiscSpec{out.ldd[m].center, out.ldd[m].radius, opt.ldd_step_fraction * 2.0 * out.ldd[m].radius}, "L''");
      double bound = 0.0;
      for (std::size_t k = m + 1; k <= n; ++k) bound += out.eps[k];
      out.telescope.push_back({static_cast<int>(m) + 1, static_cast<int>(n) + 1,
                               sup_difference(out.stages[n].g, out.stages[m].g, ldd_m.points), bound});
    }
  }
  return out;
}

}  // namespace upade
