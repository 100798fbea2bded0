#pragma once

// JSON wire formats. Complex numbers are [re, im]; non-finite reals are
// written as null.

#include <cmath>
#include <string>
#include <vector>

#include "json.hpp"
#include "upade/universal.hpp"

namespace upade::io {

using nlohmann::json;

inline constexpr const char* kToolVersion = "upade 1.0.0";

inline json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

inline json to_json(Complex z) { return json::array({z.real(), z.imag()}); }

inline Complex complex_from_json(const json& j, const std::string& what = "complex") {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw InvalidArgument(what + ": expected [re, im]", {"json", {}, {}});
  return {j[0].get<double>(), j[1].get<double>()};
}

inline std::vector<Complex> complex_list_from_json(const json& j, const std::string& what) {
  if (!j.is_array()) throw InvalidArgument(what + ": expected a list of [re, im]", {"json", {}, {}});
  std::vector<Complex> out;
  out.reserve(j.size());
  for (const auto& e : j) out.push_back(complex_from_json(e, what));
  return out;
}

inline json to_json(std::span<const Complex> v) {
  json a = json::array();
  for (const auto& z : v) a.push_back(to_json(z));
  return a;
}

// --- series / polynomials: { "center": [re, im], "coeffs": [[re, im], ...] }

inline json to_json(const Polynomial& p) { return {{"center", to_json(p.center())}, {"coeffs", to_json(p.coeffs())}}; }

inline Polynomial polynomial_from_json(const json& j) {
  if (!j.is_object() || !j.contains("coeffs"))
    throw InvalidArgument("polynomial: expected {center, coeffs}", {"json", {}, {}});
  const Complex c = j.contains("center") ? complex_from_json(j["center"], "center") : Complex{};
  return Polynomial(complex_list_from_json(j["coeffs"], "coeffs"), c);
}

inline json to_json(const TruncatedSeries& s) { return {{"center", to_json(s.center())}, {"coeffs", to_json(s.coeffs())}}; }

/// The center is optional in the file; `fallback_center` fills it in.
inline TruncatedSeries series_from_json(const json& j, std::optional<Complex> fallback_center = std::nullopt) {
  if (!j.is_object() || !j.contains("coeffs"))
    throw InvalidArgument("series: expected {center, coeffs}", {"json", {}, {}});
  Complex c{};
  if (j.contains("center")) {
    c = complex_from_json(j["center"], "center");
    if (fallback_center && *fallback_center != c)
      throw InvalidArgument("series center differs from the requested center; re-expand the series first",
                            {"series_from_json", {}, {}});
  } else if (fallback_center) {
    c = *fallback_center;
  }
  return TruncatedSeries(c, complex_list_from_json(j["coeffs"], "coeffs"));
}

// --- pade-engine

inline std::string to_string(HankelWarning w) { return w == HankelWarning::near_degenerate ? "NearDegenerate" : ""; }

inline json to_json(const HankelReport& r) {
  return {{"p", r.p},
          {"q", r.q},
          {"det", to_json(r.det)},
          {"scale", number(r.scale)},
          {"member", r.member},
          {"warning", r.warning == HankelWarning::none ? json(nullptr) : json(to_string(r.warning))}};
}

inline json to_json(const RationalApproximant& r) {
  return {{"p", r.p},
          {"q", r.q},
          {"center", to_json(r.center)},
          {"num", to_json(r.num.coeffs())},
          {"den", to_json(r.den.coeffs())},
          {"normalized", r.normalized}};
}

inline PadeIndex index_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer())
    throw InvalidArgument("index: expected [p, q]", {"json", {}, {}});
  return {j[0].get<int>(), j[1].get<int>()};
}

inline json to_json(PadeIndex idx) { return json::array({idx.p, idx.q}); }

/// Either {"members": [[p,q],...], "witness": [[p,q],...]} or a bare list of
/// pairs. A bare list (or a missing witness) gets the witness made of the
/// first listed member for each distinct p, in increasing p.
inline PadeIndexFamily family_from_json(const json& j) {
  PadeIndexFamily fam;
  std::vector<PadeIndex> ordered;
  const json& members = j.is_object() ? j.at("members") : j;
  if (!members.is_array()) throw InvalidArgument("family: expected a list of [p, q]", {"json", {}, {}});
  for (const auto& e : members) {
    const PadeIndex idx = index_from_json(e);
    if (fam.members.insert(idx).second) ordered.push_back(idx);
  }
  if (j.is_object() && j.contains("witness")) {
    for (const auto& e : j["witness"]) fam.witness.push_back(index_from_json(e));
  } else {
    std::vector<PadeIndex> w = ordered;
    std::stable_sort(w.begin(), w.end(), [](PadeIndex a, PadeIndex b) { return a.p < b.p; });
    for (const auto& idx : w)
      if (fam.witness.empty() || fam.witness.back().p < idx.p) fam.witness.push_back(idx);
  }
  return fam;
}

/// Members in the order they were listed (a std::set loses that order).
inline std::vector<PadeIndex> family_members_in_order(const json& j) {
  const json& members = j.is_object() ? j.at("members") : j;
  std::vector<PadeIndex> out;
  for (const auto& e : members) out.push_back(index_from_json(e));
  return out;
}

inline json to_json(const PadeIndexFamily& f) {
  json m = json::array();
  for (const auto& idx : f.members) m.push_back(to_json(idx));
  json w = json::array();
  for (const auto& idx : f.witness) w.push_back(to_json(idx));
  return {{"members", m}, {"witness", w}};
}

// --- rational-analysis

inline json to_json(const PoleSet& ps) {
  json r = json::array();
  for (double v : ps.residual_norms) r.push_back(number(v));
  return {{"poles", to_json(ps.poles)}, {"residuals", r}};
}

// --- regions: { "label", "kind": "disc"|"segment"|"points", ..., flags }

inline SampledCompact region_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind")) throw InvalidArgument("region: expected an object with kind", {"json", {}, {}});
  const std::string label = j.value("label", std::string{"region"});
  const std::string kind = j["kind"].get<std::string>();
  const bool connected = j.value("asserted_connected_complement", true);
  const bool outside = j.value("asserted_outside_omega", false);
  const ErrorContext ctx{"region_from_json", {}, label};
  try {
    if (kind == "disc")
      return make_region(DiscSpec{complex_from_json(j.at("center"), "center"), j.at("radius").get<double>(),
                                  j.at("step").get<double>()},
                         label, connected, outside);
    if (kind == "segment")
      return make_region(SegmentSpec{complex_from_json(j.at("z0"), "z0"), complex_from_json(j.at("z1"), "z1"),
                                     j.at("n_points").get<int>()},
                         label, connected, outside);
    if (kind == "points")
      return make_region(PointListSpec{complex_list_from_json(j.at("points"), "points")}, label, connected, outside);
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("region: ") + e.what(), ctx);
  }
  throw InvalidArgument("unknown region kind '" + kind + "'", ctx);
}

inline json region_summary(const SampledCompact& r) {
  return {{"label", r.label},
          {"n_points", r.points.size()},
          {"asserted_connected_complement", r.asserted_connected_complement},
          {"asserted_outside_omega", r.asserted_outside_omega}};
}

// --- universal-builder

inline json to_json(const TolerancePolicy& t) {
  return {{"tol_rel", t.tol_rel}, {"near_degenerate_floor", t.near_degenerate_floor}};
}

inline json to_json(const UniversalityCertificate& c) {
  json zr = json::array();
  for (const auto& z : c.zeta_reports) zr.push_back({{"zeta", to_json(z.zeta)}, {"hankel", to_json(z.hankel)}});
  return {
      {"tool_version", kToolVersion},
      {"stage", c.stage},
      {"index", to_json(c.index)},
      {"d_used", to_json(c.d_used)},
      {"d_halvings", c.d_halvings},
      {"fit_degree", c.fit_degree},
      {"membership_ok", c.membership_ok},
      {"hankel_reports", zr},
      {"err_on_K", number(c.err_on_K)},
      {"err_on_Lprime", number(c.err_on_Lprime)},
      {"err_vs_previous_on_Ldoubleprime", number(c.err_vs_previous_on_Ldoubleprime)},
      {"audit",
       {{"fit_error_on_K", number(c.fit_error_on_K)},
        {"perturbation_bound_on_K", number(c.perturbation_bound_on_K)},
        {"route_discrepancy_on_K", number(c.route_discrepancy_on_K)},
        {"fit_error_on_Ldoubleprime", number(c.fit_error_on_Ldoubleprime)},
        {"perturbation_bound_on_Ldoubleprime", number(c.perturbation_bound_on_Ldoubleprime)},
        {"exactness_sup", number(c.exactness_sup)},
        {"route_agreement", number(c.route_agreement)}}},
      {"thresholds", {{"inv_s", c.inv_s}, {"eps_stage", c.eps_stage}, {"tolerance", to_json(c.tolerance)}}},
      {"regions",
       {{"K", c.label_K},
        {"L", c.label_L},
        {"Lprime", c.label_Lprime},
        {"Ldoubleprime", c.label_Ldoubleprime},
        {"K_asserted_connected_complement", c.K_connected_complement},
        {"Ldoubleprime_policy", "closed disc about the centroid of L u L', inside Omega"}}},
      {"pass", c.pass()},
  };
}

inline json to_json(const StageResult& s) {
  json tried = json::array();
  for (const auto& idx : s.indices_tried) tried.push_back(to_json(idx));
  return {{"g", to_json(s.g)},
          {"pq", to_json(s.pq)},
          {"d_used", to_json(s.d_used)},
          {"fit_degree", s.fit_degree},
          {"indices_tried", tried},
          {"certificate", to_json(s.certificate)}};
}

struct ScheduleConfig {
  std::vector<Demand> demands;
  PadeIndexFamily family;
  ScheduleGeometry geometry;
  Polynomial phi0;
  std::vector<double> eps_schedule;
  ScheduleOptions options;
};

/// Schedule config:
/// {
///   "omega": {"center": [0,0], "radius": 1},            (optional)
///   "L": region, "Lprime": region,
///   "phi0": polynomial,                                  (optional, zero)
///   "family": family,
///   "demands": [{"target": polynomial, "K": region, "s": int}, ...],
///   "eps0": real | "eps_schedule": [real, ...],          (optional)
///   "options": {"max_fit_degree", "fit_budget_fraction", "ldd_growth",
///               "ldd_step_fraction", "max_d_halvings", "tol_rel"}  (optional)
/// }
inline ScheduleConfig schedule_from_json(const json& j) {
  ScheduleConfig cfg;
  try {
    if (j.contains("omega")) {
      cfg.geometry.omega.center = complex_from_json(j["omega"].value("center", json::array({0.0, 0.0})), "omega.center");
      cfg.geometry.omega.radius = j["omega"].value("radius", 1.0);
    }
    cfg.geometry.L = region_from_json(j.at("L"));
    cfg.geometry.Lprime = region_from_json(j.at("Lprime"));
    if (j.contains("phi0")) cfg.phi0 = polynomial_from_json(j["phi0"]);
    cfg.family = family_from_json(j.at("family"));
    for (const auto& d : j.at("demands")) {
      SampledCompact K = region_from_json(d.at("K"));
      if (!d.at("K").contains("asserted_outside_omega")) K.asserted_outside_omega = true;
      cfg.demands.push_back({polynomial_from_json(d.at("target")), std::move(K), d.at("s").get<int>()});
    }
    if (j.contains("eps_schedule")) cfg.eps_schedule = j["eps_schedule"].get<std::vector<double>>();
    if (j.contains("eps0")) cfg.options.eps0 = j["eps0"].get<double>();
    if (j.contains("options")) {
      const auto& o = j["options"];
      cfg.options.max_fit_degree = o.value("max_fit_degree", cfg.options.max_fit_degree);
      cfg.options.fit_budget_fraction = o.value("fit_budget_fraction", cfg.options.fit_budget_fraction);
      cfg.options.ldd_growth = o.value("ldd_growth", cfg.options.ldd_growth);
      cfg.options.ldd_step_fraction = o.value("ldd_step_fraction", cfg.options.ldd_step_fraction);
      cfg.options.certify.max_d_halvings = o.value("max_d_halvings", cfg.options.certify.max_d_halvings);
      cfg.options.certify.tol.tol_rel = o.value("tol_rel", cfg.options.certify.tol.tol_rel);
    }
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("schedule config: ") + e.what(), {"schedule_from_json", {}, {}});
  }
  return cfg;
}

inline json to_json(const ScheduleResult& r) {
  json stages = json::array();
  for (const auto& s : r.stages) stages.push_back(to_json(s));
  json ldd = json::array();
  for (const auto& d : r.ldd) ldd.push_back({{"center", to_json(d.center)}, {"radius", d.radius}});
  json tele = json::array();
  for (const auto& t : r.telescope)
    tele.push_back({{"m", t.m}, {"n", t.n}, {"sup", number(t.sup)}, {"bound", number(t.bound)}, {"ok", t.ok()}});
  return {{"stages", stages}, {"ldoubleprime", ldd}, {"eps", r.eps}, {"telescope", tele}, {"all_pass", r.all_pass()}};
}

}  // namespace upade::io
