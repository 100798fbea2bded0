#pragma once

// The four CLI subcommands as pure functions of their inputs. Each returns
// the JSON document to print together with the process exit code.

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "upade/io.hpp"

namespace upade::cli {

using io::json;

enum ExitCode : int { kPass = 0, kCertificationFailure = 2, kInputError = 3, kNumericalDegeneracy = 4 };

struct CommandResult {
  json output;
  int exit_code = kPass;
};

inline json error_json(const Error& e) {
  json j{{"kind", e.kind()},
         {"message", e.what()},
         {"operation", e.context().operation},
         {"index", e.context().index ? io::to_json(*e.context().index) : json(nullptr)},
         {"region", e.context().region}};
  if (const auto* io = dynamic_cast<const InsufficientOrder*>(&e)) j["required"] = io->required();
  if (const auto* bu = dynamic_cast<const BudgetUnreachable*>(&e)) {
    j["best_error"] = io::number(bu->best_error());
    j["at_degree"] = bu->at_degree();
  }
  return j;
}

/// Exit code for a library error escaping a command.
inline int exit_code_for(const Error& e) {
  const std::string& k = e.kind();
  if (k == "CertificationFailed" || k == "BudgetUnreachable" || k == "FamilyExhausted") return kCertificationFailure;
  if (k == "NotInExistenceClass" || k == "SingularSystem" || k == "NearPole") return kNumericalDegeneracy;
  return kInputError;
}

struct PadeRequest {
  PadeIndex index;
  TolerancePolicy tol;
  std::optional<SampledCompact> region;
};

/// Membership, both construction routes, their agreement, common-zero and
/// separation diagnostics for a single [p/q].
inline CommandResult cmd_pade(const TruncatedSeries& s, const PadeRequest& req) {
  const PadeIndex idx = req.index;
  if (idx.p < 0 || idx.q < 0) throw InvalidArgument("negative index", {"cmd_pade", idx, {}});
  if (s.order() < idx.p + idx.q) throw InsufficientOrder(idx.p + idx.q, s.order(), {"cmd_pade", idx, {}});

  CommandResult res;
  json& out = res.output;
  out["command"] = "pade";
  out["index"] = io::to_json(idx);
  out["series"] = {{"center", io::to_json(s.center())}, {"order", s.order()}};
  out["tolerance"] = io::to_json(req.tol);
  const HankelReport rep = membership(s, idx, req.tol);
  out["membership"] = io::to_json(rep);

  std::optional<RationalApproximant> solved, jacobi;
  try {
    solved = pade_linear_solve(s, idx, req.tol);
  } catch (const SingularSystem& e) {
    out["linear_solve_error"] = error_json(e);
  }
  if (idx.q <= kJacobiMaxQ) {
    try {
      jacobi = pade_jacobi(s, idx, req.tol);
    } catch (const NotInExistenceClass& e) {
      out["jacobi_error"] = error_json(e);
    }
  }
  if (solved.has_value() != rep.member) out["route_divergence"] = "membership and linear-solve disagree on existence";

  if (!solved) {
    res.exit_code = kNumericalDegeneracy;
    return res;
  }
  out["approximant"] = io::to_json(*solved);
  if (jacobi) {
    out["jacobi"] = io::to_json(*jacobi);
    out["route_agreement"] = io::number(route_difference(*jacobi, *solved));
  }
  out["near_common_zero"] = io::number(near_common_zero(*solved));
  out["poles"] = io::to_json(poles(*solved));
  if (req.region) {
    out["separation_bound"] = {{"region", req.region->label}, {"min", io::number(separation_bound(*solved, *req.region))}};
  }
  return res;
}

/// The Padé table's existence grid: (p_max+1) x (q_max+1) Hankel reports.
inline CommandResult cmd_table(const TruncatedSeries& s, int p_max, int q_max, const TolerancePolicy& tol,
                               bool with_poles = false) {
  const auto table = pade_table(s, p_max, q_max, tol);
  CommandResult res;
  json cells = json::array();
  json grid = json::array();
  json detmag = json::array();
  for (int p = 0; p <= p_max; ++p) {
    json row = json::array();
    json grow = json::array();
    json drow = json::array();
    for (int q = 0; q <= q_max; ++q) {
      const auto& rep = table[static_cast<std::size_t>(p)][static_cast<std::size_t>(q)];
      json cell = io::to_json(rep);
      if (with_poles && rep.member && q > 0) {
        try {
          cell["poles"] = io::to_json(poles(pade_linear_solve(s, {p, q}, tol)));
        } catch (const SingularSystem& e) {
          cell["poles_error"] = error_json(e);
        }
      }
      row.push_back(cell);
      grow.push_back(rep.member);
      drow.push_back(io::number(std::abs(rep.det)));
    }
    cells.push_back(row);
    grid.push_back(grow);
    detmag.push_back(drow);
  }
  res.output = {{"command", "table"},
                {"p_max", p_max},
                {"q_max", q_max},
                {"series", {{"center", io::to_json(s.center())}, {"order", s.order()}}},
                {"tolerance", io::to_json(tol)},
                {"cells", cells},
                {"member", grid},
                {"det_abs", detmag}};
  return res;
}

inline constexpr double kPoleClusterRadius = 0.05;

struct PoleCluster {
  Complex center;
  std::vector<Complex> members;
  std::vector<PadeIndex> indices;
};

/// Greedy clustering: each pole joins the first cluster whose running mean
/// is within `radius`, else opens a new cluster.
inline std::vector<PoleCluster> cluster_poles(const std::vector<std::pair<PadeIndex, Complex>>& poles_by_index,
                                              double radius = kPoleClusterRadius) {
  std::vector<PoleCluster> clusters;
  for (const auto& [idx, z] : poles_by_index) {
    auto it = std::find_if(clusters.begin(), clusters.end(),
                           [&](const PoleCluster& c) { return std::abs(c.center - z) <= radius; });
    if (it == clusters.end()) {
      clusters.push_back({z, {z}, {idx}});
    } else {
      it->members.push_back(z);
      if (std::find(it->indices.begin(), it->indices.end(), idx) == it->indices.end()) it->indices.push_back(idx);
      it->center += (z - it->center) / static_cast<double>(it->members.size());
    }
  }
  return clusters;
}

/// Pole sets along a list of indices plus a stability report. Per-index
/// failures are recorded inline and the sweep continues.
inline CommandResult cmd_poles(const TruncatedSeries& s, const std::vector<PadeIndex>& indices,
                               const TolerancePolicy& tol) {
  CommandResult res;
  json traj = json::array();
  std::vector<std::pair<PadeIndex, Complex>> all;
  for (const auto& idx : indices) {
    json entry{{"index", io::to_json(idx)}};
    try {
      const auto approx = pade_linear_solve(s, idx, tol);
      const auto ps = poles(approx);
      entry["poles"] = io::to_json(ps);
      for (const auto& z : ps.poles) all.emplace_back(idx, z);
    } catch (const Error& e) {
      entry["error"] = error_json(e);
    }
    traj.push_back(entry);
  }
  json clusters = json::array();
  for (const auto& c : cluster_poles(all)) {
    json idxs = json::array();
    for (const auto& i : c.indices) idxs.push_back(io::to_json(i));
    clusters.push_back({{"center", io::to_json(c.center)},
                        {"count", c.members.size()},
                        {"indices", idxs},
                        {"stable", c.indices.size() >= 2}});
  }
  res.output = {{"command", "poles"},
                {"series", {{"center", io::to_json(s.center())}, {"order", s.order()}}},
                {"tolerance", io::to_json(tol)},
                {"cluster_radius", kPoleClusterRadius},
                {"trajectory", traj},
                {"clusters", clusters}};
  return res;
}

namespace detail {

/// Per-point max over centers zeta in L of |[p/q]_{g,zeta}(z) - target(z)|.
inline json error_field(const StageResult& st, const SampledCompact& L, const SampledCompact& region,
                        const Polynomial& target, const TolerancePolicy& tol) {
  std::vector<double> worst(region.points.size(), 0.0);
  const PadeIndex idx = st.pq;
  for (const auto& zeta : L.points) {
    const auto approx = pade_linear_solve(series_of(recenter(st.g, zeta), idx.p + idx.q), idx, tol);
    for (std::size_t i = 0; i < region.points.size(); ++i) {
      const auto v = rat_eval(approx, region.points[i]);
      worst[i] = std::max(worst[i], v ? std::abs(*v - target(region.points[i])) : std::numeric_limits<double>::infinity());
    }
  }
  json pts = json::array();
  for (std::size_t i = 0; i < region.points.size(); ++i)
    pts.push_back({{"z", io::to_json(region.points[i])}, {"err", io::number(worst[i])}});
  return {{"region", region.label}, {"samples", pts}};
}

}  // namespace detail

/// Runs a demand schedule and emits certificates plus per-region error
/// fields (|approximant - h| on K, |approximant - g| on L') for plotting.
inline CommandResult cmd_universal(const io::ScheduleConfig& cfg) {
  CommandResult res;
  res.output["command"] = "universal";
  res.output["tool_version"] = io::kToolVersion;
  res.output["tolerance"] = io::to_json(cfg.options.certify.tol);
  try {
    const ScheduleResult sr =
        run_schedule(cfg.demands, cfg.family, cfg.geometry, cfg.phi0, cfg.eps_schedule, cfg.options);
    res.output["result"] = io::to_json(sr);
    json plot = json::array();
    for (std::size_t i = 0; i < sr.stages.size(); ++i) {
      const auto& st = sr.stages[i];
      plot.push_back({{"stage", i + 1},
                      {"K", detail::error_field(st, cfg.geometry.L, cfg.demands[i].region_K, cfg.demands[i].target_h,
                                                cfg.options.certify.tol)},
                      {"Lprime", detail::error_field(st, cfg.geometry.L, cfg.geometry.Lprime, st.g,
                                                     cfg.options.certify.tol)}});
    }
    res.output["plot_data"] = plot;
    res.exit_code = sr.all_pass() ? kPass : kCertificationFailure;
  } catch (const CertificationFailed& e) {
    res.output["error"] = error_json(e);
    res.output["certificate"] = io::to_json(e.certificate());
    res.exit_code = kCertificationFailure;
  } catch (const BudgetUnreachable& e) {
    res.output["error"] = error_json(e);
    res.exit_code = kCertificationFailure;
  } catch (const FamilyExhausted& e) {
    res.output["error"] = error_json(e);
    res.exit_code = kCertificationFailure;
  }
  return res;
}

/// Writes `text` to a sibling temp file, then renames it over `path`, so a
/// reader never sees a half-written document.
inline void write_atomic(const std::filesystem::path& path, const std::string& text) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw InvalidArgument("cannot open '" + tmp.string() + "' for writing", {"write_atomic", {}, {}});
    f << text;
    if (!f.flush()) throw InvalidArgument("write to '" + tmp.string() + "' failed", {"write_atomic", {}, {}});
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace upade::cli
