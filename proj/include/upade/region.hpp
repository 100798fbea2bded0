#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <variant>
#include <vector>

#include "upade/polynomial.hpp"

namespace upade {

/// A finite point cloud standing in for a compact set. The topology flags
/// are user assertions; a finite sample cannot decide them.
struct SampledCompact {
  std::string label;
  std::vector<Complex> points;
  bool asserted_connected_complement = true;
  bool asserted_outside_omega = false;
};

/// The domain, represented only as an open disc. Regions are checked
/// against it, it is never sampled.
struct Omega {
  Complex center{};
  double radius = 1.0;
};

struct DiscSpec {
  Complex center{};
  double radius = 0.0;
  double grid_step = 0.0;
};

struct SegmentSpec {
  Complex z0{};
  Complex z1{};
  int n_points = 0;
};

struct PointListSpec {
  std::vector<Complex> points;
};

using RegionSpec = std::variant<DiscSpec, SegmentSpec, PointListSpec>;

/// Minimum number of samples placed on a disc's boundary circle.
inline constexpr int kMinBoundarySamples = 32;

namespace detail {

inline std::vector<Complex> disc_points(const DiscSpec& d, const std::string& label) {
  require_finite(d.center, "make_region");
  if (!(d.radius > 0.0) || !std::isfinite(d.radius))
    throw InvalidArgument("disc radius must be positive", {"make_region", {}, label});
  if (!(d.grid_step > 0.0) || !std::isfinite(d.grid_step))
    throw InvalidArgument("disc grid step must be positive", {"make_region", {}, label});

  std::vector<Complex> pts;
  const int m = static_cast<int>(std::floor(d.radius / d.grid_step + 1e-9));
  const double r_in = d.radius * (1.0 + 1e-12);
  for (int i = -m; i <= m; ++i) {
    for (int j = -m; j <= m; ++j) {
      const Complex off(i * d.grid_step, j * d.grid_step);
      if (std::abs(off) <= r_in) pts.push_back(d.center + off);
    }
  }
  const int nb = std::max(kMinBoundarySamples,
                          static_cast<int>(std::ceil(2.0 * std::numbers::pi * d.radius / d.grid_step)));
  for (int k = 0; k < nb; ++k) {
    const double t = 2.0 * std::numbers::pi * k / nb;
    pts.push_back(d.center + std::polar(d.radius, t));
  }
  return pts;
}

inline std::vector<Complex> segment_points(const SegmentSpec& s, const std::string& label) {
  require_finite(s.z0, "make_region");
  require_finite(s.z1, "make_region");
  if (s.n_points < 2) throw InvalidArgument("segment needs n_points >= 2", {"make_region", {}, label});
  std::vector<Complex> pts(static_cast<std::size_t>(s.n_points));
  for (int k = 0; k < s.n_points; ++k) {
    const double t = static_cast<double>(k) / (s.n_points - 1);
    pts[static_cast<std::size_t>(k)] = s.z0 + (s.z1 - s.z0) * t;
  }
  pts.back() = s.z1;
  return pts;
}

}  // namespace detail

/// Deterministic point cloud from a generator description. Discs include
/// boundary circle samples (at least 32, more when the grid is fine);
/// segments include both endpoints.
inline SampledCompact make_region(const RegionSpec& spec, std::string label,
                                  bool asserted_connected_complement = true,
                                  bool asserted_outside_omega = false) {
  SampledCompact r;
  r.asserted_connected_complement = asserted_connected_complement;
  r.asserted_outside_omega = asserted_outside_omega;
  if (const auto* d = std::get_if<DiscSpec>(&spec)) {
    r.points = detail::disc_points(*d, label);
  } else if (const auto* s = std::get_if<SegmentSpec>(&spec)) {
    r.points = detail::segment_points(*s, label);
  } else {
    const auto& pl = std::get<PointListSpec>(spec);
    if (pl.points.empty()) throw InvalidArgument("empty point list", {"make_region", {}, label});
    for (const auto& z : pl.points) require_finite(z, "make_region");
    r.points = pl.points;
  }
  r.label = std::move(label);
  return r;
}

inline double min_cross_distance(const SampledCompact& a, const SampledCompact& b) {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& x : a.points)
    for (const auto& y : b.points) m = std::min(m, std::abs(x - y));
  return m;
}

/// True iff every pair of points is farther apart than `margin`.
inline bool check_disjoint(const SampledCompact& a, const SampledCompact& b, double margin) {
  if (!(margin > 0.0)) throw InvalidArgument("margin must be positive", {"check_disjoint", {}, a.label});
  return min_cross_distance(a, b) > margin;
}

/// Throws unless the region lies where its outside-Omega flag says it does:
/// strictly inside the disc when not flagged, outside the open disc otherwise.
inline void validate_against_omega(const SampledCompact& r, const Omega& omega) {
  for (const auto& z : r.points) {
    const double dist = std::abs(z - omega.center);
    if (r.asserted_outside_omega ? dist < omega.radius : dist >= omega.radius) {
      throw InvalidArgument(r.asserted_outside_omega ? "point inside Omega on a region flagged outside"
                                                     : "point outside Omega on a region flagged inside",
                            {"validate_against_omega", {}, r.label});
    }
  }
}

inline Complex centroid(std::span<const Complex> pts) {
  Complex c{};
  for (const auto& z : pts) c += z;
  return pts.empty() ? c : c / static_cast<double>(pts.size());
}

inline double max_modulus_power(const SampledCompact& r, int power) {
  double m = 0.0;
  for (const auto& z : r.points) m = std::max(m, std::pow(std::abs(z), power));
  return m;
}

}  // namespace upade
