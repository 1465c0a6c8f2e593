#pragma once

// Independent reference computations used only by the tests. None of these
// share code paths with the library routines they check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <queue>
#include <utility>
#include <vector>

#include "rsn/coverage.hpp"
#include "rsn/geometry.hpp"
#include "rsn/rgg.hpp"

#ifdef RSN_WITH_BOOST_QUADRATURE
#include <boost/math/quadrature/exp_sinh.hpp>
#endif

namespace oracle {

// Solve w e^w = z by plain bisection on [lo, hi]; the caller picks a bracket on one branch.
inline double lambert_bisect(double z, double lo, double hi) {
  auto f = [z](double w) { return w * std::exp(w) - z; };
  const bool increasing = f(hi) > f(lo);
  for (int i = 0; i < 2000; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if ((f(mid) < 0.0) == increasing)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

#ifdef RSN_WITH_BOOST_QUADRATURE
// Q(x+1, y) = (1/x!) * integral_y^inf e^{-t} t^x dt, by double-exponential quadrature.
inline double upper_gamma_regularized(long long x, double y) {
  const double xd = static_cast<double>(x);
  const double lgx = std::lgamma(xd + 1.0);
  auto integrand = [&](double s) {
    const double t = y + s;
    if (t <= 0.0) return xd == 0.0 ? std::exp(-t) : 0.0;
    return std::exp(-t + xd * std::log(t) - lgx);
  };
  boost::math::quadrature::exp_sinh<double> integrator;
  return integrator.integrate(integrand, 1e-15);
}
#endif

// Volume of two radius-r balls with centres r apart, integrating the cross-section
// area along the axis joining the centres with composite Simpson (split at the
// kink x = r/2, where the integrand is polynomial on each side).
inline double lens_volume_quadrature(double r, int panels = 2000) {
  auto area = [r](double x) {
    const double a = r * r - x * x;
    const double b = r * r - (x - r) * (x - r);
    return std::numbers::pi * std::max(0.0, std::min(a, b));
  };
  auto simpson = [&](double lo, double hi) {
    const double h = (hi - lo) / panels;
    double s = area(lo) + area(hi);
    for (int i = 1; i < panels; ++i) s += area(lo + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
  };
  return simpson(0.0, r / 2) + simpson(r / 2, r);
}

// O(n^2) adjacency under the same closed-ball predicate.
inline std::vector<std::vector<rsn::NodeIndex>> brute_force_adjacency(const std::vector<rsn::Point3>& pts,
                                                                      double r, const rsn::Region& region) {
  std::vector<std::vector<rsn::NodeIndex>> adj(pts.size());
  if (r <= 0.0) return adj;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      if (rsn::distance(pts[i], pts[j], region) <= r) {
        adj[i].push_back(static_cast<rsn::NodeIndex>(j));
        adj[j].push_back(static_cast<rsn::NodeIndex>(i));
      }
  return adj;
}

// Component id per node by BFS, numbered by first appearance.
inline std::vector<std::uint32_t> bfs_labels(const std::vector<std::vector<rsn::NodeIndex>>& adj) {
  constexpr auto kUnset = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> label(adj.size(), kUnset);
  std::uint32_t next = 0;
  for (std::size_t s = 0; s < adj.size(); ++s) {
    if (label[s] != kUnset) continue;
    std::queue<std::size_t> q;
    q.push(s);
    label[s] = next;
    while (!q.empty()) {
      const auto u = q.front();
      q.pop();
      for (auto v : adj[u])
        if (label[v] == kUnset) {
          label[v] = next;
          q.push(v);
        }
    }
    ++next;
  }
  return label;
}

// Max finite all-pairs hop distance via Floyd-Warshall; SIZE_MAX when disconnected.
inline std::size_t floyd_warshall_diameter(const std::vector<std::vector<rsn::NodeIndex>>& adj) {
  const std::size_t n = adj.size();
  constexpr std::uint32_t kInf = std::numeric_limits<std::uint32_t>::max() / 4;
  std::vector<std::uint32_t> d(n * n, kInf);
  for (std::size_t i = 0; i < n; ++i) {
    d[i * n + i] = 0;
    for (auto j : adj[i]) d[i * n + j] = 1;
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i) {
      const std::uint32_t dik = d[i * n + k];
      if (dik == kInf) continue;
      for (std::size_t j = 0; j < n; ++j) d[i * n + j] = std::min(d[i * n + j], dik + d[k * n + j]);
    }
  std::uint32_t best = 0;
  for (auto v : d) {
    if (v >= kInf) return std::numeric_limits<std::size_t>::max();
    best = std::max(best, v);
  }
  return best;
}

// Per lattice sample, the number of sensors within r, by direct distance checks.
inline std::vector<std::uint32_t> brute_force_cover_counts(const std::vector<rsn::Point3>& sensors, double r,
                                                           const rsn::CoverageGrid& grid) {
  std::vector<std::uint32_t> counts(grid.sample_count(), 0);
  const auto& region = grid.region();
  for (std::size_t iz = 0; iz < grid.axis(2).size(); ++iz)
    for (std::size_t iy = 0; iy < grid.axis(1).size(); ++iy)
      for (std::size_t ix = 0; ix < grid.axis(0).size(); ++ix) {
        const rsn::Point3 p = grid.point(ix, iy, iz);
        std::uint32_t c = 0;
        for (const auto& s : sensors)
          if (rsn::distance_squared(p, s, region) <= r * r) ++c;
        counts[grid.index(ix, iy, iz)] = c;
      }
  return counts;
}

}  // namespace oracle
