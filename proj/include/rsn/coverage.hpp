#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <vector>

#include "rsn/geometry.hpp"

namespace rsn {

// Corner-anchored sample lattice. Along each axis the samples sit at 0, h, 2h, ...
// strictly below the side length; hard boundaries add the far face as well. Halving
// h therefore always yields a superset of samples.
class CoverageGrid {
 public:
  CoverageGrid(const Region& region, double spacing) : region_(region), spacing_(spacing) {
    if (!(spacing > 0.0) || !std::isfinite(spacing)) throw std::invalid_argument("grid spacing must be > 0");
    for (std::size_t a = 0; a < 3; ++a) {
      const double side = region.side(a);
      auto& c = coords_[a];
      for (std::size_t i = 0;; ++i) {
        const double v = static_cast<double>(i) * spacing;
        if (v >= side) break;
        c.push_back(v);
      }
      if (region.boundary() == BoundaryMode::hard && side - c.back() > 1e-12 * side) c.push_back(side);
    }
  }

  double spacing() const { return spacing_; }
  const Region& region() const { return region_; }
  const std::vector<double>& axis(std::size_t a) const { return coords_[a]; }
  std::size_t sample_count() const { return coords_[0].size() * coords_[1].size() * coords_[2].size(); }

  std::size_t index(std::size_t ix, std::size_t iy, std::size_t iz) const {
    return (iz * coords_[1].size() + iy) * coords_[0].size() + ix;
  }

  Point3 point(std::size_t ix, std::size_t iy, std::size_t iz) const {
    return {coords_[0][ix], coords_[1][iy], coords_[2][iz]};
  }

  // Lattice indices along `axis` within `radius` of coordinate x, with squared offsets.
  void axis_window(std::size_t a, double x, double radius, std::vector<std::pair<std::size_t, double>>& out) const {
    out.clear();
    const auto& c = coords_[a];
    const double side = region_.side(a);
    const auto m = static_cast<long long>(c.size());
    auto consider = [&](long long i) {
      if (i < 0 || i >= m) return;
      const auto iu = static_cast<std::size_t>(i);
      const double d = axis_delta(c[iu], x, side, region_.boundary());
      if (d <= radius) out.emplace_back(iu, d * d);
    };
    auto scan = [&](double lo, double hi) {
      const auto first = static_cast<long long>(std::floor(lo / spacing_)) - 1;
      const auto last = static_cast<long long>(std::ceil(hi / spacing_)) + 1;
      for (long long i = std::max(0LL, first); i <= std::min(m - 1, last); ++i) consider(i);
    };
    if (region_.boundary() == BoundaryMode::toroidal && 2.0 * radius >= side) {
      for (long long i = 0; i < m; ++i) consider(i);
      return;
    }
    scan(x - radius, x + radius);
    if (region_.boundary() == BoundaryMode::hard) {
      if (c.back() == side && side - x <= radius + spacing_) consider(m - 1);
    } else {
      if (x - radius < 0.0) scan(side + x - radius, side);
      if (x + radius > side) scan(0.0, x + radius - side);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
  }

 private:
  Region region_;
  double spacing_;
  std::array<std::vector<double>, 3> coords_;
};

struct CoverageReport {
  std::uint32_t n_minus = 0;  // min cover count over samples (estimates N-)
  std::uint32_t n_plus = 0;   // max cover count over samples (estimates N+)
  std::vector<std::size_t> histogram;  // histogram[k] = samples covered exactly k times
  std::size_t sample_count = 0;
  double spacing = 0.0;

  double fraction_below(std::uint32_t k) const {
    if (sample_count == 0) return 0.0;
    std::size_t below = 0;
    for (std::size_t c = 0; c < std::min<std::size_t>(k, histogram.size()); ++c) below += histogram[c];
    return static_cast<double>(below) / static_cast<double>(sample_count);
  }
};

struct CoverageResult {
  CoverageReport report;
  std::optional<CoverageReport> core;  // hard mode only: samples at least r_sense from every face
  std::vector<std::uint32_t> counts;   // per-sample cover counts, lattice order
};

inline constexpr double kDefaultGridDivisor = 8.0;
inline constexpr double kCoarsestGridDivisor = 4.0;

namespace detail {

CoverageReport summarize(std::span<const std::uint32_t> counts, double spacing);

}  // namespace detail

// For every lattice sample p, counts sensors with distance(p, sensor) <= r_sense.
// Work is O(n (r_sense / h)^3): each sensor stamps the samples inside its ball.
CoverageResult cover_counts(std::span<const Point3> positions, double r_sense, const CoverageGrid& grid);

inline bool is_k_covered(const CoverageReport& report, std::uint32_t k) { return report.n_minus >= k; }

// One row per histogram bin, then a summary row.
inline void write_coverage_csv(std::ostream& out, const CoverageReport& report, std::uint64_t seed) {
  out << "kind,cover_count,samples,n_minus,n_plus,h,seed\n";
  for (std::size_t k = 0; k < report.histogram.size(); ++k)
    out << "bin," << k << ',' << report.histogram[k] << ",,,,\n";
  out.precision(17);
  out << "summary,," << report.sample_count << ',' << report.n_minus << ',' << report.n_plus << ','
      << report.spacing << ',' << seed << '\n';
}

}  // namespace rsn
