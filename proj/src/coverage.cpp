#include "rsn/coverage.hpp"

namespace rsn {

namespace detail {

CoverageReport summarize(std::span<const std::uint32_t> counts, double spacing) {
  CoverageReport r;
  r.spacing = spacing;
  r.sample_count = counts.size();
  if (counts.empty()) return r;
  const auto [lo, hi] = std::minmax_element(counts.begin(), counts.end());
  r.n_minus = *lo;
  r.n_plus = *hi;
  r.histogram.assign(static_cast<std::size_t>(r.n_plus) + 1, 0);
  for (auto c : counts) ++r.histogram[c];
  return r;
}

}  // namespace detail

CoverageResult cover_counts(std::span<const Point3> positions, double r_sense, const CoverageGrid& grid) {
  if (!(r_sense > 0.0) || !std::isfinite(r_sense)) throw std::invalid_argument("r_sense must be > 0");
  if (grid.spacing() > r_sense / kCoarsestGridDivisor * (1.0 + 1e-12))
    throw std::invalid_argument("grid too coarse: spacing must be <= r_sense / 4");

  CoverageResult result;
  result.counts.assign(grid.sample_count(), 0);
  const double r2 = r_sense * r_sense;
  std::vector<std::pair<std::size_t, double>> wx, wy, wz;
  for (const Point3& s : positions) {
    grid.axis_window(0, s.x, r_sense, wx);
    grid.axis_window(1, s.y, r_sense, wy);
    grid.axis_window(2, s.z, r_sense, wz);
    for (const auto& [iz, dz2] : wz)
      for (const auto& [iy, dy2] : wy)
        for (const auto& [ix, dx2] : wx) {
          const double dxy = dx2 + dy2;
          if (dxy > r2) continue;
          if (dxy + dz2 <= r2) ++result.counts[grid.index(ix, iy, iz)];
        }
  }
  result.report = detail::summarize(result.counts, grid.spacing());

  const Region& region = grid.region();
  if (region.boundary() == BoundaryMode::hard) {
    std::vector<std::uint32_t> core;
    auto inner = [&](std::size_t a, double v) { return v >= r_sense && v <= region.side(a) - r_sense; };
    for (std::size_t iz = 0; iz < grid.axis(2).size(); ++iz) {
      if (!inner(2, grid.axis(2)[iz])) continue;
      for (std::size_t iy = 0; iy < grid.axis(1).size(); ++iy) {
        if (!inner(1, grid.axis(1)[iy])) continue;
        for (std::size_t ix = 0; ix < grid.axis(0).size(); ++ix)
          if (inner(0, grid.axis(0)[ix])) core.push_back(result.counts[grid.index(ix, iy, iz)]);
      }
    }
    result.core = detail::summarize(core, grid.spacing());
  }
  return result;
}

}  // namespace rsn
