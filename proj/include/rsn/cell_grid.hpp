#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "rsn/geometry.hpp"

namespace rsn {

// Uniform cell partition of a box with cell side >= a query radius, so every
// neighbour within that radius lives in the 3x3x3 block around a point's cell.
class CellGrid {
 public:
  CellGrid(std::span<const Point3> points, const Region& region, double min_cell_side)
      : region_(region) {
    const std::size_t n = points.size();
    const double max_cells = std::max<double>(8.0 * static_cast<double>(n), 1.0);
    double side = std::max(min_cell_side, 1e-300);
    for (;;) {
      double total = 1.0;
      for (std::size_t a = 0; a < 3; ++a) {
        dims_[a] = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(region.side(a) / side)));
        total *= static_cast<double>(dims_[a]);
      }
      if (total <= max_cells) break;
      side *= 1.5;  // coarser cells stay valid, they only cost more candidate checks
    }
    for (std::size_t a = 0; a < 3; ++a) width_[a] = region.side(a) / static_cast<double>(dims_[a]);

    const std::size_t cells = dims_[0] * dims_[1] * dims_[2];
    start_.assign(cells + 1, 0);
    std::vector<std::uint32_t> cell_of(n);
    for (std::size_t i = 0; i < n; ++i) {
      cell_of[i] = static_cast<std::uint32_t>(cell_index(cell_coords(points[i])));
      ++start_[cell_of[i] + 1];
    }
    for (std::size_t c = 0; c < cells; ++c) start_[c + 1] += start_[c];
    items_.resize(n);
    std::vector<std::uint32_t> fill(start_.begin(), start_.end() - 1);
    for (std::size_t i = 0; i < n; ++i) items_[fill[cell_of[i]]++] = static_cast<std::uint32_t>(i);
  }

  std::array<std::size_t, 3> cell_coords(const Point3& p) const {
    std::array<std::size_t, 3> c{};
    for (std::size_t a = 0; a < 3; ++a) {
      const double f = std::floor(p[a] / width_[a]);
      const auto k = f < 0.0 ? 0 : static_cast<std::size_t>(f);
      c[a] = std::min(k, dims_[a] - 1);
    }
    return c;
  }

  std::size_t cell_index(const std::array<std::size_t, 3>& c) const {
    return (c[2] * dims_[1] + c[1]) * dims_[0] + c[0];
  }

  std::span<const std::uint32_t> cell_items(std::size_t cell) const {
    return {items_.data() + start_[cell], items_.data() + start_[cell + 1]};
  }

  // Visits every point stored in the (deduplicated) 3x3x3 block around p's cell.
  template <typename Visitor>
  void for_each_candidate(const Point3& p, Visitor&& visit) const {
    const auto c = cell_coords(p);
    std::array<std::array<std::size_t, 3>, 3> axis_cells{};
    std::array<std::size_t, 3> axis_count{};
    for (std::size_t a = 0; a < 3; ++a) {
      std::size_t count = 0;
      for (int off = -1; off <= 1; ++off) {
        long long k = static_cast<long long>(c[a]) + off;
        const auto dim = static_cast<long long>(dims_[a]);
        if (k < 0 || k >= dim) {
          if (region_.boundary() == BoundaryMode::hard) continue;
          k = (k + dim) % dim;
        }
        const auto ku = static_cast<std::size_t>(k);
        if (std::find(axis_cells[a].begin(), axis_cells[a].begin() + count, ku) == axis_cells[a].begin() + count)
          axis_cells[a][count++] = ku;
      }
      axis_count[a] = count;
    }
    for (std::size_t iz = 0; iz < axis_count[2]; ++iz)
      for (std::size_t iy = 0; iy < axis_count[1]; ++iy)
        for (std::size_t ix = 0; ix < axis_count[0]; ++ix)
          for (std::uint32_t item : cell_items(cell_index({axis_cells[0][ix], axis_cells[1][iy], axis_cells[2][iz]})))
            visit(item);
  }

  const std::array<std::size_t, 3>& dims() const { return dims_; }

 private:
  Region region_;
  std::array<std::size_t, 3> dims_{};
  std::array<double, 3> width_{};
  std::vector<std::uint32_t> start_;
  std::vector<std::uint32_t> items_;
};

}  // namespace rsn
