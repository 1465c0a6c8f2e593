#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace rsn {

struct Point3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double operator[](std::size_t axis) const { return axis == 0 ? x : (axis == 1 ? y : z); }
  friend bool operator==(const Point3&, const Point3&) = default;
};

enum class BoundaryMode { hard, toroidal };

inline std::string_view to_string(BoundaryMode mode) {
  return mode == BoundaryMode::hard ? "hard" : "toroidal";
}

inline BoundaryMode parse_boundary(std::string_view s) {
  if (s == "hard") return BoundaryMode::hard;
  if (s == "toroidal" || s == "torus") return BoundaryMode::toroidal;
  throw std::invalid_argument("unknown boundary mode: " + std::string(s));
}

// Axis-aligned box anchored at the origin. A cube is a box with equal sides.
class Region {
 public:
  static Region cube(double side, BoundaryMode mode = BoundaryMode::hard) {
    return Region({side, side, side}, mode);
  }
  static Region box(double lx, double ly, double lz, BoundaryMode mode = BoundaryMode::hard) {
    return Region({lx, ly, lz}, mode);
  }
  // Cube holding n nodes at density rho.
  static Region cube_for_density(std::size_t n, double rho, BoundaryMode mode = BoundaryMode::hard) {
    if (!(rho > 0.0) || !std::isfinite(rho)) throw std::invalid_argument("density must be positive");
    return cube(std::cbrt(static_cast<double>(n) / rho), mode);
  }

  const std::array<double, 3>& sides() const { return sides_; }
  double side(std::size_t axis) const { return sides_[axis]; }
  BoundaryMode boundary() const { return mode_; }
  bool is_cube() const { return sides_[0] == sides_[1] && sides_[1] == sides_[2]; }
  double volume() const { return sides_[0] * sides_[1] * sides_[2]; }
  double diagonal() const { return std::hypot(sides_[0], sides_[1], sides_[2]); }

  bool contains(const Point3& p) const {
    for (std::size_t a = 0; a < 3; ++a)
      if (!(p[a] >= 0.0 && p[a] <= sides_[a])) return false;
    return true;
  }

  Region with_boundary(BoundaryMode mode) const { return Region(sides_, mode); }

 private:
  Region(std::array<double, 3> sides, BoundaryMode mode) : sides_(sides), mode_(mode) {
    for (double s : sides_)
      if (!(s > 0.0) || !std::isfinite(s)) throw std::invalid_argument("region sides must be finite and > 0");
  }

  std::array<double, 3> sides_;
  BoundaryMode mode_;
};

struct DeploymentConfig {
  std::size_t n = 1;
  Region region = Region::cube(1.0);
  std::uint64_t rng_seed = 0;
  double r_trans = 0.0;
  double r_sense = 0.0;

  double density() const { return static_cast<double>(n) / region.volume(); }

  void validate() const {
    if (n < 1) throw std::invalid_argument("deployment needs n >= 1");
    const double rho = density();
    if (!std::isfinite(rho) || !(rho > 0.0)) throw std::invalid_argument("density must be finite and > 0");
    if (!(r_trans >= 0.0) || !(r_sense >= 0.0)) throw std::invalid_argument("radii must be >= 0");
  }
};

// mt19937_64 with hand-rolled variate generation. The standard distributions
// are implementation-defined, so they would break cross-platform replay.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(mix(seed)) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  bool bernoulli(double p) { return uniform() < p; }

  // Uniform integer in [0, bound), Lemire's multiply-shift with rejection.
  std::uint64_t below(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("Rng::below needs bound > 0");
    unsigned __int128 m = static_cast<unsigned __int128>(engine_()) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        m = static_cast<unsigned __int128>(engine_()) * bound;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  // splitmix64 finalizer; decorrelates consecutive seeds before they reach the engine.
  static std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

 private:
  std::mt19937_64 engine_;
};

// Independent sub-stream for one stochastic stage of an experiment.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return Rng::mix(seed ^ Rng::mix(stream + 0x632be59bd9b4e019ULL));
}

std::vector<Point3> sample_uniform(const DeploymentConfig& config);

// Per-axis separation, folded to the nearest periodic image under toroidal mode.
inline double axis_delta(double a, double b, double side, BoundaryMode mode) {
  double d = std::abs(a - b);
  if (mode == BoundaryMode::toroidal && d > 0.5 * side) d = side - d;
  return d;
}

inline double distance_squared(const Point3& a, const Point3& b, const Region& region) {
  const double dx = axis_delta(a.x, b.x, region.side(0), region.boundary());
  const double dy = axis_delta(a.y, b.y, region.side(1), region.boundary());
  const double dz = axis_delta(a.z, b.z, region.side(2), region.boundary());
  return dx * dx + dy * dy + dz * dz;
}

inline double distance(const Point3& a, const Point3& b, const Region& region) {
  return std::sqrt(distance_squared(a, b, region));
}

// Volume of the intersection of two radius-r balls whose centres are r apart.
inline double lens_volume(double r) {
  if (!(r > 0.0) || !std::isfinite(r)) throw std::invalid_argument("lens_volume needs r > 0");
  return 5.0 * std::numbers::pi * r * r * r / 12.0;
}

}  // namespace rsn
