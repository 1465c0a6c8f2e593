#include "rsn/geometry.hpp"

namespace rsn {

std::vector<Point3> sample_uniform(const DeploymentConfig& config) {
  config.validate();
  Rng rng(config.rng_seed);
  const auto& s = config.region.sides();
  std::vector<Point3> points;
  points.reserve(config.n);
  for (std::size_t i = 0; i < config.n; ++i) {
    const double x = rng.uniform(0.0, s[0]);
    const double y = rng.uniform(0.0, s[1]);
    const double z = rng.uniform(0.0, s[2]);
    points.push_back({x, y, z});
  }
  return points;
}

}  // namespace rsn
