#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>

namespace rsn {

// Real branches of the Lambert W function: W0 (principal, W >= -1) and W-1 (lower, W <= -1).
enum class WBranch { principal, lower };

inline std::string_view to_string(WBranch b) { return b == WBranch::principal ? "principal" : "lower"; }

namespace detail {

inline constexpr double kInvE = 0.36787944117144232159552377016146087;  // 1/e
inline constexpr double kLambertTolerance = 1e-12;

inline bool near_branch_point(double z) { return z <= kInvE * (-1.0 + 1e-15); }

// -1 + p - p^2/3 + 11/72 p^3 - 43/540 p^4, p = +-sqrt(2(1 + e z)); sign picks the branch.
inline double branch_point_series(double z, double sign) {
  const double q = std::max(0.0, 2.0 * (1.0 + std::numbers::e * z));
  const double p = sign * std::sqrt(q);
  return -1.0 + p * (1.0 + p * (-1.0 / 3.0 + p * (11.0 / 72.0 + p * (-43.0 / 540.0))));
}

double initial_guess(WBranch branch, double z);

inline double residual(double w, double z) { return w * std::exp(w) - z; }

inline bool accept(double w, double z) {
  return std::abs(residual(w, z)) <= kLambertTolerance * std::max(1.0, std::abs(z));
}

// w e^w is increasing on [-1, inf) and decreasing on (-inf, -1].
double bisect(WBranch branch, double z);

}  // namespace detail

// Solves w e^w = z on the requested real branch. Halley iteration from a
// branch-specific start, falling back to bisection if it misbehaves.
double lambert_w(WBranch branch, double z);

// -ell / W_branch(-ell / (e (1 + ell))): the degree/coverage coefficient multiplying ln n.
inline double w_ratio(WBranch branch, double ell) {
  if (!(ell > 0.0) || !std::isfinite(ell)) throw std::domain_error("w_ratio needs ell > 0");
  const double arg = -ell / (std::numbers::e * (1.0 + ell));
  return -ell / lambert_w(branch, arg);
}

// e^{-y} sum_{i=0}^{x} y^i / i!, i.e. Q(x + 1, y) for integer shape.
double phi(long long x, double y);

}  // namespace rsn
