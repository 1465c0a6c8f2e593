#include "rsn/specfun.hpp"

namespace rsn {

namespace detail {

double initial_guess(WBranch branch, double z) {
  if (z < -0.25) return branch_point_series(z, branch == WBranch::principal ? 1.0 : -1.0);
  if (branch == WBranch::principal) {
    if (z < 3.0) {
      const double l = std::log1p(z);
      return l * (1.0 - std::log1p(l) / (2.0 + l));
    }
    const double l1 = std::log(z);
    const double l2 = std::log(l1);
    return l1 - l2 + l2 / l1;
  }
  const double l1 = std::log(-z);
  const double l2 = std::log(-l1);
  return l1 - l2 + l2 / l1;
}

double bisect(WBranch branch, double z) {
  double lo, hi;
  if (branch == WBranch::principal) {
    lo = -1.0;
    hi = std::max(0.0, std::log1p(z)) + 1.0;
  } else {
    lo = 2.0 * std::log(-z) - 2.0;
    hi = -1.0;
  }
  for (int i = 0; i < 400 && hi - lo > 0.0; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    const bool below = residual(mid, z) < 0.0;
    // Principal: residual increases with w. Lower: residual decreases with w.
    if ((branch == WBranch::principal) == below)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace detail

double lambert_w(WBranch branch, double z) {
  using namespace detail;
  if (std::isnan(z)) throw std::domain_error("lambert_w: NaN argument");
  if (z < -kInvE * (1.0 + 1e-15))
    throw std::domain_error("lambert_w: argument below -1/e: " + std::to_string(z));
  if (branch == WBranch::lower && z >= 0.0)
    throw std::domain_error("lambert_w: lower branch needs z < 0");
  if (std::isinf(z)) return z;
  if (z == 0.0) return 0.0;
  if (near_branch_point(z)) return -1.0;

  double w = initial_guess(branch, z);
  for (int it = 0; it < 64; ++it) {
    const double ew = std::exp(w);
    const double f = w * ew - z;
    const double wp1 = w + 1.0;
    if (wp1 == 0.0) break;
    const double denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
    if (denom == 0.0 || !std::isfinite(denom)) break;
    const double step = f / denom;
    w -= step;
    if (std::abs(step) <= 4.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(w))) break;
  }
  const bool on_branch = branch == WBranch::principal ? w >= -1.0 : w <= -1.0;
  if (std::isfinite(w) && on_branch && accept(w, z)) return w;
  return bisect(branch, z);
}

double phi(long long x, double y) {
  if (x < 0) throw std::domain_error("phi: x must be >= 0");
  if (!(y >= 0.0) || !std::isfinite(y)) throw std::domain_error("phi: y must be finite and >= 0");
  if (y == 0.0) return 1.0;

  // Terms ascend up to the mode near y, so the sum is accumulated smallest-first
  // with Neumaier compensation. Past the mode, terms that can no longer change the
  // sum are dropped.
  double sum = 0.0;
  double comp = 0.0;
  auto add = [&](double t) {
    const double s = sum + t;
    if (std::abs(sum) >= std::abs(t))
      comp += (sum - s) + t;
    else
      comp += (t - s) + sum;
    sum = s;
  };

  constexpr double kDirectLimit = 700.0;  // e^{-y} stays a normal double below this
  if (y <= kDirectLimit) {
    double term = std::exp(-y);
    add(term);
    for (long long i = 1; i <= x; ++i) {
      term *= y / static_cast<double>(i);
      add(term);
      if (static_cast<double>(i) > y && term < 1e-18 * sum) break;
    }
  } else {
    const double ly = std::log(y);
    for (long long i = 0; i <= x; ++i) {
      const double di = static_cast<double>(i);
      const double t = std::exp(-y + di * ly - std::lgamma(di + 1.0));
      add(t);
      if (di > y && t < 1e-18 * sum) break;
    }
  }
  const double result = sum + comp;
  return std::min(1.0, std::max(0.0, result));
}

}  // namespace rsn
