#include "rsn/analytic.hpp"

namespace rsn::analytic {

double regime_ball_mean(std::size_t n, const RegimeParams& regime, RegimeMode mode) {
  if (n < 3) throw std::invalid_argument("regime formulas need n >= 3");
  const double ln = detail::log_n(n);
  switch (mode) {
    case RegimeMode::fixed_ell: {
      const double ell = detail::require(regime.ell, "ell");
      const double omega = detail::require(regime.omega, "omega");
      if (!(omega > 0.0)) throw std::domain_error("fixed_ell regime needs omega > 0");
      return ln + ell * std::log(ln) + omega;
    }
    case RegimeMode::growing_c:
      return ln + detail::require(regime.c, "c") * std::log(ln);
    case RegimeMode::linear_ell:
      return (1.0 + detail::require(regime.ell, "ell")) * ln;
    case RegimeMode::super_c:
      return detail::require(regime.c, "c") * ln;
  }
  throw std::invalid_argument("unknown regime mode");
}

DegreeBounds degree_bounds(std::size_t n, const RegimeParams& regime, RegimeMode mode,
                           double super_slack) {
  if (n < 3) throw std::invalid_argument("degree_bounds needs n >= 3");
  const double ln = detail::log_n(n);
  DegreeBounds b;
  switch (mode) {
    case RegimeMode::fixed_ell:
      b = {detail::require(regime.ell, "ell") + 1.0, std::numbers::e * ln};
      break;
    case RegimeMode::growing_c:
      b = {detail::require(regime.c, "c"), std::numbers::e * ln};
      break;
    case RegimeMode::linear_ell: {
      const double ell = detail::require(regime.ell, "ell");
      if (!(ell > 0.0)) throw std::domain_error("linear_ell bounds need ell > 0");
      b = {w_ratio(WBranch::lower, ell) * ln, w_ratio(WBranch::principal, ell) * ln};
      break;
    }
    case RegimeMode::super_c: {
      const double c = detail::require(regime.c, "c");
      if (!(super_slack >= 0.0 && super_slack < 1.0)) throw std::invalid_argument("slack must be in [0,1)");
      b = {c * ln * (1.0 - super_slack), c * ln * (1.0 + super_slack)};
      break;
    }
  }
  if (!(b.lower >= 0.0) || !(b.lower <= b.upper))
    throw std::domain_error("degree bounds cross at this n; regime not meaningful");
  return b;
}

ProtocolConstants protocol_constants(std::size_t n, double volume, double r,
                                     EllConvention convention) {
  const double ell = protocol_ell(n, volume, r, convention);
  if (!(ell > 0.0)) throw std::domain_error("protocol constants need ell > 0 (radius at or below threshold)");
  const double ln = detail::log_n(n);
  const double w0 = lambert_w(WBranch::principal, -ell / (std::numbers::e * (1.0 + ell)));
  ProtocolConstants k;
  k.ell = ell;
  k.delta_cap = -ell * ln / w0;
  k.c_ell = 2.0 * std::exp(2.0 * w0);
  k.d_ell = -24.0 * ell / w0;
  return k;
}

}  // namespace rsn::analytic
