#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "rsn/specfun.hpp"

// Closed-form predictors for random 3D sensor deployments. Every formula is
// evaluated at the concrete n passed in; nothing here takes a limit.
namespace rsn::analytic {

// Tunable asymptotic knobs evaluated at a concrete n. Only the fields a given
// formula needs have to be set.
struct RegimeParams {
  std::optional<double> omega{};
  std::optional<double> c{};
  std::optional<double> ell{};
  std::optional<double> lambda{};
};

// Which clause of the multiple-coverage / degree theorems a regime follows:
//   fixed_ell:  4/3 pi rho R^3 = ln n + ell ln ln n + omega
//   growing_c:  4/3 pi rho R^3 = ln n + c ln ln n
//   linear_ell: 4/3 pi rho R^3 = (1 + ell) ln n
//   super_c:    4/3 pi rho R^3 = c ln n
enum class RegimeMode { fixed_ell, growing_c, linear_ell, super_c };

inline std::string_view to_string(RegimeMode m) {
  switch (m) {
    case RegimeMode::fixed_ell: return "fixed_ell";
    case RegimeMode::growing_c: return "growing_c";
    case RegimeMode::linear_ell: return "linear_ell";
    case RegimeMode::super_c: return "super_c";
  }
  return "?";
}

inline RegimeMode parse_regime_mode(std::string_view s) {
  if (s == "fixed_ell" || s == "i") return RegimeMode::fixed_ell;
  if (s == "growing_c" || s == "ii") return RegimeMode::growing_c;
  if (s == "linear_ell" || s == "iii") return RegimeMode::linear_ell;
  if (s == "super_c" || s == "iv") return RegimeMode::super_c;
  throw std::invalid_argument("unknown regime mode: " + std::string(s));
}

struct DegreeBounds {
  double lower = 0.0;
  double upper = 0.0;
};

struct ProtocolConstants {
  double ell = 0.0;
  double delta_cap = 0.0;  // predicted max degree
  double c_ell = 0.0;      // ExchangeID round multiplier
  double d_ell = 0.0;      // AssignCode round multiplier
};

// How the protocols' "compute ell" step maps a radius to ell.
//   verbatim: R * cbrt(4 pi n / (3 ln n V)) = 1 + ell  (radius ratio)
//   cubed:    4 pi n R^3 / (3 ln n V)       = 1 + ell  (volume ratio, matches the regime ratio)
enum class EllConvention { verbatim, cubed };

inline std::string_view to_string(EllConvention c) { return c == EllConvention::verbatim ? "verbatim" : "cubed"; }

inline EllConvention parse_ell_convention(std::string_view s) {
  if (s == "verbatim") return EllConvention::verbatim;
  if (s == "cubed") return EllConvention::cubed;
  throw std::invalid_argument("unknown ell convention: " + std::string(s));
}

enum class Regime { subcritical, critical, supercritical };

inline std::string_view to_string(Regime r) {
  switch (r) {
    case Regime::subcritical: return "subcritical";
    case Regime::critical: return "critical";
    case Regime::supercritical: return "supercritical";
  }
  return "?";
}

struct RegimeClass {
  Regime regime = Regime::critical;
  double lambda = 1.0;
};

namespace detail {

inline double log_n(std::size_t n) { return std::log(static_cast<double>(n)); }

inline void require_volume(double volume) {
  if (!(volume > 0.0) || !std::isfinite(volume)) throw std::invalid_argument("volume must be finite and > 0");
}

// Radius whose ball holds `mean` expected neighbours: 4/3 pi (n/V) R^3 = mean.
inline double radius_for_mean(std::size_t n, double volume, double mean) {
  if (!(mean > 0.0)) throw std::domain_error("expected ball occupancy must be > 0, got " + std::to_string(mean));
  return std::cbrt(3.0 * mean * volume / (4.0 * std::numbers::pi * static_cast<double>(n)));
}

inline double require(const std::optional<double>& v, const char* name) {
  if (!v) throw std::invalid_argument(std::string("regime field missing: ") + name);
  return *v;
}

}  // namespace detail

// Mean neighbour count 4/3 pi rho r^3.
inline double ball_mean(double rho, double r) { return 4.0 * std::numbers::pi * rho * r * r * r / 3.0; }

inline double critical_trans_range(std::size_t n, double volume, double omega) {
  if (n < 2) throw std::invalid_argument("critical_trans_range needs n >= 2");
  detail::require_volume(volume);
  return detail::radius_for_mean(n, volume, detail::log_n(n) + omega);
}

// Leading term exp(-e^{-omega}) of the no-isolated-node probability.
inline double prob_no_isolated(std::size_t n, double omega) {
  if (n < 2) throw std::invalid_argument("prob_no_isolated needs n >= 2");
  return std::exp(-std::exp(-omega));
}

inline double poisson_degree_pmf(double rho, double r, long long k) {
  if (!(rho > 0.0)) throw std::invalid_argument("poisson_degree_pmf needs rho > 0");
  if (!(r >= 0.0)) throw std::invalid_argument("poisson_degree_pmf needs r >= 0");
  if (k < 0) return 0.0;
  const double mu = ball_mean(rho, r);
  if (mu == 0.0) return k == 0 ? 1.0 : 0.0;
  const double kd = static_cast<double>(k);
  return std::exp(kd * std::log(mu) - mu - std::lgamma(kd + 1.0));
}

inline double critical_sense_range(std::size_t n, double volume, double omega) {
  if (n < 3) throw std::invalid_argument("critical_sense_range needs n >= 3");
  detail::require_volume(volume);
  const double ln = detail::log_n(n);
  return detail::radius_for_mean(n, volume, ln + std::log(ln) + omega);
}

// Target value of 4/3 pi rho R^3 for a regime.
double regime_ball_mean(std::size_t n, const RegimeParams& regime, RegimeMode mode);

inline double k_coverage_range(std::size_t n, double volume, const RegimeParams& regime, RegimeMode mode) {
  detail::require_volume(volume);
  return detail::radius_for_mean(n, volume, regime_ball_mean(n, regime, mode));
}

inline constexpr double kDefaultSuperSlack = 0.1;

DegreeBounds degree_bounds(std::size_t n, const RegimeParams& regime, RegimeMode mode,
                           double super_slack = kDefaultSuperSlack);

// Asymptotic Pr[every point covered by >= j spheres]. j = 0 is certain.
inline double miles_lower_coverage_prob(long long j, double rho, double volume, double r) {
  if (j < 0) throw std::invalid_argument("miles_lower_coverage_prob needs j >= 0");
  if (j == 0) return 1.0;
  if (!(rho > 0.0) || !(volume > 0.0) || !(r > 0.0))
    throw std::invalid_argument("miles_lower_coverage_prob needs rho, V, r > 0");
  const double jd = static_cast<double>(j);
  const double pi2 = std::numbers::pi * std::numbers::pi;
  return std::exp(-(3.0 * rho * pi2 / 32.0) * jd * (jd + 1.0) * volume * phi(j + 1, ball_mean(rho, r)));
}

// f(l, rho, V) of the upper-coverage law.
inline double miles_f(long long l, double rho, double volume) {
  const double lm1 = static_cast<double>(l - 1);
  const double pi2 = std::numbers::pi * std::numbers::pi;
  return rho * (4.0 + 3.0 / 8.0 * (pi2 + 16.0) * lm1 + 3.0 * pi2 / 32.0 * lm1 * (lm1 - 1.0)) * volume;
}

// Asymptotic Pr[no point covered by more than l spheres].
inline double miles_upper_coverage_prob(long long l, double rho, double volume, double r) {
  if (l < 1) throw std::invalid_argument("miles_upper_coverage_prob needs l >= 1");
  if (!(rho > 0.0) || !(volume > 0.0) || !(r >= 0.0))
    throw std::invalid_argument("miles_upper_coverage_prob needs rho, V > 0 and r >= 0");
  return std::exp(-miles_f(l, rho, volume) * (1.0 - phi(l - 1, ball_mean(rho, r))));
}

inline constexpr double kDiameterEllFloor = 11.0 / 5.0;

// 12 cbrt(pi n / (6 (1 + ell) ln n)); only proven for ell > 11/5.
inline double diameter_bound(std::size_t n, double ell) {
  if (n < 3) throw std::invalid_argument("diameter_bound needs n >= 3");
  if (!(ell > kDiameterEllFloor)) throw std::domain_error("diameter_bound needs ell > 11/5");
  const double nd = static_cast<double>(n);
  return 12.0 * std::cbrt(std::numbers::pi * nd / (6.0 * (1.0 + ell) * std::log(nd)));
}

inline constexpr double kRegimeTieTolerance = 1e-9;

inline double regime_lambda(std::size_t n, double volume, double r) {
  if (n < 3) throw std::invalid_argument("regime ratio needs n >= 3");
  detail::require_volume(volume);
  const double nd = static_cast<double>(n);
  return 4.0 * std::numbers::pi * nd * r * r * r / (3.0 * volume * std::log(nd));
}

inline RegimeClass classify_regime(std::size_t n, double volume, double r) {
  const double lambda = regime_lambda(n, volume, r);
  Regime regime = Regime::critical;
  if (lambda < 1.0 - kRegimeTieTolerance)
    regime = Regime::subcritical;
  else if (lambda > 1.0 + kRegimeTieTolerance)
    regime = Regime::supercritical;
  return {regime, lambda};
}

inline double protocol_ell(std::size_t n, double volume, double r, EllConvention convention) {
  if (n < 3) throw std::invalid_argument("protocol constants need n >= 3");
  detail::require_volume(volume);
  const double nd = static_cast<double>(n);
  const double scale = 4.0 * std::numbers::pi * nd / (3.0 * std::log(nd) * volume);
  if (convention == EllConvention::verbatim) return r * std::cbrt(scale) - 1.0;
  return r * r * r * scale - 1.0;
}

// Inverse of protocol_ell.
inline double radius_for_protocol_ell(std::size_t n, double volume, double ell, EllConvention convention) {
  if (n < 3) throw std::invalid_argument("protocol constants need n >= 3");
  detail::require_volume(volume);
  const double ln = detail::log_n(n);
  if (convention == EllConvention::verbatim) return (1.0 + ell) * detail::radius_for_mean(n, volume, ln);
  return detail::radius_for_mean(n, volume, (1.0 + ell) * ln);
}

ProtocolConstants protocol_constants(std::size_t n, double volume, double r,
                                     EllConvention convention = EllConvention::verbatim);

}  // namespace rsn::analytic
