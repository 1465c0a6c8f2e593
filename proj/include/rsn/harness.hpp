#pragma once

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "rsn/analytic.hpp"
#include "rsn/coverage.hpp"
#include "rsn/geometry.hpp"
#include "rsn/protocol.hpp"
#include "rsn/rgg.hpp"

// Monte Carlo experiment runner pairing every empirical statistic with its
// closed-form prediction.
namespace rsn::harness {

enum class ExperimentKind { connectivity_sweep, degree_check, coverage_check, diameter_check, exchange_id, assign_code };

std::string_view to_string(ExperimentKind k);

inline ExperimentKind parse_kind(std::string_view s) {
  for (auto k : {ExperimentKind::connectivity_sweep, ExperimentKind::degree_check, ExperimentKind::coverage_check,
                 ExperimentKind::diameter_check, ExperimentKind::exchange_id, ExperimentKind::assign_code})
    if (to_string(k) == s) return k;
  throw std::invalid_argument("unknown experiment kind: " + std::string(s));
}

// Which degree bound(s) a degree_check trial must meet.
enum class BoundCheck { lower, upper, both };

inline BoundCheck parse_bound_check(std::string_view s) {
  if (s == "lower") return BoundCheck::lower;
  if (s == "upper") return BoundCheck::upper;
  if (s == "both") return BoundCheck::both;
  throw std::invalid_argument("unknown bound check: " + std::string(s));
}

inline std::string_view to_string(BoundCheck b) {
  return b == BoundCheck::lower ? "lower" : (b == BoundCheck::upper ? "upper" : "both");
}

inline constexpr std::size_t kGeneralScaleGuard = 100000;

struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::connectivity_sweep;
  std::size_t n = 1000;
  double density = 1.0;                  // region is the cube holding n nodes at this density
  std::optional<double> region_side;     // fixes the cube side instead (density then follows n)
  BoundaryMode boundary = BoundaryMode::hard;
  std::string sweep_name = "omega";      // omega | ell | c | n | k
  std::vector<double> sweep_values{0.0};
  std::size_t trials = 1;
  std::uint64_t seed_base = 1;

  // Parameters read by the individual kinds; the swept one is overwritten per row.
  double omega = 0.0;
  double ell = 0.5;
  double c = 2.0;
  std::uint32_t k = 1;
  analytic::RegimeMode mode = analytic::RegimeMode::linear_ell;
  std::string coverage_range = "sense";  // "sense" (critical sensing range) or "regime"
  double grid_divisor = kDefaultGridDivisor;
  BoundCheck bound_check = BoundCheck::both;
  double lower_slack = 0.9;
  double upper_slack = 1.1;
  double super_slack = analytic::kDefaultSuperSlack;
  analytic::EllConvention ell_convention = analytic::EllConvention::verbatim;
  protocol::AckMode ack_mode = protocol::AckMode::idealized;
  protocol::DeltaSource delta_source = protocol::DeltaSource::predicted;
  std::size_t diameter_guard = kExactDiameterGuard;
  bool unsafe_scale = false;
  std::optional<double> check_threshold;  // minimum success fraction for --check
  std::size_t workers = 0;                // 0 = hardware concurrency

  void validate() const {
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    if (sweep_values.empty()) throw std::invalid_argument("swept values must be nonempty");
    static const std::vector<std::string> names{"omega", "ell", "c", "n", "k"};
    if (std::find(names.begin(), names.end(), sweep_name) == names.end())
      throw std::invalid_argument("cannot sweep parameter '" + sweep_name + "'");
    if (!(density > 0.0)) throw std::invalid_argument("density must be > 0");
    if (coverage_range != "sense" && coverage_range != "regime")
      throw std::invalid_argument("coverage_range must be 'sense' or 'regime'");
  }
};

struct ResultRow {
  std::string kind;
  std::string parameter;
  double value = 0.0;
  std::size_t trials = 0;
  std::size_t valid_trials = 0;  // trials the statistic is conditioned on (e.g. connected ones)
  double mean = 0.0;
  double stddev = 0.0;
  double success_fraction = 0.0;
  double theory = 0.0;
  double theory_upper = std::numeric_limits<double>::quiet_NaN();
  double wall_time = 0.0;  // seconds; summary only, never written to CSV
};

namespace detail {

struct TrialOutcome {
  double statistic = 0.0;
  bool success = false;
  bool valid = true;
};

// One swept point with all derived quantities resolved.
struct Point {
  ExperimentSpec spec;
  Region region = Region::cube(1.0);
  double radius = 0.0;
  double theory = 0.0;
  double theory_upper = std::numeric_limits<double>::quiet_NaN();
  std::optional<analytic::DegreeBounds> bounds;
  std::optional<analytic::ProtocolConstants> constants;
};

inline analytic::RegimeParams regime_of(const ExperimentSpec& s) {
  analytic::RegimeParams p;
  p.omega = s.omega;
  p.ell = s.ell;
  p.c = s.c;
  return p;
}

Point resolve_point(const ExperimentSpec& base, double value);

inline ReachabilityGraph trial_graph(const Point& pt, std::uint64_t seed) {
  DeploymentConfig cfg{pt.spec.n, pt.region, derive_seed(seed, 0), pt.radius, pt.radius};
  return build_graph(sample_uniform(cfg), pt.radius, pt.region);
}

TrialOutcome run_trial(const Point& pt, std::uint64_t seed);

}  // namespace detail

// Runs `count` independent jobs across a worker pool; results land by index so
// the reduction order never depends on scheduling.
template <typename Result, typename Job>
std::vector<Result> parallel_trials(std::size_t count, std::size_t workers, Job&& job) {
  std::vector<Result> results(count);
  if (workers == 0) workers = default_worker_count();
  workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(count, 1));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t t = next++; t < count; t = next++) results[t] = job(t);
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  return results;
}

inline std::uint64_t trial_seed(std::uint64_t seed_base, std::size_t trial) { return seed_base ^ trial; }

std::vector<ResultRow> run_experiment(const ExperimentSpec& spec);

// ---- CSV -------------------------------------------------------------------

inline const char* kCsvHeader = "kind,parameter,value,trials,valid_trials,mean,std,success_fraction,theory,theory_upper";

namespace detail {

inline std::string format_number(double v) {
  if (std::isnan(v)) return "";
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) {
    if (ch == '"') q += '"';
    q += ch;
  }
  return q + '"';
}

std::vector<std::string> split_csv_line(const std::string& line);

inline double parse_number(const std::string& s) {
  if (s.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw std::runtime_error("csv: bad number '" + s + "'");
  return v;
}

}  // namespace detail

inline void write_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
  out << kCsvHeader << "\r\n";
  for (const auto& r : rows) {
    out << detail::csv_field(r.kind) << ',' << detail::csv_field(r.parameter) << ',' << detail::format_number(r.value)
        << ',' << r.trials << ',' << r.valid_trials << ',' << detail::format_number(r.mean) << ','
        << detail::format_number(r.stddev) << ',' << detail::format_number(r.success_fraction) << ','
        << detail::format_number(r.theory) << ',' << detail::format_number(r.theory_upper) << "\r\n";
  }
}

inline void emit_csv(const std::vector<ResultRow>& rows, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  write_csv(out, rows);
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<ResultRow> read_csv(std::istream& in);

void emit_summary(std::ostream& out, const std::vector<ResultRow>& rows);

// ---- JSON config -------------------------------------------------------------

ExperimentSpec spec_from_json(const nlohmann::json& j);

nlohmann::json spec_to_json(const ExperimentSpec& s);

// True iff every row meets the threshold.
inline bool passes_check(const std::vector<ResultRow>& rows, double threshold) {
  for (const auto& r : rows)
    if (r.success_fraction < threshold) return false;
  return true;
}

}  // namespace rsn::harness
