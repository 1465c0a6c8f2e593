#include "rsn/harness.hpp"

namespace rsn::harness {

std::string_view to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::connectivity_sweep: return "connectivity_sweep";
    case ExperimentKind::degree_check: return "degree_check";
    case ExperimentKind::coverage_check: return "coverage_check";
    case ExperimentKind::diameter_check: return "diameter_check";
    case ExperimentKind::exchange_id: return "exchange_id";
    case ExperimentKind::assign_code: return "assign_code";
  }
  return "?";
}

namespace detail {

Point resolve_point(const ExperimentSpec& base, double value) {
  Point pt;
  pt.spec = base;
  ExperimentSpec& s = pt.spec;
  if (s.sweep_name == "omega") s.omega = value;
  else if (s.sweep_name == "ell") s.ell = value;
  else if (s.sweep_name == "c") s.c = value;
  else if (s.sweep_name == "k") s.k = static_cast<std::uint32_t>(std::llround(value));
  else if (s.sweep_name == "n") s.n = static_cast<std::size_t>(std::llround(value));

  if (s.n < 3) throw std::invalid_argument("experiments need n >= 3");
  if (!s.unsafe_scale && s.n > kGeneralScaleGuard)
    throw std::invalid_argument("n exceeds the desk-scale guard; pass unsafe_scale to override");
  pt.region = s.region_side ? Region::cube(*s.region_side, s.boundary)
                            : Region::cube_for_density(s.n, s.density, s.boundary);
  const double volume = pt.region.volume();
  const double rho = static_cast<double>(s.n) / volume;

  switch (s.kind) {
    case ExperimentKind::connectivity_sweep:
      pt.radius = analytic::critical_trans_range(s.n, volume, s.omega);
      pt.theory = analytic::prob_no_isolated(s.n, s.omega);
      break;
    case ExperimentKind::degree_check:
      pt.radius = analytic::k_coverage_range(s.n, volume, regime_of(s), s.mode);
      pt.bounds = analytic::degree_bounds(s.n, regime_of(s), s.mode, s.super_slack);
      pt.theory = pt.bounds->lower;
      pt.theory_upper = pt.bounds->upper;
      break;
    case ExperimentKind::coverage_check:
      pt.radius = s.coverage_range == "sense" ? analytic::critical_sense_range(s.n, volume, s.omega)
                                              : analytic::k_coverage_range(s.n, volume, regime_of(s), s.mode);
      pt.theory = analytic::miles_lower_coverage_prob(s.k, rho, volume, pt.radius);
      break;
    case ExperimentKind::diameter_check:
      if (!s.unsafe_scale && s.n > s.diameter_guard)
        throw std::invalid_argument("n exceeds the exact-diameter guard; pass unsafe_scale to override");
      pt.radius = analytic::k_coverage_range(s.n, volume, {.ell = s.ell}, analytic::RegimeMode::linear_ell);
      pt.theory = analytic::diameter_bound(s.n, s.ell);
      break;
    case ExperimentKind::exchange_id:
    case ExperimentKind::assign_code:
      pt.radius = analytic::radius_for_protocol_ell(s.n, volume, s.ell, s.ell_convention);
      pt.constants = analytic::protocol_constants(s.n, volume, pt.radius, s.ell_convention);
      pt.theory = 1.0;
      break;
  }
  return pt;
}

TrialOutcome run_trial(const Point& pt, std::uint64_t seed) {
  const ExperimentSpec& s = pt.spec;
  TrialOutcome out;
  switch (s.kind) {
    case ExperimentKind::connectivity_sweep: {
      const auto g = trial_graph(pt, seed);
      out.statistic = static_cast<double>(degree_stats(g).isolated_count);
      out.success = connectivity(g).is_connected;
      break;
    }
    case ExperimentKind::degree_check: {
      const auto ds = degree_stats(trial_graph(pt, seed));
      out.statistic = ds.mean;
      const bool lower_ok = static_cast<double>(ds.min_degree) >= s.lower_slack * pt.bounds->lower;
      const bool upper_ok = static_cast<double>(ds.max_degree) <= s.upper_slack * pt.bounds->upper;
      out.success = s.bound_check == BoundCheck::lower   ? lower_ok
                    : s.bound_check == BoundCheck::upper ? upper_ok
                                                         : lower_ok && upper_ok;
      break;
    }
    case ExperimentKind::coverage_check: {
      DeploymentConfig cfg{s.n, pt.region, derive_seed(seed, 0), 0.0, pt.radius};
      const auto positions = sample_uniform(cfg);
      const CoverageGrid grid(pt.region, pt.radius / s.grid_divisor);
      const auto cov = cover_counts(positions, pt.radius, grid);
      out.statistic = cov.report.n_minus;
      out.success = is_k_covered(cov.report, s.k);
      break;
    }
    case ExperimentKind::diameter_check: {
      const auto g = trial_graph(pt, seed);
      const auto d = hop_diameter(g, DiameterMethod::exact, s.unsafe_scale ? g.size() : s.diameter_guard, 1);
      out.valid = d.hop_diameter != kInfiniteHops;
      out.statistic = out.valid ? static_cast<double>(d.hop_diameter) : 0.0;
      out.success = out.valid && static_cast<double>(d.hop_diameter) <= pt.theory;
      break;
    }
    case ExperimentKind::exchange_id: {
      protocol::RadioNetwork net(trial_graph(pt, seed));
      const auto r = protocol::exchange_id(net, *pt.constants, derive_seed(seed, 1));
      out.statistic = static_cast<double>(r.table.missing_arcs(net));
      out.success = out.statistic == 0.0;
      break;
    }
    case ExperimentKind::assign_code: {
      protocol::RadioNetwork net(trial_graph(pt, seed));
      protocol::AssignOptions opt;
      opt.delta_source = s.delta_source;
      const auto r = protocol::assign_code(net, *pt.constants, derive_seed(seed, 2), s.ack_mode, opt);
      const auto verdict = protocol::verify_coloring(net, r.state);
      out.statistic = static_cast<double>(verdict.colors_used);
      out.success = verdict.proper && verdict.uncolored.empty() && r.palette_violations == 0;
      break;
    }
  }
  return out;
}

}  // namespace detail

std::vector<ResultRow> run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  std::vector<ResultRow> rows;
  for (double value : spec.sweep_values) {
    const auto start = std::chrono::steady_clock::now();
    const detail::Point pt = detail::resolve_point(spec, value);
    const auto outcomes = parallel_trials<detail::TrialOutcome>(
        spec.trials, spec.workers, [&](std::size_t t) { return detail::run_trial(pt, trial_seed(spec.seed_base, t)); });

    ResultRow row;
    row.kind = std::string(to_string(spec.kind));
    row.parameter = spec.sweep_name;
    row.value = value;
    row.trials = spec.trials;
    row.theory = pt.theory;
    row.theory_upper = pt.theory_upper;
    double sum = 0.0, sum_sq = 0.0;
    std::size_t successes = 0;
    for (const auto& o : outcomes) {
      if (!o.valid) continue;
      ++row.valid_trials;
      sum += o.statistic;
      sum_sq += o.statistic * o.statistic;
      successes += o.success ? 1 : 0;
    }
    if (row.valid_trials > 0) {
      const double m = static_cast<double>(row.valid_trials);
      row.mean = sum / m;
      row.stddev = row.valid_trials > 1 ? std::sqrt(std::max(0.0, (sum_sq - m * row.mean * row.mean) / (m - 1.0))) : 0.0;
      row.success_fraction = static_cast<double>(successes) / m;
    }
    row.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace detail {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        fields.back() += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      fields.emplace_back();
    } else if (ch != '\r') {
      fields.back() += ch;
    }
  }
  return fields;
}

}  // namespace detail

std::vector<ResultRow> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("csv: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kCsvHeader) throw std::runtime_error("csv: unexpected header");
  std::vector<ResultRow> rows;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    const auto f = detail::split_csv_line(line);
    if (f.size() != 10) throw std::runtime_error("csv: expected 10 fields");
    ResultRow r;
    r.kind = f[0];
    r.parameter = f[1];
    r.value = detail::parse_number(f[2]);
    r.trials = std::stoull(f[3]);
    r.valid_trials = std::stoull(f[4]);
    r.mean = detail::parse_number(f[5]);
    r.stddev = detail::parse_number(f[6]);
    r.success_fraction = detail::parse_number(f[7]);
    r.theory = detail::parse_number(f[8]);
    r.theory_upper = detail::parse_number(f[9]);
    rows.push_back(std::move(r));
  }
  return rows;
}

void emit_summary(std::ostream& out, const std::vector<ResultRow>& rows) {
  out << std::left << std::setw(20) << "kind" << std::right << std::setw(10) << "param" << std::setw(12) << "value"
      << std::setw(8) << "trials" << std::setw(8) << "valid" << std::setw(12) << "mean" << std::setw(11) << "std"
      << std::setw(10) << "success" << std::setw(13) << "theory" << std::setw(13) << "theory_hi" << std::setw(10)
      << "time[s]" << '\n';
  out << std::fixed;
  for (const auto& r : rows) {
    out << std::left << std::setw(20) << r.kind << std::right << std::setw(10) << r.parameter << std::setprecision(4)
        << std::setw(12) << r.value << std::setw(8) << r.trials << std::setw(8) << r.valid_trials << std::setw(12)
        << r.mean << std::setw(11) << r.stddev << std::setw(10) << r.success_fraction << std::setprecision(6)
        << std::setw(13) << r.theory;
    if (std::isnan(r.theory_upper))
      out << std::setw(13) << "-";
    else
      out << std::setw(13) << r.theory_upper;
    out << std::setprecision(2) << std::setw(10) << r.wall_time << '\n';
  }
  out << std::defaultfloat;
}

ExperimentSpec spec_from_json(const nlohmann::json& j) {
  ExperimentSpec s;
  if (!j.contains("kind")) throw std::invalid_argument("config: 'kind' is required");
  s.kind = parse_kind(j.at("kind").get<std::string>());
  if (j.contains("n")) s.n = j.at("n").get<std::size_t>();
  if (j.contains("density")) s.density = j.at("density").get<double>();
  if (j.contains("region_side")) s.region_side = j.at("region_side").get<double>();
  if (j.contains("boundary")) s.boundary = parse_boundary(j.at("boundary").get<std::string>());
  if (j.contains("sweep")) {
    const auto& sw = j.at("sweep");
    s.sweep_name = sw.at("name").get<std::string>();
    s.sweep_values = sw.at("values").get<std::vector<double>>();
  }
  if (j.contains("trials")) s.trials = j.at("trials").get<std::size_t>();
  if (j.contains("seed_base")) s.seed_base = j.at("seed_base").get<std::uint64_t>();
  if (j.contains("omega")) s.omega = j.at("omega").get<double>();
  if (j.contains("ell")) s.ell = j.at("ell").get<double>();
  if (j.contains("c")) s.c = j.at("c").get<double>();
  if (j.contains("k")) s.k = j.at("k").get<std::uint32_t>();
  if (j.contains("mode")) s.mode = analytic::parse_regime_mode(j.at("mode").get<std::string>());
  if (j.contains("coverage_range")) s.coverage_range = j.at("coverage_range").get<std::string>();
  if (j.contains("grid_divisor")) s.grid_divisor = j.at("grid_divisor").get<double>();
  if (j.contains("bound_check")) s.bound_check = parse_bound_check(j.at("bound_check").get<std::string>());
  if (j.contains("lower_slack")) s.lower_slack = j.at("lower_slack").get<double>();
  if (j.contains("upper_slack")) s.upper_slack = j.at("upper_slack").get<double>();
  if (j.contains("super_slack")) s.super_slack = j.at("super_slack").get<double>();
  if (j.contains("ell_convention"))
    s.ell_convention = analytic::parse_ell_convention(j.at("ell_convention").get<std::string>());
  if (j.contains("ack_mode")) s.ack_mode = protocol::parse_ack_mode(j.at("ack_mode").get<std::string>());
  if (j.contains("delta_source")) {
    const auto d = j.at("delta_source").get<std::string>();
    if (d != "predicted" && d != "realized") throw std::invalid_argument("delta_source must be predicted|realized");
    s.delta_source = d == "predicted" ? protocol::DeltaSource::predicted : protocol::DeltaSource::realized;
  }
  if (j.contains("diameter_guard")) s.diameter_guard = j.at("diameter_guard").get<std::size_t>();
  if (j.contains("unsafe_scale")) s.unsafe_scale = j.at("unsafe_scale").get<bool>();
  if (j.contains("check_threshold")) s.check_threshold = j.at("check_threshold").get<double>();
  if (j.contains("workers")) s.workers = j.at("workers").get<std::size_t>();
  s.validate();
  return s;
}

nlohmann::json spec_to_json(const ExperimentSpec& s) {
  nlohmann::json j;
  j["kind"] = std::string(to_string(s.kind));
  j["n"] = s.n;
  j["density"] = s.density;
  if (s.region_side) j["region_side"] = *s.region_side;
  j["boundary"] = std::string(to_string(s.boundary));
  j["sweep"] = {{"name", s.sweep_name}, {"values", s.sweep_values}};
  j["trials"] = s.trials;
  j["seed_base"] = s.seed_base;
  j["omega"] = s.omega;
  j["ell"] = s.ell;
  j["c"] = s.c;
  j["k"] = s.k;
  j["mode"] = std::string(analytic::to_string(s.mode));
  j["coverage_range"] = s.coverage_range;
  j["grid_divisor"] = s.grid_divisor;
  j["bound_check"] = std::string(to_string(s.bound_check));
  j["lower_slack"] = s.lower_slack;
  j["upper_slack"] = s.upper_slack;
  j["super_slack"] = s.super_slack;
  j["ell_convention"] = std::string(analytic::to_string(s.ell_convention));
  j["ack_mode"] = std::string(protocol::to_string(s.ack_mode));
  j["delta_source"] = s.delta_source == protocol::DeltaSource::predicted ? "predicted" : "realized";
  j["diameter_guard"] = s.diameter_guard;
  j["unsafe_scale"] = s.unsafe_scale;
  if (s.check_threshold) j["check_threshold"] = *s.check_threshold;
  return j;
}

}  // namespace rsn::harness
