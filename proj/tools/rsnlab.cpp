// rsnlab: command-line front end for the sensor-network simulator.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "rsn/rsn.hpp"

using namespace rsn;

namespace {

constexpr int kExitCheckFailed = 2;

struct DeployOpts {
  std::size_t n = 1000;
  double density = 1.0;
  std::string boundary = "hard";
  std::uint64_t seed = 1;
  bool unsafe_scale = false;
};

void add_deploy_options(CLI::App* cmd, DeployOpts& d) {
  cmd->add_option("--n", d.n, "number of nodes")->check(CLI::PositiveNumber);
  cmd->add_option("--density", d.density, "node density n/V")->check(CLI::PositiveNumber);
  cmd->add_option("--boundary", d.boundary, "hard|toroidal")->check(CLI::IsMember({"hard", "toroidal"}));
  cmd->add_option("--seed", d.seed, "64-bit RNG seed");
  cmd->add_flag("--unsafe-scale", d.unsafe_scale, "lift the desk-scale size guards");
}

Region region_of(const DeployOpts& d) {
  if (!d.unsafe_scale && d.n > harness::kGeneralScaleGuard)
    throw std::invalid_argument("n exceeds the desk-scale guard; pass --unsafe-scale to override");
  return Region::cube_for_density(d.n, d.density, parse_boundary(d.boundary));
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

void print_kv(const char* key, double v) { std::printf("%-22s %.10g\n", key, v); }

void write_positions(std::ostream& out, const std::vector<Point3>& pts) {
  out << std::setprecision(17);
  for (const auto& p : pts) out << p.x << ' ' << p.y << ' ' << p.z << '\n';
}

// --r-trans if given, else the critical transmission range at --omega.
double transmission_range(const DeployOpts& d, const Region& region, std::optional<double> r, double omega) {
  return r ? *r : analytic::critical_trans_range(d.n, region.volume(), omega);
}

void report_graph(const ReachabilityGraph& g, std::size_t diameter_guard) {
  const auto ds = degree_stats(g);
  const auto cc = connectivity(g);
  std::printf("%-22s %zu\n", "nodes", g.size());
  std::printf("%-22s %zu\n", "edges", g.edge_count());
  print_kv("r_trans", g.r_trans());
  std::printf("%-22s %zu\n", "min_degree", ds.min_degree);
  std::printf("%-22s %zu\n", "max_degree", ds.max_degree);
  print_kv("mean_degree", ds.mean);
  print_kv("degree_variance", ds.variance);
  std::printf("%-22s %zu\n", "isolated", ds.isolated_count);
  std::printf("%-22s %zu\n", "components", cc.component_count);
  print_kv("giant_fraction", cc.giant_fraction);
  std::printf("%-22s %s\n", "connected", cc.is_connected ? "yes" : "no");
  if (cc.is_connected) {
    const auto d = hop_diameter(g, DiameterMethod::exact, diameter_guard);
    std::printf("%-22s %zu%s\n", "hop_diameter", d.hop_diameter, d.is_lower_bound ? " (double-sweep lower bound)" : "");
  } else {
    std::printf("%-22s inf\n", "hop_diameter");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random sensor network laboratory: deployment, coverage, protocols and sweeps"};
  app.require_subcommand(1);

  // generate
  DeployOpts gen;
  std::optional<double> gen_r;
  double gen_omega = 0.0;
  std::string gen_positions, gen_edges;
  auto* generate = app.add_subcommand("generate", "sample a deployment and dump positions and edge list");
  add_deploy_options(generate, gen);
  generate->add_option("--r-trans", gen_r, "transmission range (default: critical range at --omega)");
  generate->add_option("--omega", gen_omega, "offset in ln n + omega");
  generate->add_option("--positions", gen_positions, "write positions (x y z per line)");
  generate->add_option("--out,--edges", gen_edges, "write edge list")->required();

  // analyze
  DeployOpts an;
  std::optional<double> an_r;
  double an_omega = 0.0;
  std::string an_edges;
  std::size_t an_guard = kExactDiameterGuard;
  auto* analyze = app.add_subcommand("analyze", "degree, connectivity and diameter of a graph");
  add_deploy_options(analyze, an);
  analyze->add_option("--edges", an_edges, "read an edge list instead of sampling");
  analyze->add_option("--r-trans", an_r, "transmission range (default: critical range at --omega)");
  analyze->add_option("--omega", an_omega, "offset in ln n + omega");
  analyze->add_option("--diameter-guard", an_guard, "largest n for exact diameter");

  // coverage
  DeployOpts cov;
  cov.boundary = "toroidal";
  std::optional<double> cov_r;
  double cov_omega = 0.0, cov_divisor = kDefaultGridDivisor;
  std::uint32_t cov_k = 1;
  std::string cov_out;
  auto* coverage = app.add_subcommand("coverage", "lattice k-coverage of one deployment");
  add_deploy_options(coverage, cov);
  coverage->add_option("--r-sense", cov_r, "sensing range (default: critical sensing range at --omega)");
  coverage->add_option("--omega", cov_omega, "offset in ln n + ln ln n + omega");
  coverage->add_option("--k", cov_k, "coverage order to test");
  coverage->add_option("--grid-divisor", cov_divisor, "lattice spacing is r_sense / divisor (>= 4)");
  coverage->add_option("--out", cov_out, "write histogram CSV");

  // protocol {exchange-id, assign-code}
  auto* proto = app.add_subcommand("protocol", "run a radio protocol on one deployment");
  proto->require_subcommand(1);
  DeployOpts pr;
  double pr_ell = 0.5;
  std::string pr_convention = "verbatim", pr_ack = "idealized", pr_trace;
  auto setup_protocol = [&](CLI::App* cmd) {
    add_deploy_options(cmd, pr);
    cmd->add_option("--ell", pr_ell, "protocol ell (sets the transmission range)")->check(CLI::PositiveNumber);
    cmd->add_option("--ell-convention", pr_convention, "verbatim|cubed")->check(CLI::IsMember({"verbatim", "cubed"}));
    cmd->add_option("--trace", pr_trace, "write the slot trace");
  };
  auto* exch = proto->add_subcommand("exchange-id", "neighbour discovery");
  setup_protocol(exch);
  auto* assign = proto->add_subcommand("assign-code", "distributed colouring");
  setup_protocol(assign);
  assign->add_option("--ack-mode", pr_ack, "idealized|simulated")->check(CLI::IsMember({"idealized", "simulated"}));

  // sweep
  std::string sw_config, sw_out;
  std::optional<std::size_t> sw_n, sw_trials, sw_workers;
  std::optional<double> sw_omega, sw_ell, sw_threshold;
  std::optional<std::uint64_t> sw_seed;
  std::optional<std::string> sw_mode, sw_boundary;
  bool sw_check = false, sw_unsafe = false;
  auto* sweep = app.add_subcommand("sweep", "run a full experiment from a JSON config");
  sweep->add_option("--config", sw_config, "experiment JSON")->required()->check(CLI::ExistingFile);
  sweep->add_option("--n", sw_n, "override n");
  sweep->add_option("--omega", sw_omega, "override omega");
  sweep->add_option("--ell", sw_ell, "override ell");
  sweep->add_option("--trials", sw_trials, "override trial count");
  sweep->add_option("--seed", sw_seed, "override seed_base");
  sweep->add_option("--mode", sw_mode, "override regime mode (i..iv or name)");
  sweep->add_option("--boundary", sw_boundary, "override boundary");
  sweep->add_option("--workers", sw_workers, "worker threads (0 = all cores)");
  sweep->add_option("--out", sw_out, "write CSV here");
  sweep->add_flag("--check", sw_check, "exit 2 if any row's success fraction is below the threshold");
  sweep->add_option("--threshold", sw_threshold, "success threshold for --check");
  sweep->add_flag("--unsafe-scale", sw_unsafe, "lift the desk-scale size guards");

  // predict
  std::size_t pd_n = 1000;
  std::optional<double> pd_volume, pd_ell, pd_c, pd_r;
  double pd_omega = 0.0;
  std::string pd_mode = "linear_ell";
  auto* predict = app.add_subcommand("predict", "analytic radii and bounds only");
  predict->add_option("--n", pd_n, "number of nodes")->check(CLI::Range(std::size_t{3}, std::size_t{1} << 62));
  predict->add_option("--volume", pd_volume, "region volume (default n, i.e. unit density)");
  predict->add_option("--omega", pd_omega, "omega");
  predict->add_option("--ell", pd_ell, "ell");
  predict->add_option("--c", pd_c, "c");
  predict->add_option("--mode", pd_mode, "regime mode for k-coverage range and degree bounds");
  predict->add_option("--r", pd_r, "radius to classify and derive protocol constants from");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Usage errors share exit code 1 so that 2 stays reserved for failed checks.
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (*generate) {
      const Region region = region_of(gen);
      const double r = transmission_range(gen, region, gen_r, gen_omega);
      const auto pts = sample_uniform({gen.n, region, gen.seed, r, r});
      const auto g = build_graph(pts, r, region);
      if (!gen_positions.empty()) {
        auto out = open_out(gen_positions);
        write_positions(out, pts);
      }
      auto out = open_out(gen_edges);
      write_edge_list(out, g);
      std::printf("wrote %zu nodes, %zu edges, r_trans %.10g\n", g.size(), g.edge_count(), r);
    } else if (*analyze) {
      if (!an_edges.empty()) {
        std::ifstream in(an_edges);
        if (!in) throw std::runtime_error("cannot read " + an_edges);
        report_graph(read_edge_list(in), an_guard);
      } else {
        const Region region = region_of(an);
        const double r = transmission_range(an, region, an_r, an_omega);
        report_graph(build_graph(sample_uniform({an.n, region, an.seed, r, r}), r, region), an_guard);
      }
    } else if (*coverage) {
      const Region region = region_of(cov);
      const double r = cov_r ? *cov_r : analytic::critical_sense_range(cov.n, region.volume(), cov_omega);
      const auto pts = sample_uniform({cov.n, region, cov.seed, 0.0, r});
      const auto res = cover_counts(pts, r, CoverageGrid(region, r / cov_divisor));
      print_kv("r_sense", r);
      std::printf("%-22s %zu\n", "samples", res.report.sample_count);
      std::printf("%-22s %u\n", "n_minus", res.report.n_minus);
      std::printf("%-22s %u\n", "n_plus", res.report.n_plus);
      std::printf("%-22s %s\n", "k_covered", is_k_covered(res.report, cov_k) ? "yes" : "no");
      print_kv("fraction_below_k", res.report.fraction_below(cov_k));
      print_kv("miles_lower", analytic::miles_lower_coverage_prob(cov_k, cov.density, region.volume(), r));
      if (res.core) {
        std::printf("%-22s %u\n", "core_n_minus", res.core->n_minus);
        std::printf("%-22s %u\n", "core_n_plus", res.core->n_plus);
      }
      if (!cov_out.empty()) {
        auto out = open_out(cov_out);
        write_coverage_csv(out, res.report, cov.seed);
      }
    } else if (*proto) {
      const Region region = region_of(pr);
      const auto conv = analytic::parse_ell_convention(pr_convention);
      const double r = analytic::radius_for_protocol_ell(pr.n, region.volume(), pr_ell, conv);
      const auto constants = analytic::protocol_constants(pr.n, region.volume(), r, conv);
      protocol::RadioNetwork net(build_graph(sample_uniform({pr.n, region, pr.seed, r, r}), r, region));
      print_kv("ell", constants.ell);
      print_kv("delta_cap", constants.delta_cap);
      print_kv("c_ell", constants.c_ell);
      print_kv("d_ell", constants.d_ell);
      protocol::ProtocolTrace trace;
      if (*exch) {
        protocol::ExchangeOptions opt;
        opt.record_trace = !pr_trace.empty();
        auto res = protocol::exchange_id(net, constants, derive_seed(pr.seed, 1), opt);
        std::printf("%-22s %zu\n", "slots", res.rounds);
        std::printf("%-22s %zu\n", "missing_arcs", res.table.missing_arcs(net));
        std::printf("%-22s %s\n", "complete", res.table.complete(net) ? "yes" : "no");
        trace = std::move(res.trace);
      } else {
        protocol::AssignOptions opt;
        opt.record_trace = !pr_trace.empty();
        auto res = protocol::assign_code(net, constants, derive_seed(pr.seed, 2), protocol::parse_ack_mode(pr_ack), opt);
        const auto v = protocol::verify_coloring(net, res.state);
        std::printf("%-22s %zu\n", "rounds_scheduled", res.rounds_scheduled);
        std::printf("%-22s %zu\n", "rounds_executed", res.rounds_executed);
        std::printf("%-22s %zu\n", "slots", static_cast<std::size_t>(net.slot_clock()));
        std::printf("%-22s %zu\n", "colors_used", v.colors_used);
        std::printf("%-22s %zu\n", "max_degree_plus_one", degree_stats(net.graph()).max_degree + 1);
        std::printf("%-22s %zu\n", "uncolored", v.uncolored.size());
        std::printf("%-22s %zu\n", "violations", v.violations.size());
        std::printf("%-22s %s\n", "proper", v.proper ? "yes" : "no");
        trace = std::move(res.trace);
      }
      if (!pr_trace.empty()) {
        auto out = open_out(pr_trace);
        protocol::write_trace(out, trace);
      }
    } else if (*sweep) {
      std::ifstream in(sw_config);
      auto j = nlohmann::json::parse(in);
      if (sw_n) j["n"] = *sw_n;
      if (sw_omega) j["omega"] = *sw_omega;
      if (sw_ell) j["ell"] = *sw_ell;
      if (sw_trials) j["trials"] = *sw_trials;
      if (sw_seed) j["seed_base"] = *sw_seed;
      if (sw_mode) j["mode"] = *sw_mode;
      if (sw_boundary) j["boundary"] = *sw_boundary;
      if (sw_workers) j["workers"] = *sw_workers;
      if (sw_unsafe) j["unsafe_scale"] = true;
      const auto spec = harness::spec_from_json(j);
      const auto rows = harness::run_experiment(spec);
      if (!sw_out.empty()) harness::emit_csv(rows, sw_out);
      else harness::write_csv(std::cout, rows);
      harness::emit_summary(sw_out.empty() ? std::cerr : std::cout, rows);
      if (sw_check) {
        const auto threshold = sw_threshold ? sw_threshold : spec.check_threshold;
        if (!threshold) throw std::invalid_argument("--check needs --threshold or check_threshold in the config");
        if (!harness::passes_check(rows, *threshold)) {
          std::fprintf(stderr, "check failed: success fraction below %.4g\n", *threshold);
          return kExitCheckFailed;
        }
      }
    } else if (*predict) {
      const double volume = pd_volume ? *pd_volume : static_cast<double>(pd_n);
      analytic::RegimeParams regime;
      regime.omega = pd_omega;
      regime.ell = pd_ell;
      regime.c = pd_c;
      const auto mode = analytic::parse_regime_mode(pd_mode);
      print_kv("critical_trans_range", analytic::critical_trans_range(pd_n, volume, pd_omega));
      print_kv("prob_no_isolated", analytic::prob_no_isolated(pd_n, pd_omega));
      print_kv("critical_sense_range", analytic::critical_sense_range(pd_n, volume, pd_omega));
      try {
        print_kv("k_coverage_range", analytic::k_coverage_range(pd_n, volume, regime, mode));
        const auto b = analytic::degree_bounds(pd_n, regime, mode);
        print_kv("degree_lower", b.lower);
        print_kv("degree_upper", b.upper);
      } catch (const std::exception& e) {
        std::printf("%-22s n/a (%s)\n", "k_coverage_range", e.what());
      }
      if (pd_ell && *pd_ell > analytic::kDiameterEllFloor) print_kv("diameter_bound", analytic::diameter_bound(pd_n, *pd_ell));
      if (pd_r) {
        const auto cls = analytic::classify_regime(pd_n, volume, *pd_r);
        std::printf("%-22s %s\n", "regime", std::string(analytic::to_string(cls.regime)).c_str());
        print_kv("lambda", cls.lambda);
        try {
          const auto k = analytic::protocol_constants(pd_n, volume, *pd_r);
          print_kv("protocol_ell", k.ell);
          print_kv("delta_cap", k.delta_cap);
          print_kv("c_ell", k.c_ell);
          print_kv("d_ell", k.d_ell);
        } catch (const std::exception& e) {
          std::printf("%-22s n/a (%s)\n", "protocol_ell", e.what());
        }
      }
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "rsnlab: %s\n", e.what());
    return 1;
  }
  return 0;
}
