#include "rsn/rgg.hpp"

namespace rsn {

ReachabilityGraph build_graph(std::vector<Point3> positions, double r_trans, const Region& region) {
  if (!(r_trans >= 0.0) || !std::isfinite(r_trans)) throw std::invalid_argument("r_trans must be finite and >= 0");
  if (positions.size() > std::numeric_limits<NodeIndex>::max()) throw std::length_error("too many nodes");
  const std::size_t n = positions.size();
  std::vector<std::vector<NodeIndex>> lists(n);
  if (r_trans > 0.0 && n > 1) {
    const CellGrid grid(positions, region, r_trans);
    const double r2 = r_trans * r_trans;
    for (std::size_t u = 0; u < n; ++u) {
      grid.for_each_candidate(positions[u], [&](std::uint32_t v) {
        if (v != u && distance_squared(positions[u], positions[v], region) <= r2)
          lists[u].push_back(static_cast<NodeIndex>(v));
      });
    }
  }
  return ReachabilityGraph::from_lists(std::move(lists), r_trans, std::move(positions));
}

DegreeStats degree_stats(const ReachabilityGraph& g) {
  DegreeStats s;
  const std::size_t n = g.size();
  if (n == 0) return s;
  s.min_degree = std::numeric_limits<std::size_t>::max();
  double sum = 0.0;
  double sum_sq = 0.0;
  for (NodeIndex u = 0; u < n; ++u) {
    const std::size_t d = g.degree(u);
    s.min_degree = std::min(s.min_degree, d);
    s.max_degree = std::max(s.max_degree, d);
    if (d >= s.histogram.size()) s.histogram.resize(d + 1, 0);
    ++s.histogram[d];
    sum += static_cast<double>(d);
    sum_sq += static_cast<double>(d) * static_cast<double>(d);
  }
  s.isolated_count = s.histogram[0];
  s.mean = sum / static_cast<double>(n);
  s.variance = std::max(0.0, sum_sq / static_cast<double>(n) - s.mean * s.mean);
  return s;
}

ConnectivityReport connectivity(const ReachabilityGraph& g) {
  const std::size_t n = g.size();
  ConnectivityReport r;
  if (n == 0) return r;
  DisjointSets dsu(n);
  g.for_each_edge([&](NodeIndex u, NodeIndex v) { dsu.unite(u, v); });
  constexpr auto kUnset = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> root_label(n, kUnset);
  r.labels.resize(n);
  std::size_t largest = 0;
  for (std::size_t u = 0; u < n; ++u) {
    const std::size_t root = dsu.find(u);
    if (root_label[root] == kUnset) {
      root_label[root] = static_cast<std::uint32_t>(r.component_count++);
      largest = std::max(largest, dsu.set_size(root));
    }
    r.labels[u] = root_label[root];
  }
  r.giant_fraction = static_cast<double>(largest) / static_cast<double>(n);
  r.is_connected = r.component_count == 1;
  return r;
}

DiameterReport hop_diameter(const ReachabilityGraph& g, DiameterMethod method,
                            std::size_t size_guard,
                            std::size_t workers) {
  DiameterReport report;
  const std::size_t n = g.size();
  if (n == 0) {
    report.hop_diameter = 0;
    return report;
  }
  auto comp = connectivity(g);
  if (!comp.is_connected) {
    report.method = method;
    report.components = std::move(comp);
    return report;
  }
  if (method == DiameterMethod::exact && n > size_guard) method = DiameterMethod::double_sweep_lower_bound;
  report.method = method;

  if (method == DiameterMethod::double_sweep_lower_bound) {
    BfsWorker bfs(n);
    const auto [ecc0, far0] = bfs.run(g, 0);
    const auto [ecc1, far1] = bfs.run(g, far0);
    (void)far1;
    report.hop_diameter = std::max(ecc0, ecc1);
    report.is_lower_bound = true;
    return report;
  }

  const std::size_t batches = (n + 63) / 64;
  workers = std::clamp<std::size_t>(workers, 1, batches);
  std::atomic<std::size_t> next{0};
  std::vector<std::size_t> best(workers, 0);
  auto job = [&](std::size_t w) {
    MultiSourceBfs bfs(n);
    for (std::size_t b = next++; b < batches; b = next++) {
      const std::size_t first = b * 64;
      best[w] = std::max(best[w], bfs.max_eccentricity(g, static_cast<NodeIndex>(first), std::min<std::size_t>(64, n - first)));
    }
  };
  if (workers == 1) {
    job(0);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(job, w);
    for (auto& t : pool) t.join();
  }
  report.hop_diameter = *std::max_element(best.begin(), best.end());
  return report;
}

ReachabilityGraph read_edge_list(std::istream& in) {
  std::string line;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      const auto pos = line.find_first_not_of(" \t\r");
      if (pos != std::string::npos && line[pos] != '#') return true;
    }
    return false;
  };
  if (!next_line()) throw std::runtime_error("edge list: missing header");
  std::istringstream header(line);
  std::size_t n = 0;
  double r = 0.0;
  if (!(header >> n >> r)) throw std::runtime_error("edge list: malformed header '" + line + "'");
  std::vector<std::pair<NodeIndex, NodeIndex>> edges;
  while (next_line()) {
    std::istringstream row(line);
    long long u = -1, v = -1;
    if (!(row >> u >> v) || u < 0 || v < 0)
      throw std::runtime_error("edge list: malformed edge '" + line + "'");
    edges.emplace_back(static_cast<NodeIndex>(u), static_cast<NodeIndex>(v));
  }
  return ReachabilityGraph::from_edges(n, edges, r);
}

}  // namespace rsn
