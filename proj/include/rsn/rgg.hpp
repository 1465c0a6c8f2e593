#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <numeric>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "rsn/cell_grid.hpp"
#include "rsn/geometry.hpp"

namespace rsn {

using NodeIndex = std::uint32_t;

// Undirected unit-ball graph on sensor positions, stored as CSR with each
// neighbour list sorted ascending.
class ReachabilityGraph {
 public:
  ReachabilityGraph() = default;

  // Builds from an explicit edge list; duplicate edges are merged, self-loops rejected.
  static ReachabilityGraph from_edges(std::size_t n, std::span<const std::pair<NodeIndex, NodeIndex>> edges,
                                      double r_trans = 0.0, std::vector<Point3> positions = {}) {
    std::vector<std::vector<NodeIndex>> lists(n);
    for (auto [u, v] : edges) {
      if (u >= n || v >= n) throw std::out_of_range("edge endpoint out of range");
      if (u == v) throw std::invalid_argument("self-loop in edge list");
      lists[u].push_back(v);
      lists[v].push_back(u);
    }
    return from_lists(std::move(lists), r_trans, std::move(positions));
  }

  static ReachabilityGraph from_lists(std::vector<std::vector<NodeIndex>> lists, double r_trans,
                                      std::vector<Point3> positions) {
    ReachabilityGraph g;
    g.r_trans_ = r_trans;
    g.positions_ = std::move(positions);
    g.offsets_.assign(lists.size() + 1, 0);
    for (std::size_t u = 0; u < lists.size(); ++u) {
      auto& l = lists[u];
      std::sort(l.begin(), l.end());
      l.erase(std::unique(l.begin(), l.end()), l.end());
      g.offsets_[u + 1] = g.offsets_[u] + l.size();
    }
    g.neighbors_.reserve(g.offsets_.back());
    for (auto& l : lists) g.neighbors_.insert(g.neighbors_.end(), l.begin(), l.end());
    return g;
  }

  std::size_t size() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t edge_count() const { return neighbors_.size() / 2; }
  double r_trans() const { return r_trans_; }
  const std::vector<Point3>& positions() const { return positions_; }

  std::span<const NodeIndex> neighbors(NodeIndex u) const {
    return {neighbors_.data() + offsets_[u], neighbors_.data() + offsets_[u + 1]};
  }
  std::size_t degree(NodeIndex u) const { return offsets_[u + 1] - offsets_[u]; }

  bool adjacent(NodeIndex u, NodeIndex v) const {
    const auto nb = neighbors(u);
    return std::binary_search(nb.begin(), nb.end(), v);
  }

  template <typename F>
  void for_each_edge(F&& f) const {
    for (NodeIndex u = 0; u < size(); ++u)
      for (NodeIndex v : neighbors(u))
        if (u < v) f(u, v);
  }

 private:
  double r_trans_ = 0.0;
  std::vector<Point3> positions_;
  std::vector<std::size_t> offsets_;
  std::vector<NodeIndex> neighbors_;
};

// Closed-ball predicate: u ~ v iff distance(u, v) <= r_trans. O(n) expected via a cell partition.
ReachabilityGraph build_graph(std::vector<Point3> positions, double r_trans, const Region& region);

struct DegreeStats {
  std::size_t min_degree = 0;
  std::size_t max_degree = 0;
  double mean = 0.0;
  double variance = 0.0;  // population variance over nodes
  std::vector<std::size_t> histogram;  // histogram[d] = nodes with degree d
  std::size_t isolated_count = 0;
};

DegreeStats degree_stats(const ReachabilityGraph& g);

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n), size_(n, 1) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    return true;
  }

  std::size_t set_size(std::size_t x) { return size_[find(x)]; }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> size_;
};

struct ConnectivityReport {
  std::size_t component_count = 0;
  double giant_fraction = 0.0;
  bool is_connected = false;
  std::vector<std::uint32_t> labels;  // component id per node, numbered by first appearance
};

ConnectivityReport connectivity(const ReachabilityGraph& g);

enum class DiameterMethod { exact, double_sweep_lower_bound };

inline std::string_view to_string(DiameterMethod m) {
  return m == DiameterMethod::exact ? "exact" : "double_sweep_lower_bound";
}

inline constexpr std::size_t kInfiniteHops = std::numeric_limits<std::size_t>::max();
inline constexpr std::size_t kExactDiameterGuard = 20000;

struct DiameterReport {
  std::size_t hop_diameter = kInfiniteHops;
  DiameterMethod method = DiameterMethod::exact;
  bool is_lower_bound = false;
  std::optional<ConnectivityReport> components;  // attached when the graph is disconnected
};

// Unweighted single-source distances with caller-owned scratch.
class BfsWorker {
 public:
  explicit BfsWorker(std::size_t n) : dist_(n, kUnreached), queue_(n) {}

  // Returns (eccentricity, farthest node); unreachable nodes are ignored.
  std::pair<std::size_t, NodeIndex> run(const ReachabilityGraph& g, NodeIndex source) {
    std::fill(dist_.begin(), dist_.end(), kUnreached);
    std::size_t head = 0, tail = 0;
    queue_[tail++] = source;
    dist_[source] = 0;
    NodeIndex last = source;
    while (head < tail) {
      const NodeIndex u = queue_[head++];
      last = u;
      const std::uint32_t du = dist_[u] + 1;
      for (NodeIndex v : g.neighbors(u)) {
        if (dist_[v] == kUnreached) {
          dist_[v] = du;
          queue_[tail++] = v;
        }
      }
    }
    return {dist_[last], last};
  }

  std::uint32_t distance(NodeIndex v) const { return dist_[v]; }
  static constexpr std::uint32_t kUnreached = std::numeric_limits<std::uint32_t>::max();

 private:
  std::vector<std::uint32_t> dist_;
  std::vector<NodeIndex> queue_;
};

// Breadth-first search from up to 64 sources at once, one bit per source.
class MultiSourceBfs {
 public:
  explicit MultiSourceBfs(std::size_t n) : seen_(n), frontier_(n), next_(n) {}

  // Largest eccentricity among sources [first, first + count) in a connected graph.
  std::size_t max_eccentricity(const ReachabilityGraph& g, NodeIndex first, std::size_t count) {
    const std::size_t n = g.size();
    std::fill(seen_.begin(), seen_.end(), 0);
    std::fill(frontier_.begin(), frontier_.end(), 0);
    for (std::size_t i = 0; i < count; ++i) {
      seen_[first + i] = frontier_[first + i] = std::uint64_t{1} << i;
    }
    std::size_t level = 0;
    for (;;) {
      std::uint64_t any = 0;
      for (std::size_t v = 0; v < n; ++v) {
        std::uint64_t acc = 0;
        for (NodeIndex u : g.neighbors(static_cast<NodeIndex>(v))) acc |= frontier_[u];
        acc &= ~seen_[v];
        next_[v] = acc;
        any |= acc;
      }
      if (!any) return level;
      ++level;
      for (std::size_t v = 0; v < n; ++v) seen_[v] |= next_[v];
      frontier_.swap(next_);
    }
  }

 private:
  std::vector<std::uint64_t> seen_, frontier_, next_;
};

inline std::size_t default_worker_count() { return std::max(1u, std::thread::hardware_concurrency()); }

// Exact diameter is the max eccentricity over all sources, searched 64 at a time.
// Above `size_guard` nodes the exact request is downgraded to a flagged double-sweep lower bound.
DiameterReport hop_diameter(const ReachabilityGraph& g, DiameterMethod method = DiameterMethod::exact,
                            std::size_t size_guard = kExactDiameterGuard,
                            std::size_t workers = default_worker_count());

// Plain-text edge list: a header line "n r_trans" followed by one "u v" line per edge (u < v).
inline void write_edge_list(std::ostream& out, const ReachabilityGraph& g) {
  out << g.size() << ' ' << std::setprecision(17) << g.r_trans() << '\n';
  g.for_each_edge([&](NodeIndex u, NodeIndex v) { out << u << ' ' << v << '\n'; });
}

ReachabilityGraph read_edge_list(std::istream& in);

}  // namespace rsn
