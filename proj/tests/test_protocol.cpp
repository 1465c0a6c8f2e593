#include <gtest/gtest.h>

#include <sstream>

#include "rsn/analytic.hpp"
#include "rsn/protocol.hpp"

using namespace rsn;
using namespace rsn::protocol;

namespace {

ReachabilityGraph star(std::size_t leaves) {
  std::vector<std::pair<NodeIndex, NodeIndex>> e;
  for (NodeIndex v = 1; v <= leaves; ++v) e.emplace_back(0, v);
  return ReachabilityGraph::from_edges(leaves + 1, e);
}

ReachabilityGraph edge_graph(std::size_t n, std::vector<std::pair<NodeIndex, NodeIndex>> e) {
  return ReachabilityGraph::from_edges(n, e);
}

std::vector<Decision> listen_all(std::size_t n) { return std::vector<Decision>(n); }

Message data(NodeId from) { return {MessageKind::data, from, 7}; }

// A random supercritical deployment at the protocol's ell, plus its constants.
struct Deployment {
  ReachabilityGraph graph;
  analytic::ProtocolConstants constants;
};

Deployment deployment(std::size_t n, double ell, std::uint64_t seed) {
  const auto region = Region::cube_for_density(n, 1.0);
  const double r = analytic::radius_for_protocol_ell(n, region.volume(), ell, analytic::EllConvention::verbatim);
  const auto pts = sample_uniform({n, region, seed, r, r});
  return {build_graph(pts, r, region), analytic::protocol_constants(n, region.volume(), r)};
}

analytic::ProtocolConstants constants_with_delta(double delta) {
  analytic::ProtocolConstants k;
  k.ell = 0.5;
  k.delta_cap = delta;
  k.c_ell = 1.5;
  k.d_ell = 85.0;
  return k;
}

}  // namespace

TEST(RunSlot, StarSingleLeafIsReceived) {
  RadioNetwork net(star(3));
  auto d = listen_all(4);
  d[2].transmit = data(net.id(2));
  const auto out = run_slot(net, d);
  EXPECT_EQ(out.nodes[0].what, Observation::received);
  ASSERT_TRUE(out.observed(0).has_value());
  EXPECT_EQ(out.observed(0)->sender, net.id(2));
  EXPECT_EQ(out.nodes[2].what, Observation::transmitted);
  EXPECT_EQ(out.nodes[1].what, Observation::silence);
  EXPECT_EQ(net.slot_clock(), 1u);
}

TEST(RunSlot, StarTwoLeavesCollide) {
  RadioNetwork net(star(3));
  auto d = listen_all(4);
  d[1].transmit = data(net.id(1));
  d[3].transmit = data(net.id(3));
  const auto out = run_slot(net, d);
  EXPECT_EQ(out.nodes[0].what, Observation::collision);
  EXPECT_FALSE(out.observed(0).has_value());
}

TEST(RunSlot, TransmitterNeverReceives) {
  RadioNetwork net(star(2));
  auto d = listen_all(3);
  d[0].transmit = data(net.id(0));
  d[1].transmit = data(net.id(1));
  const auto out = run_slot(net, d);
  EXPECT_EQ(out.nodes[0].what, Observation::transmitted);
  EXPECT_EQ(out.nodes[1].what, Observation::transmitted);
  EXPECT_EQ(out.nodes[2].what, Observation::received);
  EXPECT_THROW(run_slot(net, listen_all(2)), std::invalid_argument);
}

TEST(RadioNetwork, ShuffledIdsArePermutation) {
  const auto net = RadioNetwork::with_shuffled_ids(star(9), 4);
  std::vector<NodeId> ids;
  for (NodeIndex u = 0; u < net.size(); ++u) {
    ids.push_back(net.id(u));
    EXPECT_EQ(net.index_of(net.id(u)), u);
  }
  std::sort(ids.begin(), ids.end());
  for (std::size_t i = 0; i < ids.size(); ++i) EXPECT_EQ(ids[i], i + 1);
  EXPECT_THROW(net.index_of(0), std::out_of_range);
}

TEST(ExchangeId, IsolatedNodeLearnsNothing) {
  RadioNetwork net(edge_graph(3, {{0, 1}}));
  ExchangeOptions opt;
  opt.rounds = 50;
  const auto r = exchange_id(net, constants_with_delta(1.0), 1, opt);
  EXPECT_TRUE(r.table.ids[2].empty());
  EXPECT_EQ(r.rounds, 50u);
}

TEST(ExchangeId, AlternatingScheduleDiscoversInTwoSlots) {
  RadioNetwork net(edge_graph(2, {{0, 1}}));
  ExchangeOptions opt;
  opt.rounds = 2;
  opt.schedule = [](std::size_t slot, NodeIndex u) { return slot == u; };
  const auto r = exchange_id(net, constants_with_delta(1.0), 1, opt);
  EXPECT_TRUE(r.table.complete(net));
  EXPECT_EQ(r.table.missing_arcs(net), 0u);
  EXPECT_EQ(net.slot_clock(), 2u);
}

TEST(ExchangeId, RoundCountAndTableSubset) {
  auto dep = deployment(400, 0.5, 9);
  RadioNetwork net(dep.graph);
  ExchangeOptions opt;
  opt.record_trace = true;
  const auto r = exchange_id(net, dep.constants, 77, opt);
  const double ln = std::log(400.0);
  EXPECT_EQ(r.rounds, static_cast<std::size_t>(std::ceil(dep.constants.c_ell * ln * ln)));
  EXPECT_EQ(r.trace.slots.size(), r.rounds);
  const auto truth = NeighborTable::from_graph(net);
  for (NodeIndex u = 0; u < net.size(); ++u)
    EXPECT_TRUE(std::includes(truth.ids[u].begin(), truth.ids[u].end(), r.table.ids[u].begin(), r.table.ids[u].end()));
}

TEST(ExchangeId, TraceObeysReceptionRule) {
  auto dep = deployment(300, 0.5, 2);
  RadioNetwork net(dep.graph);
  ExchangeOptions opt;
  opt.record_trace = true;
  const auto r = exchange_id(net, dep.constants, 5, opt);
  const auto& g = net.graph();
  for (const auto& slot : r.trace.slots) {
    std::vector<std::uint8_t> tx(g.size(), 0);
    for (const auto& [u, m] : slot.transmitters) tx[u] = 1;
    for (const auto& [v, from] : slot.receptions) {
      EXPECT_FALSE(tx[v]);
      std::size_t talking = 0;
      for (NodeIndex w : g.neighbors(v)) talking += tx[w];
      EXPECT_EQ(talking, 1u);
      EXPECT_TRUE(tx[from] && g.adjacent(v, from));
    }
    for (NodeIndex v : slot.collisions) {
      std::size_t talking = 0;
      for (NodeIndex w : g.neighbors(v)) talking += tx[w];
      EXPECT_GE(talking, 2u);
    }
  }
}

TEST(ExchangeId, Deterministic) {
  auto dep = deployment(300, 0.5, 3);
  ExchangeOptions opt;
  opt.record_trace = true;
  RadioNetwork a(dep.graph), b(dep.graph);
  EXPECT_EQ(exchange_id(a, dep.constants, 11, opt).trace, exchange_id(b, dep.constants, 11, opt).trace);
  RadioNetwork tiny(edge_graph(2, {{0, 1}}));
  EXPECT_THROW(exchange_id(tiny, dep.constants, 1), std::invalid_argument);
}

TEST(AssignCode, SingleNodeTakesItsOnlyColor) {
  RadioNetwork net(ReachabilityGraph::from_edges(1, {}));
  AssignOptions opt;
  opt.rounds = 200;
  const auto r = assign_code(net, constants_with_delta(1.0), 4, AckMode::idealized, opt);
  EXPECT_EQ(r.state.assigned[0], 1u);
  EXPECT_LT(r.rounds_executed, 200u);
}

TEST(AssignCode, TwoNodesRemovalRule) {
  RadioNetwork net(edge_graph(2, {{0, 1}}));
  AssignOptions opt;
  opt.rounds = 1;
  // Round 0: only node 0 contends and proposes the first colour of {1,2}.
  opt.contention = [](std::size_t round, NodeIndex u, std::span<const Color>) -> std::optional<ContentionChoice> {
    if (round == 0 && u == 0) return ContentionChoice{0};
    return std::nullopt;
  };
  for (auto mode : {AckMode::idealized, AckMode::simulated}) {
    RadioNetwork fresh(net.graph());
    const auto r = assign_code(fresh, constants_with_delta(1.0), 1, mode, opt);
    EXPECT_EQ(r.state.assigned[0], 1u);
    EXPECT_EQ(r.state.assigned[1], 0u);
    EXPECT_EQ(r.state.palette[1], std::vector<Color>{2});
    EXPECT_TRUE(r.state.active[1]);
    EXPECT_FALSE(r.state.active[0]);
  }
}

TEST(AssignCode, CompoundRoundSlotAccounting) {
  auto dep = deployment(200, 0.5, 5);
  RadioNetwork net(dep.graph);
  AssignOptions opt;
  opt.record_trace = true;
  const auto r = assign_code(net, dep.constants, 3, AckMode::idealized, opt);
  const double ln = std::log(200.0);
  EXPECT_EQ(r.rounds_scheduled, static_cast<std::size_t>(std::ceil(dep.constants.d_ell * ln * ln)));
  EXPECT_EQ(r.ack_slots, static_cast<std::size_t>(std::ceil(dep.constants.delta_cap)));
  EXPECT_EQ(net.slot_clock(), r.rounds_executed * (r.ack_slots + 2));
  EXPECT_EQ(r.trace.slots.size(), net.slot_clock());
}

TEST(AssignCode, IdealizedRunIsProperAndComplete) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto dep = deployment(500, 0.5, 100 + seed);
    RadioNetwork net(dep.graph);
    const auto r = assign_code(net, dep.constants, seed, AckMode::idealized);
    const auto v = verify_coloring(net, r.state);
    EXPECT_TRUE(v.proper);
    EXPECT_TRUE(v.uncolored.empty());
    EXPECT_EQ(r.palette_violations, 0u);
    EXPECT_LE(v.colors_used, degree_stats(net.graph()).max_degree + 1);
  }
}

TEST(AssignCode, SimulatedRunStaysProper) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto dep = deployment(500, 0.5, 200 + seed);
    RadioNetwork net(dep.graph);
    const auto r = assign_code(net, dep.constants, seed, AckMode::simulated);
    const auto v = verify_coloring(net, r.state);
    EXPECT_TRUE(v.proper);
    EXPECT_EQ(r.palette_violations, 0u);
  }
}

TEST(AssignCode, ColorsComeFromInitialPalette) {
  auto dep = deployment(400, 0.5, 31);
  RadioNetwork net(dep.graph);
  const auto r = assign_code(net, dep.constants, 8, AckMode::idealized);
  for (NodeIndex u = 0; u < net.size(); ++u) {
    if (r.state.assigned[u] == 0) continue;
    EXPECT_GE(r.state.assigned[u], 1u);
    EXPECT_LE(r.state.assigned[u], net.graph().degree(u) + 1);
  }
}

TEST(AssignCode, DeterministicTrace) {
  auto dep = deployment(200, 0.5, 12);
  AssignOptions opt;
  opt.record_trace = true;
  for (auto mode : {AckMode::idealized, AckMode::simulated}) {
    RadioNetwork a(dep.graph), b(dep.graph);
    const auto ra = assign_code(a, dep.constants, 21, mode, opt);
    const auto rb = assign_code(b, dep.constants, 21, mode, opt);
    EXPECT_EQ(ra.trace, rb.trace);
    EXPECT_EQ(ra.state.assigned, rb.state.assigned);
  }
}

TEST(AssignCode, RealizedDeltaSource) {
  auto dep = deployment(300, 0.5, 6);
  RadioNetwork net(dep.graph);
  AssignOptions opt;
  opt.delta_source = DeltaSource::realized;
  const auto r = assign_code(net, dep.constants, 1, AckMode::idealized, opt);
  EXPECT_EQ(r.ack_slots, degree_stats(net.graph()).max_degree);
}

TEST(VerifyColoring, Examples) {
  RadioNetwork edgeless(ReachabilityGraph::from_edges(3, {}));
  ColoringState s;
  s.assigned = {1, 1, 1};
  EXPECT_TRUE(verify_coloring(edgeless, s).proper);
  EXPECT_EQ(verify_coloring(edgeless, s).colors_used, 1u);

  RadioNetwork pair(edge_graph(3, {{0, 1}, {1, 2}}));
  s.assigned = {2, 2, 0};
  const auto v = verify_coloring(pair, s);
  EXPECT_FALSE(v.proper);
  ASSERT_EQ(v.violations.size(), 1u);
  EXPECT_EQ(v.violations[0], std::make_pair(NodeIndex{0}, NodeIndex{1}));
  EXPECT_EQ(v.uncolored, std::vector<NodeIndex>{2});
}

TEST(Trace, WriteFormat) {
  RadioNetwork net(star(2));
  ExchangeOptions opt;
  opt.rounds = 2;
  opt.record_trace = true;
  opt.schedule = [](std::size_t slot, NodeIndex u) { return slot == 0 ? u != 0 : u == 1; };
  const auto r = exchange_id(net, constants_with_delta(1.0), 0, opt);
  std::ostringstream os;
  write_trace(os, r.trace);
  EXPECT_EQ(os.str(),
            "0\texchange\ttx=1:id:2:2,2:id:3:3\trx=-\tcol=0\n"
            "1\texchange\ttx=1:id:2:2\trx=0<1\tcol=-\n");
}

TEST(Helpers, TransmitProbabilityAndRounds) {
  EXPECT_DOUBLE_EQ(transmit_probability(2), 1.0);
  EXPECT_DOUBLE_EQ(transmit_probability(1000), 1.0 / std::log(1000.0));
  EXPECT_EQ(polylog_rounds(1.5, 2000), static_cast<std::size_t>(std::ceil(1.5 * std::pow(std::log(2000.0), 2))));
  EXPECT_EQ(parse_ack_mode("simulated"), AckMode::simulated);
  EXPECT_THROW(parse_ack_mode("ideal"), std::invalid_argument);
}
