#include "rsn/protocol.hpp"

namespace rsn::protocol {

void write_trace(std::ostream& out, const ProtocolTrace& trace) {
  for (const auto& r : trace.slots) {
    out << r.slot << '\t' << to_string(r.phase) << "\ttx=";
    if (r.transmitters.empty()) out << '-';
    for (std::size_t i = 0; i < r.transmitters.size(); ++i) {
      const auto& [u, m] = r.transmitters[i];
      out << (i ? "," : "") << u << ':' << to_string(m.kind) << ':' << m.sender << ':' << m.payload;
    }
    out << "\trx=";
    if (r.receptions.empty()) out << '-';
    for (std::size_t i = 0; i < r.receptions.size(); ++i)
      out << (i ? "," : "") << r.receptions[i].first << '<' << r.receptions[i].second;
    out << "\tcol=";
    if (r.collisions.empty()) out << '-';
    for (std::size_t i = 0; i < r.collisions.size(); ++i) out << (i ? "," : "") << r.collisions[i];
    out << '\n';
  }
}

SlotOutcome run_slot(RadioNetwork& network, std::span<const Decision> decisions) {
  const std::size_t n = network.size();
  if (decisions.size() != n) throw std::invalid_argument("run_slot needs one decision per node");
  std::vector<std::pair<NodeIndex, Message>> tx;
  SlotOutcome out;
  out.nodes.resize(n);
  for (NodeIndex u = 0; u < n; ++u) {
    if (decisions[u].transmit) {
      tx.emplace_back(u, *decisions[u].transmit);
      out.nodes[u] = {Observation::transmitted, decisions[u].transmit};
    }
  }
  SlotEngine engine(n);
  engine.resolve(network.graph(), tx);
  for (const auto& rx : engine.receptions()) out.nodes[rx.receiver] = {Observation::received, rx.message};
  for (NodeIndex v : engine.collisions()) out.nodes[v] = {Observation::collision, std::nullopt};
  network.advance_clock(1);
  return out;
}

ExchangeResult exchange_id(RadioNetwork& network, const analytic::ProtocolConstants& constants,
                           std::uint64_t seed, const ExchangeOptions& options) {
  const std::size_t n = network.size();
  if (n < 3 && !options.rounds) throw std::invalid_argument("exchange_id needs n >= 3");
  ExchangeResult result;
  result.rounds = options.rounds ? *options.rounds : polylog_rounds(constants.c_ell, n);
  result.table.ids.assign(n, {});
  result.trace.recorded = options.record_trace;

  const double p = transmit_probability(std::max<std::size_t>(n, 1));
  Rng rng(seed);
  SlotEngine engine(n);
  std::vector<std::pair<NodeIndex, Message>> tx;
  for (std::size_t slot = 0; slot < result.rounds; ++slot) {
    tx.clear();
    for (NodeIndex u = 0; u < n; ++u) {
      const bool send = options.schedule ? options.schedule(slot, u) : rng.bernoulli(p);
      if (send) tx.emplace_back(u, Message{MessageKind::id, network.id(u), network.id(u)});
    }
    engine.resolve(network.graph(), tx);
    for (const auto& rx : engine.receptions()) result.table.insert(rx.receiver, rx.message.sender);
    result.trace.record(network.slot_clock(), Phase::exchange, tx, engine);
    network.advance_clock(1);
  }
  return result;
}

AssignResult assign_code(RadioNetwork& network, const analytic::ProtocolConstants& constants,
                         std::uint64_t seed, AckMode ack_mode, const AssignOptions& options) {
  const std::size_t n = network.size();
  const ReachabilityGraph& g = network.graph();
  AssignResult result;
  result.trace.recorded = options.record_trace;
  ColoringState& st = result.state;

  const NeighborTable table = options.neighbor_table ? *options.neighbor_table : NeighborTable::from_graph(network);
  if (table.ids.size() != n) throw std::invalid_argument("neighbor table size mismatch");

  double delta = constants.delta_cap;
  if (options.delta_source == DeltaSource::realized) {
    std::size_t max_degree = 0;
    for (NodeIndex u = 0; u < n; ++u) max_degree = std::max(max_degree, g.degree(u));
    delta = static_cast<double>(max_degree);
  }
  if (!(delta >= 0.0)) throw std::invalid_argument("assign_code needs Delta >= 0");
  result.ack_slots = static_cast<std::size_t>(std::ceil(delta));
  if (options.rounds)
    result.rounds_scheduled = *options.rounds;
  else if (n >= 2)
    result.rounds_scheduled = polylog_rounds(constants.d_ell, n);

  st.palette.resize(n);
  st.assigned.assign(n, 0);
  st.active.assign(n, 1);
  st.rank_table.resize(n);
  for (NodeIndex u = 0; u < n; ++u) {
    for (NodeId id : table.ids[u]) st.rank_table[u].push_back(network.index_of(id));
    st.palette[u].resize(st.rank_table[u].size() + 1);
    std::iota(st.palette[u].begin(), st.palette[u].end(), Color{1});
  }
  // known_active[u][k] tracks whether u still believes rank_table[u][k] is active.
  std::vector<std::vector<std::uint8_t>> known_active(n);
  for (NodeIndex u = 0; u < n; ++u) known_active[u].assign(st.rank_table[u].size(), 1);
  auto mark_inactive = [&](NodeIndex listener, NodeIndex sender) {
    const auto& ranks = st.rank_table[listener];
    for (std::size_t k = 0; k < ranks.size(); ++k)
      if (ranks[k] == sender) known_active[listener][k] = 0;
  };

  Rng rng(seed);
  SlotEngine engine(n);
  std::vector<std::pair<NodeIndex, Message>> tx;
  std::vector<Color> proposal(n, 0);
  std::vector<std::uint8_t> candidate(n, 0), heard_candidate(n, 0), confirmed(n, 0);
  std::vector<NodeIndex> heard_from(n, 0);
  std::vector<std::uint32_t> acks_heard(n, 0);
  std::size_t remaining = n;

  for (std::size_t round = 0; round < result.rounds_scheduled && remaining > 0; ++round) {
    ++result.rounds_executed;
    for (NodeIndex u = 0; u < n; ++u)
      if (st.active[u] && st.palette[u].empty()) ++result.palette_violations;

    // Contention.
    tx.clear();
    for (NodeIndex u = 0; u < n; ++u) {
      candidate[u] = 0;
      if (!st.active[u] || st.palette[u].empty()) continue;
      const auto& pal = st.palette[u];
      std::optional<std::size_t> pick;
      if (options.contention) {
        if (auto c = options.contention(round, u, pal)) pick = std::min(c->palette_index, pal.size() - 1);
      } else {
        const std::size_t idx = rng.below(pal.size());
        if (rng.bernoulli(1.0 / (delta + static_cast<double>(pal.size())))) pick = idx;
      }
      if (pick) {
        candidate[u] = 1;
        proposal[u] = pal[*pick];
        tx.emplace_back(u, Message{MessageKind::color, network.id(u), proposal[u]});
      }
    }
    engine.resolve(g, tx);
    result.trace.record(network.slot_clock(), Phase::contention, tx, engine);
    network.advance_clock(1);

    std::fill(heard_candidate.begin(), heard_candidate.end(), 0);
    for (const auto& rx : engine.receptions()) {
      heard_candidate[rx.receiver] = 1;
      heard_from[rx.receiver] = rx.sender;
    }

    std::vector<NodeIndex> confirmers;
    if (ack_mode == AckMode::idealized) {
      // Success iff every active neighbour heard u's broadcast cleanly.
      for (const auto& [u, msg] : tx) {
        bool ok = true;
        for (NodeIndex v : g.neighbors(u)) {
          if (st.active[v] && !(heard_candidate[v] && heard_from[v] == u)) {
            ok = false;
            break;
          }
        }
        if (ok) confirmers.push_back(u);
      }
      if (result.trace.recorded) {
        for (std::size_t s = 0; s < result.ack_slots; ++s) {
          engine.resolve(g, {});
          result.trace.record(network.slot_clock(), Phase::ack, {}, engine);
          network.advance_clock(1);
        }
      } else {
        network.advance_clock(result.ack_slots);
      }
    } else {
      // Each listener that heard candidate u acks in the slot of its rank among
      // u's currently active known neighbours.
      std::vector<std::vector<std::pair<NodeIndex, Message>>> by_slot(result.ack_slots);
      std::vector<std::uint32_t> expected(n, 0);
      for (const auto& [u, msg] : tx) {
        std::uint32_t rank = 0;
        for (std::size_t k = 0; k < st.rank_table[u].size(); ++k) {
          if (!known_active[u][k]) continue;
          const NodeIndex v = st.rank_table[u][k];
          ++rank;
          if (st.active[v] && heard_candidate[v] && heard_from[v] == u && rank <= result.ack_slots)
            by_slot[rank - 1].emplace_back(v, Message{MessageKind::ack, network.id(v), network.id(u)});
        }
        expected[u] = rank;
        acks_heard[u] = 0;
      }
      for (std::size_t s = 0; s < result.ack_slots; ++s) {
        auto& slot_tx = by_slot[s];
        if (slot_tx.empty() && !result.trace.recorded) {
          network.advance_clock(1);
          continue;
        }
        engine.resolve(g, slot_tx);
        for (const auto& rx : engine.receptions())
          if (candidate[rx.receiver] && rx.message.payload == network.id(rx.receiver)) ++acks_heard[rx.receiver];
        result.trace.record(network.slot_clock(), Phase::ack, slot_tx, engine);
        network.advance_clock(1);
      }
      for (const auto& [u, msg] : tx)
        if (acks_heard[u] == expected[u]) confirmers.push_back(u);
    }

    // Confirmation.
    tx.clear();
    for (NodeIndex u : confirmers)
      tx.emplace_back(u, Message{MessageKind::confirm, network.id(u), proposal[u]});
    engine.resolve(g, tx);
    for (const auto& rx : engine.receptions()) {
      if (!st.active[rx.receiver]) continue;
      detail::erase_color(st.palette[rx.receiver], static_cast<Color>(rx.message.payload));
      mark_inactive(rx.receiver, rx.sender);
    }
    for (NodeIndex u : confirmers) {
      st.assigned[u] = proposal[u];
      st.active[u] = 0;
      --remaining;
    }
    result.trace.record(network.slot_clock(), Phase::confirm, tx, engine);
    network.advance_clock(1);
  }
  return result;
}

ColoringVerdict verify_coloring(const RadioNetwork& network, const ColoringState& state) {
  const auto& g = network.graph();
  if (state.assigned.size() != g.size()) throw std::invalid_argument("coloring state size mismatch");
  ColoringVerdict v;
  std::vector<Color> used;
  for (NodeIndex u = 0; u < g.size(); ++u) {
    if (state.assigned[u] == 0) {
      v.uncolored.push_back(u);
      continue;
    }
    used.push_back(state.assigned[u]);
    for (NodeIndex w : g.neighbors(u))
      if (u < w && state.assigned[w] == state.assigned[u]) v.violations.emplace_back(u, w);
  }
  std::sort(used.begin(), used.end());
  v.colors_used = static_cast<std::size_t>(std::unique(used.begin(), used.end()) - used.begin());
  v.proper = v.violations.empty();
  return v;
}

}  // namespace rsn::protocol
