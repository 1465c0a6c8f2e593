#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rsn/analytic.hpp"
#include "rsn/geometry.hpp"
#include "rsn/rgg.hpp"

// Synchronous slotted radio model. In a slot every node either transmits or
// listens; a listener receives iff exactly one neighbour transmits. Two or more
// transmitting neighbours collide, and a collision looks like silence to the
// listener (the trace still records the truth).
namespace rsn::protocol {

using NodeId = std::uint32_t;  // 1..n
using Color = std::uint32_t;   // 1-based

enum class MessageKind : std::uint8_t { id, color, ack, confirm, data };

inline std::string_view to_string(MessageKind k) {
  switch (k) {
    case MessageKind::id: return "id";
    case MessageKind::color: return "color";
    case MessageKind::ack: return "ack";
    case MessageKind::confirm: return "confirm";
    case MessageKind::data: return "data";
  }
  return "?";
}

struct Message {
  MessageKind kind = MessageKind::data;
  NodeId sender = 0;
  std::int64_t payload = 0;
  friend bool operator==(const Message&, const Message&) = default;
};

class RadioNetwork {
 public:
  // IDs default to index + 1.
  explicit RadioNetwork(ReachabilityGraph graph) : graph_(std::move(graph)), ids_(graph_.size()) {
    std::iota(ids_.begin(), ids_.end(), NodeId{1});
    rebuild_index();
  }

  // Random permutation of 1..n (Fisher-Yates driven by `seed`).
  static RadioNetwork with_shuffled_ids(ReachabilityGraph graph, std::uint64_t seed) {
    RadioNetwork net(std::move(graph));
    Rng rng(seed);
    for (std::size_t i = net.ids_.size(); i > 1; --i) std::swap(net.ids_[i - 1], net.ids_[rng.below(i)]);
    net.rebuild_index();
    return net;
  }

  const ReachabilityGraph& graph() const { return graph_; }
  std::size_t size() const { return graph_.size(); }
  NodeId id(NodeIndex u) const { return ids_[u]; }
  NodeIndex index_of(NodeId id) const {
    if (id == 0 || id > index_.size()) throw std::out_of_range("unknown node id");
    return index_[id - 1];
  }

  std::uint64_t slot_clock() const { return slot_clock_; }
  void advance_clock(std::uint64_t slots) { slot_clock_ += slots; }

 private:
  void rebuild_index() {
    index_.assign(ids_.size(), 0);
    for (std::size_t u = 0; u < ids_.size(); ++u) index_[ids_[u] - 1] = static_cast<NodeIndex>(u);
  }

  ReachabilityGraph graph_;
  std::vector<NodeId> ids_;
  std::vector<NodeIndex> index_;
  std::uint64_t slot_clock_ = 0;
};

enum class Observation : std::uint8_t { transmitted, received, silence, collision };

struct NodeOutcome {
  Observation what = Observation::silence;
  std::optional<Message> message;  // sent or received message
};

struct SlotOutcome {
  std::vector<NodeOutcome> nodes;

  // What the node itself can tell: collisions are indistinguishable from silence.
  std::optional<Message> observed(NodeIndex u) const {
    return nodes[u].what == Observation::received ? nodes[u].message : std::nullopt;
  }
};

// A node's choice for one slot: transmit `message`, or listen when empty.
struct Decision {
  std::optional<Message> transmit;
};

// Sparse slot resolution: cost is proportional to the transmitters' degrees.
class SlotEngine {
 public:
  struct Reception {
    NodeIndex receiver;
    NodeIndex sender;
    Message message;
  };

  explicit SlotEngine(std::size_t n) : hits_(n, 0), sender_(n, 0), transmitting_(n, 0) {}

  // `transmitters` pairs a node with the message it sends this slot.
  void resolve(const ReachabilityGraph& g, std::span<const std::pair<NodeIndex, Message>> transmitters) {
    receptions_.clear();
    collisions_.clear();
    touched_.clear();
    for (std::size_t t = 0; t < transmitters.size(); ++t) transmitting_[transmitters[t].first] = 1;
    for (std::size_t t = 0; t < transmitters.size(); ++t) {
      const NodeIndex u = transmitters[t].first;
      for (NodeIndex v : g.neighbors(u)) {
        if (hits_[v]++ == 0) {
          touched_.push_back(v);
          sender_[v] = static_cast<std::uint32_t>(t);
        }
      }
    }
    std::sort(touched_.begin(), touched_.end());
    for (NodeIndex v : touched_) {
      if (!transmitting_[v]) {
        if (hits_[v] == 1) {
          const auto& [from, msg] = transmitters[sender_[v]];
          receptions_.push_back({v, from, msg});
        } else {
          collisions_.push_back(v);
        }
      }
      hits_[v] = 0;
    }
    for (const auto& tx : transmitters) transmitting_[tx.first] = 0;
  }

  // Sorted by receiver index.
  const std::vector<Reception>& receptions() const { return receptions_; }
  const std::vector<NodeIndex>& collisions() const { return collisions_; }

 private:
  std::vector<std::uint32_t> hits_;
  std::vector<std::uint32_t> sender_;
  std::vector<std::uint8_t> transmitting_;
  std::vector<NodeIndex> touched_;
  std::vector<Reception> receptions_;
  std::vector<NodeIndex> collisions_;
};

enum class Phase : std::uint8_t { raw, exchange, contention, ack, confirm };

inline std::string_view to_string(Phase p) {
  switch (p) {
    case Phase::raw: return "raw";
    case Phase::exchange: return "exchange";
    case Phase::contention: return "contention";
    case Phase::ack: return "ack";
    case Phase::confirm: return "confirm";
  }
  return "?";
}

struct SlotRecord {
  std::uint64_t slot = 0;
  Phase phase = Phase::raw;
  std::vector<std::pair<NodeIndex, Message>> transmitters;
  std::vector<std::pair<NodeIndex, NodeIndex>> receptions;  // (receiver, sender)
  std::vector<NodeIndex> collisions;
  friend bool operator==(const SlotRecord&, const SlotRecord&) = default;
};

struct ProtocolTrace {
  bool recorded = false;
  std::vector<SlotRecord> slots;
  friend bool operator==(const ProtocolTrace&, const ProtocolTrace&) = default;

  void record(std::uint64_t slot, Phase phase, std::span<const std::pair<NodeIndex, Message>> tx,
              const SlotEngine& engine) {
    if (!recorded) return;
    SlotRecord r;
    r.slot = slot;
    r.phase = phase;
    r.transmitters.assign(tx.begin(), tx.end());
    for (const auto& rx : engine.receptions()) r.receptions.emplace_back(rx.receiver, rx.sender);
    r.collisions = engine.collisions();
    slots.push_back(std::move(r));
  }
};

// One line per slot, tab separated:
//   slot  phase  tx=u:kind:sender:payload,...  rx=v<u,...  col=v,...
// Listening nodes absent from rx and col heard nothing. Empty lists print as "-".
void write_trace(std::ostream& out, const ProtocolTrace& trace);

// Applies the reception rule to one slot and advances the network clock.
SlotOutcome run_slot(RadioNetwork& network, std::span<const Decision> decisions);

// Per node, the sorted IDs it has heard from.
struct NeighborTable {
  std::vector<std::vector<NodeId>> ids;

  static NeighborTable from_graph(const RadioNetwork& network) {
    NeighborTable t;
    t.ids.resize(network.size());
    for (NodeIndex u = 0; u < network.size(); ++u) {
      for (NodeIndex v : network.graph().neighbors(u)) t.ids[u].push_back(network.id(v));
      std::sort(t.ids[u].begin(), t.ids[u].end());
    }
    return t;
  }

  void insert(NodeIndex u, NodeId id) {
    auto& l = ids[u];
    const auto it = std::lower_bound(l.begin(), l.end(), id);
    if (it == l.end() || *it != id) l.insert(it, id);
  }

  // Arcs v -> u with v in Gamma(u) that u has not heard.
  std::size_t missing_arcs(const RadioNetwork& network) const {
    const auto truth = from_graph(network);
    std::size_t missing = 0;
    for (std::size_t u = 0; u < ids.size(); ++u) missing += truth.ids[u].size() - ids[u].size();
    return missing;
  }

  bool complete(const RadioNetwork& network) const { return ids == from_graph(network).ids; }
};

inline double transmit_probability(std::size_t n) {
  const double ln = std::log(static_cast<double>(n));
  return ln <= 1.0 ? 1.0 : 1.0 / ln;
}

// ceil(multiplier * (ln n)^2)
inline std::size_t polylog_rounds(double multiplier, std::size_t n) {
  const double ln = std::log(static_cast<double>(n));
  return static_cast<std::size_t>(std::ceil(multiplier * ln * ln));
}

struct ExchangeOptions {
  std::optional<std::size_t> rounds;  // overrides ceil(C_ell (ln n)^2)
  // Replaces the coin flip: returns whether node u transmits in slot i.
  std::function<bool(std::size_t slot, NodeIndex u)> schedule;
  bool record_trace = false;
};

struct ExchangeResult {
  NeighborTable table;
  ProtocolTrace trace;
  std::size_t rounds = 0;
};

// Neighbourhood discovery: each slot every node broadcasts its ID with probability 1/ln n.
ExchangeResult exchange_id(RadioNetwork& network, const analytic::ProtocolConstants& constants,
                           std::uint64_t seed, const ExchangeOptions& options = {});

enum class AckMode { simulated, idealized };

inline std::string_view to_string(AckMode m) { return m == AckMode::simulated ? "simulated" : "idealized"; }

inline AckMode parse_ack_mode(std::string_view s) {
  if (s == "simulated") return AckMode::simulated;
  if (s == "idealized") return AckMode::idealized;
  throw std::invalid_argument("unknown ack mode: " + std::string(s));
}

// Which degree cap drives the 1/(Delta + |p(u)|) contention probability and the ack window.
enum class DeltaSource { predicted, realized };

struct ColoringState {
  std::vector<std::vector<Color>> palette;  // ascending
  std::vector<Color> assigned;              // 0 = uncolored
  std::vector<std::uint8_t> active;
  std::vector<std::vector<NodeIndex>> rank_table;  // known neighbours by ascending ID

  std::size_t colored_count() const {
    return static_cast<std::size_t>(std::count_if(assigned.begin(), assigned.end(), [](Color c) { return c != 0; }));
  }
};

struct ContentionChoice {
  std::size_t palette_index = 0;
};

struct AssignOptions {
  std::optional<std::size_t> rounds;            // overrides ceil(D_ell (ln n)^2)
  std::optional<NeighborTable> neighbor_table;  // defaults to the true neighbourhoods
  DeltaSource delta_source = DeltaSource::predicted;
  // Replaces the random pick + coin flip. Return nullopt to stay silent.
  std::function<std::optional<ContentionChoice>(std::size_t round, NodeIndex u, std::span<const Color> palette)>
      contention;
  bool record_trace = false;
};

struct AssignResult {
  ColoringState state;
  ProtocolTrace trace;
  std::size_t rounds_scheduled = 0;
  std::size_t rounds_executed = 0;  // stops early once nobody is active
  std::size_t ack_slots = 0;
  std::size_t palette_violations = 0;  // active nodes seen with an empty palette
};

namespace detail {

inline void erase_color(std::vector<Color>& palette, Color c) {
  const auto it = std::lower_bound(palette.begin(), palette.end(), c);
  if (it != palette.end() && *it == c) palette.erase(it);
}

}  // namespace detail

// Randomized distributed coloring. Each compound round is one contention slot,
// ceil(Delta) ack slots and one confirmation slot.
AssignResult assign_code(RadioNetwork& network, const analytic::ProtocolConstants& constants,
                         std::uint64_t seed, AckMode ack_mode, const AssignOptions& options = {});

struct ColoringVerdict {
  bool proper = true;
  std::vector<std::pair<NodeIndex, NodeIndex>> violations;  // adjacent pairs sharing a color
  std::vector<NodeIndex> uncolored;
  std::size_t colors_used = 0;
};

ColoringVerdict verify_coloring(const RadioNetwork& network, const ColoringState& state);

}  // namespace rsn::protocol
