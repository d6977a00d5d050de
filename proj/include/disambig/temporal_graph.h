#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace disambig {

using NodeIndex = std::uint32_t;
using TimeBin = std::int64_t;

// One multi-party collaboration (an article, a call, a meeting) in a time bin.
struct CollabEvent {
  std::string event_id;
  TimeBin time = 0;
  std::vector<std::string> participants;

  friend bool operator==(const CollabEvent&, const CollabEvent&) = default;
};

// Number of pairwise collaborations between two nodes within one time bin.
struct TimedCount {
  TimeBin time = 0;
  std::uint64_t count = 0;

  friend bool operator==(const TimedCount&, const TimedCount&) = default;
};

// Event list T(e) of one undirected pair, sorted by time.
struct EdgeHistory {
  NodeIndex a = 0;  // a < b
  NodeIndex b = 0;
  std::vector<TimedCount> counts;

  std::uint64_t total_count() const;
};

// W = sum_i n_i * exp(-(t_max - t_i) / tau). Throws if some t_i > t_max or
// tau is not positive.
double decay_weight(std::span<const TimedCount> history, TimeBin t_max,
                    double tau);

struct InternedEvent {
  std::string event_id;
  TimeBin time = 0;
  std::vector<NodeIndex> participants;  // sorted
};

// Immutable collaboration graph. Events are hyperedges; every pair of
// co-participants gets one count per shared event (clique expansion).
class TemporalGraph {
 public:
  struct Neighbor {
    NodeIndex node;
    std::uint32_t edge;  // index into edges()
  };

  TemporalGraph() = default;

  std::size_t num_nodes() const { return names_.size(); }
  std::size_t num_edges() const { return edges_.size(); }
  std::size_t num_events() const { return events_.size(); }

  const std::string& name(NodeIndex v) const { return names_.at(v); }
  std::optional<NodeIndex> find(const std::string& name) const;
  // Throws Error(kUnknownNode).
  NodeIndex index_of(const std::string& name) const;

  // Sorted by neighbor index.
  std::span<const Neighbor> neighbors(NodeIndex v) const {
    return adjacency_.at(v);
  }
  std::size_t degree(NodeIndex v) const { return adjacency_.at(v).size(); }

  const EdgeHistory& edge(std::uint32_t e) const { return edges_.at(e); }
  std::span<const EdgeHistory> edges() const { return edges_; }
  // Null when v and w never co-participated.
  const EdgeHistory* find_edge(NodeIndex v, NodeIndex w) const;

  std::span<const InternedEvent> events() const { return events_; }
  // Indices into events() of every event v took part in, in input order.
  std::span<const std::uint32_t> events_of(NodeIndex v) const {
    return node_events_.at(v);
  }

 private:
  friend TemporalGraph build_graph(std::span<const CollabEvent> events);

  std::vector<std::string> names_;
  std::unordered_map<std::string, NodeIndex> index_;
  std::vector<InternedEvent> events_;
  std::vector<std::vector<std::uint32_t>> node_events_;
  std::vector<std::vector<Neighbor>> adjacency_;
  std::vector<EdgeHistory> edges_;
};

// Throws Error(kDuplicateId) on a repeated event id and
// Error(kInvalidArgument) on an empty or self-duplicating participant list.
TemporalGraph build_graph(std::span<const CollabEvent> events);

struct WeightedEdge {
  std::uint32_t a = 0;  // local member indices, a < b
  std::uint32_t b = 0;
  double weight = 0.0;
};

// Induced subgraph around an ego with decay-weighted similarities. Member 0 is
// always the ego; the remaining members are its neighbors in ascending global
// index order.
class EgoNetwork {
 public:
  struct LocalNeighbor {
    std::uint32_t member;
    double weight;
  };

  NodeIndex ego() const { return members_.front(); }
  std::span<const NodeIndex> members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  std::size_t num_neighbors() const { return members_.size() - 1; }

  std::span<const WeightedEdge> edges() const { return edges_; }
  // Sorted by member index.
  std::span<const LocalNeighbor> adjacent(std::uint32_t member) const {
    return adjacency_.at(member);
  }
  // 0 when the pair is not connected.
  double weight(std::uint32_t a, std::uint32_t b) const;

  std::optional<std::uint32_t> local_index(NodeIndex global) const;

  TimeBin t_max() const { return t_max_; }
  double tau() const { return tau_; }

  // Same members and edges with every weight multiplied by factor.
  EgoNetwork scaled(double factor) const;

  // Builds a network directly from local edges. Member 0 is the ego.
  static EgoNetwork from_edges(std::vector<NodeIndex> members,
                               std::vector<WeightedEdge> edges,
                               TimeBin t_max = 0, double tau = 5.0);

 private:
  friend EgoNetwork ego_network(const TemporalGraph& g, NodeIndex ego,
                                double tau);
  void index_edges();

  std::vector<NodeIndex> members_;
  std::vector<WeightedEdge> edges_;
  std::vector<std::vector<LocalNeighbor>> adjacency_;
  std::unordered_map<NodeIndex, std::uint32_t> local_;
  TimeBin t_max_ = 0;
  double tau_ = 5.0;
};

// Throws Error(kUnknownNode) for an out-of-range ego, Error(kNoNeighbors) when
// the ego never collaborated with anyone, Error(kInvalidArgument) for tau <= 0.
EgoNetwork ego_network(const TemporalGraph& g, NodeIndex ego, double tau);

}  // namespace disambig
