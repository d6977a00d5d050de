#include "disambig/temporal_graph.h"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include <fmt/format.h>

#include "disambig/error.h"

namespace disambig {

std::uint64_t EdgeHistory::total_count() const {
  std::uint64_t total = 0;
  for (const auto& c : counts) total += c.count;
  return total;
}

double decay_weight(std::span<const TimedCount> history, TimeBin t_max,
                    double tau) {
  if (!(tau > 0.0) || !std::isfinite(tau)) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("decay constant must be positive, got {}", tau));
  }
  double weight = 0.0;
  for (const auto& entry : history) {
    if (entry.time > t_max) {
      throw Error(ErrorCode::kInvalidArgument,
                  fmt::format("event time {} is after t_max {}", entry.time,
                              t_max));
    }
    weight += static_cast<double>(entry.count) *
              std::exp(-static_cast<double>(t_max - entry.time) / tau);
  }
  return weight;
}

std::optional<NodeIndex> TemporalGraph::find(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

NodeIndex TemporalGraph::index_of(const std::string& name) const {
  auto found = find(name);
  if (!found) {
    throw Error(ErrorCode::kUnknownNode, fmt::format("unknown node '{}'", name));
  }
  return *found;
}

const EdgeHistory* TemporalGraph::find_edge(NodeIndex v, NodeIndex w) const {
  if (v >= adjacency_.size()) return nullptr;
  const auto& adj = adjacency_[v];
  auto it = std::lower_bound(
      adj.begin(), adj.end(), w,
      [](const Neighbor& n, NodeIndex target) { return n.node < target; });
  if (it == adj.end() || it->node != w) return nullptr;
  return &edges_[it->edge];
}

TemporalGraph build_graph(std::span<const CollabEvent> events) {
  TemporalGraph g;
  std::unordered_set<std::string_view> seen_ids;
  seen_ids.reserve(events.size());

  auto intern = [&g](const std::string& name) {
    auto [it, inserted] =
        g.index_.try_emplace(name, static_cast<NodeIndex>(g.names_.size()));
    if (inserted) {
      g.names_.push_back(name);
      g.node_events_.emplace_back();
    }
    return it->second;
  };

  g.events_.reserve(events.size());
  for (const auto& event : events) {
    if (!seen_ids.insert(event.event_id).second) {
      throw Error(ErrorCode::kDuplicateId,
                  fmt::format("duplicate event id '{}'", event.event_id));
    }
    if (event.participants.empty()) {
      throw Error(ErrorCode::kInvalidArgument,
                  fmt::format("event '{}' has no participants", event.event_id));
    }
    InternedEvent interned{event.event_id, event.time, {}};
    interned.participants.reserve(event.participants.size());
    for (const auto& p : event.participants) {
      interned.participants.push_back(intern(p));
    }
    std::sort(interned.participants.begin(), interned.participants.end());
    if (std::adjacent_find(interned.participants.begin(),
                           interned.participants.end()) !=
        interned.participants.end()) {
      throw Error(ErrorCode::kInvalidArgument,
                  fmt::format("event '{}' lists a participant twice",
                              event.event_id));
    }
    const auto event_index = static_cast<std::uint32_t>(g.events_.size());
    for (NodeIndex v : interned.participants) {
      g.node_events_[v].push_back(event_index);
    }
    g.events_.push_back(std::move(interned));
  }

  // Clique expansion: collect one (pair, time) record per shared event.
  std::unordered_map<std::uint64_t, std::uint32_t> pair_index;
  for (const auto& event : g.events_) {
    const auto& ps = event.participants;
    for (std::size_t i = 0; i < ps.size(); ++i) {
      for (std::size_t j = i + 1; j < ps.size(); ++j) {
        const std::uint64_t key = (std::uint64_t{ps[i]} << 32) | ps[j];
        auto [it, inserted] = pair_index.try_emplace(
            key, static_cast<std::uint32_t>(g.edges_.size()));
        if (inserted) g.edges_.push_back(EdgeHistory{ps[i], ps[j], {}});
        g.edges_[it->second].counts.push_back(TimedCount{event.time, 1});
      }
    }
  }

  for (auto& edge : g.edges_) {
    auto& counts = edge.counts;
    std::stable_sort(counts.begin(), counts.end(),
                     [](const TimedCount& x, const TimedCount& y) {
                       return x.time < y.time;
                     });
    std::vector<TimedCount> merged;
    for (const auto& c : counts) {
      if (!merged.empty() && merged.back().time == c.time) {
        merged.back().count += c.count;
      } else {
        merged.push_back(c);
      }
    }
    counts = std::move(merged);
  }

  g.adjacency_.assign(g.names_.size(), {});
  for (std::uint32_t e = 0; e < g.edges_.size(); ++e) {
    g.adjacency_[g.edges_[e].a].push_back({g.edges_[e].b, e});
    g.adjacency_[g.edges_[e].b].push_back({g.edges_[e].a, e});
  }
  for (auto& adj : g.adjacency_) {
    std::sort(adj.begin(), adj.end(),
              [](const auto& x, const auto& y) { return x.node < y.node; });
  }
  return g;
}

double EgoNetwork::weight(std::uint32_t a, std::uint32_t b) const {
  const auto& adj = adjacency_.at(a);
  auto it = std::lower_bound(
      adj.begin(), adj.end(), b,
      [](const LocalNeighbor& n, std::uint32_t target) {
        return n.member < target;
      });
  if (it == adj.end() || it->member != b) return 0.0;
  return it->weight;
}

std::optional<std::uint32_t> EgoNetwork::local_index(NodeIndex global) const {
  auto it = local_.find(global);
  if (it == local_.end()) return std::nullopt;
  return it->second;
}

void EgoNetwork::index_edges() {
  local_.clear();
  for (std::uint32_t i = 0; i < members_.size(); ++i) local_[members_[i]] = i;
  adjacency_.assign(members_.size(), {});
  for (const auto& e : edges_) {
    adjacency_[e.a].push_back({e.b, e.weight});
    adjacency_[e.b].push_back({e.a, e.weight});
  }
  for (auto& adj : adjacency_) {
    std::sort(adj.begin(), adj.end(),
              [](const auto& x, const auto& y) { return x.member < y.member; });
  }
}

EgoNetwork EgoNetwork::scaled(double factor) const {
  EgoNetwork copy = *this;
  for (auto& e : copy.edges_) e.weight *= factor;
  for (auto& adj : copy.adjacency_) {
    for (auto& n : adj) n.weight *= factor;
  }
  return copy;
}

EgoNetwork EgoNetwork::from_edges(std::vector<NodeIndex> members,
                                  std::vector<WeightedEdge> edges,
                                  TimeBin t_max, double tau) {
  if (members.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "ego network needs an ego");
  }
  EgoNetwork net;
  net.members_ = std::move(members);
  for (auto& e : edges) {
    if (e.a == e.b || e.a >= net.members_.size() ||
        e.b >= net.members_.size() || !(e.weight > 0.0)) {
      throw Error(ErrorCode::kInvalidArgument,
                  fmt::format("bad ego edge ({}, {}, {})", e.a, e.b, e.weight));
    }
    if (e.a > e.b) std::swap(e.a, e.b);
  }
  std::sort(edges.begin(), edges.end(), [](const auto& x, const auto& y) {
    return std::pair(x.a, x.b) < std::pair(y.a, y.b);
  });
  net.edges_ = std::move(edges);
  net.t_max_ = t_max;
  net.tau_ = tau;
  net.index_edges();
  return net;
}

EgoNetwork ego_network(const TemporalGraph& g, NodeIndex ego, double tau) {
  if (ego >= g.num_nodes()) {
    throw Error(ErrorCode::kUnknownNode,
                fmt::format("node index {} out of range", ego));
  }
  if (!(tau > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("decay constant must be positive, got {}", tau));
  }
  const auto direct = g.neighbors(ego);
  if (direct.empty()) {
    throw Error(ErrorCode::kNoNeighbors,
                fmt::format("unscorable: no neighbors ('{}')", g.name(ego)));
  }

  EgoNetwork net;
  net.tau_ = tau;
  net.members_.reserve(direct.size() + 1);
  net.members_.push_back(ego);
  for (const auto& n : direct) net.members_.push_back(n.node);
  net.local_.reserve(net.members_.size());
  for (std::uint32_t i = 0; i < net.members_.size(); ++i) {
    net.local_[net.members_[i]] = i;
  }

  struct Carried {
    std::uint32_t a, b, edge;
  };
  std::vector<Carried> carried;
  TimeBin t_max = g.edge(direct.front().edge).counts.back().time;
  for (std::uint32_t i = 0; i < net.members_.size(); ++i) {
    for (const auto& n : g.neighbors(net.members_[i])) {
      auto it = net.local_.find(n.node);
      if (it == net.local_.end() || it->second <= i) continue;
      carried.push_back({i, it->second, n.edge});
      t_max = std::max(t_max, g.edge(n.edge).counts.back().time);
    }
  }
  net.t_max_ = t_max;

  net.edges_.reserve(carried.size());
  for (const auto& c : carried) {
    net.edges_.push_back(
        {c.a, c.b, decay_weight(g.edge(c.edge).counts, t_max, tau)});
  }
  std::sort(net.edges_.begin(), net.edges_.end(),
            [](const auto& x, const auto& y) {
              return std::pair(x.a, x.b) < std::pair(y.a, y.b);
            });
  net.index_edges();
  return net;
}

}  // namespace disambig
