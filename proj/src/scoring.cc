#include "disambig/scoring.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include <fmt/format.h>

#include "disambig/error.h"

namespace disambig {

NcResult nc_score(const EgoNetwork& ego, const Clustering& clustering) {
  NcResult result;
  result.k = clustering.k();
  result.per_cluster.assign(result.k, {});
  const auto cluster_of = clustering.assignment(ego.size());

  for (const auto& e : ego.edges()) {
    if (e.a == 0 || e.b == 0) continue;  // ego edges are not part of G_u \ u
    const auto ca = cluster_of[e.a];
    const auto cb = cluster_of[e.b];
    if (ca == Clustering::kNoCluster || cb == Clustering::kNoCluster) {
      throw Error(ErrorCode::kInvalidArgument,
                  "clustering does not cover every neighbor");
    }
    if (ca == cb) {
      result.per_cluster[ca].internal += e.weight;
    } else {
      result.per_cluster[ca].cut += e.weight;
      result.per_cluster[cb].cut += e.weight;
    }
  }

  for (const auto& c : result.per_cluster) {
    const double total = c.internal + c.cut;
    if (total > 0.0) result.nc_raw += c.cut / total;
  }
  if (result.k == 0) {
    result.nc_score = 0.0;
  } else if (result.k == 1) {
    // A single cluster carries no evidence of merged identities.
    result.nc_score = 1.0;
  } else {
    result.nc_score = result.nc_raw / static_cast<double>(result.k);
  }
  return result;
}

std::vector<double> centered_moving_average(std::span<const double> values,
                                            int window) {
  if (window < 1 || window % 2 == 0) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("smoothing window must be odd, got {}", window));
  }
  const auto n = static_cast<std::ptrdiff_t>(values.size());
  const std::ptrdiff_t half = window / 2;
  std::vector<double> out(values.size(), 0.0);
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto lo = std::max<std::ptrdiff_t>(0, i - half);
    const auto hi = std::min<std::ptrdiff_t>(n - 1, i + half);
    double sum = 0.0;
    for (auto j = lo; j <= hi; ++j) sum += values[j];
    out[i] = sum / static_cast<double>(hi - lo + 1);
  }
  return out;
}

std::vector<double> laplace_distribution(std::span<const double> values,
                                         double eps) {
  std::vector<double> dist(values.begin(), values.end());
  if (dist.empty()) return dist;
  double sum = 0.0;
  for (double v : dist) sum += v;
  if (sum <= 0.0) {
    std::fill(dist.begin(), dist.end(), 1.0 / static_cast<double>(dist.size()));
    return dist;
  }
  for (double& v : dist) v /= sum;
  sum = 0.0;
  for (double& v : dist) {
    if (v == 0.0) v = eps;
    sum += v;
  }
  for (double& v : dist) v /= sum;
  return dist;
}

std::vector<ActivityProfile> activity_profiles(const TemporalGraph& g,
                                               const EgoNetwork& ego,
                                               const Clustering& clustering,
                                               int window,
                                               double laplace_eps) {
  const NodeIndex u = ego.ego();
  const auto event_ids = g.events_of(u);
  if (event_ids.empty()) {
    throw Error(ErrorCode::kNoEvents,
                fmt::format("unscorable: no events ('{}')", g.name(u)));
  }
  TimeBin first = std::numeric_limits<TimeBin>::max();
  TimeBin last = std::numeric_limits<TimeBin>::min();
  for (auto id : event_ids) {
    first = std::min(first, g.events()[id].time);
    last = std::max(last, g.events()[id].time);
  }
  const auto bins = static_cast<std::size_t>(last - first + 1);

  const auto cluster_of = clustering.assignment(ego.size());
  std::vector<ActivityProfile> profiles(clustering.k());
  for (std::size_t i = 0; i < profiles.size(); ++i) {
    profiles[i].cluster_index = i;
    profiles[i].first_bin = first;
    profiles[i].raw.assign(bins, 0.0);
  }

  std::vector<std::size_t> members_in(clustering.k(), 0);
  for (auto id : event_ids) {
    const auto& event = g.events()[id];
    const std::size_t l = event.participants.size() - 1;
    if (l == 0) continue;
    std::fill(members_in.begin(), members_in.end(), 0);
    for (NodeIndex v : event.participants) {
      if (v == u) continue;
      const auto local = ego.local_index(v);
      const auto c = local ? cluster_of[*local] : Clustering::kNoCluster;
      if (c == Clustering::kNoCluster) {
        throw Error(ErrorCode::kInvalidArgument,
                    fmt::format("co-participant '{}' of '{}' is unclustered",
                                g.name(v), g.name(u)));
      }
      ++members_in[c];
    }
    const auto bin = static_cast<std::size_t>(event.time - first);
    for (std::size_t c = 0; c < members_in.size(); ++c) {
      if (members_in[c] == 0) continue;
      profiles[c].raw[bin] +=
          static_cast<double>(members_in[c]) / static_cast<double>(l);
    }
  }

  for (auto& p : profiles) {
    p.event_mass = 0.0;
    for (double v : p.raw) p.event_mass += v;
    p.smoothed = centered_moving_average(p.raw, window);
    p.dist = laplace_distribution(p.smoothed, laplace_eps);
  }
  return profiles;
}

double symmetric_kl(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("distribution lengths differ ({} vs {})", p.size(),
                            q.size()));
  }
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!(p[i] > 0.0) || !(q[i] > 0.0)) {
      throw Error(ErrorCode::kInvalidArgument,
                  fmt::format("nonpositive probability at bin {}", i));
    }
    // p ln(p/q) + q ln(q/p) = (p - q) ln(p/q)
    d += (p[i] - q[i]) * std::log(p[i] / q[i]);
  }
  return d;
}

double tm_score(std::span<const ActivityProfile> profiles) {
  const std::size_t k = profiles.size();
  if (k < 2) return 0.0;
  double weighted = 0.0;
  double weight_sum = 0.0;
  for (std::size_t i = 0; i + 1 < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      const double w = profiles[i].event_mass + profiles[j].event_mass;
      weighted += w * symmetric_kl(profiles[i].dist, profiles[j].dist);
      weight_sum += w;
    }
  }
  if (weight_sum <= 0.0) return 0.0;
  return weighted / (static_cast<double>(k) * weight_sum);
}

void ScoreParams::validate() const {
  if (!(alpha >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("alpha must be >= 0, got {}", alpha));
  }
  if (!(tau > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("tau must be positive, got {}", tau));
  }
  if (!(laplace_eps > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "laplace correction must be positive");
  }
  if (smoothing_window < 1 || smoothing_window % 2 == 0) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("smoothing window must be odd, got {}",
                            smoothing_window));
  }
  mcl.validate();
}

ScoreRecord score_node(const TemporalGraph& g, NodeIndex u,
                       const ScoreParams& params) {
  params.validate();
  if (u >= g.num_nodes()) {
    throw Error(ErrorCode::kUnknownNode,
                fmt::format("node index {} out of range", u));
  }
  if (g.events_of(u).empty()) {
    throw Error(ErrorCode::kNoEvents,
                fmt::format("unscorable: no events ('{}')", g.name(u)));
  }
  const EgoNetwork ego = ego_network(g, u, params.tau);
  const Clustering clustering = cluster_neighbors(ego, params.mcl);
  const NcResult nc = nc_score(ego, clustering);
  const auto profiles = activity_profiles(
      g, ego, clustering, params.smoothing_window, params.laplace_eps);
  const double tm = tm_score(profiles);

  ScoreRecord record;
  record.node_id = g.name(u);
  record.nc_score = nc.nc_score;
  record.tm_score = tm;
  record.s_score = s_score(nc.nc_score, tm, params.alpha);
  record.k = clustering.k();
  record.num_neighbors = ego.num_neighbors();
  record.converged = clustering.converged;
  if (params.with_centrality) record.centrality = centrality_scores(ego);
  return record;
}

ScoreRecord score_node(const TemporalGraph& g, const std::string& node_id,
                       const ScoreParams& params) {
  return score_node(g, g.index_of(node_id), params);
}

std::vector<BatchOutcome> score_nodes(const TemporalGraph& g,
                                      std::span<const NodeIndex> nodes,
                                      const ScoreParams& params,
                                      unsigned threads) {
  params.validate();
  std::vector<BatchOutcome> outcomes(nodes.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < nodes.size(); i = next++) {
      auto& out = outcomes[i];
      out.node = nodes[i];
      try {
        out.record = score_node(g, nodes[i], params);
      } catch (const Error& e) {
        out.error = e;
      }
    }
  };
  threads = std::max(1u, std::min<unsigned>(
                             threads, static_cast<unsigned>(nodes.size())));
  if (threads == 1) {
    work();
    return outcomes;
  }
  std::vector<std::jthread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work);
  pool.clear();  // joins
  return outcomes;
}

}  // namespace disambig
