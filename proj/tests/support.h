#pragma once

// Brute-force reference implementations and random instance builders shared by
// the unit tests and the acceptance binary. Nothing here calls into the
// library's internals; the references recompute everything from raw events.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iterator>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "disambig/mcl.h"
#include "disambig/scoring.h"
#include "disambig/temporal_graph.h"

namespace testing_support {

using disambig::CollabEvent;
using disambig::TimeBin;
using Rng = std::mt19937_64;

inline std::string node_name(int i) { return "n" + std::to_string(i); }

// Events over nodes n0..n{num_nodes-1} with 1..max_size distinct participants.
inline std::vector<CollabEvent> random_events(Rng& rng, int num_nodes,
                                              int num_events, int max_size,
                                              TimeBin first, TimeBin last) {
  std::uniform_int_distribution<int> size_dist(1, max_size);
  std::uniform_int_distribution<TimeBin> time_dist(first, last);
  std::vector<int> pool(num_nodes);
  std::iota(pool.begin(), pool.end(), 0);
  std::vector<CollabEvent> events;
  for (int e = 0; e < num_events; ++e) {
    const int size = std::min(size_dist(rng), num_nodes);
    std::vector<int> picked;
    std::sample(pool.begin(), pool.end(), std::back_inserter(picked), size,
                rng);
    std::shuffle(picked.begin(), picked.end(), rng);
    CollabEvent ev{"e" + std::to_string(e), time_dist(rng), {}};
    for (int p : picked) ev.participants.push_back(node_name(p));
    events.push_back(std::move(ev));
  }
  return events;
}

// Pair -> (time -> count), by node name, straight from the event list.
using PairCounts =
    std::map<std::pair<std::string, std::string>, std::map<TimeBin, int>>;

inline PairCounts count_pairs(const std::vector<CollabEvent>& events) {
  PairCounts out;
  for (const auto& e : events) {
    for (std::size_t i = 0; i < e.participants.size(); ++i) {
      for (std::size_t j = 0; j < e.participants.size(); ++j) {
        if (i == j) continue;
        const auto& a = e.participants[i];
        const auto& b = e.participants[j];
        if (a < b) out[{a, b}][e.time] += 1;
      }
    }
  }
  return out;
}

inline std::set<std::string> neighbors_of(const std::vector<CollabEvent>& events,
                                          const std::string& ego) {
  std::set<std::string> out;
  for (const auto& e : events) {
    if (std::find(e.participants.begin(), e.participants.end(), ego) ==
        e.participants.end()) {
      continue;
    }
    for (const auto& p : e.participants) {
      if (p != ego) out.insert(p);
    }
  }
  return out;
}

// Dense symmetric weight matrix over the ego network's members, recomputed
// from the events. Index 0 is the ego; the rest follow `members`.
struct DenseEgo {
  std::vector<std::string> members;
  std::vector<std::vector<double>> w;
};

inline DenseEgo dense_ego(const std::vector<CollabEvent>& events,
                          const std::vector<std::string>& members,
                          double tau) {
  std::map<std::string, std::size_t> at;
  for (std::size_t i = 0; i < members.size(); ++i) at[members[i]] = i;
  const auto pairs = count_pairs(events);
  TimeBin t_max = std::numeric_limits<TimeBin>::min();
  for (const auto& [key, times] : pairs) {
    if (at.count(key.first) && at.count(key.second)) {
      t_max = std::max(t_max, times.rbegin()->first);
    }
  }
  DenseEgo d{members, std::vector<std::vector<double>>(
                          members.size(),
                          std::vector<double>(members.size(), 0.0))};
  for (const auto& [key, times] : pairs) {
    if (!at.count(key.first) || !at.count(key.second)) continue;
    double sum = 0.0;
    for (const auto& [t, n] : times) {
      sum += n * std::exp(-static_cast<double>(t_max - t) / tau);
    }
    const auto i = at[key.first], j = at[key.second];
    d.w[i][j] = d.w[j][i] = sum;
  }
  return d;
}

// NC-score by double loop. Clusters hold indices into the dense matrix (the ego,
// index 0, never appears and its edges are ignored).
inline double oracle_nc(const std::vector<std::vector<double>>& w,
                        const std::vector<std::vector<std::uint32_t>>& clusters) {
  const std::size_t k = clusters.size();
  if (k == 1) return 1.0;
  std::vector<int> owner(w.size(), -1);
  for (std::size_t c = 0; c < k; ++c) {
    for (auto m : clusters[c]) owner[m] = static_cast<int>(c);
  }
  double total = 0.0;
  for (std::size_t c = 0; c < k; ++c) {
    double internal = 0.0, cut = 0.0;
    for (std::size_t a = 1; a < w.size(); ++a) {
      for (std::size_t b = 1; b < w.size(); ++b) {
        if (a == b || owner[a] != static_cast<int>(c)) continue;
        if (owner[b] == static_cast<int>(c)) {
          if (a < b) internal += w[a][b];
        } else {
          cut += w[a][b];
        }
      }
    }
    if (internal + cut > 0.0) total += cut / (internal + cut);
  }
  return total / static_cast<double>(k);
}

inline double oracle_kl(const std::vector<double>& p,
                        const std::vector<double>& q) {
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) d += p[i] * std::log(p[i] / q[i]);
  for (std::size_t i = 0; i < p.size(); ++i) d += q[i] * std::log(q[i] / p[i]);
  return d;
}

inline double oracle_tm(const std::vector<std::vector<double>>& dists,
                        const std::vector<double>& masses) {
  const std::size_t k = dists.size();
  if (k < 2) return 0.0;
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      const double wij = masses[i] + masses[j];
      num += wij * oracle_kl(dists[i], dists[j]);
      den += wij;
    }
  }
  if (den == 0.0) return 0.0;
  return num / (static_cast<double>(k) * den);
}

struct OracleProfile {
  std::vector<double> raw;
  std::vector<double> dist;
  double mass = 0.0;
};

// Z_i from the ego's events, then truncated moving average, normalize, zero
// replacement and renormalization, each written out longhand.
inline std::vector<OracleProfile> oracle_profiles(
    const std::vector<CollabEvent>& events, const std::string& ego,
    const std::vector<std::vector<std::string>>& clusters, int window,
    double eps) {
  TimeBin lo = std::numeric_limits<TimeBin>::max();
  TimeBin hi = std::numeric_limits<TimeBin>::min();
  for (const auto& e : events) {
    if (std::count(e.participants.begin(), e.participants.end(), ego)) {
      lo = std::min(lo, e.time);
      hi = std::max(hi, e.time);
    }
  }
  const auto bins = static_cast<std::size_t>(hi - lo + 1);
  std::vector<OracleProfile> out(clusters.size());
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    auto& prof = out[c];
    prof.raw.assign(bins, 0.0);
    for (const auto& e : events) {
      if (!std::count(e.participants.begin(), e.participants.end(), ego)) {
        continue;
      }
      const double l = static_cast<double>(e.participants.size() - 1);
      if (l == 0) continue;
      double m = 0;
      for (const auto& p : e.participants) {
        if (std::count(clusters[c].begin(), clusters[c].end(), p)) m += 1;
      }
      prof.raw[e.time - lo] += m / l;
    }
    prof.mass = std::accumulate(prof.raw.begin(), prof.raw.end(), 0.0);
    const int half = window / 2;
    std::vector<double> smooth(bins);
    for (std::size_t t = 0; t < bins; ++t) {
      double s = 0;
      int n = 0;
      for (int d = -half; d <= half; ++d) {
        const long idx = static_cast<long>(t) + d;
        if (idx < 0 || idx >= static_cast<long>(bins)) continue;
        s += prof.raw[idx];
        ++n;
      }
      smooth[t] = s / n;
    }
    double total = std::accumulate(smooth.begin(), smooth.end(), 0.0);
    prof.dist.assign(bins, 1.0 / static_cast<double>(bins));
    if (total > 0) {
      for (std::size_t t = 0; t < bins; ++t) {
        prof.dist[t] = smooth[t] / total;
        if (prof.dist[t] == 0.0) prof.dist[t] = eps;
      }
      total = std::accumulate(prof.dist.begin(), prof.dist.end(), 0.0);
      for (auto& v : prof.dist) v /= total;
    }
  }
  return out;
}

// Connected components of the neighbor graph (ego removed), as a label per
// member; the ego gets -1.
inline std::vector<int> neighbor_components(const disambig::EgoNetwork& ego) {
  const std::size_t n = ego.size();
  std::vector<int> label(n, -1);
  int next = 0;
  for (std::uint32_t s = 1; s < n; ++s) {
    if (label[s] >= 0) continue;
    std::vector<std::uint32_t> stack{s};
    label[s] = next;
    while (!stack.empty()) {
      const auto v = stack.back();
      stack.pop_back();
      for (std::uint32_t w = 1; w < n; ++w) {
        if (label[w] < 0 && ego.weight(v, w) > 0.0) {
          label[w] = next;
          stack.push_back(w);
        }
      }
    }
    ++next;
  }
  return label;
}

// Random ego network: ego linked to every neighbor, neighbors grouped into a
// few blocks with dense inner and sparse outer links.
inline disambig::EgoNetwork random_ego(Rng& rng, int max_neighbors) {
  std::uniform_int_distribution<int> size_dist(1, max_neighbors);
  const int n = size_dist(rng);
  std::uniform_int_distribution<int> block_dist(1, std::max(1, n / 3));
  const int blocks = block_dist(rng);
  std::uniform_real_distribution<double> weight(0.05, 5.0);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::vector<disambig::NodeIndex> members(n + 1);
  std::iota(members.begin(), members.end(), 0u);
  std::vector<disambig::WeightedEdge> edges;
  for (int v = 1; v <= n; ++v) {
    edges.push_back({0, static_cast<std::uint32_t>(v), weight(rng)});
  }
  for (int a = 1; a <= n; ++a) {
    for (int b = a + 1; b <= n; ++b) {
      const bool same = (a % blocks) == (b % blocks);
      if (coin(rng) < (same ? 0.5 : 0.03)) {
        edges.push_back({static_cast<std::uint32_t>(a),
                         static_cast<std::uint32_t>(b), weight(rng)});
      }
    }
  }
  return disambig::EgoNetwork::from_edges(std::move(members), std::move(edges));
}

// Checks that clusters partition 1..n exactly once each.
inline bool is_partition(const disambig::Clustering& c, std::size_t n) {
  std::vector<int> seen(n + 1, 0);
  for (const auto& cluster : c.clusters) {
    if (cluster.empty()) return false;
    for (auto m : cluster) {
      if (m == 0 || m > n) return false;
      ++seen[m];
    }
  }
  for (std::size_t m = 1; m <= n; ++m) {
    if (seen[m] != 1) return false;
  }
  return true;
}

inline bool refines_components(const disambig::Clustering& c,
                               const std::vector<int>& component) {
  for (const auto& cluster : c.clusters) {
    for (auto m : cluster) {
      if (component[m] != component[cluster.front()]) return false;
    }
  }
  return true;
}

// Same partition regardless of cluster order.
inline std::set<std::vector<std::uint32_t>> canonical(
    const disambig::Clustering& c) {
  std::set<std::vector<std::uint32_t>> out;
  for (auto cluster : c.clusters) {
    std::sort(cluster.begin(), cluster.end());
    out.insert(cluster);
  }
  return out;
}

}  // namespace testing_support
