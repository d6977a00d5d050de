#include "disambig/mcl.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>

#include <fmt/format.h>

#include "disambig/error.h"

namespace disambig {
namespace {

constexpr double kAttractorThreshold = 1e-8;
// Relative slack under which two column entries count as tied.
constexpr double kTieSlack = 1e-9;

using Column = std::vector<std::pair<std::uint32_t, double>>;
using Matrix = std::vector<Column>;

void normalize(Column& col) {
  double sum = 0.0;
  for (const auto& [row, v] : col) sum += v;
  if (sum <= 0.0) return;
  for (auto& [row, v] : col) v /= sum;
}

// Dense scatter/gather workspace reused across columns.
class Accumulator {
 public:
  explicit Accumulator(std::size_t n) : values_(n, 0.0), used_(n, false) {}

  void add(std::uint32_t row, double v) {
    if (!used_[row]) {
      used_[row] = true;
      touched_.push_back(row);
    }
    values_[row] += v;
  }

  void drain_into(Column& out) {
    std::sort(touched_.begin(), touched_.end());
    out.clear();
    out.reserve(touched_.size());
    for (auto row : touched_) {
      out.emplace_back(row, values_[row]);
      values_[row] = 0.0;
      used_[row] = false;
    }
    touched_.clear();
  }

 private:
  std::vector<double> values_;
  std::vector<bool> used_;
  std::vector<std::uint32_t> touched_;
};

// Returns lhs * rhs.
Matrix multiply(const Matrix& lhs, const Matrix& rhs, Accumulator& acc) {
  Matrix out(rhs.size());
  for (std::size_t j = 0; j < rhs.size(); ++j) {
    for (const auto& [k, factor] : rhs[j]) {
      for (const auto& [row, v] : lhs[k]) acc.add(row, v * factor);
    }
    acc.drain_into(out[j]);
  }
  return out;
}

void inflate_and_prune(Column& col, double inflation, double threshold) {
  for (auto& [row, v] : col) v = std::pow(v, inflation);
  normalize(col);
  if (threshold <= 0.0 || col.empty()) return;
  auto strongest = std::max_element(
      col.begin(), col.end(),
      [](const auto& x, const auto& y) { return x.second < y.second; });
  const auto keep_row = strongest->first;
  std::erase_if(col, [&](const auto& entry) {
    return entry.second < threshold && entry.first != keep_row;
  });
  normalize(col);
}

double max_change(const Column& a, const Column& b) {
  double change = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      change = std::max(change, std::abs(a[i++].second));
    } else if (i == a.size() || b[j].first < a[i].first) {
      change = std::max(change, std::abs(b[j++].second));
    } else {
      change = std::max(change, std::abs(a[i++].second - b[j++].second));
    }
  }
  return change;
}

double entry(const Column& col, std::uint32_t row) {
  auto it = std::lower_bound(
      col.begin(), col.end(), row,
      [](const auto& e, std::uint32_t r) { return e.first < r; });
  return (it != col.end() && it->first == row) ? it->second : 0.0;
}

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), 0u);
  }
  std::uint32_t find(std::uint32_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
  }

 private:
  std::vector<std::uint32_t> parent_;
};

// Picks the row with the largest value among the rows accepted by filter;
// near-ties go to the smallest row.
template <typename Filter>
std::optional<std::uint32_t> argmax_row(const Column& col, Filter filter) {
  std::optional<std::uint32_t> best;
  double best_value = 0.0;
  for (const auto& [row, v] : col) {
    if (v <= 0.0 || !filter(row)) continue;
    if (!best || v > best_value * (1.0 + kTieSlack)) {
      best = row;
      best_value = v;
    }
  }
  return best;
}

std::vector<std::vector<std::uint32_t>> extract_clusters(const Matrix& m) {
  const std::size_t n = m.size();
  std::vector<bool> attractor(n, false);
  for (std::uint32_t j = 0; j < n; ++j) {
    attractor[j] = entry(m[j], j) >= kAttractorThreshold;
  }

  DisjointSets sets(n);
  for (std::uint32_t j = 0; j < n; ++j) {
    if (attractor[j]) {
      // Attractors that feed each other form one attractor system.
      for (const auto& [row, v] : m[j]) {
        if (row != j && attractor[row] && v >= kAttractorThreshold) {
          sets.unite(j, row);
        }
      }
      continue;
    }
    auto target = argmax_row(m[j], [&](std::uint32_t r) { return attractor[r]; });
    if (!target) {
      // Only possible before convergence: follow the heaviest entry instead.
      target = argmax_row(m[j], [](std::uint32_t) { return true; });
    }
    if (target) sets.unite(j, *target);
  }

  std::vector<std::vector<std::uint32_t>> clusters;
  std::vector<std::int64_t> slot(n, -1);
  for (std::uint32_t j = 0; j < n; ++j) {
    const auto root = sets.find(j);
    if (slot[root] < 0) {
      slot[root] = static_cast<std::int64_t>(clusters.size());
      clusters.emplace_back();
    }
    clusters[slot[root]].push_back(j);
  }
  return clusters;
}

}  // namespace

void MclParams::validate() const {
  if (!(inflation > 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("inflation must exceed 1, got {}", inflation));
  }
  if (expansion < 2) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("expansion must be at least 2, got {}", expansion));
  }
  if (!(prune_threshold >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "prune threshold must be >= 0");
  }
  if (max_iters < 1) {
    throw Error(ErrorCode::kInvalidArgument, "max_iters must be positive");
  }
  if (!(convergence_eps > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "convergence epsilon must be positive");
  }
}

std::vector<std::uint32_t> Clustering::assignment(
    std::size_t num_members) const {
  std::vector<std::uint32_t> table(num_members, kNoCluster);
  for (std::uint32_t c = 0; c < clusters.size(); ++c) {
    for (auto member : clusters[c]) {
      if (member < num_members) table[member] = c;
    }
  }
  return table;
}

std::size_t cluster_assignment(const Clustering& c, std::uint32_t member) {
  for (std::size_t i = 0; i < c.clusters.size(); ++i) {
    const auto& cluster = c.clusters[i];
    if (std::find(cluster.begin(), cluster.end(), member) != cluster.end()) {
      return i + 1;
    }
  }
  throw Error(ErrorCode::kUnknownNode,
              fmt::format("member {} is not in any cluster", member));
}

Clustering mcl_cluster(std::size_t n, const std::vector<WeightedEdge>& edges,
                       const MclParams& params) {
  params.validate();
  Clustering result;
  if (n == 0) return result;

  std::vector<Column> m(n);
  std::vector<double> loop(n, 0.0);
  for (const auto& e : edges) {
    if (e.a >= n || e.b >= n || e.a == e.b) {
      throw Error(ErrorCode::kInvalidArgument,
                  fmt::format("edge ({}, {}) outside a {}-node graph", e.a,
                              e.b, n));
    }
    m[e.b].emplace_back(e.a, e.weight);
    m[e.a].emplace_back(e.b, e.weight);
    loop[e.a] = std::max(loop[e.a], e.weight);
    loop[e.b] = std::max(loop[e.b], e.weight);
  }
  for (std::uint32_t j = 0; j < n; ++j) {
    m[j].emplace_back(j, loop[j] > 0.0 ? loop[j] : 1.0);
    std::sort(m[j].begin(), m[j].end());
    // Merge parallel edges.
    Column merged;
    for (const auto& e : m[j]) {
      if (!merged.empty() && merged.back().first == e.first) {
        merged.back().second += e.second;
      } else {
        merged.push_back(e);
      }
    }
    m[j] = std::move(merged);
    normalize(m[j]);
  }

  Accumulator acc(n);
  result.converged = false;
  for (int iter = 1; iter <= params.max_iters; ++iter) {
    Matrix next = multiply(m, m, acc);
    for (int e = 2; e < params.expansion; ++e) next = multiply(m, next, acc);
    double change = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      inflate_and_prune(next[j], params.inflation, params.prune_threshold);
      change = std::max(change, max_change(m[j], next[j]));
    }
    m = std::move(next);
    result.iterations = iter;
    if (change < params.convergence_eps) {
      result.converged = true;
      break;
    }
  }

  result.clusters = extract_clusters(m);
  return result;
}

Clustering cluster_neighbors(const EgoNetwork& ego, const MclParams& params) {
  const std::size_t n = ego.num_neighbors();
  if (n == 0) {
    throw Error(ErrorCode::kNoNeighbors, "unscorable: no neighbors");
  }
  // Drop the ego (member 0) and shift neighbors to 0..n-1.
  std::vector<WeightedEdge> edges;
  edges.reserve(ego.edges().size());
  for (const auto& e : ego.edges()) {
    if (e.a == 0) continue;
    edges.push_back({e.a - 1, e.b - 1, e.weight});
  }
  Clustering result = mcl_cluster(n, edges, params);
  for (auto& cluster : result.clusters) {
    for (auto& member : cluster) ++member;
  }
  return result;
}

}  // namespace disambig
