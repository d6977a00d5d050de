#include "disambig/centrality.h"

#include <cmath>
#include <cstdint>
#include <queue>
#include <vector>

namespace disambig {
namespace {

constexpr double kPowerTolerance = 1e-8;
constexpr int kPowerMaxIters = 1000;

// Brandes accumulation for unweighted shortest paths; harmonic closeness
// falls out of the same BFS.
void paths_from_every_source(const EgoNetwork& ego, std::vector<double>& betw,
                             std::vector<double>& close) {
  const std::size_t n = ego.size();
  betw.assign(n, 0.0);
  close.assign(n, 0.0);
  std::vector<std::int64_t> dist(n);
  std::vector<double> sigma(n);
  std::vector<double> delta(n);
  std::vector<std::vector<std::uint32_t>> preds(n);
  std::vector<std::uint32_t> order;
  order.reserve(n);

  for (std::uint32_t s = 0; s < n; ++s) {
    std::fill(dist.begin(), dist.end(), -1);
    std::fill(sigma.begin(), sigma.end(), 0.0);
    std::fill(delta.begin(), delta.end(), 0.0);
    for (auto& p : preds) p.clear();
    order.clear();

    std::queue<std::uint32_t> frontier;
    dist[s] = 0;
    sigma[s] = 1.0;
    frontier.push(s);
    while (!frontier.empty()) {
      const auto v = frontier.front();
      frontier.pop();
      order.push_back(v);
      for (const auto& nb : ego.adjacent(v)) {
        const auto w = nb.member;
        if (dist[w] < 0) {
          dist[w] = dist[v] + 1;
          frontier.push(w);
        }
        if (dist[w] == dist[v] + 1) {
          sigma[w] += sigma[v];
          preds[w].push_back(v);
        }
      }
    }
    for (auto v : order) {
      if (v != s) close[s] += 1.0 / static_cast<double>(dist[v]);
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      const auto w = *it;
      for (auto v : preds[w]) {
        delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
      }
      if (w != s) betw[w] += delta[w];
    }
  }
  // Each unordered pair was visited from both ends.
  for (auto& b : betw) b /= 2.0;
}

// Power iteration on A + I; the shift keeps bipartite egos (stars) from
// oscillating without changing the eigenvectors.
bool principal_eigenvector(const EgoNetwork& ego, std::vector<double>& x) {
  const std::size_t n = ego.size();
  x.assign(n, 1.0 / static_cast<double>(n));
  std::vector<double> next(n);
  for (int iter = 0; iter < kPowerMaxIters; ++iter) {
    double sum = 0.0;
    for (std::uint32_t v = 0; v < n; ++v) {
      double acc = x[v];
      for (const auto& nb : ego.adjacent(v)) acc += nb.weight * x[nb.member];
      next[v] = acc;
      sum += acc;
    }
    if (!(sum > 0.0) || !std::isfinite(sum)) return false;
    double change = 0.0;
    for (std::size_t v = 0; v < n; ++v) {
      next[v] /= sum;
      change = std::max(change, std::abs(next[v] - x[v]));
    }
    x.swap(next);
    if (change < kPowerTolerance) return true;
  }
  return false;
}

double share(const std::vector<double>& values, std::size_t member) {
  double sum = 0.0;
  for (double v : values) sum += v;
  if (!(sum > 0.0)) return 0.0;
  return values[member] / sum;
}

}  // namespace

MemberCentralities member_centralities(const EgoNetwork& ego) {
  MemberCentralities c;
  const std::size_t n = ego.size();
  c.degree.assign(n, 0.0);
  for (std::uint32_t v = 0; v < n; ++v) {
    for (const auto& nb : ego.adjacent(v)) c.degree[v] += nb.weight;
  }
  paths_from_every_source(ego, c.betweenness, c.closeness);
  c.eigenvector_converged = principal_eigenvector(ego, c.eigenvector);
  return c;
}

CentralityVector centrality_scores(const EgoNetwork& ego) {
  const auto c = member_centralities(ego);
  CentralityVector out;
  out.degree = share(c.degree, 0);
  out.betweenness = share(c.betweenness, 0);
  out.closeness = share(c.closeness, 0);
  out.eigenvector_converged = c.eigenvector_converged;
  out.eigenvector = c.eigenvector_converged ? share(c.eigenvector, 0) : 0.0;
  return out;
}

}  // namespace disambig
