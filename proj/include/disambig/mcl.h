#pragma once

#include <cstdint>
#include <vector>

#include "disambig/temporal_graph.h"

namespace disambig {

struct MclParams {
  double inflation = 1.4;
  int expansion = 2;
  double prune_threshold = 1e-5;
  int max_iters = 200;
  double convergence_eps = 1e-6;

  // Throws Error(kInvalidArgument) when a field is out of range.
  void validate() const;
};

// Partition of an ego's neighbors. Cluster members are local ego-network
// indices (1..n); clusters are ordered by their smallest member.
struct Clustering {
  std::vector<std::vector<std::uint32_t>> clusters;
  bool converged = true;
  int iterations = 0;

  std::size_t k() const { return clusters.size(); }
  // member -> cluster index table sized to the ego network; the ego maps to
  // kNoCluster.
  std::vector<std::uint32_t> assignment(std::size_t num_members) const;

  static constexpr std::uint32_t kNoCluster = 0xFFFFFFFFu;
};

// One-based index (1..k) of the cluster holding member. Throws
// Error(kUnknownNode) when no cluster holds it.
std::size_t cluster_assignment(const Clustering& c, std::uint32_t member);

// Runs MCL on the ego network with the ego and its edges removed. Never
// throws on non-convergence; the result carries converged = false instead.
Clustering cluster_neighbors(const EgoNetwork& ego, const MclParams& params);

// Lower-level entry point on an n-node weighted graph with node ids 0..n-1.
// Returns clusters of those ids.
Clustering mcl_cluster(std::size_t n, const std::vector<WeightedEdge>& edges,
                       const MclParams& params);

}  // namespace disambig
