#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "disambig/centrality.h"
#include "disambig/error.h"
#include "disambig/mcl.h"
#include "disambig/temporal_graph.h"

namespace disambig {

struct ClusterCut {
  double internal = 0.0;  // W(C, C), each internal edge counted once
  double cut = 0.0;       // W(C, complement)
};

struct NcResult {
  double nc_raw = 0.0;
  double nc_score = 0.0;
  std::vector<ClusterCut> per_cluster;
  std::size_t k = 0;
};

// Normalized-cut purity of the ego's neighbor clustering, ignoring every edge
// incident to the ego. Returns nc_score = 1 for k = 1; a cluster with no
// incident weight contributes a zero term.
NcResult nc_score(const EgoNetwork& ego, const Clustering& clustering);

// Per-cluster activity of the ego over its contiguous time range.
struct ActivityProfile {
  std::size_t cluster_index = 0;  // zero-based
  TimeBin first_bin = 0;
  std::vector<double> raw;
  std::vector<double> smoothed;
  std::vector<double> dist;
  double event_mass = 0.0;
};

// Centered moving average; windows are truncated at both ends. window must be
// odd and positive.
std::vector<double> centered_moving_average(std::span<const double> values,
                                            int window);

// Normalizes to a distribution, replaces zero entries with eps and
// renormalizes. An all-zero input becomes uniform.
std::vector<double> laplace_distribution(std::span<const double> values,
                                         double eps);

// Builds Z_i for every cluster: an event of the ego at time t with l
// co-participants, m of them in C_i, adds m/l to Z_i[t]. Throws
// Error(kNoEvents) when the ego has no events.
std::vector<ActivityProfile> activity_profiles(const TemporalGraph& g,
                                               const EgoNetwork& ego,
                                               const Clustering& clustering,
                                               int window, double laplace_eps);

// D(P||Q) + D(Q||P), natural log. Throws Error(kInvalidArgument) on length
// mismatch or a nonpositive entry.
double symmetric_kl(std::span<const double> p, std::span<const double> q);

// Mass-weighted mean symmetric KL over cluster pairs, divided by k. Zero when
// fewer than two profiles exist.
double tm_score(std::span<const ActivityProfile> profiles);

inline double s_score(double nc, double tm, double alpha) {
  return nc + alpha * tm;
}

struct ScoreParams {
  double alpha = 0.1;
  double tau = 5.0;
  double laplace_eps = 0.01;
  int smoothing_window = 3;
  MclParams mcl;
  bool with_centrality = false;

  void validate() const;
};

struct ScoreRecord {
  std::string node_id;
  double nc_score = 0.0;
  double tm_score = 0.0;
  double s_score = 0.0;
  std::size_t k = 0;
  std::size_t num_neighbors = 0;
  bool converged = true;
  std::optional<CentralityVector> centrality;
};

// Full pipeline for one node: ego network, MCL, NC-score, activity profiles,
// TM-score and the combined s-score. Unscorable nodes raise Error with
// kNoNeighbors or kNoEvents.
ScoreRecord score_node(const TemporalGraph& g, NodeIndex u,
                       const ScoreParams& params);
ScoreRecord score_node(const TemporalGraph& g, const std::string& node_id,
                       const ScoreParams& params);

struct BatchOutcome {
  NodeIndex node = 0;
  std::optional<ScoreRecord> record;  // set on success
  std::optional<Error> error;         // set otherwise
};

// Scores nodes on a pool of worker threads sharing the read-only graph.
// Outcomes come back in input order regardless of thread count.
std::vector<BatchOutcome> score_nodes(const TemporalGraph& g,
                                      std::span<const NodeIndex> nodes,
                                      const ScoreParams& params,
                                      unsigned threads = 1);

}  // namespace disambig
