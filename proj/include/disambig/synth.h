#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "disambig/ingest.h"
#include "disambig/temporal_graph.h"

namespace disambig {

struct SynthConfig {
  int n_pure = 25;
  int n_multi = 25;
  int n_mobile = 25;
  int entities_per_multi = 2;
  int collaborators_per_entity = 15;
  double intra_density = 0.3;
  double inter_noise = 0.02;  // cross-community edges per intra edge
  int years = 10;
  double events_per_year = 3.0;
  std::optional<int> mobility_break;  // defaults to years / 2
  TimeBin start_year = 2005;
  std::uint64_t seed = 42;

  // Throws Error(kInvalidArgument) on an impossible configuration.
  void validate() const;
};

enum class NodeKind { kPure, kMulti, kMobile };

struct SynthNode {
  std::string id;
  NodeKind kind = NodeKind::kPure;
  // Member ids of each planted community, in planting order.
  std::vector<std::vector<std::string>> communities;
};

struct SynthBenchmark {
  std::vector<CollabEvent> events;
  std::vector<LabelRecord> labels;  // multi = positive
  std::vector<SynthNode> nodes;     // same order as labels
};

// Each labeled node gets its own fresh communities: Erdos-Renyi blocks joined
// by a random spanning tree, realized as pairwise events, plus ego events that
// draw 1-3 co-participants from one community. Pure nodes have one community
// active in every year; multi-nodes have entities_per_multi communities all
// active in every year; mobile nodes have two communities whose activity is
// split at mobility_break. Deterministic in cfg.seed.
SynthBenchmark generate(const SynthConfig& cfg);

// A mobile node and a multi-node with identical community structure, edges and
// ego-event participant sets; only the timestamps differ (split eras versus
// overlapping eras).
struct MobilityPair {
  std::vector<CollabEvent> events;
  std::string mobile_id;
  std::string multi_id;
};

MobilityPair generate_mobility_pair(const SynthConfig& cfg, std::uint64_t seed);

}  // namespace disambig
