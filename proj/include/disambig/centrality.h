#pragma once

#include "disambig/temporal_graph.h"

namespace disambig {

// Ego centralities within its own ego network, each divided by the sum of
// that centrality over all members.
struct CentralityVector {
  double degree = 0.0;
  double betweenness = 0.0;
  double closeness = 0.0;
  double eigenvector = 0.0;
  bool eigenvector_converged = true;
};

// Raw (unnormalized) per-member centralities, indexed by local member.
struct MemberCentralities {
  std::vector<double> degree;       // weighted degree
  std::vector<double> betweenness;  // unweighted, unordered pairs
  std::vector<double> closeness;    // harmonic, unweighted
  std::vector<double> eigenvector;  // principal eigenvector, weighted
  bool eigenvector_converged = true;
};

MemberCentralities member_centralities(const EgoNetwork& ego);

// The ego's share of each metric. A metric whose sum over members is zero
// yields 0; a non-converged power iteration yields eigenvector = 0 with the
// flag cleared.
CentralityVector centrality_scores(const EgoNetwork& ego);

}  // namespace disambig
