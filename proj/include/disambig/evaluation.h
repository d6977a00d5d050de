#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "disambig/ingest.h"
#include "disambig/scoring.h"

namespace disambig {

struct LabeledScore {
  std::string node_id;
  double score = 0.0;
  bool positive = false;
};

// Which end of the ranking holds the positives. s-scores are low for
// suspected multi-nodes.
enum class Polarity { kPositiveIsLow, kPositiveIsHigh };

// P(positive ranked ahead of negative) + 0.5 P(tie), from midranks. Throws
// Error(kInvalidArgument) unless both classes are present.
double auc(std::span<const LabeledScore> ls,
           Polarity polarity = Polarity::kPositiveIsLow);

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
};

// Threshold sweep over every distinct score in ranking order, starting at
// (0, 0) and ending at (1, 1).
std::vector<RocPoint> roc_curve(std::span<const LabeledScore> ls,
                                Polarity polarity = Polarity::kPositiveIsLow);

// Items in ranking order; ties broken by node id.
std::vector<LabeledScore> ranked(std::span<const LabeledScore> ls,
                                 Polarity polarity);

// Share of positives among the first ceil(fraction * n) ranked items.
double precision_at(std::span<const LabeledScore> ls, double fraction,
                    Polarity polarity = Polarity::kPositiveIsLow);

// Share of correct calls when scores strictly beyond the threshold (below it
// for kPositiveIsLow) are called positive.
double accuracy(std::span<const LabeledScore> ls, double threshold,
                Polarity polarity = Polarity::kPositiveIsLow);

// Mean AUC over `repeats` random subsets of `num_positives` positives, all
// negatives kept.
double subsampled_auc(std::span<const LabeledScore> ls,
                      std::size_t num_positives, int repeats,
                      std::uint64_t seed,
                      Polarity polarity = Polarity::kPositiveIsLow);

// Pairs each record's s-score with its label; records without a label are
// dropped.
std::vector<LabeledScore> join_labels(std::span<const ScoreRecord> records,
                                      std::span<const LabelRecord> labels);

struct SweepRow {
  double tau = 0.0;
  double alpha = 0.0;
  double auc = 0.0;
};

// Rescores every labeled node once per tau and evaluates every alpha on the
// resulting NC/TM pair. Unscorable labeled nodes are errors.
std::vector<SweepRow> sweep(const TemporalGraph& g,
                            std::span<const LabelRecord> labels,
                            std::span<const double> taus,
                            std::span<const double> alphas,
                            const ScoreParams& base, unsigned threads = 1);

void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows);

// Feature matrix: node_id,nc_score,tm_score,k,degree,betweenness,closeness,
// eigenvector[,label]. The label column appears when labels are supplied;
// unlabeled rows leave it empty.
void export_features(std::ostream& out, std::span<const ScoreRecord> records,
                     const std::map<std::string, bool>* labels = nullptr);

struct FeatureRow {
  std::string node_id;
  double nc_score = 0.0;
  double tm_score = 0.0;
  std::size_t k = 0;
  double degree = 0.0;
  double betweenness = 0.0;
  double closeness = 0.0;
  double eigenvector = 0.0;
  std::optional<bool> label;
};

std::vector<FeatureRow> parse_features(std::istream& in);

// Six significant digits, the precision of every CSV float.
std::string format_real(double v);

}  // namespace disambig
