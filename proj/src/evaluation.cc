#include "disambig/evaluation.h"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <random>
#include <unordered_map>

#include <fmt/format.h>

#include "disambig/error.h"

namespace disambig {
namespace {

struct ClassCounts {
  std::size_t positives = 0;
  std::size_t negatives = 0;
};

ClassCounts count_classes(std::span<const LabeledScore> ls) {
  ClassCounts c;
  for (const auto& s : ls) (s.positive ? c.positives : c.negatives)++;
  return c;
}

ClassCounts require_both_classes(std::span<const LabeledScore> ls) {
  const auto c = count_classes(ls);
  if (c.positives == 0 || c.negatives == 0) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("AUC needs both classes ({} positive, {} negative)",
                            c.positives, c.negatives));
  }
  return c;
}

void require_nonempty(std::span<const LabeledScore> ls) {
  if (ls.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "no labeled scores");
  }
}

// Scores oriented so that smaller means "more positive".
double oriented(double score, Polarity polarity) {
  return polarity == Polarity::kPositiveIsLow ? score : -score;
}

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

double parse_real(std::string_view field, std::size_t line_no) {
  if (field.empty()) return std::numeric_limits<double>::quiet_NaN();
  try {
    std::size_t used = 0;
    const std::string text(field);
    const double v = std::stod(text, &used);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  throw Error(ErrorCode::kParse,
              fmt::format("line {}: '{}' is not a number", line_no, field));
}

constexpr std::string_view kFeatureHeader =
    "node_id,nc_score,tm_score,k,degree,betweenness,closeness,eigenvector";

}  // namespace

std::string format_real(double v) { return fmt::format("{:.6g}", v); }

double auc(std::span<const LabeledScore> ls, Polarity polarity) {
  const auto classes = require_both_classes(ls);
  std::vector<std::size_t> order(ls.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return oriented(ls[a].score, polarity) < oriented(ls[b].score, polarity);
  });
  // Sum of midranks of the negatives; a negative outranks every positive
  // placed before it.
  double negative_rank_sum = 0.0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    const double value = oriented(ls[order[i]].score, polarity);
    while (j < order.size() && oriented(ls[order[j]].score, polarity) == value)
      ++j;
    const double midrank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t t = i; t < j; ++t) {
      if (!ls[order[t]].positive) negative_rank_sum += midrank;
    }
    i = j;
  }
  const double n_neg = static_cast<double>(classes.negatives);
  const double n_pos = static_cast<double>(classes.positives);
  const double u = negative_rank_sum - n_neg * (n_neg + 1.0) / 2.0;
  return u / (n_pos * n_neg);
}

std::vector<RocPoint> roc_curve(std::span<const LabeledScore> ls,
                                Polarity polarity) {
  const auto classes = require_both_classes(ls);
  std::vector<std::size_t> order(ls.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return oriented(ls[a].score, polarity) < oriented(ls[b].score, polarity);
  });
  std::vector<RocPoint> curve{{0.0, 0.0}};
  std::size_t tp = 0, fp = 0;
  std::size_t i = 0;
  while (i < order.size()) {
    const double threshold = oriented(ls[order[i]].score, polarity);
    while (i < order.size() &&
           oriented(ls[order[i]].score, polarity) == threshold) {
      (ls[order[i]].positive ? tp : fp)++;
      ++i;
    }
    curve.push_back({static_cast<double>(fp) / classes.negatives,
                     static_cast<double>(tp) / classes.positives});
  }
  return curve;
}

std::vector<LabeledScore> ranked(std::span<const LabeledScore> ls,
                                 Polarity polarity) {
  std::vector<LabeledScore> out(ls.begin(), ls.end());
  std::sort(out.begin(), out.end(),
            [&](const LabeledScore& a, const LabeledScore& b) {
              const double x = oriented(a.score, polarity);
              const double y = oriented(b.score, polarity);
              if (x != y) return x < y;
              return a.node_id < b.node_id;
            });
  return out;
}

double precision_at(std::span<const LabeledScore> ls, double fraction,
                    Polarity polarity) {
  require_nonempty(ls);
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("fraction must be in (0, 1], got {}", fraction));
  }
  // The slack keeps 0.1 * 70 from rounding up to 8.
  const auto top = std::max<std::size_t>(
      1, static_cast<std::size_t>(
             std::ceil(fraction * static_cast<double>(ls.size()) - 1e-9)));
  const auto order = ranked(ls, polarity);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < top; ++i) hits += order[i].positive ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(top);
}

double accuracy(std::span<const LabeledScore> ls, double threshold,
                Polarity polarity) {
  require_nonempty(ls);
  std::size_t correct = 0;
  for (const auto& s : ls) {
    const bool called = polarity == Polarity::kPositiveIsLow
                            ? s.score < threshold
                            : s.score > threshold;
    if (called == s.positive) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(ls.size());
}

double subsampled_auc(std::span<const LabeledScore> ls,
                      std::size_t num_positives, int repeats,
                      std::uint64_t seed, Polarity polarity) {
  std::vector<LabeledScore> positives, negatives;
  for (const auto& s : ls) (s.positive ? positives : negatives).push_back(s);
  if (num_positives == 0 || num_positives > positives.size() ||
      negatives.empty() || repeats < 1) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("cannot draw {} of {} positives", num_positives,
                            positives.size()));
  }
  std::mt19937_64 rng(seed);
  double total = 0.0;
  for (int r = 0; r < repeats; ++r) {
    std::shuffle(positives.begin(), positives.end(), rng);
    std::vector<LabeledScore> subset(negatives);
    subset.insert(subset.end(), positives.begin(),
                  positives.begin() + static_cast<std::ptrdiff_t>(num_positives));
    total += auc(subset, polarity);
  }
  return total / repeats;
}

std::vector<LabeledScore> join_labels(std::span<const ScoreRecord> records,
                                      std::span<const LabelRecord> labels) {
  std::unordered_map<std::string, bool> by_id;
  for (const auto& l : labels) by_id.emplace(l.node_id, l.positive);
  std::vector<LabeledScore> out;
  for (const auto& r : records) {
    auto it = by_id.find(r.node_id);
    if (it == by_id.end()) continue;
    out.push_back({r.node_id, r.s_score, it->second});
  }
  return out;
}

std::vector<SweepRow> sweep(const TemporalGraph& g,
                            std::span<const LabelRecord> labels,
                            std::span<const double> taus,
                            std::span<const double> alphas,
                            const ScoreParams& base, unsigned threads) {
  std::vector<NodeIndex> nodes;
  nodes.reserve(labels.size());
  for (const auto& l : labels) nodes.push_back(g.index_of(l.node_id));
  for (double alpha : alphas) {
    if (!(alpha >= 0.0)) {
      throw Error(ErrorCode::kInvalidArgument,
                  fmt::format("alpha must be >= 0, got {}", alpha));
    }
  }

  std::vector<SweepRow> rows;
  for (double tau : taus) {
    ScoreParams params = base;
    params.tau = tau;
    const auto outcomes = score_nodes(g, nodes, params, threads);
    for (const auto& o : outcomes) {
      if (o.error) throw *o.error;
    }
    for (double alpha : alphas) {
      std::vector<LabeledScore> ls;
      ls.reserve(labels.size());
      for (std::size_t i = 0; i < labels.size(); ++i) {
        const auto& r = *outcomes[i].record;
        ls.push_back({r.node_id, s_score(r.nc_score, r.tm_score, alpha),
                      labels[i].positive});
      }
      rows.push_back({tau, alpha, auc(ls)});
    }
  }
  return rows;
}

void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows) {
  out << "tau,alpha,auc\n";
  for (const auto& r : rows) {
    out << format_real(r.tau) << ',' << format_real(r.alpha) << ','
        << format_real(r.auc) << '\n';
  }
}

void export_features(std::ostream& out, std::span<const ScoreRecord> records,
                     const std::map<std::string, bool>* labels) {
  out << kFeatureHeader << (labels ? ",label\n" : "\n");
  auto cell = [](const std::optional<CentralityVector>& c, double v) {
    return c ? format_real(v) : std::string();
  };
  for (const auto& r : records) {
    const auto& c = r.centrality;
    out << r.node_id << ',' << format_real(r.nc_score) << ','
        << format_real(r.tm_score) << ',' << r.k << ','
        << cell(c, c ? c->degree : 0) << ','
        << cell(c, c ? c->betweenness : 0) << ','
        << cell(c, c ? c->closeness : 0) << ','
        << cell(c, c ? c->eigenvector : 0);
    if (labels) {
      out << ',';
      auto it = labels->find(r.node_id);
      if (it != labels->end()) out << (it->second ? 1 : 0);
    }
    out << '\n';
  }
}

std::vector<FeatureRow> parse_features(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) {
    throw Error(ErrorCode::kParse, "feature file has no header");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  bool has_label = false;
  if (line == std::string(kFeatureHeader) + ",label") {
    has_label = true;
  } else if (line != kFeatureHeader) {
    throw Error(ErrorCode::kParse, fmt::format("line 1: unexpected header '{}'", line));
  }
  const std::size_t width = has_label ? 9 : 8;

  std::vector<FeatureRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != width) {
      throw Error(ErrorCode::kParse,
                  fmt::format("line {}: expected {} fields, found {}", line_no,
                              width, f.size()));
    }
    FeatureRow row;
    row.node_id = std::string(f[0]);
    row.nc_score = parse_real(f[1], line_no);
    row.tm_score = parse_real(f[2], line_no);
    row.k = static_cast<std::size_t>(parse_real(f[3], line_no));
    row.degree = parse_real(f[4], line_no);
    row.betweenness = parse_real(f[5], line_no);
    row.closeness = parse_real(f[6], line_no);
    row.eigenvector = parse_real(f[7], line_no);
    if (has_label && !f[8].empty()) {
      if (f[8] != "0" && f[8] != "1") {
        throw Error(ErrorCode::kParse,
                    fmt::format("line {}: bad label '{}'", line_no, f[8]));
      }
      row.label = f[8] == "1";
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace disambig
