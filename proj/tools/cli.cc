#include "cli.h"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "disambig/error.h"
#include "disambig/evaluation.h"
#include "disambig/ingest.h"
#include "disambig/scoring.h"
#include "disambig/synth.h"
#include "json.hpp"

namespace disambig::cli {
namespace {

constexpr const char* kThreadsEnv = "DISAMBIG_THREADS";

struct Options {
  std::string events_path;
  std::string nodes_path;
  std::string labels_path;
  std::string scores_path;
  std::string output_path;
  std::string node_id;
  std::string column = "s_score";
  std::string polarity = "low";
  std::string format = "jsonl";
  std::string labels_out;
  bool lenient = false;
  bool centrality = false;
  unsigned threads = 0;
  std::optional<double> threshold;
  std::vector<double> taus{3, 5, 7, 10};
  std::vector<double> alphas{0, 0.1, 0.2, 0.5, 1};
  ScoreParams params;
  SynthConfig synth;
};

unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv(kThreadsEnv)) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

// Writes to the -o file when given, otherwise to out.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) {
        throw Error(ErrorCode::kIo, fmt::format("{}: cannot write", path));
      }
      stream_ = &file_;
    }
  }
  std::ostream& get() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

TemporalGraph load_graph(const Options& o, std::ostream& err) {
  const auto parsed = load_events(
      o.events_path, o.lenient ? ParseMode::kLenient : ParseMode::kStrict);
  for (const auto& e : parsed.errors) {
    err << fmt::format("{}:{}: skipped: {}\n", o.events_path, e.line, e.reason);
  }
  return build_graph(parsed.records);
}

std::vector<NodeIndex> select_nodes(const TemporalGraph& g,
                                    const std::string& nodes_path) {
  std::vector<NodeIndex> nodes;
  if (nodes_path.empty()) {
    nodes.resize(g.num_nodes());
    for (NodeIndex v = 0; v < nodes.size(); ++v) nodes[v] = v;
    return nodes;
  }
  std::istringstream in(read_input_file(nodes_path));
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto found = g.find(line);
    if (!found) {
      throw Error(ErrorCode::kUnknownNode,
                  fmt::format("{}:{}: unknown node '{}'", nodes_path, line_no,
                              line));
    }
    nodes.push_back(*found);
  }
  return nodes;
}

// Scores nodes, reports unscorable ones on err and returns the rest sorted by
// node id.
std::vector<ScoreRecord> score_batch(const TemporalGraph& g,
                                     const std::vector<NodeIndex>& nodes,
                                     const Options& o, std::ostream& err) {
  const auto outcomes =
      score_nodes(g, nodes, o.params, resolve_threads(o.threads));
  std::vector<ScoreRecord> records;
  std::size_t skipped = 0;
  for (const auto& outcome : outcomes) {
    if (outcome.record) {
      records.push_back(*outcome.record);
    } else if (outcome.error->unscorable()) {
      ++skipped;
    } else {
      throw *outcome.error;
    }
  }
  if (skipped > 0) {
    err << fmt::format("note: {} node(s) unscorable and skipped\n", skipped);
  }
  std::sort(records.begin(), records.end(),
            [](const auto& a, const auto& b) { return a.node_id < b.node_id; });
  return records;
}

nlohmann::ordered_json to_json(const ScoreRecord& r) {
  nlohmann::ordered_json j;
  j["node_id"] = r.node_id;
  j["s_score"] = r.s_score;
  j["nc_score"] = r.nc_score;
  j["tm_score"] = r.tm_score;
  j["k"] = r.k;
  j["neighbors"] = r.num_neighbors;
  j["converged"] = r.converged;
  if (r.centrality) {
    j["centrality"] = {{"degree", r.centrality->degree},
                       {"betweenness", r.centrality->betweenness},
                       {"closeness", r.centrality->closeness},
                       {"eigenvector", r.centrality->eigenvector},
                       {"eigenvector_converged",
                        r.centrality->eigenvector_converged}};
  }
  return j;
}

int cmd_score(const Options& o, std::ostream& out, std::ostream& err) {
  const auto g = load_graph(o, err);
  const auto record = score_node(g, o.node_id, o.params);
  out << to_json(record).dump() << '\n';
  return kExitOk;
}

int cmd_rank(const Options& o, std::ostream& out, std::ostream& err) {
  const auto g = load_graph(o, err);
  auto records = score_batch(g, select_nodes(g, o.nodes_path), o, err);
  std::stable_sort(records.begin(), records.end(),
                   [](const auto& a, const auto& b) {
                     return a.s_score < b.s_score;
                   });
  Sink sink(o.output_path, out);
  auto& os = sink.get();
  os << "node_id,s_score,nc_score,tm_score,k,converged\n";
  for (const auto& r : records) {
    os << r.node_id << ',' << format_real(r.s_score) << ','
       << format_real(r.nc_score) << ',' << format_real(r.tm_score) << ','
       << r.k << ',' << (r.converged ? 1 : 0) << '\n';
  }
  return kExitOk;
}

int cmd_features(const Options& o, std::ostream& out, std::ostream& err) {
  const auto g = load_graph(o, err);
  Options with_centrality = o;
  with_centrality.params.with_centrality = true;
  const auto records =
      score_batch(g, select_nodes(g, o.nodes_path), with_centrality, err);
  std::map<std::string, bool> labels;
  if (!o.labels_path.empty()) {
    for (const auto& l : load_labels(o.labels_path).records) {
      labels.emplace(l.node_id, l.positive);
    }
  }
  Sink sink(o.output_path, out);
  export_features(sink.get(), records,
                  o.labels_path.empty() ? nullptr : &labels);
  return kExitOk;
}

std::vector<std::pair<std::string, double>> read_score_column(
    const std::string& path, const std::string& column) {
  std::istringstream in(read_input_file(path));
  std::string line;
  auto split = [](const std::string& s) {
    std::vector<std::string> f;
    std::stringstream ss(s);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    return f;
  };
  if (!std::getline(in, line)) {
    throw Error(ErrorCode::kParse, fmt::format("{}: empty score file", path));
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split(line);
  const auto id_col = std::find(header.begin(), header.end(), "node_id");
  const auto score_col = std::find(header.begin(), header.end(), column);
  if (id_col == header.end() || score_col == header.end()) {
    throw Error(ErrorCode::kParse,
                fmt::format("{}:1: header lacks node_id or '{}'", path, column));
  }
  const auto id_at = static_cast<std::size_t>(id_col - header.begin());
  const auto score_at = static_cast<std::size_t>(score_col - header.begin());

  std::vector<std::pair<std::string, double>> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() <= std::max(id_at, score_at)) {
      throw Error(ErrorCode::kParse,
                  fmt::format("{}:{}: too few fields", path, line_no));
    }
    double v = 0.0;
    try {
      std::size_t used = 0;
      v = std::stod(f[score_at], &used);
      if (used != f[score_at].size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw Error(ErrorCode::kParse,
                  fmt::format("{}:{}: '{}' is not a number", path, line_no,
                              f[score_at]));
    }
    rows.emplace_back(f[id_at], v);
  }
  return rows;
}

Polarity parse_polarity(const std::string& p) {
  return p == "high" ? Polarity::kPositiveIsHigh : Polarity::kPositiveIsLow;
}

int cmd_eval(const Options& o, std::ostream& out, std::ostream& err) {
  const auto scores = read_score_column(o.scores_path, o.column);
  const auto labels = load_labels(o.labels_path).records;
  std::map<std::string, bool> by_id;
  for (const auto& l : labels) by_id.emplace(l.node_id, l.positive);

  std::vector<LabeledScore> ls;
  for (const auto& [id, v] : scores) {
    auto it = by_id.find(id);
    if (it != by_id.end()) ls.push_back({id, v, it->second});
  }
  if (ls.size() < labels.size()) {
    err << fmt::format("note: {} labeled node(s) have no score\n",
                       labels.size() - ls.size());
  }
  const auto polarity = parse_polarity(o.polarity);
  double threshold = 0.0;
  if (o.threshold) {
    threshold = *o.threshold;
  } else {
    std::vector<double> values;
    for (const auto& s : ls) values.push_back(s.score);
    if (values.empty()) throw Error(ErrorCode::kInvalidArgument, "no labeled scores");
    std::sort(values.begin(), values.end());
    const std::size_t mid = values.size() / 2;
    threshold = values.size() % 2 ? values[mid]
                                  : (values[mid - 1] + values[mid]) / 2.0;
  }
  out << "n," << ls.size() << '\n';
  out << "auc," << format_real(auc(ls, polarity)) << '\n';
  for (double f : {0.10, 0.15, 0.20}) {
    out << fmt::format("precision@{:.0f}%,", f * 100)
        << format_real(precision_at(ls, f, polarity)) << '\n';
  }
  out << "threshold," << format_real(threshold) << '\n';
  out << "accuracy," << format_real(accuracy(ls, threshold, polarity)) << '\n';
  return kExitOk;
}

int cmd_sweep(const Options& o, std::ostream& out, std::ostream& err) {
  const auto g = load_graph(o, err);
  const auto labels = load_labels(o.labels_path).records;
  const auto rows = sweep(g, labels, o.taus, o.alphas, o.params,
                          resolve_threads(o.threads));
  Sink sink(o.output_path, out);
  write_sweep_csv(sink.get(), rows);
  return kExitOk;
}

int cmd_synth(const Options& o, std::ostream& out, std::ostream&) {
  const auto bench = generate(o.synth);
  const auto format = o.format == "csv" ? EventFormat::kCsv : EventFormat::kJsonl;
  {
    Sink sink(o.output_path, out);
    write_events(sink.get(), bench.events, format);
  }
  if (!o.labels_out.empty()) {
    Sink sink(o.labels_out, out);
    write_labels(sink.get(), bench.labels);
  }
  return kExitOk;
}

void add_model_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--tau", o.params.tau, "Decay constant in time bins")
      ->capture_default_str();
  cmd->add_option("--alpha", o.params.alpha, "Weight of the TM-score")
      ->capture_default_str();
  cmd->add_option("--inflation", o.params.mcl.inflation, "MCL inflation")
      ->capture_default_str();
  cmd->add_option("--window", o.params.smoothing_window,
                  "Moving-average window (odd)")
      ->capture_default_str();
  cmd->add_option("--laplace", o.params.laplace_eps,
                  "Probability given to empty bins")
      ->capture_default_str();
  cmd->add_option("--threads", o.threads,
                  fmt::format("Worker threads (0: ${} or all cores)",
                              kThreadsEnv));
  cmd->add_flag("--lenient", o.lenient, "Skip malformed event lines");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  Options o;
  CLI::App app{"Score collaboration-graph nodes for merged identities"};
  app.require_subcommand(1);

  auto* score = app.add_subcommand("score", "Score one node, print JSON");
  score->add_option("--events", o.events_path, "Event file (.jsonl/.csv[.gz])")
      ->required();
  score->add_option("--node", o.node_id, "Node id")->required();
  score->add_flag("--centrality", o.params.with_centrality,
                  "Include ego-network centralities");
  add_model_flags(score, o);

  auto* rank = app.add_subcommand("rank", "Rank nodes by ascending s-score");
  rank->add_option("--events", o.events_path)->required();
  rank->add_option("--nodes", o.nodes_path, "File with one node id per line");
  rank->add_option("-o,--output", o.output_path);
  add_model_flags(rank, o);

  auto* features = app.add_subcommand("features", "Export the feature matrix");
  features->add_option("--events", o.events_path)->required();
  features->add_option("--nodes", o.nodes_path);
  features->add_option("--labels", o.labels_path, "Adds a label column");
  features->add_option("-o,--output", o.output_path);
  add_model_flags(features, o);

  auto* eval = app.add_subcommand("eval", "AUC, precision@k and accuracy");
  eval->add_option("--scores", o.scores_path, "CSV with node_id and a score")
      ->required();
  eval->add_option("--labels", o.labels_path)->required();
  eval->add_option("--column", o.column)->capture_default_str();
  eval->add_option("--polarity", o.polarity, "Which end holds positives")
      ->check(CLI::IsMember({"low", "high"}))
      ->capture_default_str();
  eval->add_option("--threshold", o.threshold,
                   "Accuracy threshold (default: median score)");

  auto* sweep_cmd = app.add_subcommand("sweep", "AUC over a tau x alpha grid");
  sweep_cmd->add_option("--events", o.events_path)->required();
  sweep_cmd->add_option("--labels", o.labels_path)->required();
  sweep_cmd->add_option("--taus", o.taus)->delimiter(',');
  sweep_cmd->add_option("--alphas", o.alphas)->delimiter(',');
  sweep_cmd->add_option("-o,--output", o.output_path);
  add_model_flags(sweep_cmd, o);

  auto* synth = app.add_subcommand("synth", "Write a labeled synthetic benchmark");
  synth->add_option("--seed", o.synth.seed)->capture_default_str();
  synth->add_option("--pure", o.synth.n_pure)->capture_default_str();
  synth->add_option("--multi", o.synth.n_multi)->capture_default_str();
  synth->add_option("--mobile", o.synth.n_mobile)->capture_default_str();
  synth->add_option("--entities", o.synth.entities_per_multi)
      ->capture_default_str();
  synth->add_option("--collaborators", o.synth.collaborators_per_entity)
      ->capture_default_str();
  synth->add_option("--density", o.synth.intra_density)->capture_default_str();
  synth->add_option("--noise", o.synth.inter_noise)->capture_default_str();
  synth->add_option("--years", o.synth.years)->capture_default_str();
  synth->add_option("--events-per-year", o.synth.events_per_year)
      ->capture_default_str();
  synth->add_option("--mobility-break", o.synth.mobility_break);
  synth->add_option("--format", o.format)
      ->check(CLI::IsMember({"jsonl", "csv"}))
      ->capture_default_str();
  synth->add_option("-o,--output", o.output_path, "Event file");
  synth->add_option("--labels-out", o.labels_out, "Label file");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    o.params.validate();
    if (*synth) o.synth.validate();
  } catch (const Error& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (*score) return cmd_score(o, out, err);
    if (*rank) return cmd_rank(o, out, err);
    if (*features) return cmd_features(o, out, err);
    if (*eval) return cmd_eval(o, out, err);
    if (*sweep_cmd) return cmd_sweep(o, out, err);
    if (*synth) return cmd_synth(o, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace disambig::cli
