#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "disambig/temporal_graph.h"

namespace disambig {

enum class EventFormat { kJsonl, kCsv };

enum class ParseMode {
  kStrict,   // first bad line throws Error(kParse) / Error(kDuplicateId)
  kLenient,  // bad lines are skipped and reported
};

struct LineError {
  std::size_t line = 0;  // 1-based
  std::string reason;
};

template <typename Record>
struct ParseResult {
  std::vector<Record> records;
  std::vector<LineError> errors;
};

struct LabelRecord {
  std::string node_id;
  bool positive = false;  // multi-node

  friend bool operator==(const LabelRecord&, const LabelRecord&) = default;
};

// One record per nonblank line. JSONL lines are objects with event_id (string),
// time (integer) and participants (nonempty string array). CSV lines are
// `event_id,time,p1;p2;...` with ids drawn from [A-Za-z0-9_-]; an optional
// `event_id,time,participants` header is skipped.
ParseResult<CollabEvent> parse_events(std::istream& in, EventFormat format,
                                      ParseMode mode = ParseMode::kStrict);
ParseResult<CollabEvent> parse_events(std::string_view text,
                                      EventFormat format,
                                      ParseMode mode = ParseMode::kStrict);

// `node_id,label` rows with label in {0,1}; an optional `node_id,label`
// header is skipped. Duplicate node ids are errors.
ParseResult<LabelRecord> parse_labels(std::istream& in,
                                      ParseMode mode = ParseMode::kStrict);
ParseResult<LabelRecord> parse_labels(std::string_view text,
                                      ParseMode mode = ParseMode::kStrict);

void write_events(std::ostream& out, const std::vector<CollabEvent>& events,
                  EventFormat format);
void write_labels(std::ostream& out, const std::vector<LabelRecord>& labels);

// Reads a whole file, inflating it when the name ends in ".gz".
std::string read_input_file(const std::filesystem::path& path);

// ".csv" or ".csv.gz" selects CSV, anything else JSONL.
EventFormat format_for_path(const std::filesystem::path& path);

// File-level wrappers; errors name the file.
ParseResult<CollabEvent> load_events(const std::filesystem::path& path,
                                     ParseMode mode = ParseMode::kStrict);
ParseResult<LabelRecord> load_labels(const std::filesystem::path& path,
                                     ParseMode mode = ParseMode::kStrict);

bool is_valid_csv_id(std::string_view id);

}  // namespace disambig
