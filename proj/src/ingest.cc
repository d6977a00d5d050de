#include "disambig/ingest.h"

#include <charconv>
#include <fstream>
#include <istream>
#include <iterator>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include <fmt/format.h>
#include <zlib.h>

#include "disambig/error.h"
#include "json.hpp"

namespace disambig {
namespace {

using ordered_json = nlohmann::ordered_json;

// Thrown by per-line parsers and converted to LineError by the driver.
struct BadLine {
  std::string reason;
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t'))
    s.remove_suffix(1);
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      parts.push_back(s.substr(start));
      return parts;
    }
    parts.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

TimeBin parse_time(std::string_view text) {
  TimeBin value = 0;
  const auto* begin = text.data();
  const auto* end = text.data() + text.size();
  if (!text.empty() && text.front() == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (text.empty() || ec != std::errc() || ptr != end) {
    throw BadLine{fmt::format("time '{}' is not an integer", text)};
  }
  return value;
}

void check_participants(const CollabEvent& event) {
  if (event.participants.empty()) throw BadLine{"no participants"};
  std::unordered_set<std::string_view> seen;
  for (const auto& p : event.participants) {
    if (p.empty()) throw BadLine{"empty participant id"};
    if (!seen.insert(p).second) {
      throw BadLine{fmt::format("participant '{}' listed twice", p)};
    }
  }
}

CollabEvent parse_jsonl_line(std::string_view line) {
  ordered_json j;
  try {
    j = ordered_json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw BadLine{fmt::format("invalid JSON ({})", e.what())};
  }
  if (!j.is_object()) throw BadLine{"expected a JSON object"};
  CollabEvent event;
  const auto id = j.find("event_id");
  if (id == j.end() || !id->is_string()) {
    throw BadLine{"missing string field 'event_id'"};
  }
  event.event_id = id->get<std::string>();
  if (event.event_id.empty()) throw BadLine{"empty event_id"};
  const auto time = j.find("time");
  if (time == j.end() || !time->is_number_integer()) {
    throw BadLine{"missing integer field 'time'"};
  }
  if (time->is_number_unsigned() &&
      time->get<std::uint64_t>() >
          static_cast<std::uint64_t>(std::numeric_limits<TimeBin>::max())) {
    throw BadLine{"time out of range"};
  }
  event.time = time->get<TimeBin>();
  const auto parts = j.find("participants");
  if (parts == j.end() || !parts->is_array()) {
    throw BadLine{"missing array field 'participants'"};
  }
  for (const auto& p : *parts) {
    if (!p.is_string()) throw BadLine{"participant ids must be strings"};
    event.participants.push_back(p.get<std::string>());
  }
  check_participants(event);
  return event;
}

CollabEvent parse_csv_event_line(std::string_view line) {
  const auto fields = split(line, ',');
  if (fields.size() != 3) {
    throw BadLine{fmt::format("expected 3 fields, found {}", fields.size())};
  }
  CollabEvent event;
  const auto id = trim(fields[0]);
  if (!is_valid_csv_id(id)) {
    throw BadLine{fmt::format("invalid event id '{}'", id)};
  }
  event.event_id = std::string(id);
  event.time = parse_time(trim(fields[1]));
  const auto members = trim(fields[2]);
  if (members.empty()) throw BadLine{"no participants"};
  for (auto p : split(members, ';')) {
    p = trim(p);
    if (!is_valid_csv_id(p)) {
      throw BadLine{fmt::format("invalid participant id '{}'", p)};
    }
    event.participants.emplace_back(p);
  }
  check_participants(event);
  return event;
}

LabelRecord parse_label_line(std::string_view line) {
  const auto fields = split(line, ',');
  if (fields.size() != 2) {
    throw BadLine{fmt::format("expected 2 fields, found {}", fields.size())};
  }
  const auto id = trim(fields[0]);
  const auto label = trim(fields[1]);
  if (id.empty()) throw BadLine{"empty node id"};
  if (label != "0" && label != "1") {
    throw BadLine{fmt::format("label '{}' is not 0 or 1", label)};
  }
  return LabelRecord{std::string(id), label == "1"};
}

// Shared line loop: header skipping, blank lines, duplicate detection and
// strict/lenient error policy.
template <typename Record, typename ParseLine, typename KeyOf>
ParseResult<Record> parse_lines(std::istream& in, ParseMode mode,
                                std::string_view header, ParseLine parse_line,
                                KeyOf key_of, std::string_view what) {
  ParseResult<Record> result;
  std::unordered_set<std::string> keys;
  std::string raw;
  std::size_t line_no = 0;
  bool first_content = true;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = trim(raw);
    if (line.empty()) continue;
    if (first_content) {
      first_content = false;
      if (!header.empty() && line == header) continue;
    }
    try {
      Record record = parse_line(line);
      if (!keys.insert(key_of(record)).second) {
        if (mode == ParseMode::kStrict) {
          throw Error(ErrorCode::kDuplicateId,
                      fmt::format("line {}: duplicate {} '{}'", line_no, what,
                                  key_of(record)));
        }
        result.errors.push_back(
            {line_no, fmt::format("duplicate {} '{}'", what, key_of(record))});
        continue;
      }
      result.records.push_back(std::move(record));
    } catch (const BadLine& bad) {
      if (mode == ParseMode::kStrict) {
        throw Error(ErrorCode::kParse,
                    fmt::format("line {}: {}", line_no, bad.reason));
      }
      result.errors.push_back({line_no, bad.reason});
    }
  }
  return result;
}

std::string with_file(const std::filesystem::path& path, const char* what) {
  return fmt::format("{}: {}", path.string(), what);
}

bool ends_with(const std::string& s, std::string_view suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

bool is_valid_csv_id(std::string_view id) {
  if (id.empty()) return false;
  for (char c : id) {
    const bool ok = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') ||
                    (c >= '0' && c <= '9') || c == '_' || c == '-';
    if (!ok) return false;
  }
  return true;
}

ParseResult<CollabEvent> parse_events(std::istream& in, EventFormat format,
                                      ParseMode mode) {
  auto key = [](const CollabEvent& e) { return e.event_id; };
  if (format == EventFormat::kJsonl) {
    return parse_lines<CollabEvent>(in, mode, "", parse_jsonl_line, key,
                                    "event_id");
  }
  return parse_lines<CollabEvent>(in, mode, "event_id,time,participants",
                                  parse_csv_event_line, key, "event_id");
}

ParseResult<CollabEvent> parse_events(std::string_view text,
                                      EventFormat format, ParseMode mode) {
  std::istringstream in{std::string(text)};
  return parse_events(in, format, mode);
}

ParseResult<LabelRecord> parse_labels(std::istream& in, ParseMode mode) {
  return parse_lines<LabelRecord>(
      in, mode, "node_id,label", parse_label_line,
      [](const LabelRecord& r) { return r.node_id; }, "node_id");
}

ParseResult<LabelRecord> parse_labels(std::string_view text, ParseMode mode) {
  std::istringstream in{std::string(text)};
  return parse_labels(in, mode);
}

void write_events(std::ostream& out, const std::vector<CollabEvent>& events,
                  EventFormat format) {
  for (const auto& e : events) {
    if (format == EventFormat::kJsonl) {
      ordered_json j;
      j["event_id"] = e.event_id;
      j["time"] = e.time;
      j["participants"] = e.participants;
      out << j.dump() << '\n';
    } else {
      out << e.event_id << ',' << e.time << ',';
      for (std::size_t i = 0; i < e.participants.size(); ++i) {
        if (i) out << ';';
        out << e.participants[i];
      }
      out << '\n';
    }
  }
}

void write_labels(std::ostream& out, const std::vector<LabelRecord>& labels) {
  out << "node_id,label\n";
  for (const auto& l : labels) {
    out << l.node_id << ',' << (l.positive ? 1 : 0) << '\n';
  }
}

std::string read_input_file(const std::filesystem::path& path) {
  const std::string name = path.string();
  if (ends_with(name, ".gz")) {
    gzFile file = gzopen(name.c_str(), "rb");
    if (file == nullptr) {
      throw Error(ErrorCode::kIo, with_file(path, "cannot open"));
    }
    std::string data;
    char buffer[1 << 16];
    int n = 0;
    while ((n = gzread(file, buffer, sizeof buffer)) > 0) data.append(buffer, n);
    int err = 0;
    const bool failed = n < 0;
    const char* msg = failed ? gzerror(file, &err) : nullptr;
    const std::string reason = msg ? msg : "";
    gzclose(file);
    if (failed) {
      throw Error(ErrorCode::kIo,
                  fmt::format("{}: gzip error: {}", name, reason));
    }
    return data;
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, with_file(path, "cannot open"));
  return std::string(std::istreambuf_iterator<char>(in), {});
}

EventFormat format_for_path(const std::filesystem::path& path) {
  const std::string name = path.string();
  return (ends_with(name, ".csv") || ends_with(name, ".csv.gz"))
             ? EventFormat::kCsv
             : EventFormat::kJsonl;
}

ParseResult<CollabEvent> load_events(const std::filesystem::path& path,
                                     ParseMode mode) {
  const std::string text = read_input_file(path);
  try {
    return parse_events(text, format_for_path(path), mode);
  } catch (const Error& e) {
    throw Error(e.code(), fmt::format("{}: {}", path.string(), e.what()));
  }
}

ParseResult<LabelRecord> load_labels(const std::filesystem::path& path,
                                     ParseMode mode) {
  const std::string text = read_input_file(path);
  try {
    return parse_labels(text, mode);
  } catch (const Error& e) {
    throw Error(e.code(), fmt::format("{}: {}", path.string(), e.what()));
  }
}

}  // namespace disambig
