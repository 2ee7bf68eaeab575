#include "ssmon/trace_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "ssmon/errors.hpp"

namespace ssmon {

std::string format_double(double value) {
  char buffer[32];
  const auto result =
      std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, result.ptr);
}

std::string format_distance(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.9g", value);
  return buffer;
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t pos = 0;
  while (true) {
    const auto comma = line.find(',', pos);
    if (comma == std::string::npos) {
      fields.push_back(line.substr(pos));
      return fields;
    }
    fields.push_back(line.substr(pos, comma - pos));
    pos = comma + 1;
  }
}

double parse_number(const std::string& field, std::size_t line_no,
                    const char* what) {
  double value = 0.0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  const auto result = std::from_chars(begin, end, value);
  if (result.ec != std::errc{} || result.ptr != end || !std::isfinite(value))
    throw ParseError(line_no,
                     std::string(what) + " is not a finite number: '" + field + "'");
  return value;
}

std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

}  // namespace

std::vector<SkeletonTraceRecord> parse_trace(const std::string& text) {
  std::istringstream stream(text);
  std::string line;
  std::size_t line_no = 0;

  if (!std::getline(stream, line))
    throw ParseError(1, "missing header line");
  ++line_no;
  if (strip_cr(line) != kTraceHeader)
    throw ParseError(1, std::string("expected header '") + kTraceHeader + "'");

  std::vector<SkeletonTraceRecord> records;
  std::map<std::string, double> last_time;
  while (std::getline(stream, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) continue;

    const auto fields = split_fields(line);
    if (fields.size() != 7)
      throw ParseError(line_no, "expected 7 fields, got " +
                                    std::to_string(fields.size()));
    SkeletonTraceRecord record;
    record.time_s = parse_number(fields[0], line_no, "time_s");
    record.agent = fields[1];
    record.keypoint = fields[2];
    record.x = parse_number(fields[3], line_no, "x");
    record.y = parse_number(fields[4], line_no, "y");
    record.z = parse_number(fields[5], line_no, "z");
    record.confidence = parse_number(fields[6], line_no, "confidence");
    if (record.agent.empty())
      throw ParseError(line_no, "agent must be non-empty");
    if (record.keypoint.empty())
      throw ParseError(line_no, "keypoint must be non-empty");
    if (record.confidence < 0.0 || record.confidence > 1.0)
      throw ParseError(line_no, "confidence must be within [0, 1]");

    const auto previous = last_time.find(record.agent);
    if (previous != last_time.end() && record.time_s < previous->second)
      throw NonMonotonicTime(line_no);
    last_time[record.agent] = record.time_s;
    records.push_back(std::move(record));
  }
  return records;
}

std::string write_trace(const std::vector<SkeletonTraceRecord>& records) {
  std::ostringstream out;
  out << kTraceHeader << '\n';
  for (const auto& record : records) {
    out << format_double(record.time_s) << ',' << record.agent << ','
        << record.keypoint << ',' << format_double(record.x) << ','
        << format_double(record.y) << ',' << format_double(record.z) << ','
        << format_double(record.confidence) << '\n';
  }
  return out.str();
}

std::vector<KeypointFrame> frames_for_agent(
    const std::vector<SkeletonTraceRecord>& records, const std::string& agent) {
  std::vector<KeypointFrame> frames;
  for (const auto& record : records) {
    if (record.agent != agent) continue;
    if (frames.empty() || frames.back().time_s() != record.time_s)
      frames.emplace_back(record.time_s);
    frames.back().set(record.keypoint, {record.x, record.y, record.z},
                      record.confidence);
  }
  return frames;
}

std::string write_decision_log(const std::vector<SafetyDecision>& decisions) {
  std::ostringstream out;
  out << "time_s,state,speed_factor,worst_human_kp,worst_robot_kp,distance_m,"
         "stop_threshold_m,reduced_threshold_m,event\n";
  for (const auto& decision : decisions) {
    out << format_double(decision.time_s) << ',' << to_string(decision.state)
        << ',' << format_double(decision.speed_factor) << ',';
    if (decision.worst) {
      out << decision.worst->human << ',' << decision.worst->robot << ','
          << format_distance(decision.worst->distance_m) << ','
          << decision.worst->stop_threshold.str() << ','
          << decision.worst->reduced_threshold.str();
    } else {
      out << "-,-,-,-,-";
    }
    out << ',' << to_string(decision.event) << '\n';
  }
  return out.str();
}

std::string write_pair_samples(const std::vector<PairSample>& samples) {
  std::ostringstream out;
  out << "time_s,human_kp,robot_kp,distance_m\n";
  for (const auto& sample : samples) {
    out << format_double(sample.time_s) << ',' << sample.human << ','
        << sample.robot << ',' << format_distance(sample.distance_m) << '\n';
  }
  return out.str();
}

std::string write_summary(const ScenarioSummary& summary) {
  std::ostringstream out;
  out << "metric,key,value\n";
  out << "frames,," << summary.frames << '\n';
  for (const auto& [event, count] : summary.event_counts)
    out << "event_count," << to_string(event) << ',' << count << '\n';
  for (const auto& pair : summary.tracked) {
    out << "min_distance_m," << pair.human << ':' << pair.robot << ','
        << format_distance(pair.min_distance_m) << '\n';
    out << "min_distance_time_s," << pair.human << ':' << pair.robot << ','
        << format_double(pair.at_time_s) << '\n';
  }
  out << "final_state,," << to_string(summary.final_state) << '\n';
  return out.str();
}

void write_file_atomic(const std::filesystem::path& path,
                       const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open '" + tmp.string() + "' for writing");
    out.write(content.data(),
              static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw Error("write to '" + tmp.string() + "' failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error("cannot move '" + tmp.string() + "' to '" + path.string() +
                "'");
  }
}

}  // namespace ssmon
