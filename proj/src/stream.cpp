#include "trendstream/stream.hpp"

#include <stdexcept>

#include "json.hpp"

namespace trendstream {

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) {
    --q;
  }
  return q;
}

}  // namespace

std::int64_t align_origin(std::int64_t timestamp, std::int64_t width) {
  if (width <= 0) {
    throw std::invalid_argument("segment width must be positive");
  }
  return floor_div(timestamp, width) * width;
}

SegmentId assign_segment(std::int64_t timestamp, std::int64_t origin,
                         std::int64_t width) {
  if (width <= 0) {
    throw std::invalid_argument("segment width must be positive");
  }
  if (timestamp < origin) {
    throw std::invalid_argument("timestamp precedes the stream origin");
  }
  return floor_div(timestamp - origin, width);
}

ReadCounters read_stream(
    std::istream& in, const std::function<void(RawDocument&&)>& on_record,
    const std::function<void(std::int64_t, const std::string&)>& on_warning) {
  ReadCounters counters;
  std::string line;
  while (std::getline(in, line)) {
    ++counters.lines;
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    std::size_t first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') {
      ++counters.ignored;
      continue;
    }
    std::string error;
    RawDocument doc;
    nlohmann::json parsed =
        nlohmann::json::parse(line, /*cb=*/nullptr, /*allow_exceptions=*/false);
    if (parsed.is_discarded() || !parsed.is_object()) {
      error = "not a JSON object";
    } else if (!parsed.contains("id") || !parsed["id"].is_string() ||
               parsed["id"].get<std::string>().empty()) {
      error = "missing or empty \"id\"";
    } else if (!parsed.contains("timestamp") ||
               !parsed["timestamp"].is_number_integer()) {
      error = "missing or non-integer \"timestamp\"";
    } else if (!parsed.contains("text") || !parsed["text"].is_string()) {
      error = "missing \"text\"";
    }
    if (!error.empty()) {
      ++counters.malformed;
      if (on_warning) {
        on_warning(counters.lines, error);
      }
      continue;
    }
    doc.id = parsed["id"].get<std::string>();
    doc.timestamp = parsed["timestamp"].get<std::int64_t>();
    doc.text = parsed["text"].get<std::string>();
    ++counters.records;
    on_record(std::move(doc));
  }
  return counters;
}

}  // namespace trendstream
