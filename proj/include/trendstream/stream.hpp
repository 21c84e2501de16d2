#pragma once

#include <cstdint>
#include <functional>
#include <istream>
#include <string>
#include <vector>

namespace trendstream {

using SegmentId = std::int64_t;

struct RawDocument {
  std::string id;
  std::int64_t timestamp = 0;  // epoch seconds, UTC
  std::string text;
};

/// A stream item after normalization and segment assignment.
struct Document {
  std::string id;
  SegmentId segment = 0;
  std::vector<std::string> tokens;  // ordered multiset
};

/// Largest multiple of `width` that is <= `timestamp` (aligns segment 0 to a
/// clock boundary when width is 3600).
std::int64_t align_origin(std::int64_t timestamp, std::int64_t width);

/// floor((timestamp - origin) / width). A timestamp exactly on a boundary
/// belongs to the later segment. Throws std::invalid_argument when
/// width <= 0 or timestamp < origin.
SegmentId assign_segment(std::int64_t timestamp, std::int64_t origin,
                         std::int64_t width);

struct ReadCounters {
  std::int64_t lines = 0;
  std::int64_t records = 0;    // well-formed records handed to the caller
  std::int64_t malformed = 0;  // unparseable or invalid record lines
  std::int64_t ignored = 0;    // comment ('#') and blank lines
};

/// Reads line-delimited JSON records {"id": str, "timestamp": int,
/// "text": str} from `in`, invoking `on_record` for each well-formed one in
/// file order. Malformed lines are counted and reported through `on_warning`
/// (line number + message) but never abort the read. Returns the counters;
/// records + malformed + ignored == lines.
ReadCounters read_stream(
    std::istream& in, const std::function<void(RawDocument&&)>& on_record,
    const std::function<void(std::int64_t, const std::string&)>& on_warning =
        nullptr);

}  // namespace trendstream
