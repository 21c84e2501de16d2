#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "trendstream/pipeline.hpp"

namespace trendstream {

/// Shortest decimal form of `value` rounded to `digits` significant digits.
std::string format_sig(double value, int digits = 12);

/// Parses what format_sig produced.
double parse_sig(const std::string& text);

std::string report_to_json_line(const SegmentReport& report,
                                const std::vector<Measure>& active);
std::string summary_to_json_line(const SegmentReport& report);

void write_timeseries_header(std::ostream& out);
void append_timeseries_rows(std::ostream& out, const SegmentReport& report,
                            const std::vector<Measure>& active);

/// The slice of reports.jsonl the CLI readers need.
struct ParsedReport {
  SegmentId segment = 0;
  std::map<Measure, RankedKeywords> top;
};

ParsedReport parse_report_line(const std::string& line);
std::vector<ParsedReport> read_reports_jsonl(std::istream& in);

struct TimeseriesRow {
  SegmentId segment = 0;
  std::string keyword;
  Measure measure = Measure::kFrequency;
  double score = 0.0;
};

/// Parses a timeseries CSV (header required).
std::vector<TimeseriesRow> read_timeseries_csv(std::istream& in);

std::string timeseries_row_to_line(const TimeseriesRow& row);

}  // namespace trendstream
