#include "trendstream/report_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace trendstream {

namespace {

using ordered_json = nlohmann::ordered_json;

// Numeric output carries 12 significant digits; storing the re-parsed value
// keeps JSON serialization identical to what the text form says.
double round_sig(double value, int digits) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.*g", digits, value);
  return std::strtod(buffer, nullptr);
}

ordered_json ranked_to_json(const RankedKeywords& ranked) {
  ordered_json arr = ordered_json::array();
  for (const auto& [kw, score] : ranked) {
    arr.push_back(ordered_json::array({kw, round_sig(score, 12)}));
  }
  return arr;
}

}  // namespace

std::string format_sig(double value, int digits) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.*g", digits, value);
  return buffer;
}

double parse_sig(const std::string& text) {
  return std::strtod(text.c_str(), nullptr);
}

std::string report_to_json_line(const SegmentReport& report,
                                const std::vector<Measure>& active) {
  ordered_json obj;
  obj["segment"] = report.segment;
  obj["counters"] = {{"ingested", report.counters.ingested},
                     {"dropped", report.counters.dropped},
                     {"malformed", report.counters.malformed}};
  obj["eigen_converged"] = report.eigen_converged;
  ordered_json top;
  ordered_json raw;
  for (Measure m : kAllMeasures) {
    if (std::find(active.begin(), active.end(), m) == active.end()) {
      continue;
    }
    auto ranked = report.rankings.find(m);
    top[std::string(measure_name(m))] =
        ranked == report.rankings.end() ? ordered_json::array()
                                        : ranked_to_json(ranked->second);
    ordered_json raw_arr = ordered_json::array();
    auto raw_it = report.raw.find(m);
    if (ranked != report.rankings.end() && raw_it != report.raw.end()) {
      for (const auto& [kw, score] : ranked->second) {
        auto value = raw_it->second.find(kw);
        raw_arr.push_back(ordered_json::array(
            {kw, round_sig(value == raw_it->second.end() ? 0.0 : value->second,
                           12)}));
      }
    }
    raw[std::string(measure_name(m))] = std::move(raw_arr);
  }
  obj["top"] = std::move(top);
  obj["raw"] = std::move(raw);
  return obj.dump();
}

std::string summary_to_json_line(const SegmentReport& report) {
  ordered_json obj;
  obj["segment"] = report.segment;
  obj["measure"] = std::string(measure_name(report.summary_measure));
  ordered_json keywords = ordered_json::array();
  auto ranked = report.rankings.find(report.summary_measure);
  if (ranked != report.rankings.end()) {
    for (const auto& [kw, score] : ranked->second) {
      keywords.push_back(kw);
    }
  }
  obj["keywords"] = std::move(keywords);
  ordered_json picks = ordered_json::array();
  for (const SummaryPick& pick : report.summary.picks) {
    ordered_json p;
    p["doc_id"] = pick.doc_id;
    p["text"] = pick.text;
    p["new_keywords"] = pick.new_keywords;
    p["weight"] = pick.weight;
    picks.push_back(std::move(p));
  }
  obj["picks"] = std::move(picks);
  obj["uncovered"] = report.summary.uncovered;
  return obj.dump();
}

void write_timeseries_header(std::ostream& out) {
  out << "segment,keyword,measure,score\n";
}

void append_timeseries_rows(std::ostream& out, const SegmentReport& report,
                            const std::vector<Measure>& active) {
  for (Measure m : kAllMeasures) {
    if (std::find(active.begin(), active.end(), m) == active.end()) {
      continue;
    }
    auto it = report.vectors.find(m);
    if (it == report.vectors.end()) {
      continue;
    }
    for (const auto& [kw, score] : it->second.scores) {
      out << report.segment << ',' << kw << ',' << measure_name(m) << ','
          << format_sig(score, 12) << '\n';
    }
  }
}

ParsedReport parse_report_line(const std::string& line) {
  ordered_json obj = ordered_json::parse(line);
  ParsedReport parsed;
  parsed.segment = obj.at("segment").get<SegmentId>();
  for (const auto& [name, arr] : obj.at("top").items()) {
    auto measure = parse_measure(name);
    if (!measure.has_value()) {
      throw std::runtime_error("unknown measure in reports file: " + name);
    }
    RankedKeywords ranked;
    for (const auto& entry : arr) {
      ranked.emplace_back(entry.at(0).get<std::string>(),
                          entry.at(1).get<double>());
    }
    parsed.top[*measure] = std::move(ranked);
  }
  return parsed;
}

std::vector<ParsedReport> read_reports_jsonl(std::istream& in) {
  std::vector<ParsedReport> reports;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) {
      continue;
    }
    reports.push_back(parse_report_line(line));
  }
  return reports;
}

std::vector<TimeseriesRow> read_timeseries_csv(std::istream& in) {
  std::vector<TimeseriesRow> rows;
  std::string line;
  if (!std::getline(in, line) || line != "segment,keyword,measure,score") {
    throw std::runtime_error("timeseries CSV is missing its header");
  }
  std::int64_t number = 1;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) {
      continue;
    }
    std::istringstream fields(line);
    std::string segment_text;
    std::string keyword;
    std::string measure_text;
    std::string score_text;
    if (!std::getline(fields, segment_text, ',') ||
        !std::getline(fields, keyword, ',') ||
        !std::getline(fields, measure_text, ',') ||
        !std::getline(fields, score_text)) {
      throw std::runtime_error("bad timeseries row at line " +
                               std::to_string(number));
    }
    auto measure = parse_measure(measure_text);
    if (!measure.has_value()) {
      throw std::runtime_error("unknown measure at line " +
                               std::to_string(number));
    }
    rows.push_back(TimeseriesRow{std::stoll(segment_text), keyword, *measure,
                                 parse_sig(score_text)});
  }
  return rows;
}

std::string timeseries_row_to_line(const TimeseriesRow& row) {
  std::ostringstream out;
  out << row.segment << ',' << row.keyword << ',' << measure_name(row.measure)
      << ',' << format_sig(row.score, 12);
  return out.str();
}

}  // namespace trendstream
