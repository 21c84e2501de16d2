#include "trendstream/evaluate.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace trendstream {

GroundTruthEvent to_ground_truth(const PlantedEvent& event) {
  return GroundTruthEvent{event.keyword, event.onset, event.duration,
                          event.intensity};
}

namespace {

// segment -> measure -> scores; missing entries read as zero.
struct ScoreTable {
  SegmentId first = 0;
  SegmentId last = -1;
  std::map<SegmentId, std::map<Measure, CentralityVector>> segments;

  double score(SegmentId segment, Measure measure,
               const std::string& keyword) const {
    auto seg = segments.find(segment);
    if (seg == segments.end()) {
      return 0.0;
    }
    auto vec = seg->second.find(measure);
    return vec == seg->second.end() ? 0.0 : vec->second.at(keyword);
  }

  std::vector<Measure> measures() const {
    std::vector<Measure> found;
    for (Measure m : kAllMeasures) {
      for (const auto& [seg, vectors] : segments) {
        if (vectors.count(m)) {
          found.push_back(m);
          break;
        }
      }
    }
    return found;
  }
};

std::vector<DetectionRow> evaluate_table(
    const ScoreTable& table, std::span<const GroundTruthEvent> events,
    int top_k) {
  if (top_k < 1) {
    throw std::invalid_argument("top-k must be >= 1");
  }
  for (const GroundTruthEvent& event : events) {
    if (event.duration < 1) {
      throw std::invalid_argument("event duration must be >= 1");
    }
    if (event.onset < table.first || event.end_segment() > table.last) {
      throw std::invalid_argument("event " + event.keyword +
                                  " lies outside the report range");
    }
  }

  // Top-k membership per segment and measure, computed once.
  const std::vector<Measure> measures = table.measures();
  std::map<SegmentId, std::map<Measure, std::set<std::string>>> topsets;
  for (const auto& [segment, vectors] : table.segments) {
    for (const auto& [measure, vector] : vectors) {
      std::set<std::string>& members = topsets[segment][measure];
      for (const auto& [kw, score] : rank_top_k(vector, top_k)) {
        members.insert(kw);
      }
    }
  }

  std::vector<DetectionRow> rows;
  for (const GroundTruthEvent& event : events) {
    for (Measure measure : measures) {
      DetectionRow row;
      row.keyword = event.keyword;
      row.measure = measure;
      for (SegmentId s = event.onset; s <= table.last; ++s) {
        auto seg = topsets.find(s);
        if (seg != topsets.end() &&
            seg->second[measure].count(event.keyword)) {
          row.latency = s - event.onset;
          break;
        }
      }
      for (SegmentId s = event.onset; s <= event.end_segment(); ++s) {
        row.peak = std::max(row.peak, table.score(s, measure, event.keyword));
      }
      for (SegmentId s = event.end_segment(); s <= table.last; ++s) {
        if (table.score(s, measure, event.keyword) == 0.0) {
          row.segments_to_zero = s - event.end_segment();
          break;
        }
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

}  // namespace

std::vector<DetectionRow> evaluate(std::span<const SegmentReport> reports,
                                   std::span<const GroundTruthEvent> events,
                                   int top_k) {
  if (reports.empty()) {
    throw std::invalid_argument("no reports to evaluate");
  }
  ScoreTable table;
  table.first = reports.front().segment;
  table.last = reports.back().segment;
  for (const SegmentReport& report : reports) {
    table.segments[report.segment] = report.vectors;
  }
  return evaluate_table(table, events, top_k);
}

std::vector<DetectionRow> evaluate(std::span<const TimeseriesRow> rows,
                                   std::span<const GroundTruthEvent> events,
                                   int top_k) {
  if (rows.empty()) {
    throw std::invalid_argument("no timeseries rows to evaluate");
  }
  ScoreTable table;
  table.first = rows.front().segment;
  table.last = rows.front().segment;
  for (const TimeseriesRow& row : rows) {
    table.first = std::min(table.first, row.segment);
    table.last = std::max(table.last, row.segment);
    CentralityVector& vector = table.segments[row.segment][row.measure];
    vector.segment = row.segment;
    vector.measure = row.measure;
    vector.scores[row.keyword] = row.score;
  }
  return evaluate_table(table, events, top_k);
}

void write_detections_csv(std::span<const DetectionRow> rows,
                          std::ostream& out) {
  out << "event_keyword,measure,latency,peak,segments_to_zero\n";
  for (const DetectionRow& row : rows) {
    out << row.keyword << ',' << measure_name(row.measure) << ',';
    if (row.latency.has_value()) {
      out << *row.latency;
    } else {
      out << "missed";
    }
    out << ',' << format_sig(row.peak, 12) << ',';
    if (row.segments_to_zero.has_value()) {
      out << *row.segments_to_zero;
    } else {
      out << "never";
    }
    out << '\n';
  }
}

}  // namespace trendstream
