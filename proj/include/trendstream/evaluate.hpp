#pragma once

#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "trendstream/pipeline.hpp"
#include "trendstream/report_io.hpp"
#include "trendstream/synth.hpp"

namespace trendstream {

struct GroundTruthEvent {
  std::string keyword;
  SegmentId onset = 0;
  int duration = 1;
  double intensity = 0.0;

  /// Last segment in which the event injects documents.
  SegmentId end_segment() const { return onset + duration - 1; }
};

GroundTruthEvent to_ground_truth(const PlantedEvent& event);

struct DetectionRow {
  std::string keyword;
  Measure measure = Measure::kFrequency;
  /// Segments from onset until the keyword first enters the top-k ranking;
  /// absent when it never does ("missed").
  std::optional<SegmentId> latency;
  /// Highest normalized score over the event's active segments.
  double peak = 0.0;
  /// Smallest delta >= 0 with a score of exactly 0 at end_segment + delta;
  /// absent when the score stays positive through the report range.
  std::optional<SegmentId> segments_to_zero;
};

/// Scores detector output against planted ground truth. Detection is
/// membership in the top-k ranked list. Throws std::invalid_argument when an
/// event lies outside the report range.
std::vector<DetectionRow> evaluate(std::span<const SegmentReport> reports,
                                   std::span<const GroundTruthEvent> events,
                                   int top_k);

/// Same, reconstructed from timeseries rows (the CLI path).
std::vector<DetectionRow> evaluate(std::span<const TimeseriesRow> rows,
                                   std::span<const GroundTruthEvent> events,
                                   int top_k);

/// detections.csv: event_keyword,measure,latency,peak,segments_to_zero with
/// "missed" / "never" for absent values.
void write_detections_csv(std::span<const DetectionRow> rows,
                          std::ostream& out);

}  // namespace trendstream
