#pragma once

#include <cstdint>
#include <functional>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "trendstream/centrality.hpp"
#include "trendstream/graph.hpp"
#include "trendstream/normalize.hpp"
#include "trendstream/stream.hpp"
#include "trendstream/summarize.hpp"

namespace trendstream {

struct PipelineConfig {
  std::int64_t segment_width = 3600;  // seconds
  int history_window = 5;             // P, regression window
  int decay_window = 0;               // K; 0 resolves to max(P, 5)
  int top_k = 20;
  std::vector<Measure> active_measures{kAllMeasures.begin(),
                                       kAllMeasures.end()};
  Measure summary_measure = Measure::kDynamicEigenvector;
  CoverRule cover_rule = CoverRule::kMaxNewKeywords;
  NormalizationConfig normalization = NormalizationConfig::defaults();
  EigenSolveParams eigen;
  int reorder_window = 0;   // late arrivals tolerated within this many segments
  int snapshot_every = 0;   // 0: snapshot only at end of run

  int resolved_decay_window() const;
  void validate() const;  // throws std::invalid_argument
};

struct SegmentCounters {
  std::int64_t ingested = 0;
  std::int64_t dropped = 0;
  std::int64_t malformed = 0;
};

struct SegmentReport {
  SegmentId segment = 0;
  SegmentCounters counters;
  bool eigen_converged = true;
  // All six measures are always computed (histories must stay gapless);
  // `active_measures` only filters what reaches the sinks.
  std::map<Measure, CentralityVector> vectors;
  std::map<Measure, RankedKeywords> rankings;          // active measures
  std::map<Measure, std::map<std::string, double>> raw;  // ranked keywords
  Measure summary_measure = Measure::kDynamicEigenvector;
  Summary summary;
};

/// Everything that survives a segment boundary; also the snapshot payload.
struct RunState {
  SemanticGraph graph;
  HistoryBuffer frequency_history;
  HistoryBuffer degree_history;
  HistoryBuffer eigenvector_history;
  std::int64_t origin = 0;
  std::int64_t segment_width = 3600;

  static RunState fresh(const PipelineConfig& config, std::int64_t origin);
  HistoryBuffer& history_for(Measure base);
  const HistoryBuffer& history_for(Measure base) const;

  bool operator==(const RunState&) const = default;
};

struct RunTotals {
  ReadCounters read;
  std::int64_t ingested = 0;
  std::int64_t dropped_empty = 0;        // no tokens after normalization
  std::int64_t dropped_non_english = 0;  // failed the ASCII-ratio heuristic
  std::int64_t dropped_late = 0;         // outside the reorder window
  std::int64_t dropped_pre_origin = 0;   // timestamp before the stream origin
  std::int64_t replayed = 0;             // resume: already-processed segments
  std::int64_t eigen_nonconverged = 0;   // segments with a non-converged solve

  std::int64_t dropped() const {
    return dropped_empty + dropped_non_english + dropped_late +
           dropped_pre_origin;
  }
};

struct RunSinks {
  std::ostream* reports = nullptr;     // one SegmentReport JSON object per line
  std::ostream* summaries = nullptr;   // one summary JSON object per line
  std::ostream* timeseries = nullptr;  // CSV: segment,keyword,measure,score
  std::function<void(const RunState&, SegmentId)> snapshot;
  std::function<void(const std::string&)> warn;
};

struct RunResult {
  std::vector<SegmentReport> reports;
  RunTotals totals;
  std::optional<RunState> state;  // absent when the input had no documents
};

/// Runs the per-segment procedure over a document stream: ingest, graph
/// decay + update, the six centralities, history update, ranking, set-cover
/// summary, report emission. Gap segments are processed as empty so decay
/// and histories stay aligned with the timeline.
RunResult run(const PipelineConfig& config, std::istream& input,
              const RunSinks& sinks = {},
              std::optional<RunState> resume = std::nullopt);

/// One turn of the crank: advances the graph to `segment`, recomputes every
/// measure, appends histories and builds the report. Documents must all
/// belong to `segment`.
SegmentReport process_segment(RunState& state, SegmentId segment,
                              const std::vector<SegmentDocument>& documents,
                              const PipelineConfig& config);

/// Combined graph + history snapshot (the pipeline's resume format, superset
/// of SemanticGraph::save). Round-trips bit-exactly.
void save_run_state(const RunState& state, std::ostream& out);
RunState load_run_state(std::istream& in);  // throws SnapshotError

}  // namespace trendstream
