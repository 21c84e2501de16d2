#include "trendstream/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "trendstream/report_io.hpp"

namespace trendstream {

int PipelineConfig::resolved_decay_window() const {
  return decay_window == 0 ? std::max(history_window, 5) : decay_window;
}

void PipelineConfig::validate() const {
  if (segment_width <= 0) {
    throw std::invalid_argument("segment width must be positive");
  }
  if (history_window < 2) {
    throw std::invalid_argument("history window (P) must be >= 2");
  }
  if (decay_window < 0 || resolved_decay_window() < 1) {
    throw std::invalid_argument("decay window (K) must be >= 1");
  }
  if (top_k < 1) {
    throw std::invalid_argument("top-k must be >= 1");
  }
  if (eigen.tolerance <= 0.0) {
    throw std::invalid_argument("eigensolver tolerance must be positive");
  }
  if (eigen.max_iterations < 1) {
    throw std::invalid_argument("eigensolver iteration cap must be >= 1");
  }
  if (reorder_window < 0) {
    throw std::invalid_argument("reorder window must be >= 0");
  }
  if (snapshot_every < 0) {
    throw std::invalid_argument("snapshot interval must be >= 0");
  }
  if (normalization.english_threshold > 1.0) {
    throw std::invalid_argument("english filter threshold must be <= 1");
  }
  for (Measure m : active_measures) {
    (void)measure_name(m);
  }
}

RunState RunState::fresh(const PipelineConfig& config, std::int64_t origin) {
  const int decay = config.resolved_decay_window();
  const int freq_window = std::max(decay, config.history_window);
  return RunState{SemanticGraph(decay, freq_window),
                  HistoryBuffer(config.history_window),
                  HistoryBuffer(config.history_window),
                  HistoryBuffer(config.history_window),
                  origin,
                  config.segment_width};
}

HistoryBuffer& RunState::history_for(Measure base) {
  switch (base) {
    case Measure::kFrequency:
      return frequency_history;
    case Measure::kDegree:
      return degree_history;
    case Measure::kEigenvector:
      return eigenvector_history;
    default:
      throw std::invalid_argument("no history for dynamic measures");
  }
}

const HistoryBuffer& RunState::history_for(Measure base) const {
  return const_cast<RunState*>(this)->history_for(base);
}

namespace {

double raw_value(Measure measure, const std::string& keyword,
                 const RunState& state, const SegmentReport& report) {
  switch (measure) {
    case Measure::kFrequency:
      return static_cast<double>(state.graph.segment_frequency(keyword));
    case Measure::kDegree:
      return static_cast<double>(state.graph.weighted_degree(keyword));
    case Measure::kEigenvector:
      return report.vectors.at(Measure::kEigenvector).at(keyword);
    default: {
      const Measure base = base_of(measure);
      const std::vector<double> series =
          state.history_for(base).series(keyword);
      return slope(series) * report.vectors.at(base).at(keyword);
    }
  }
}

}  // namespace

SegmentReport process_segment(RunState& state, SegmentId segment,
                              const std::vector<SegmentDocument>& documents,
                              const PipelineConfig& config) {
  std::vector<Document> docs;
  docs.reserve(documents.size());
  for (const SegmentDocument& doc : documents) {
    docs.push_back(Document{doc.id, segment, doc.tokens});
  }
  state.graph.advance_segment(segment, docs);

  SegmentReport report;
  report.segment = segment;
  report.summary_measure = config.summary_measure;

  CentralityVector freq = frequency_centrality(state.graph);
  CentralityVector deg = degree_centrality(state.graph);
  EigenResult eig = power_iteration_centrality(state.graph, config.eigen);
  report.eigen_converged = eig.converged;

  state.frequency_history.append(freq);
  state.degree_history.append(deg);
  state.eigenvector_history.append(eig.vector);

  report.vectors[Measure::kDynamicFrequency] = dynamic_centrality(
      Measure::kFrequency, state.frequency_history, freq);
  report.vectors[Measure::kDynamicDegree] =
      dynamic_centrality(Measure::kDegree, state.degree_history, deg);
  report.vectors[Measure::kDynamicEigenvector] = dynamic_centrality(
      Measure::kEigenvector, state.eigenvector_history, eig.vector);
  report.vectors[Measure::kFrequency] = std::move(freq);
  report.vectors[Measure::kDegree] = std::move(deg);
  report.vectors[Measure::kEigenvector] = std::move(eig.vector);

  for (Measure m : config.active_measures) {
    report.rankings[m] = rank_top_k(report.vectors.at(m), config.top_k);
    std::map<std::string, double>& raw = report.raw[m];
    for (const auto& [kw, score] : report.rankings[m]) {
      raw[kw] = raw_value(m, kw, state, report);
    }
  }

  const RankedKeywords* summary_ranked = nullptr;
  RankedKeywords local;
  auto it = report.rankings.find(config.summary_measure);
  if (it != report.rankings.end()) {
    summary_ranked = &it->second;
  } else {
    local = rank_top_k(report.vectors.at(config.summary_measure), config.top_k);
    summary_ranked = &local;
  }
  report.summary =
      summarize_segment(*summary_ranked, documents, config.cover_rule);
  return report;
}

RunResult run(const PipelineConfig& config, std::istream& input,
              const RunSinks& sinks, std::optional<RunState> resume) {
  config.validate();
  const int decay = config.resolved_decay_window();

  RunResult result;
  std::optional<RunState> state = std::move(resume);
  SegmentId resume_boundary = -1;
  if (state.has_value()) {
    if (state->segment_width != config.segment_width ||
        state->graph.decay_window() != decay ||
        state->graph.freq_window() !=
            std::max(decay, config.history_window) ||
        state->frequency_history.window() != config.history_window) {
      throw std::invalid_argument(
          "snapshot parameters do not match the pipeline configuration");
    }
    if (state->graph.started()) {
      resume_boundary = state->graph.current_segment();
    }
  }

  auto warn = [&](const std::string& message) {
    if (sinks.warn) {
      sinks.warn(message);
    }
  };

  if (sinks.timeseries != nullptr) {
    write_timeseries_header(*sinks.timeseries);
  }

  std::map<SegmentId, std::vector<SegmentDocument>> pending;
  SegmentId max_seen = -1;
  SegmentId next = resume_boundary + 1;
  SegmentCounters accum;

  auto emit = [&](SegmentId segment, std::vector<SegmentDocument>&& docs) {
    SegmentReport report = process_segment(*state, segment, docs, config);
    report.counters.ingested = static_cast<std::int64_t>(docs.size());
    report.counters.dropped = accum.dropped;
    report.counters.malformed = accum.malformed;
    accum = SegmentCounters{};
    result.totals.ingested += report.counters.ingested;
    if (!report.eigen_converged) {
      ++result.totals.eigen_nonconverged;
      warn("segment " + std::to_string(segment) +
           ": eigenvector solve did not converge; using the last iterate");
    }
    if (sinks.reports != nullptr) {
      *sinks.reports << report_to_json_line(report, config.active_measures)
                     << '\n';
    }
    if (sinks.summaries != nullptr) {
      *sinks.summaries << summary_to_json_line(report) << '\n';
    }
    if (sinks.timeseries != nullptr) {
      append_timeseries_rows(*sinks.timeseries, report,
                             config.active_measures);
    }
    if (sinks.snapshot && config.snapshot_every > 0 &&
        (segment + 1) % config.snapshot_every == 0) {
      sinks.snapshot(*state, segment);
    }
    result.reports.push_back(std::move(report));
  };

  auto flush_through = [&](SegmentId through) {
    while (next <= through) {
      std::vector<SegmentDocument> docs;
      auto it = pending.find(next);
      if (it != pending.end()) {
        docs = std::move(it->second);
        pending.erase(it);
      }
      emit(next, std::move(docs));
      ++next;
    }
  };

  auto on_record = [&](RawDocument&& raw) {
    if (config.normalization.english_threshold >= 0.0 &&
        ascii_letter_fraction(raw.text) <
            config.normalization.english_threshold) {
      ++result.totals.dropped_non_english;
      ++accum.dropped;
      return;
    }
    std::vector<std::string> tokens = normalize(raw.text, config.normalization);
    if (tokens.empty()) {
      ++result.totals.dropped_empty;
      ++accum.dropped;
      return;
    }
    if (!state.has_value()) {
      state = RunState::fresh(
          config, align_origin(raw.timestamp, config.segment_width));
    }
    if (raw.timestamp < state->origin) {
      if (resume_boundary >= 0) {
        ++result.totals.replayed;
      } else {
        ++result.totals.dropped_pre_origin;
        ++accum.dropped;
        warn("document " + raw.id + " precedes the stream origin; dropped");
      }
      return;
    }
    const SegmentId segment =
        assign_segment(raw.timestamp, state->origin, state->segment_width);
    if (segment <= resume_boundary) {
      ++result.totals.replayed;
      return;
    }
    if (segment < next) {
      ++result.totals.dropped_late;
      ++accum.dropped;
      warn("document " + raw.id + " arrived after segment " +
           std::to_string(segment) + " was closed; dropped");
      return;
    }
    pending[segment].push_back(
        SegmentDocument{std::move(raw.id), std::move(raw.text),
                        std::move(tokens)});
    max_seen = std::max(max_seen, segment);
    flush_through(max_seen - config.reorder_window - 1);
  };

  result.totals.read = read_stream(
      input, on_record, [&](std::int64_t line, const std::string& message) {
        ++accum.malformed;
        warn("line " + std::to_string(line) + ": " + message);
      });

  if (state.has_value()) {
    flush_through(max_seen);
    if (sinks.snapshot) {
      sinks.snapshot(*state, state->graph.started()
                                 ? state->graph.current_segment()
                                 : resume_boundary);
    }
  }
  result.state = std::move(state);
  return result;
}

namespace {

std::string hex_double(double value) {
  char buffer[48];
  std::snprintf(buffer, sizeof(buffer), "%a", value);
  return buffer;
}

constexpr std::array<Measure, 3> kBaseMeasures = {
    Measure::kFrequency, Measure::kDegree, Measure::kEigenvector};

}  // namespace

void save_run_state(const RunState& state, std::ostream& out) {
  out << SemanticGraph::kMagic << '\n';
  state.graph.write_body(out);
  out << "pipeline " << state.frequency_history.window() << ' ' << state.origin
      << ' ' << state.segment_width << '\n';
  for (Measure base : kBaseMeasures) {
    for (const auto& [kw, values] : state.history_for(base).entries()) {
      out << "hist " << measure_name(base) << ' ' << kw;
      for (double v : values) {
        out << ' ' << hex_double(v);
      }
      out << '\n';
    }
  }
  out << "end\n";
}

RunState load_run_state(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != SemanticGraph::kMagic) {
    throw SnapshotError("not a trendgraph snapshot (bad magic header)");
  }
  std::optional<SemanticGraph> graph;
  std::optional<int> history_window;
  std::int64_t origin = 0;
  std::int64_t width = 3600;
  struct HistLine {
    Measure measure;
    std::string keyword;
    std::vector<double> values;
  };
  std::vector<HistLine> hist_lines;
  bool terminated = false;
  while (std::getline(in, line)) {
    if (line == "end") {
      terminated = true;
      break;
    }
    if (line.empty()) {
      continue;
    }
    if (SemanticGraph::consume_body_line(line, graph)) {
      continue;
    }
    std::istringstream fields(line);
    std::string tag;
    fields >> tag;
    if (tag == "pipeline") {
      int window = 0;
      if (!(fields >> window >> origin >> width) || window < 2 || width <= 0) {
        throw SnapshotError("malformed pipeline line");
      }
      history_window = window;
    } else if (tag == "hist") {
      std::string name;
      std::string keyword;
      if (!(fields >> name >> keyword)) {
        throw SnapshotError("malformed hist line");
      }
      auto measure = parse_measure(name);
      if (!measure.has_value() || is_dynamic(*measure)) {
        throw SnapshotError("hist line names an unknown base measure");
      }
      HistLine hist{*measure, keyword, {}};
      std::string value;
      while (fields >> value) {
        hist.values.push_back(std::strtod(value.c_str(), nullptr));
      }
      hist_lines.push_back(std::move(hist));
    } else {
      throw SnapshotError("unknown snapshot record: " + tag);
    }
  }
  if (!terminated) {
    throw SnapshotError("snapshot truncated (missing end marker)");
  }
  if (!graph.has_value()) {
    throw SnapshotError("snapshot has no graph header");
  }
  if (!history_window.has_value()) {
    throw SnapshotError("snapshot has no pipeline line");
  }
  RunState state{std::move(*graph),
                 HistoryBuffer(*history_window),
                 HistoryBuffer(*history_window),
                 HistoryBuffer(*history_window),
                 origin,
                 width};
  for (HistLine& hist : hist_lines) {
    if (static_cast<int>(hist.values.size()) != *history_window) {
      throw SnapshotError("hist line has the wrong number of values");
    }
    state.history_for(hist.measure).seed(hist.keyword, std::move(hist.values));
  }
  return state;
}

}  // namespace trendstream
