#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "trendstream/evaluate.hpp"
#include "trendstream/pipeline.hpp"
#include "trendstream/report_io.hpp"
#include "trendstream/synth.hpp"

namespace ts = trendstream;
namespace fs = std::filesystem;

namespace {

struct RunFlags {
  std::string input;
  std::string out_dir;
  std::int64_t segment_width = 3600;
  int window_p = 5;
  int decay_k = 0;  // 0: max(P, 5)
  int top_k = 20;
  std::string measures;
  std::string summary_measure = "dynamic-eigenvector";
  std::string cover_rule = "default";
  std::string stopwords_path;
  double english_filter = -1.0;
  int reorder_buffer = 0;
  int snapshot_every = 0;
  std::string resume_path;
};

std::vector<ts::Measure> parse_measures(const std::string& csv) {
  if (csv.empty()) {
    return {ts::kAllMeasures.begin(), ts::kAllMeasures.end()};
  }
  std::vector<ts::Measure> measures;
  std::istringstream in(csv);
  std::string name;
  while (std::getline(in, name, ',')) {
    auto measure = ts::parse_measure(name);
    if (!measure.has_value()) {
      throw CLI::ValidationError("--measures", "unknown measure: " + name);
    }
    measures.push_back(*measure);
  }
  return measures;
}

ts::PipelineConfig build_config(const RunFlags& flags) {
  ts::PipelineConfig config;
  config.segment_width = flags.segment_width;
  config.history_window = flags.window_p;
  config.decay_window = flags.decay_k;
  config.top_k = flags.top_k;
  config.active_measures = parse_measures(flags.measures);
  auto summary = ts::parse_measure(flags.summary_measure);
  if (!summary.has_value()) {
    throw CLI::ValidationError("--summary-measure",
                               "unknown measure: " + flags.summary_measure);
  }
  config.summary_measure = *summary;
  if (flags.cover_rule == "default") {
    config.cover_rule = ts::CoverRule::kMaxNewKeywords;
  } else if (flags.cover_rule == "literal") {
    config.cover_rule = ts::CoverRule::kLiteralRatio;
  } else {
    throw CLI::ValidationError("--cover-rule", "must be default or literal");
  }
  if (!flags.stopwords_path.empty()) {
    config.normalization.stopwords = ts::load_stopwords(flags.stopwords_path);
  }
  config.normalization.english_threshold = flags.english_filter;
  config.reorder_window = flags.reorder_buffer;
  config.snapshot_every = flags.snapshot_every;
  return config;
}

int cmd_run(const RunFlags& flags) {
  ts::PipelineConfig config = build_config(flags);
  config.validate();

  std::ifstream input(flags.input);
  if (!input) {
    std::cerr << "error: cannot open input file: " << flags.input << "\n";
    return 1;
  }
  std::error_code ec;
  fs::create_directories(flags.out_dir, ec);
  const fs::path out_dir(flags.out_dir);
  std::ofstream reports(out_dir / "reports.jsonl");
  std::ofstream summaries(out_dir / "summaries.jsonl");
  std::ofstream timeseries(out_dir / "timeseries.csv");
  if (!reports || !summaries || !timeseries) {
    std::cerr << "error: cannot write into output directory: "
              << flags.out_dir << "\n";
    return 1;
  }

  std::optional<ts::RunState> resume;
  if (!flags.resume_path.empty()) {
    std::ifstream snapshot(flags.resume_path);
    if (!snapshot) {
      std::cerr << "error: cannot open snapshot: " << flags.resume_path
                << "\n";
      return 1;
    }
    resume = ts::load_run_state(snapshot);
  }

  ts::RunSinks sinks;
  sinks.reports = &reports;
  sinks.summaries = &summaries;
  sinks.timeseries = &timeseries;
  sinks.warn = [](const std::string& message) {
    std::cerr << "warning: " << message << "\n";
  };
  const fs::path snapshot_path = out_dir / "graph.snapshot";
  sinks.snapshot = [&](const ts::RunState& state, ts::SegmentId) {
    std::ofstream out(snapshot_path);
    ts::save_run_state(state, out);
  };

  ts::RunResult result = ts::run(config, input, sinks, std::move(resume));
  std::cerr << "processed " << result.reports.size() << " segment(s): "
            << result.totals.ingested << " ingested, "
            << result.totals.dropped() << " dropped, "
            << result.totals.read.malformed << " malformed";
  if (result.totals.replayed > 0) {
    std::cerr << ", " << result.totals.replayed << " replayed";
  }
  std::cerr << "\n";
  return 0;
}

int cmd_timeseries(const std::string& reports_path, const std::string& keyword,
                   const std::string& measure_name_flag) {
  std::ifstream in(reports_path);
  if (!in) {
    std::cerr << "error: cannot open reports file: " << reports_path << "\n";
    return 1;
  }
  std::vector<ts::Measure> measures;
  if (measure_name_flag.empty()) {
    measures.assign(ts::kAllMeasures.begin(), ts::kAllMeasures.end());
  } else {
    auto measure = ts::parse_measure(measure_name_flag);
    if (!measure.has_value()) {
      std::cerr << "error: unknown measure: " << measure_name_flag << "\n";
      return 2;
    }
    measures.push_back(*measure);
  }

  const std::vector<ts::ParsedReport> reports = ts::read_reports_jsonl(in);
  ts::write_timeseries_header(std::cout);
  for (const ts::ParsedReport& report : reports) {
    for (ts::Measure measure : measures) {
      auto ranked = report.top.find(measure);
      if (ranked == report.top.end()) {
        continue;
      }
      if (keyword.empty()) {
        for (const auto& [kw, score] : ranked->second) {
          std::cout << ts::timeseries_row_to_line(
                           {report.segment, kw, measure, score})
                    << "\n";
        }
      } else {
        double score = 0.0;  // zero-filled when outside the top-k
        for (const auto& [kw, value] : ranked->second) {
          if (kw == keyword) {
            score = value;
            break;
          }
        }
        std::cout << ts::timeseries_row_to_line(
                         {report.segment, keyword, measure, score})
                  << "\n";
      }
    }
  }
  return 0;
}

// A keyword that never appears in any ranking yields no rows at all.
int cmd_timeseries_entry(const std::string& reports_path,
                         const std::string& keyword,
                         const std::string& measure_flag) {
  if (keyword.empty()) {
    return cmd_timeseries(reports_path, keyword, measure_flag);
  }
  std::ifstream probe(reports_path);
  if (!probe) {
    std::cerr << "error: cannot open reports file: " << reports_path << "\n";
    return 1;
  }
  bool seen = false;
  for (const ts::ParsedReport& report : ts::read_reports_jsonl(probe)) {
    for (const auto& [measure, ranked] : report.top) {
      for (const auto& [kw, score] : ranked) {
        if (kw == keyword) {
          seen = true;
          break;
        }
      }
    }
    if (seen) {
      break;
    }
  }
  if (!seen) {
    ts::write_timeseries_header(std::cout);
    return 0;
  }
  return cmd_timeseries(reports_path, keyword, measure_flag);
}

int cmd_rank(const std::string& reports_path, std::int64_t segment,
             const std::string& measure_flag, int limit) {
  std::ifstream in(reports_path);
  if (!in) {
    std::cerr << "error: cannot open reports file: " << reports_path << "\n";
    return 1;
  }
  std::vector<ts::Measure> measures;
  if (measure_flag.empty()) {
    measures.assign(ts::kAllMeasures.begin(), ts::kAllMeasures.end());
  } else {
    auto measure = ts::parse_measure(measure_flag);
    if (!measure.has_value()) {
      std::cerr << "error: unknown measure: " << measure_flag << "\n";
      return 2;
    }
    measures.push_back(*measure);
  }
  std::cout << "segment,measure,rank,keyword,score\n";
  for (const ts::ParsedReport& report : ts::read_reports_jsonl(in)) {
    if (segment >= 0 && report.segment != segment) {
      continue;
    }
    for (ts::Measure measure : measures) {
      auto ranked = report.top.find(measure);
      if (ranked == report.top.end()) {
        continue;
      }
      int position = 0;
      for (const auto& [kw, score] : ranked->second) {
        ++position;
        if (limit > 0 && position > limit) {
          break;
        }
        std::cout << report.segment << ',' << ts::measure_name(measure) << ','
                  << position << ',' << kw << ',' << ts::format_sig(score, 12)
                  << "\n";
      }
    }
  }
  return 0;
}

int cmd_summarize(const std::string& summaries_path, std::int64_t segment) {
  std::ifstream in(summaries_path);
  if (!in) {
    std::cerr << "error: cannot open summaries file: " << summaries_path
              << "\n";
    return 1;
  }
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) {
      continue;
    }
    nlohmann::json obj = nlohmann::json::parse(line);
    const std::int64_t seg = obj.at("segment").get<std::int64_t>();
    if (segment >= 0 && seg != segment) {
      continue;
    }
    std::cout << "== segment " << seg << " ("
              << obj.at("measure").get<std::string>() << ") ==\n";
    std::cout << "keywords:";
    for (const auto& kw : obj.at("keywords")) {
      std::cout << ' ' << kw.get<std::string>();
    }
    std::cout << "\n";
    for (const auto& pick : obj.at("picks")) {
      std::cout << "  [" << pick.at("doc_id").get<std::string>()
                << " w=" << pick.at("weight").get<std::int64_t>() << "] "
                << pick.at("text").get<std::string>() << "\n";
    }
    const auto& uncovered = obj.at("uncovered");
    if (!uncovered.empty()) {
      std::cout << "uncovered:";
      for (const auto& kw : uncovered) {
        std::cout << ' ' << kw.get<std::string>();
      }
      std::cout << "\n";
    }
  }
  return 0;
}

int cmd_synth(const ts::SynthConfig& config, const std::string& out_path) {
  if (out_path.empty() || out_path == "-") {
    ts::generate_stream(config, std::cout);
    return 0;
  }
  std::ofstream out(out_path);
  if (!out) {
    std::cerr << "error: cannot write output file: " << out_path << "\n";
    return 1;
  }
  ts::generate_stream(config, out);
  return 0;
}

int cmd_eval(const std::string& timeseries_path,
             const std::vector<std::string>& event_specs, int top_k,
             const std::string& out_path) {
  std::ifstream in(timeseries_path);
  if (!in) {
    std::cerr << "error: cannot open timeseries file: " << timeseries_path
              << "\n";
    return 1;
  }
  std::vector<ts::GroundTruthEvent> events;
  for (const std::string& spec : event_specs) {
    events.push_back(ts::to_ground_truth(ts::parse_event_spec(spec)));
  }
  const std::vector<ts::TimeseriesRow> rows = ts::read_timeseries_csv(in);
  const std::vector<ts::DetectionRow> detections =
      ts::evaluate(rows, events, top_k);
  if (out_path.empty() || out_path == "-") {
    ts::write_detections_csv(detections, std::cout);
    return 0;
  }
  std::ofstream out(out_path);
  if (!out) {
    std::cerr << "error: cannot write output file: " << out_path << "\n";
    return 1;
  }
  ts::write_detections_csv(detections, out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Emergent-keyword detection over a document stream"};
  app.require_subcommand(1);

  RunFlags run_flags;
  CLI::App* run = app.add_subcommand(
      "run", "Process a document stream and write per-segment reports");
  run->add_option("--input", run_flags.input, "Line-delimited input file")
      ->required();
  run->add_option("--out", run_flags.out_dir, "Output directory")->required();
  run->add_option("--segment-width", run_flags.segment_width,
                  "Segment width in seconds");
  run->add_option("--window-p", run_flags.window_p,
                  "Regression window P (segments)");
  run->add_option("--decay-k", run_flags.decay_k,
                  "Decay window K (segments); 0 means max(P, 5)");
  run->add_option("--top-k", run_flags.top_k, "Ranked keywords per measure");
  run->add_option("--measures", run_flags.measures,
                  "Comma-separated measures to report (default: all six)");
  run->add_option("--summary-measure", run_flags.summary_measure,
                  "Measure whose top keywords the summary covers");
  run->add_option("--cover-rule", run_flags.cover_rule,
                  "Greedy cover rule: default or literal");
  run->add_option("--stopwords", run_flags.stopwords_path,
                  "Stop-word file overriding the built-in list");
  run->add_option("--english-filter", run_flags.english_filter,
                  "Drop documents whose ASCII-letter fraction is below this");
  run->add_option("--reorder-buffer", run_flags.reorder_buffer,
                  "Accept documents up to this many segments late");
  run->add_option("--snapshot-every", run_flags.snapshot_every,
                  "Also write the snapshot every N segments");
  run->add_option("--resume", run_flags.resume_path,
                  "Resume from a graph.snapshot file");

  std::string ts_reports;
  std::string ts_keyword;
  std::string ts_measure;
  CLI::App* timeseries = app.add_subcommand(
      "timeseries", "Export per-keyword score series as CSV on stdout");
  timeseries->add_option("--reports", ts_reports, "reports.jsonl from a run")
      ->required();
  timeseries->add_option("--keyword", ts_keyword, "Keyword filter");
  timeseries->add_option("--measure", ts_measure, "Measure filter");

  std::string rank_reports;
  std::int64_t rank_segment = -1;
  std::string rank_measure;
  int rank_limit = 0;
  CLI::App* rank =
      app.add_subcommand("rank", "Print ranked keywords from reports");
  rank->add_option("--reports", rank_reports, "reports.jsonl from a run")
      ->required();
  rank->add_option("--segment", rank_segment, "Only this segment");
  rank->add_option("--measure", rank_measure, "Measure filter");
  rank->add_option("--top", rank_limit, "At most this many rows per measure");

  std::string sum_path;
  std::int64_t sum_segment = -1;
  CLI::App* summarize =
      app.add_subcommand("summarize", "Pretty-print segment summaries");
  summarize
      ->add_option("--summaries", sum_path, "summaries.jsonl from a run")
      ->required();
  summarize->add_option("--segment", sum_segment, "Only this segment");

  ts::SynthConfig synth_config;
  std::string synth_out;
  std::vector<std::string> synth_events;
  CLI::App* synth = app.add_subcommand(
      "synth", "Generate a synthetic stream with planted bursts");
  synth->add_option("--out", synth_out, "Output file ('-' for stdout)");
  synth->add_option("--vocab", synth_config.vocab, "Vocabulary size");
  synth->add_option("--docs-per-segment", synth_config.docs_per_segment,
                    "Documents per segment");
  synth->add_option("--segments", synth_config.segments, "Segment count");
  synth->add_option("--zipf", synth_config.zipf_exponent, "Zipf exponent");
  synth->add_option("--seed", synth_config.seed, "RNG seed");
  synth->add_option("--min-tokens", synth_config.min_tokens,
                    "Minimum background tokens per document");
  synth->add_option("--max-tokens", synth_config.max_tokens,
                    "Maximum background tokens per document");
  synth->add_option("--origin", synth_config.origin,
                    "Timestamp of segment 0 (epoch seconds)");
  synth->add_option("--segment-width", synth_config.segment_width,
                    "Segment width in seconds");
  synth->add_option("--event", synth_events,
                    "Planted event keyword@onset:duration:intensity");

  std::string eval_timeseries;
  std::vector<std::string> eval_events;
  int eval_top_k = 20;
  std::string eval_out;
  CLI::App* eval = app.add_subcommand(
      "eval", "Score detector output against planted ground truth");
  eval->add_option("--timeseries", eval_timeseries,
                   "timeseries.csv from a run")
      ->required();
  eval->add_option("--event", eval_events,
                   "Ground-truth event keyword@onset:duration:intensity")
      ->required();
  eval->add_option("--top-k", eval_top_k, "Detection list size");
  eval->add_option("--out", eval_out, "detections.csv path ('-' for stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (run->parsed()) {
      return cmd_run(run_flags);
    }
    if (timeseries->parsed()) {
      return cmd_timeseries_entry(ts_reports, ts_keyword, ts_measure);
    }
    if (rank->parsed()) {
      return cmd_rank(rank_reports, rank_segment, rank_measure, rank_limit);
    }
    if (summarize->parsed()) {
      return cmd_summarize(sum_path, sum_segment);
    }
    if (synth->parsed()) {
      for (const std::string& spec : synth_events) {
        synth_config.events.push_back(ts::parse_event_spec(spec));
      }
      synth_config.validate();
      return cmd_synth(synth_config, synth_out);
    }
    if (eval->parsed()) {
      return cmd_eval(eval_timeseries, eval_events, eval_top_k, eval_out);
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
