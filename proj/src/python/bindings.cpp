#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include "trendstream/evaluate.hpp"
#include "trendstream/pipeline.hpp"
#include "trendstream/report_io.hpp"
#include "trendstream/synth.hpp"

namespace py = pybind11;
namespace ts = trendstream;

namespace {

ts::NormalizationConfig make_normalization(
    const std::optional<std::vector<std::string>>& stopwords, bool remove_urls,
    bool remove_numbers, bool lemmatize, double english_threshold) {
  ts::NormalizationConfig config = ts::NormalizationConfig::defaults();
  if (stopwords.has_value()) {
    config.stopwords.clear();
    config.stopwords.insert(stopwords->begin(), stopwords->end());
  }
  config.remove_urls = remove_urls;
  config.remove_numbers = remove_numbers;
  if (!lemmatize) {
    config.suffix_rules.clear();
  }
  config.english_threshold = english_threshold;
  return config;
}

ts::CentralityVector vector_from_dict(const std::map<std::string, double>& scores) {
  ts::CentralityVector vector;
  vector.scores = std::map<std::string, double>(scores.begin(), scores.end());
  return vector;
}

ts::Measure measure_from_name(const std::string& name) {
  auto measure = ts::parse_measure(name);
  if (!measure.has_value()) {
    throw py::value_error("unknown measure: " + name);
  }
  return *measure;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Emergent-keyword detection over dynamic keyword co-occurrence "
            "graphs: normalization, decaying graph, centralities, slopes, "
            "set-cover summaries and the full file pipeline.";

  m.def(
      "normalize",
      [](const std::string& text,
         const std::optional<std::vector<std::string>>& stopwords,
         bool remove_urls, bool remove_numbers, bool lemmatize) {
        return ts::normalize(text,
                             make_normalization(stopwords, remove_urls,
                                                remove_numbers, lemmatize,
                                                -1.0));
      },
      py::arg("text"), py::arg("stopwords") = std::nullopt,
      py::arg("remove_urls") = true, py::arg("remove_numbers") = true,
      py::arg("lemmatize") = true,
      "Normalize text into keyword tokens (lowercase, URL/character "
      "cleanup, suffix-rule lemmatization, stop-word removal).");

  m.def("lemmatize",
        [](const std::string& token) {
          return ts::lemmatize_token(token, ts::default_suffix_rules());
        },
        py::arg("token"));
  m.def("ascii_letter_fraction", &ts::ascii_letter_fraction, py::arg("text"));
  m.def("default_stopwords", [] {
    const auto& words = ts::default_stopwords();
    return std::vector<std::string>(words.begin(), words.end());
  });
  m.def("assign_segment", &ts::assign_segment, py::arg("timestamp"),
        py::arg("origin"), py::arg("width"));
  m.def("align_origin", &ts::align_origin, py::arg("timestamp"),
        py::arg("width"));

  m.def(
      "slope",
      [](const std::vector<double>& series) {
        return ts::slope(std::span<const double>(series));
      },
      py::arg("series"),
      "OLS slope of the series against indices 1..P (oldest first).");

  py::class_<ts::SemanticGraph>(m, "Graph",
                                "Keyword co-occurrence graph over a sliding "
                                "window of time segments.")
      .def(py::init<int, int>(), py::arg("decay_window"),
           py::arg("freq_window") = 0)
      .def(
          "advance",
          [](ts::SemanticGraph& graph, ts::SegmentId segment,
             const std::vector<std::vector<std::string>>& docs) {
            std::vector<ts::Document> converted;
            converted.reserve(docs.size());
            for (std::size_t i = 0; i < docs.size(); ++i) {
              converted.push_back(
                  ts::Document{"py" + std::to_string(i), segment, docs[i]});
            }
            graph.advance_segment(segment, converted);
          },
          py::arg("segment"), py::arg("documents"),
          "Advance to `segment` (gaps decay) and ingest the documents, "
          "each a list of tokens.")
      .def("degree", &ts::SemanticGraph::weighted_degree, py::arg("keyword"))
      .def("frequency", &ts::SemanticGraph::segment_frequency,
           py::arg("keyword"))
      .def("edge_weight", &ts::SemanticGraph::edge_weight, py::arg("a"),
           py::arg("b"))
      .def_property_readonly("node_count",
                             [](const ts::SemanticGraph& graph) {
                               return graph.nodes().size();
                             })
      .def_property_readonly("edge_count",
                             [](const ts::SemanticGraph& graph) {
                               return graph.edges().size();
                             })
      .def_property_readonly("segment",
                             [](const ts::SemanticGraph& graph)
                                 -> std::optional<ts::SegmentId> {
                               if (!graph.started()) {
                                 return std::nullopt;
                               }
                               return graph.current_segment();
                             })
      .def("save",
           [](const ts::SemanticGraph& graph, const std::string& path) {
             std::ofstream out(path);
             if (!out) {
               throw std::runtime_error("cannot write " + path);
             }
             graph.save(out);
           },
           py::arg("path"))
      .def_static("restore", [](const std::string& path) {
        std::ifstream in(path);
        if (!in) {
          throw std::runtime_error("cannot open " + path);
        }
        return ts::SemanticGraph::restore(in);
      }, py::arg("path"))
      .def("__eq__", [](const ts::SemanticGraph& a,
                        const ts::SemanticGraph& b) { return a == b; });

  m.def("frequency_centrality", [](const ts::SemanticGraph& graph) {
    return frequency_centrality(graph).scores;
  });
  m.def("degree_centrality", [](const ts::SemanticGraph& graph) {
    return degree_centrality(graph).scores;
  });
  m.def(
      "eigenvector_centrality",
      [](const ts::SemanticGraph& graph, double tolerance,
         int max_iterations) {
        return eigenvector_centrality(graph,
                                      ts::EigenSolveParams{tolerance,
                                                           max_iterations})
            .scores;
      },
      py::arg("graph"), py::arg("tolerance") = 1e-10,
      py::arg("max_iterations") = 1000,
      "Max-normalized Perron eigenvector scores (power iteration).");

  py::class_<ts::HistoryBuffer>(m, "History",
                                "Per-keyword rolling score history.")
      .def(py::init<int>(), py::arg("window"))
      .def("append",
           [](ts::HistoryBuffer& history,
              const std::map<std::string, double>& scores) {
             history.append(vector_from_dict(scores));
           },
           py::arg("scores"))
      .def("series", &ts::HistoryBuffer::series, py::arg("keyword"));

  m.def(
      "dynamic_scores",
      [](const ts::HistoryBuffer& history,
         const std::map<std::string, double>& current) {
        return dynamic_centrality(ts::Measure::kFrequency, history,
                                  vector_from_dict(current))
            .scores;
      },
      py::arg("history"), py::arg("current"),
      "slope(history) * current, clamped at zero and max-normalized. The "
      "history must already contain `current` as its newest entry.");

  m.def(
      "rank_top_k",
      [](const std::map<std::string, double>& scores, int top_k) {
        return rank_top_k(vector_from_dict(scores), top_k);
      },
      py::arg("scores"), py::arg("top_k"));

  m.def(
      "document_weight",
      [](const std::vector<std::string>& tokens,
         const std::vector<std::string>& targets) {
        return ts::document_weight(
            tokens, std::set<std::string>(targets.begin(), targets.end()));
      },
      py::arg("tokens"), py::arg("targets"));

  m.def(
      "greedy_cover",
      [](const std::vector<std::string>& targets,
         const std::vector<std::pair<std::string, std::vector<std::string>>>&
             documents,
         bool literal) {
        ts::CoverInstance instance;
        instance.targets = targets;
        const std::set<std::string> target_set(targets.begin(), targets.end());
        for (const auto& [id, tokens] : documents) {
          ts::CoverCandidate candidate;
          candidate.doc_id = id;
          bool relevant = false;
          for (const std::string& token : tokens) {
            ++candidate.tf[token];
            relevant = relevant || target_set.count(token) > 0;
          }
          if (relevant) {
            instance.candidates.push_back(std::move(candidate));
          }
        }
        ts::Summary summary = greedy_cover(
            instance, literal ? ts::CoverRule::kLiteralRatio
                              : ts::CoverRule::kMaxNewKeywords);
        py::list picks;
        for (const ts::SummaryPick& pick : summary.picks) {
          py::dict entry;
          entry["doc_id"] = pick.doc_id;
          entry["new_keywords"] = pick.new_keywords;
          entry["weight"] = pick.weight;
          picks.append(std::move(entry));
        }
        py::dict result;
        result["picks"] = std::move(picks);
        result["uncovered"] = summary.uncovered;
        return result;
      },
      py::arg("targets"), py::arg("documents"), py::arg("literal") = false,
      "Greedy weighted set cover over (doc_id, tokens) candidates.");

  m.def(
      "run_file",
      [](const std::string& input_path, const std::string& out_dir,
         std::int64_t segment_width, int window_p, int decay_k, int top_k,
         const std::string& summary_measure, bool literal_cover,
         double english_filter,
         const std::optional<std::vector<std::string>>& stopwords,
         int reorder_buffer) {
        ts::PipelineConfig config;
        config.segment_width = segment_width;
        config.history_window = window_p;
        config.decay_window = decay_k;
        config.top_k = top_k;
        config.summary_measure = measure_from_name(summary_measure);
        config.cover_rule = literal_cover ? ts::CoverRule::kLiteralRatio
                                          : ts::CoverRule::kMaxNewKeywords;
        config.normalization =
            make_normalization(stopwords, true, true, true, english_filter);
        config.reorder_window = reorder_buffer;
        config.validate();

        std::ifstream input(input_path);
        if (!input) {
          throw std::runtime_error("cannot open input file: " + input_path);
        }
        std::filesystem::create_directories(out_dir);
        const std::filesystem::path dir(out_dir);
        std::ofstream reports(dir / "reports.jsonl");
        std::ofstream summaries(dir / "summaries.jsonl");
        std::ofstream timeseries(dir / "timeseries.csv");
        ts::RunSinks sinks;
        sinks.reports = &reports;
        sinks.summaries = &summaries;
        sinks.timeseries = &timeseries;
        sinks.snapshot = [&dir](const ts::RunState& state, ts::SegmentId) {
          std::ofstream out(dir / "graph.snapshot");
          ts::save_run_state(state, out);
        };
        ts::RunResult result = ts::run(config, input, sinks);
        py::dict summary;
        summary["segments"] = result.reports.size();
        summary["ingested"] = result.totals.ingested;
        summary["dropped"] = result.totals.dropped();
        summary["malformed"] = result.totals.read.malformed;
        summary["lines"] = result.totals.read.lines;
        return summary;
      },
      py::arg("input_path"), py::arg("out_dir"),
      py::arg("segment_width") = 3600, py::arg("window_p") = 5,
      py::arg("decay_k") = 0, py::arg("top_k") = 20,
      py::arg("summary_measure") = "dynamic-eigenvector",
      py::arg("literal_cover") = false, py::arg("english_filter") = -1.0,
      py::arg("stopwords") = std::nullopt, py::arg("reorder_buffer") = 0,
      "Run the full pipeline over a line-delimited document file, writing "
      "reports.jsonl, summaries.jsonl, timeseries.csv and graph.snapshot "
      "into out_dir.");

  m.def(
      "synth_file",
      [](const std::string& path, int vocab, int docs_per_segment,
         int segments, double zipf, std::uint64_t seed,
         const std::vector<std::tuple<std::string, std::int64_t, int, double>>&
             events,
         int min_tokens, int max_tokens) {
        ts::SynthConfig config;
        config.vocab = vocab;
        config.docs_per_segment = docs_per_segment;
        config.segments = segments;
        config.zipf_exponent = zipf;
        config.seed = seed;
        config.min_tokens = min_tokens;
        config.max_tokens = max_tokens;
        for (const auto& [keyword, onset, duration, intensity] : events) {
          config.events.push_back(
              ts::PlantedEvent{keyword, onset, duration, intensity});
        }
        std::ofstream out(path);
        if (!out) {
          throw std::runtime_error("cannot write " + path);
        }
        ts::generate_stream(config, out);
      },
      py::arg("path"), py::arg("vocab") = 2000,
      py::arg("docs_per_segment") = 200, py::arg("segments") = 60,
      py::arg("zipf") = 1.1, py::arg("seed") = 42,
      py::arg("events") =
          std::vector<std::tuple<std::string, std::int64_t, int, double>>{},
      py::arg("min_tokens") = 3, py::arg("max_tokens") = 5,
      "Write a synthetic planted-burst stream in the pipeline input format.");

  m.def(
      "evaluate_file",
      [](const std::string& timeseries_path,
         const std::vector<std::tuple<std::string, std::int64_t, int, double>>&
             events,
         int top_k) {
        std::ifstream in(timeseries_path);
        if (!in) {
          throw std::runtime_error("cannot open " + timeseries_path);
        }
        const auto rows = ts::read_timeseries_csv(in);
        std::vector<ts::GroundTruthEvent> ground_truth;
        for (const auto& [keyword, onset, duration, intensity] : events) {
          ground_truth.push_back(
              ts::GroundTruthEvent{keyword, onset, duration, intensity});
        }
        py::list result;
        for (const ts::DetectionRow& row :
             ts::evaluate(rows, ground_truth, top_k)) {
          py::dict entry;
          entry["keyword"] = row.keyword;
          entry["measure"] = std::string(ts::measure_name(row.measure));
          entry["latency"] = row.latency.has_value()
                                 ? py::cast(*row.latency)
                                 : py::none();
          entry["peak"] = row.peak;
          entry["segments_to_zero"] = row.segments_to_zero.has_value()
                                          ? py::cast(*row.segments_to_zero)
                                          : py::none();
          result.append(std::move(entry));
        }
        return result;
      },
      py::arg("timeseries_path"), py::arg("events"), py::arg("top_k") = 20,
      "Detection latency / peak / decay per event and measure from a "
      "timeseries.csv.");
}
