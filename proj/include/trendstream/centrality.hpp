#pragma once

#include <array>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "trendstream/graph.hpp"

namespace trendstream {

enum class Measure {
  kFrequency,
  kDegree,
  kEigenvector,
  kDynamicFrequency,
  kDynamicDegree,
  kDynamicEigenvector,
};

inline constexpr std::array<Measure, 6> kAllMeasures = {
    Measure::kFrequency,        Measure::kDegree,
    Measure::kEigenvector,      Measure::kDynamicFrequency,
    Measure::kDynamicDegree,    Measure::kDynamicEigenvector,
};

std::string_view measure_name(Measure measure);
std::optional<Measure> parse_measure(std::string_view name);
bool is_dynamic(Measure measure);
Measure dynamic_counterpart(Measure base);
Measure base_of(Measure dynamic_measure);

/// Per-segment keyword scores, max-normalized to [0, 1]: if any score is
/// positive the maximum is exactly 1. Dynamic measures are clamped at zero
/// before normalization and may carry explicit zeros.
struct CentralityVector {
  SegmentId segment = 0;
  Measure measure = Measure::kFrequency;
  std::map<std::string, double> scores;

  double at(const std::string& keyword) const {
    auto it = scores.find(keyword);
    return it == scores.end() ? 0.0 : it->second;
  }
};

struct EigenSolveParams {
  double tolerance = 1e-10;  // infinity-norm change of the normalized iterate
  int max_iterations = 1000;
};

struct EigenResult {
  CentralityVector vector;
  bool converged = true;
  double residual = 0.0;
  int iterations = 0;
};

struct EigenvectorNotConverged : std::runtime_error {
  EigenvectorNotConverged(double residual, int iterations);
  double residual;
  int iterations;
};

/// score(i) = f_i / max f_j over keywords with a positive current-segment
/// frequency; empty for an unstarted or empty graph.
CentralityVector frequency_centrality(const SemanticGraph& graph);

/// Same with weighted degrees.
CentralityVector degree_centrality(const SemanticGraph& graph);

/// Perron eigenvector of the weighted adjacency, entrywise divided by its
/// maximum. Power iteration from the uniform positive vector on the
/// identity-shifted operator A/wmax + I (same eigenvectors as A; the shift
/// keeps the iteration from oscillating on bipartite components), with the
/// iterate re-normalized by its maximum entry every step. Nodes without
/// edges are excluded; a graph with no edges yields an empty vector.
EigenResult power_iteration_centrality(const SemanticGraph& graph,
                                       const EigenSolveParams& params = {});

/// power_iteration_centrality that throws EigenvectorNotConverged instead of
/// returning a non-converged result.
CentralityVector eigenvector_centrality(const SemanticGraph& graph,
                                        const EigenSolveParams& params = {});

/// Ordinary least-squares slope of `series` against indices 1..P
/// (oldest first). Throws std::invalid_argument when P < 2.
double slope(std::span<const double> series);

/// Rolling per-keyword score history for one base measure: the last
/// `window` normalized scores, front-padded with zeros for keywords seen
/// fewer than `window` segments ago. Keywords whose whole history is zero
/// are dropped.
class HistoryBuffer {
 public:
  explicit HistoryBuffer(int window);

  /// Shifts every tracked series by one segment, recording the keyword's
  /// score in `current` (0 when absent) and starting series for new
  /// keywords.
  void append(const CentralityVector& current);

  /// The keyword's series, oldest to newest, always `window` values.
  std::vector<double> series(const std::string& keyword) const;

  int window() const { return window_; }
  const std::map<std::string, std::vector<double>>& entries() const {
    return series_;
  }
  void seed(const std::string& keyword, std::vector<double> values);

  bool operator==(const HistoryBuffer&) const = default;

 private:
  int window_;
  std::map<std::string, std::vector<double>> series_;  // oldest -> newest
};

/// raw(k) = slope(history of k) * current score of k, negatives clamped to
/// zero, then max-normalized (an all-zero vector stays all-zero). `history`
/// must already contain the current segment as its newest entry.
CentralityVector dynamic_centrality(Measure base, const HistoryBuffer& history,
                                    const CentralityVector& current);

using RankedKeywords = std::vector<std::pair<std::string, double>>;

/// Keywords by descending score, ties broken lexicographically; zero-score
/// keywords are excluded and at most `top_k` entries returned.
RankedKeywords rank_top_k(const CentralityVector& vector, int top_k);

}  // namespace trendstream
