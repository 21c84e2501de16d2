#include "trendstream/centrality.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <sstream>

namespace trendstream {

std::string_view measure_name(Measure measure) {
  switch (measure) {
    case Measure::kFrequency:
      return "frequency";
    case Measure::kDegree:
      return "degree";
    case Measure::kEigenvector:
      return "eigenvector";
    case Measure::kDynamicFrequency:
      return "dynamic-frequency";
    case Measure::kDynamicDegree:
      return "dynamic-degree";
    case Measure::kDynamicEigenvector:
      return "dynamic-eigenvector";
  }
  return "";
}

std::optional<Measure> parse_measure(std::string_view name) {
  for (Measure m : kAllMeasures) {
    if (measure_name(m) == name) {
      return m;
    }
  }
  return std::nullopt;
}

bool is_dynamic(Measure measure) {
  return measure == Measure::kDynamicFrequency ||
         measure == Measure::kDynamicDegree ||
         measure == Measure::kDynamicEigenvector;
}

Measure dynamic_counterpart(Measure base) {
  switch (base) {
    case Measure::kFrequency:
      return Measure::kDynamicFrequency;
    case Measure::kDegree:
      return Measure::kDynamicDegree;
    case Measure::kEigenvector:
      return Measure::kDynamicEigenvector;
    default:
      throw std::invalid_argument("measure is already dynamic");
  }
}

Measure base_of(Measure dynamic_measure) {
  switch (dynamic_measure) {
    case Measure::kDynamicFrequency:
      return Measure::kFrequency;
    case Measure::kDynamicDegree:
      return Measure::kDegree;
    case Measure::kDynamicEigenvector:
      return Measure::kEigenvector;
    default:
      throw std::invalid_argument("measure is not dynamic");
  }
}

EigenvectorNotConverged::EigenvectorNotConverged(double residual_,
                                                 int iterations_)
    : std::runtime_error("power iteration did not converge (residual " +
                         std::to_string(residual_) + " after " +
                         std::to_string(iterations_) + " iterations)"),
      residual(residual_),
      iterations(iterations_) {}

namespace {

void max_normalize(std::map<std::string, double>& scores) {
  double max = 0.0;
  for (const auto& [kw, value] : scores) {
    max = std::max(max, value);
  }
  if (max <= 0.0) {
    return;
  }
  for (auto& [kw, value] : scores) {
    value /= max;
  }
}

}  // namespace

CentralityVector frequency_centrality(const SemanticGraph& graph) {
  CentralityVector result;
  result.measure = Measure::kFrequency;
  if (!graph.started()) {
    return result;
  }
  result.segment = graph.current_segment();
  for (const auto& [kw, node] : graph.nodes()) {
    std::int64_t f = graph.segment_frequency(kw);
    if (f > 0) {
      result.scores[kw] = static_cast<double>(f);
    }
  }
  max_normalize(result.scores);
  return result;
}

CentralityVector degree_centrality(const SemanticGraph& graph) {
  CentralityVector result;
  result.measure = Measure::kDegree;
  if (!graph.started()) {
    return result;
  }
  result.segment = graph.current_segment();
  for (const auto& [key, edge] : graph.edges()) {
    result.scores[key.first] += static_cast<double>(edge.weight);
    result.scores[key.second] += static_cast<double>(edge.weight);
  }
  max_normalize(result.scores);
  return result;
}

EigenResult power_iteration_centrality(const SemanticGraph& graph,
                                        const EigenSolveParams& params) {
  if (params.tolerance <= 0.0) {
    throw std::invalid_argument("tolerance must be positive");
  }
  if (params.max_iterations < 1) {
    throw std::invalid_argument("max iterations must be >= 1");
  }
  EigenResult result;
  result.vector.measure = Measure::kEigenvector;
  if (!graph.started()) {
    return result;
  }
  result.vector.segment = graph.current_segment();

  // Node order is the (sorted) keyword order, so accumulation order and
  // hence the exact floating-point result do not depend on insertion
  // history. Only nodes with at least one edge participate.
  std::vector<const std::string*> keywords;
  std::map<std::string_view, int> index;
  for (const auto& [kw, node] : graph.nodes()) {
    if (!node.neighbors.empty()) {
      index.emplace(kw, static_cast<int>(keywords.size()));
      keywords.push_back(&kw);
    }
  }
  const int n = static_cast<int>(keywords.size());
  if (n == 0) {
    return result;
  }

  std::int64_t max_weight = 0;
  for (const auto& [key, edge] : graph.edges()) {
    max_weight = std::max(max_weight, edge.weight);
  }

  // CSR adjacency with weights divided by the maximum weight. The division
  // is exact under integer rescaling of all weights, which keeps the whole
  // iteration scale-invariant. Rows are sorted by column index so the
  // accumulation order is canonical.
  std::vector<int> row_start(n + 1, 0);
  for (const auto& [key, edge] : graph.edges()) {
    ++row_start[index.at(key.first) + 1];
    ++row_start[index.at(key.second) + 1];
  }
  for (int i = 0; i < n; ++i) {
    row_start[i + 1] += row_start[i];
  }
  std::vector<std::pair<int, double>> cells(row_start.back());
  {
    std::vector<int> cursor(row_start.begin(), row_start.end() - 1);
    for (const auto& [key, edge] : graph.edges()) {
      const int a = index.at(key.first);
      const int b = index.at(key.second);
      const double w =
          static_cast<double>(edge.weight) / static_cast<double>(max_weight);
      cells[cursor[a]++] = {b, w};
      cells[cursor[b]++] = {a, w};
    }
  }
  for (int i = 0; i < n; ++i) {
    std::sort(cells.begin() + row_start[i], cells.begin() + row_start[i + 1]);
  }

  std::vector<double> x(n, 1.0);
  std::vector<double> y(n, 0.0);
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
  while (iterations < params.max_iterations) {
    ++iterations;
    double max = 0.0;
    for (int i = 0; i < n; ++i) {
      double sum = x[i];  // identity shift
      for (int k = row_start[i]; k < row_start[i + 1]; ++k) {
        sum += cells[k].second * x[cells[k].first];
      }
      y[i] = sum;
      max = std::max(max, sum);
    }
    residual = 0.0;
    for (int i = 0; i < n; ++i) {
      y[i] /= max;
      residual = std::max(residual, std::abs(y[i] - x[i]));
    }
    x.swap(y);
    if (residual < params.tolerance) {
      converged = true;
      break;
    }
  }

  for (int i = 0; i < n; ++i) {
    result.vector.scores[*keywords[i]] = x[i];
  }
  result.converged = converged;
  result.residual = residual;
  result.iterations = iterations;
  return result;
}

CentralityVector eigenvector_centrality(const SemanticGraph& graph,
                                        const EigenSolveParams& params) {
  EigenResult result = power_iteration_centrality(graph, params);
  if (!result.converged) {
    throw EigenvectorNotConverged(result.residual, result.iterations);
  }
  return std::move(result.vector);
}

double slope(std::span<const double> series) {
  const std::size_t n = series.size();
  if (n < 2) {
    throw std::invalid_argument("slope needs at least two points");
  }
  const double x_mean = static_cast<double>(n + 1) / 2.0;
  double y_mean = 0.0;
  for (double y : series) {
    y_mean += y;
  }
  y_mean /= static_cast<double>(n);
  double numerator = 0.0;
  double denominator = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = static_cast<double>(i + 1) - x_mean;
    numerator += dx * (series[i] - y_mean);
    denominator += dx * dx;
  }
  return numerator / denominator;
}

HistoryBuffer::HistoryBuffer(int window) : window_(window) {
  if (window_ < 2) {
    throw std::invalid_argument("history window must be >= 2");
  }
}

void HistoryBuffer::append(const CentralityVector& current) {
  for (auto it = series_.begin(); it != series_.end();) {
    std::vector<double>& values = it->second;
    values.erase(values.begin());
    values.push_back(current.at(it->first));
    const bool all_zero =
        std::all_of(values.begin(), values.end(),
                    [](double v) { return v == 0.0; });
    it = all_zero ? series_.erase(it) : ++it;
  }
  for (const auto& [kw, score] : current.scores) {
    if (score == 0.0 || series_.count(kw)) {
      continue;
    }
    std::vector<double> values(window_, 0.0);
    values.back() = score;
    series_.emplace(kw, std::move(values));
  }
}

std::vector<double> HistoryBuffer::series(const std::string& keyword) const {
  auto it = series_.find(keyword);
  if (it == series_.end()) {
    return std::vector<double>(window_, 0.0);
  }
  return it->second;
}

void HistoryBuffer::seed(const std::string& keyword,
                         std::vector<double> values) {
  if (static_cast<int>(values.size()) != window_) {
    throw std::invalid_argument("seeded history has the wrong length");
  }
  series_[keyword] = std::move(values);
}

CentralityVector dynamic_centrality(Measure base, const HistoryBuffer& history,
                                    const CentralityVector& current) {
  CentralityVector result;
  result.segment = current.segment;
  result.measure = dynamic_counterpart(base);
  for (const auto& [kw, values] : history.entries()) {
    const double raw = slope(values) * current.at(kw);
    result.scores[kw] = raw > 0.0 ? raw : 0.0;
  }
  max_normalize(result.scores);
  return result;
}

RankedKeywords rank_top_k(const CentralityVector& vector, int top_k) {
  RankedKeywords ranked;
  ranked.reserve(vector.scores.size());
  for (const auto& [kw, score] : vector.scores) {
    if (score > 0.0) {
      ranked.emplace_back(kw, score);
    }
  }
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) {
      return a.second > b.second;
    }
    return a.first < b.first;
  });
  if (top_k >= 0 && ranked.size() > static_cast<std::size_t>(top_k)) {
    ranked.resize(top_k);
  }
  return ranked;
}

}  // namespace trendstream
