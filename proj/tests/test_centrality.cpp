#include "trendstream/centrality.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "doctest.h"
#include "test_support.hpp"

using namespace trendstream;
using test_support::kw;

namespace {

Document doc(std::string id, SegmentId segment,
             std::vector<std::string> tokens) {
  return Document{std::move(id), segment, std::move(tokens)};
}

/// Builds a graph whose edges at segment 0 have the given weights, by
/// repeating documents (one per unit of weight).
SemanticGraph graph_from_weights(
    const std::vector<std::tuple<std::string, std::string, int>>& edges,
    int decay = 5) {
  SemanticGraph graph(decay);
  std::vector<Document> docs;
  int id = 0;
  for (const auto& [a, b, weight] : edges) {
    for (int i = 0; i < weight; ++i) {
      docs.push_back(doc("d" + std::to_string(id++), 0, {a, b}));
    }
  }
  graph.advance_segment(0, docs);
  return graph;
}

/// Dense eigendecomposition oracle: the max-normalized eigenvector of the
/// largest eigenvalue of the weighted adjacency matrix.
std::map<std::string, double> dense_eigen_oracle(const SemanticGraph& graph) {
  std::vector<std::string> keywords;
  for (const auto& [name, node] : graph.nodes()) {
    if (!node.neighbors.empty()) {
      keywords.push_back(name);
    }
  }
  const int n = static_cast<int>(keywords.size());
  std::map<std::string, double> scores;
  if (n == 0) {
    return scores;
  }
  Eigen::MatrixXd adjacency = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double w =
          static_cast<double>(graph.edge_weight(keywords[i], keywords[j]));
      adjacency(i, j) = w;
      adjacency(j, i) = w;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(adjacency);
  Eigen::VectorXd vec = solver.eigenvectors().col(n - 1);  // largest eigenvalue
  int argmax = 0;
  for (int i = 1; i < n; ++i) {
    if (std::abs(vec(i)) > std::abs(vec(argmax))) {
      argmax = i;
    }
  }
  vec /= vec(argmax);  // Perron vector: fixes the sign and the scale
  for (int i = 0; i < n; ++i) {
    scores[keywords[i]] = vec(i);
  }
  return scores;
}

/// Random connected graph: a random spanning tree plus extra edges, integer
/// weights in 1..10.
SemanticGraph random_connected_graph(std::mt19937_64& rng, int n) {
  std::vector<std::tuple<std::string, std::string, int>> edges;
  for (int v = 1; v < n; ++v) {
    const int u = static_cast<int>(rng() % v);
    edges.emplace_back(kw(u), kw(v), 1 + static_cast<int>(rng() % 10));
  }
  const int extra = static_cast<int>(rng() % (n + 1));
  for (int e = 0; e < extra; ++e) {
    const int u = static_cast<int>(rng() % n);
    const int v = static_cast<int>(rng() % n);
    if (u == v) {
      continue;
    }
    edges.emplace_back(kw(u), kw(v), 1 + static_cast<int>(rng() % 10));
  }
  return graph_from_weights(edges);
}

constexpr EigenSolveParams kTightParams{1e-13, 50000};

}  // namespace

TEST_CASE("frequency centrality: definition and normalization") {
  SemanticGraph graph(5);
  graph.advance_segment(
      0, {doc("d1", 0, {"a", "a", "b"}), doc("d2", 0, {"a", "a"})});
  CentralityVector vec = frequency_centrality(graph);
  CHECK(vec.at("a") == 1.0);
  CHECK(vec.at("b") == doctest::Approx(0.25));

  SemanticGraph single(5);
  single.advance_segment(0, {doc("d", 0, {"x", "x", "x", "x", "x", "x", "x"})});
  CHECK(frequency_centrality(single).at("x") == 1.0);

  SemanticGraph equal(5);
  equal.advance_segment(0, {doc("d", 0, {"p", "q", "r"})});
  CentralityVector all_equal = frequency_centrality(equal);
  for (const auto& [keyword, score] : all_equal.scores) {
    CHECK(score == 1.0);
  }
}

TEST_CASE("degree centrality: path and star") {
  SemanticGraph path = graph_from_weights({{"a", "b", 1}, {"b", "c", 1}});
  CentralityVector vec = degree_centrality(path);
  CHECK(vec.at("a") == doctest::Approx(0.5));
  CHECK(vec.at("b") == 1.0);
  CHECK(vec.at("c") == doctest::Approx(0.5));

  SemanticGraph star = graph_from_weights(
      {{"hub", "x", 1}, {"hub", "y", 1}, {"hub", "z", 1}});
  CentralityVector star_vec = degree_centrality(star);
  CHECK(star_vec.at("hub") == 1.0);
  CHECK(star_vec.at("x") == doctest::Approx(1.0 / 3.0));

  SemanticGraph empty(5);
  CHECK(degree_centrality(empty).scores.empty());
}

TEST_CASE("eigenvector centrality: triangle is uniform") {
  SemanticGraph triangle =
      graph_from_weights({{"a", "b", 2}, {"b", "c", 2}, {"a", "c", 2}});
  CentralityVector vec = eigenvector_centrality(triangle);
  CHECK(vec.at("a") == 1.0);
  CHECK(vec.at("b") == 1.0);
  CHECK(vec.at("c") == 1.0);
}

TEST_CASE("eigenvector centrality: star leaves score 1/sqrt(3)") {
  SemanticGraph star = graph_from_weights(
      {{"hub", "x", 1}, {"hub", "y", 1}, {"hub", "z", 1}});
  CentralityVector vec = eigenvector_centrality(star, kTightParams);
  CHECK(vec.at("hub") == 1.0);
  const double expected = 1.0 / std::sqrt(3.0);
  CHECK(vec.at("x") == doctest::Approx(expected).epsilon(1e-9));
  CHECK(vec.at("y") == doctest::Approx(expected).epsilon(1e-9));
  CHECK(vec.at("z") == doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("eigenvector centrality: dominant component absorbs the vector") {
  SemanticGraph graph =
      graph_from_weights({{"a", "b", 5}, {"c", "d", 1}});
  CentralityVector vec = eigenvector_centrality(graph);
  CHECK(vec.at("a") == 1.0);
  CHECK(vec.at("b") == 1.0);
  CHECK(vec.at("c") < 1e-6);
  CHECK(vec.at("c") == vec.at("d"));
}

TEST_CASE("eigenvector centrality: empty and edgeless graphs") {
  SemanticGraph empty(5);
  CHECK(eigenvector_centrality(empty).scores.empty());

  SemanticGraph lone(5);
  lone.advance_segment(0, {doc("d", 0, {"solo"})});
  CHECK_FALSE(lone.empty());
  CHECK(eigenvector_centrality(lone).scores.empty());
}

TEST_CASE("eigenvector centrality: non-convergence carries the residual") {
  SemanticGraph star = graph_from_weights(
      {{"hub", "x", 1}, {"hub", "y", 3}, {"hub", "z", 9}});
  EigenResult result = power_iteration_centrality(star, {1e-16, 3});
  CHECK_FALSE(result.converged);
  CHECK(result.residual > 0.0);
  CHECK(result.iterations == 3);
  CHECK_THROWS_AS(eigenvector_centrality(star, {1e-16, 3}),
                  EigenvectorNotConverged);
}

TEST_CASE("eigenvector centrality: matches the dense oracle (property)") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 11);
    SemanticGraph graph = random_connected_graph(rng, n);
    const auto oracle = dense_eigen_oracle(graph);
    CentralityVector vec = eigenvector_centrality(graph, kTightParams);
    REQUIRE(vec.scores.size() == oracle.size());
    for (const auto& [keyword, expected] : oracle) {
      CHECK_MESSAGE(vec.at(keyword) == doctest::Approx(expected).epsilon(1e-6),
                    "trial ", trial, " keyword ", keyword);
    }
  }
}

TEST_CASE("eigenvector centrality: exact scale invariance") {
  std::mt19937_64 rng(123);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<std::tuple<std::string, std::string, int>> edges;
    const int n = 4 + static_cast<int>(rng() % 6);
    for (int v = 1; v < n; ++v) {
      edges.emplace_back(kw(static_cast<int>(rng() % v)), kw(v),
                         1 + static_cast<int>(rng() % 4));
    }
    std::vector<std::tuple<std::string, std::string, int>> scaled;
    for (const auto& [a, b, w] : edges) {
      scaled.emplace_back(a, b, w * 7);
    }
    CentralityVector base =
        eigenvector_centrality(graph_from_weights(edges), kTightParams);
    CentralityVector times7 =
        eigenvector_centrality(graph_from_weights(scaled), kTightParams);
    CHECK(base.scores == times7.scores);  // bitwise identical
    CHECK(rank_top_k(base, 10) == rank_top_k(times7, 10));
  }
}

TEST_CASE("slope: flat, step and linear series") {
  CHECK(slope(std::vector<double>{3.0, 3.0, 3.0, 3.0, 3.0}) == 0.0);
  CHECK(slope(std::vector<double>{0.0, 0.0, 0.0, 0.0, 1.0}) ==
        doctest::Approx(0.2).epsilon(1e-15));
  for (double a : {-2.0, -0.5, 0.25, 3.0}) {
    std::vector<double> series;
    for (int i = 1; i <= 7; ++i) {
      series.push_back(a * i + 0.75);
    }
    CHECK(slope(series) == doctest::Approx(a).epsilon(1e-12));
  }
  CHECK_THROWS_AS(slope(std::vector<double>{1.0}), std::invalid_argument);
  CHECK_THROWS_AS(slope(std::vector<double>{}), std::invalid_argument);
}

TEST_CASE("slope: algebraic properties (property)") {
  std::mt19937_64 rng(55);
  auto uniform = [&]() {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
  };
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 9);
    std::vector<double> y(n);
    std::vector<double> z(n);
    for (int i = 0; i < n; ++i) {
      y[i] = uniform();
      z[i] = uniform();
    }
    // independent closed-form arrangement
    double sx = 0.0;
    double sy = 0.0;
    double sxx = 0.0;
    double sxy = 0.0;
    for (int i = 0; i < n; ++i) {
      const double x = i + 1;
      sx += x;
      sy += y[i];
      sxx += x * x;
      sxy += x * y[i];
    }
    const double oracle = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    CHECK(slope(y) == doctest::Approx(oracle).epsilon(1e-12));

    // reversal negates
    std::vector<double> reversed(y.rbegin(), y.rend());
    CHECK(slope(reversed) == doctest::Approx(-slope(y)).epsilon(1e-12));

    // linearity
    const double alpha = uniform() * 4 - 2;
    const double beta = uniform() * 4 - 2;
    std::vector<double> combo(n);
    for (int i = 0; i < n; ++i) {
      combo[i] = alpha * y[i] + beta * z[i];
    }
    CHECK(slope(combo) ==
          doctest::Approx(alpha * slope(y) + beta * slope(z)).epsilon(1e-10));
  }
}

TEST_CASE("history buffer: padding, shifting and garbage collection") {
  HistoryBuffer history(5);
  CHECK(history.series("anything") == std::vector<double>(5, 0.0));

  CentralityVector seg0;
  seg0.scores = {{"a", 1.0}};
  history.append(seg0);
  CHECK(history.series("a") == std::vector<double>{0, 0, 0, 0, 1.0});

  CentralityVector seg1;
  seg1.scores = {{"b", 0.5}};
  history.append(seg1);
  CHECK(history.series("a") == std::vector<double>{0, 0, 0, 1.0, 0});
  CHECK(history.series("b") == std::vector<double>{0, 0, 0, 0, 0.5});

  // 'a' ages out entirely after window more empty segments
  for (int i = 0; i < 4; ++i) {
    history.append(CentralityVector{});
  }
  CHECK(history.entries().count("a") == 0);
  CHECK(history.entries().count("b") == 0);
}

TEST_CASE("dynamic centrality: spec examples") {
  HistoryBuffer history(5);
  CentralityVector current;
  current.scores = {{"a", 1.0}};
  history.append(current);  // history [0,0,0,0,1]
  CentralityVector dyn =
      dynamic_centrality(Measure::kEigenvector, history, current);
  CHECK(dyn.measure == Measure::kDynamicEigenvector);
  CHECK(dyn.at("a") == 1.0);  // 0.2 raw, alone in the graph -> normalized 1

  // constant history -> zero slope -> zero
  HistoryBuffer flat(5);
  CentralityVector c;
  c.scores = {{"a", 0.7}};
  for (int i = 0; i < 5; ++i) {
    flat.append(c);
  }
  CHECK(dynamic_centrality(Measure::kEigenvector, flat, c).at("a") == 0.0);

  // strictly decreasing history -> negative slope -> clamped to zero
  HistoryBuffer falling(5);
  for (double v : {1.0, 0.8, 0.6, 0.4, 0.2}) {
    CentralityVector step;
    step.scores = {{"a", v}};
    falling.append(step);
  }
  CentralityVector last;
  last.scores = {{"a", 0.2}};
  CHECK(dynamic_centrality(Measure::kEigenvector, falling, last).at("a") ==
        0.0);
}

TEST_CASE("dynamic centrality: absence now annihilates the product") {
  HistoryBuffer history(5);
  for (double v : {0.2, 0.4, 0.6, 0.8}) {
    CentralityVector step;
    step.scores = {{"gone", v}};
    history.append(step);
  }
  history.append(CentralityVector{});  // keyword absent in the new segment
  CentralityVector dyn =
      dynamic_centrality(Measure::kFrequency, history, CentralityVector{});
  CHECK(dyn.at("gone") == 0.0);
}

TEST_CASE("dynamic centrality: recomputation from stored history matches") {
  std::mt19937_64 rng(31337);
  auto uniform = [&]() {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
  };
  HistoryBuffer history(5);
  CentralityVector current;
  for (int seg = 0; seg < 9; ++seg) {
    current = CentralityVector{};
    current.segment = seg;
    double max = 0.0;
    for (int k = 0; k < 6; ++k) {
      const double v = uniform();
      current.scores[test_support::kw(k)] = v;
      max = std::max(max, v);
    }
    for (auto& [keyword, score] : current.scores) {
      score /= max;
    }
    history.append(current);
  }
  CentralityVector dyn =
      dynamic_centrality(Measure::kDegree, history, current);
  double expected_max = 0.0;
  std::map<std::string, double> raw;
  for (const auto& [keyword, values] : history.entries()) {
    const double r = slope(values) * current.at(keyword);
    raw[keyword] = r > 0 ? r : 0.0;
    expected_max = std::max(expected_max, raw[keyword]);
  }
  for (const auto& [keyword, r] : raw) {
    CHECK(dyn.at(keyword) == doctest::Approx(r / expected_max).epsilon(1e-14));
  }
}

TEST_CASE("centrality vectors satisfy the max-normalization invariant") {
  std::mt19937_64 rng(4242);
  for (int trial = 0; trial < 20; ++trial) {
    auto stream = test_support::random_stream(rng, 6, 6, 10, 4);
    SemanticGraph graph(3, 5);
    HistoryBuffer history(5);
    for (SegmentId t = 0; t < 6; ++t) {
      auto it = stream.find(t);
      static const std::vector<Document> kNone;
      graph.advance_segment(t, it == stream.end() ? kNone : it->second);
      for (CentralityVector vec :
           {frequency_centrality(graph), degree_centrality(graph),
            eigenvector_centrality(graph, kTightParams)}) {
        double max = 0.0;
        for (const auto& [keyword, score] : vec.scores) {
          CHECK(score >= 0.0);
          CHECK(score <= 1.0);
          max = std::max(max, score);
        }
        if (!vec.scores.empty()) {
          CHECK(max == 1.0);
        }
      }
      CentralityVector ec = eigenvector_centrality(graph, kTightParams);
      history.append(ec);
      CentralityVector dyn =
          dynamic_centrality(Measure::kEigenvector, history, ec);
      double max = 0.0;
      bool any_positive = false;
      for (const auto& [keyword, score] : dyn.scores) {
        CHECK(score >= 0.0);
        max = std::max(max, score);
        any_positive = any_positive || score > 0.0;
      }
      if (any_positive) {
        CHECK(max == 1.0);
      }
    }
  }
}

TEST_CASE("rank_top_k: ordering, ties and zero exclusion") {
  CentralityVector vec;
  vec.scores = {{"a", 1.0}, {"b", 0.5}};
  RankedKeywords top1 = rank_top_k(vec, 1);
  REQUIRE(top1.size() == 1);
  CHECK(top1[0].first == "a");

  CentralityVector tie;
  tie.scores = {{"b", 0.7}, {"a", 0.7}};
  RankedKeywords tied = rank_top_k(tie, 1);
  REQUIRE(tied.size() == 1);
  CHECK(tied[0].first == "a");  // lexicographic tie-break

  CentralityVector zero;
  zero.scores = {{"a", 0.0}};
  CHECK(rank_top_k(zero, 5).empty());

  CentralityVector small;
  small.scores = {{"a", 0.9}, {"b", 0.1}, {"c", 0.0}};
  CHECK(rank_top_k(small, 10).size() == 2);
}

TEST_CASE("measure names round-trip") {
  for (Measure m : kAllMeasures) {
    auto parsed = parse_measure(measure_name(m));
    REQUIRE(parsed.has_value());
    CHECK(*parsed == m);
  }
  CHECK_FALSE(parse_measure("pagerank").has_value());
  CHECK(dynamic_counterpart(Measure::kEigenvector) ==
        Measure::kDynamicEigenvector);
  CHECK(base_of(Measure::kDynamicDegree) == Measure::kDegree);
  CHECK(is_dynamic(Measure::kDynamicFrequency));
  CHECK_FALSE(is_dynamic(Measure::kFrequency));
}
