#include "trendstream/graph.hpp"

#include <random>
#include <sstream>

#include "doctest.h"
#include "test_support.hpp"

using namespace trendstream;
using test_support::rebuild_graph;
using test_support::random_stream;

namespace {

Document doc(std::string id, SegmentId segment,
             std::vector<std::string> tokens) {
  return Document{std::move(id), segment, std::move(tokens)};
}

}  // namespace

TEST_CASE("graph: a pair seen once lives exactly K segments") {
  SemanticGraph graph(2);
  graph.advance_segment(0, {doc("d1", 0, {"a", "b"})});
  CHECK(graph.edge_weight("a", "b") == 1);
  graph.advance_segment(1, {});
  CHECK(graph.edge_weight("a", "b") == 1);
  graph.advance_segment(2, {});
  CHECK(graph.edge_weight("a", "b") == 0);
  CHECK(graph.nodes().count("a") == 0);
  CHECK(graph.empty());
}

TEST_CASE("graph: pair dedup per document, occurrence counts per token") {
  SemanticGraph graph(3);
  graph.advance_segment(0, {doc("d1", 0, {"a", "a", "b"})});
  CHECK(graph.edge_weight("a", "b") == 1);
  CHECK(graph.segment_frequency("a") == 2);
  CHECK(graph.segment_frequency("b") == 1);
}

TEST_CASE("graph: pure decay empties the graph after K empty segments") {
  SemanticGraph graph(3);
  graph.advance_segment(0, {doc("d1", 0, {"a", "b"}), doc("d2", 0, {"b", "c"})});
  for (SegmentId s = 1; s <= 2; ++s) {
    graph.advance_segment(s, {});
    CHECK_FALSE(graph.empty());
  }
  graph.advance_segment(3, {});
  CHECK(graph.empty());
}

TEST_CASE("graph: weighted degree") {
  SemanticGraph graph(5);
  CHECK(graph.weighted_degree("nope") == 0);
  graph.advance_segment(0, {doc("d1", 0, {"a", "b"}), doc("d2", 0, {"a", "b"}),
                            doc("d3", 0, {"a", "c"}), doc("d4", 0, {"a", "c"}),
                            doc("d5", 0, {"a", "c"})});
  CHECK(graph.edge_weight("a", "b") == 2);
  CHECK(graph.edge_weight("a", "c") == 3);
  CHECK(graph.weighted_degree("a") == 5);
  CHECK(graph.weighted_degree("absent") == 0);

  SemanticGraph star(5);
  star.advance_segment(
      0, {doc("s1", 0, {"hub", "x"}), doc("s2", 0, {"hub", "y"}),
          doc("s3", 0, {"hub", "z"})});
  CHECK(star.weighted_degree("hub") == 3);
  CHECK(star.weighted_degree("x") == 1);
}

TEST_CASE("graph: segment frequency is per current segment") {
  SemanticGraph graph(4);
  graph.advance_segment(0, {doc("d1", 0, {"a", "a"}), doc("d2", 0, {"a"})});
  CHECK(graph.segment_frequency("a") == 3);
  graph.advance_segment(1, {doc("d3", 1, {"b", "a"})});
  CHECK(graph.segment_frequency("a") == 1);
  graph.advance_segment(2, {doc("d4", 2, {"b", "c"})});
  CHECK(graph.segment_frequency("a") == 0);  // previous segments don't count
  CHECK(graph.segment_frequency("absent") == 0);
}

TEST_CASE("graph: out-of-order advance is rejected") {
  SemanticGraph graph(3);
  graph.advance_segment(5, {});
  CHECK_THROWS_AS(graph.advance_segment(5, {}), std::invalid_argument);
  CHECK_THROWS_AS(graph.advance_segment(3, {}), std::invalid_argument);
  CHECK_THROWS_AS(graph.advance_segment(6, {doc("d", 7, {"a"})}),
                  std::invalid_argument);
}

TEST_CASE("graph: jumping a gap equals stepping through empty segments") {
  std::mt19937_64 rng(7);
  auto stream = random_stream(rng, 4, 5, 8, 4);
  for (int gap = 1; gap <= 12; ++gap) {
    SemanticGraph jumped(3, 6);
    SemanticGraph stepped(3, 6);
    for (const auto& [segment, docs] : stream) {
      jumped.advance_segment(segment, docs);
      stepped.advance_segment(segment, docs);
    }
    const SegmentId target = 3 + gap;
    jumped.advance_segment(target, {});
    for (SegmentId s = 4; s <= target; ++s) {
      stepped.advance_segment(s, {});
    }
    CHECK(jumped == stepped);
  }
}

TEST_CASE("graph: incremental equals rebuild from the window (property)") {
  std::mt19937_64 rng(2025);
  for (int trial = 0; trial < 40; ++trial) {
    const int decay = 1 + static_cast<int>(rng() % 5);
    const int freq = decay + static_cast<int>(rng() % 3);  // covers P > K
    auto stream = random_stream(rng, 12, 6, 10, 5);
    SemanticGraph incremental(decay, freq);
    for (SegmentId t = 0; t < 12; ++t) {
      auto it = stream.find(t);
      static const std::vector<Document> kNone;
      incremental.advance_segment(t, it == stream.end() ? kNone : it->second);
      const SemanticGraph rebuilt = rebuild_graph(stream, t, decay, freq);
      REQUIRE_MESSAGE(incremental == rebuilt, "trial ", trial, " t ", t,
                      " decay ", decay, " freq ", freq);
    }
  }
}

TEST_CASE("graph: edge weight counts distinct documents in the window") {
  std::mt19937_64 rng(11);
  auto stream = random_stream(rng, 8, 6, 6, 4);
  const int decay = 3;
  SemanticGraph graph(decay);
  for (SegmentId t = 0; t < 8; ++t) {
    auto it = stream.find(t);
    static const std::vector<Document> kNone;
    const auto& docs = it == stream.end() ? kNone : it->second;
    graph.advance_segment(t, docs);
    // recount from the raw stream
    for (const auto& [key, edge] : graph.edges()) {
      std::int64_t count = 0;
      for (SegmentId s = std::max<SegmentId>(0, t - decay + 1); s <= t; ++s) {
        auto docs_it = stream.find(s);
        if (docs_it == stream.end()) {
          continue;
        }
        for (const Document& d : docs_it->second) {
          bool has_a = false;
          bool has_b = false;
          for (const std::string& token : d.tokens) {
            has_a = has_a || token == key.first;
            has_b = has_b || token == key.second;
          }
          count += (has_a && has_b) ? 1 : 0;
        }
      }
      CHECK(edge.weight == count);
    }
  }
}

TEST_CASE("graph: no zero-weight edges, no fully obsolete nodes") {
  std::mt19937_64 rng(31);
  auto stream = random_stream(rng, 10, 5, 8, 4);
  SemanticGraph graph(2, 4);
  for (SegmentId t = 0; t < 14; ++t) {
    auto it = stream.find(t);
    static const std::vector<Document> kNone;
    graph.advance_segment(t, it == stream.end() ? kNone : it->second);
    for (const auto& [key, edge] : graph.edges()) {
      CHECK(edge.weight > 0);
      std::int64_t sum = 0;
      for (std::int32_t slot : edge.slots) {
        sum += slot;
      }
      CHECK(sum == edge.weight);
    }
    for (const auto& [kw, node] : graph.nodes()) {
      CHECK((node.freq_total > 0 || !node.neighbors.empty()));
    }
  }
}

TEST_CASE("graph snapshot: empty graph round-trips") {
  SemanticGraph graph(3, 5);
  std::ostringstream out;
  graph.save(out);
  std::istringstream in(out.str());
  CHECK(SemanticGraph::restore(in) == graph);
}

TEST_CASE("graph snapshot: populated graph round-trips bit-exactly") {
  std::mt19937_64 rng(5);
  auto stream = random_stream(rng, 3, 6, 8, 4);
  SemanticGraph graph(2, 4);
  for (SegmentId t = 0; t < 3; ++t) {
    auto it = stream.find(t);
    static const std::vector<Document> kNone;
    graph.advance_segment(t, it == stream.end() ? kNone : it->second);
  }
  std::ostringstream first;
  graph.save(first);
  std::istringstream in(first.str());
  SemanticGraph restored = SemanticGraph::restore(in);
  CHECK(restored == graph);
  std::ostringstream second;
  restored.save(second);
  CHECK(first.str() == second.str());

  // the restored graph keeps evolving identically
  restored.advance_segment(3, {doc("x", 3, {"k1", "k2"})});
  graph.advance_segment(3, {doc("x", 3, {"k1", "k2"})});
  CHECK(restored == graph);
}

TEST_CASE("graph snapshot: corruption is rejected") {
  SemanticGraph graph(2);
  graph.advance_segment(0, {doc("d", 0, {"a", "b"})});
  std::ostringstream out;
  graph.save(out);
  const std::string blob = out.str();

  {
    std::istringstream truncated(blob.substr(0, blob.size() - 5));
    CHECK_THROWS_AS(SemanticGraph::restore(truncated), SnapshotError);
  }
  {
    std::istringstream bad_magic("NOT-A-SNAPSHOT\n" + blob);
    CHECK_THROWS_AS(SemanticGraph::restore(bad_magic), SnapshotError);
  }
  {
    std::istringstream garbage(SemanticGraph::kMagic +
                               std::string("\nedge b a 1 1\nend\n"));
    CHECK_THROWS_AS(SemanticGraph::restore(garbage), SnapshotError);
  }
}
