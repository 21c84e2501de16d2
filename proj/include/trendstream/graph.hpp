#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "trendstream/stream.hpp"

namespace trendstream {

struct SnapshotError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Keyword co-occurrence graph over a sliding window of time segments.
///
/// A document's contribution to an edge weight made in segment s is present
/// for segments s..s+K-1 and evicted at s+K (K = decay window). Per-node
/// occurrence counts are kept for `freq_window` segments (max(K, P) in the
/// pipeline) so centrality histories can be served. Edges whose weight
/// reaches zero are removed, as are nodes with no incident edges and an
/// all-zero frequency buffer.
class SemanticGraph {
 public:
  struct EdgeState {
    std::vector<std::int32_t> slots;  // per-segment co-occurrence doc counts
    std::int64_t weight = 0;          // always the sum of slots

    bool operator==(const EdgeState&) const = default;
  };

  struct NodeState {
    std::vector<std::int32_t> slots;  // per-segment occurrence counts
    std::int64_t freq_total = 0;
    std::set<std::string> neighbors;

    bool operator==(const NodeState&) const = default;
  };

  using NodeMap = std::map<std::string, NodeState>;
  using EdgeKey = std::pair<std::string, std::string>;  // lexicographic pair
  using EdgeMap = std::map<EdgeKey, EdgeState>;

  explicit SemanticGraph(int decay_window, int freq_window = 0);

  /// Moves the graph to `segment`, processing skipped segments as empty
  /// (decay only), then ingests the documents: each unordered pair of
  /// distinct tokens per document adds 1 to its edge (pairs deduplicated
  /// within a document), each token occurrence adds 1 to the node frequency.
  /// Throws std::invalid_argument when `segment` is not past the current one
  /// or a document is tagged with a different segment.
  void advance_segment(SegmentId segment, const std::vector<Document>& docs);

  /// Sum of incident edge weights; 0 for absent keywords.
  std::int64_t weighted_degree(std::string_view keyword) const;

  /// Occurrence count in the current segment's slot; 0 for absent keywords.
  std::int64_t segment_frequency(std::string_view keyword) const;

  std::int64_t edge_weight(std::string_view a, std::string_view b) const;

  bool started() const { return started_; }
  SegmentId current_segment() const;
  int decay_window() const { return decay_window_; }
  int freq_window() const { return freq_window_; }

  const NodeMap& nodes() const { return nodes_; }
  const EdgeMap& edges() const { return edges_; }
  bool empty() const { return nodes_.empty(); }

  bool operator==(const SemanticGraph&) const = default;

  /// Writes the full versioned snapshot (magic header through "end").
  void save(std::ostream& out) const;

  /// Reads a snapshot produced by save() or by the pipeline's combined
  /// state writer (whose extra sections are skipped). Throws SnapshotError
  /// on a bad magic line, malformed records or a missing "end" terminator.
  static SemanticGraph restore(std::istream& in);

  // Shared with the pipeline's state serializer.
  static constexpr const char* kMagic = "TRENDGRAPH-SNAPSHOT v1";
  void write_body(std::ostream& out) const;
  /// Applies one graph body line ("graph ...", "node ...", "edge ...") to
  /// `graph`, creating it on the header line. Returns false when the line
  /// belongs to another section.
  static bool consume_body_line(const std::string& line,
                                std::optional<SemanticGraph>& graph);

 private:
  void step(SegmentId segment, const std::vector<Document>* docs);
  void prune();
  int edge_slot() const;
  int node_slot() const;

  int decay_window_;
  int freq_window_;
  bool started_ = false;
  SegmentId current_ = 0;
  NodeMap nodes_;
  EdgeMap edges_;
};

}  // namespace trendstream
