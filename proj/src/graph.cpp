#include "trendstream/graph.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>

namespace trendstream {

namespace {

// Slot layout: the contribution of segment s lives at index s % window, so
// the slot being reused when advancing to segment s is exactly the one that
// aged out (segment s - window).
int slot_of(SegmentId segment, int window) {
  return static_cast<int>(segment % window);
}

std::vector<std::string> sorted_unique_tokens(const Document& doc) {
  std::vector<std::string> unique(doc.tokens);
  std::sort(unique.begin(), unique.end());
  unique.erase(std::unique(unique.begin(), unique.end()), unique.end());
  return unique;
}

}  // namespace

SemanticGraph::SemanticGraph(int decay_window, int freq_window)
    : decay_window_(decay_window),
      freq_window_(freq_window == 0 ? decay_window : freq_window) {
  if (decay_window_ < 1) {
    throw std::invalid_argument("decay window must be >= 1");
  }
  if (freq_window_ < decay_window_) {
    throw std::invalid_argument("frequency window must be >= decay window");
  }
}

int SemanticGraph::edge_slot() const { return slot_of(current_, decay_window_); }
int SemanticGraph::node_slot() const { return slot_of(current_, freq_window_); }

SegmentId SemanticGraph::current_segment() const {
  if (!started_) {
    throw std::logic_error("graph has not processed any segment yet");
  }
  return current_;
}

void SemanticGraph::advance_segment(SegmentId segment,
                                    const std::vector<Document>& docs) {
  if (segment < 0) {
    throw std::invalid_argument("segment index must be non-negative");
  }
  if (started_ && segment <= current_) {
    throw std::invalid_argument("segments must be advanced in order");
  }
  for (const Document& doc : docs) {
    if (doc.segment != segment) {
      throw std::invalid_argument("document tagged with a different segment");
    }
  }
  if (!started_) {
    started_ = true;
    step(segment, &docs);
    return;
  }
  if (segment - current_ > freq_window_) {
    // Every buffered contribution ages out across the gap.
    nodes_.clear();
    edges_.clear();
    step(segment, &docs);
    return;
  }
  for (SegmentId s = current_ + 1; s < segment; ++s) {
    step(s, nullptr);
  }
  step(segment, &docs);
}

void SemanticGraph::step(SegmentId segment, const std::vector<Document>* docs) {
  current_ = segment;

  const int eslot = edge_slot();
  for (auto& [key, edge] : edges_) {
    edge.weight -= edge.slots[eslot];
    edge.slots[eslot] = 0;
  }
  const int nslot = node_slot();
  for (auto& [kw, node] : nodes_) {
    node.freq_total -= node.slots[nslot];
    node.slots[nslot] = 0;
  }

  if (docs != nullptr) {
    for (const Document& doc : *docs) {
      for (const std::string& token : doc.tokens) {
        NodeState& node = nodes_[token];
        if (node.slots.empty()) {
          node.slots.assign(freq_window_, 0);
        }
        node.slots[nslot] += 1;
        node.freq_total += 1;
      }
      const std::vector<std::string> unique = sorted_unique_tokens(doc);
      for (std::size_t i = 0; i < unique.size(); ++i) {
        for (std::size_t j = i + 1; j < unique.size(); ++j) {
          EdgeState& edge = edges_[{unique[i], unique[j]}];
          if (edge.slots.empty()) {
            edge.slots.assign(decay_window_, 0);
            nodes_[unique[i]].neighbors.insert(unique[j]);
            nodes_[unique[j]].neighbors.insert(unique[i]);
          }
          edge.slots[eslot] += 1;
          edge.weight += 1;
        }
      }
    }
  }
  prune();
}

void SemanticGraph::prune() {
  for (auto it = edges_.begin(); it != edges_.end();) {
    if (it->second.weight == 0) {
      nodes_[it->first.first].neighbors.erase(it->first.second);
      nodes_[it->first.second].neighbors.erase(it->first.first);
      it = edges_.erase(it);
    } else {
      ++it;
    }
  }
  for (auto it = nodes_.begin(); it != nodes_.end();) {
    if (it->second.neighbors.empty() && it->second.freq_total == 0) {
      it = nodes_.erase(it);
    } else {
      ++it;
    }
  }
}

std::int64_t SemanticGraph::weighted_degree(std::string_view keyword) const {
  auto it = nodes_.find(std::string(keyword));
  if (it == nodes_.end()) {
    return 0;
  }
  std::int64_t degree = 0;
  for (const std::string& neighbor : it->second.neighbors) {
    degree += edge_weight(keyword, neighbor);
  }
  return degree;
}

std::int64_t SemanticGraph::segment_frequency(std::string_view keyword) const {
  auto it = nodes_.find(std::string(keyword));
  if (it == nodes_.end() || it->second.slots.empty()) {
    return 0;
  }
  return it->second.slots[node_slot()];
}

std::int64_t SemanticGraph::edge_weight(std::string_view a,
                                        std::string_view b) const {
  std::string lo(a);
  std::string hi(b);
  if (lo > hi) {
    std::swap(lo, hi);
  }
  auto it = edges_.find({lo, hi});
  return it == edges_.end() ? 0 : it->second.weight;
}

void SemanticGraph::write_body(std::ostream& out) const {
  out << "graph " << decay_window_ << ' ' << freq_window_ << ' '
      << (started_ ? 1 : 0) << ' ' << current_ << '\n';
  for (const auto& [kw, node] : nodes_) {
    out << "node " << kw;
    // oldest -> newest, independent of the ring phase
    for (int age = freq_window_ - 1; age >= 0; --age) {
      SegmentId s = current_ - age;
      out << ' ' << (s < 0 ? 0 : node.slots[slot_of(s, freq_window_)]);
    }
    out << '\n';
  }
  for (const auto& [key, edge] : edges_) {
    out << "edge " << key.first << ' ' << key.second;
    for (int age = decay_window_ - 1; age >= 0; --age) {
      SegmentId s = current_ - age;
      out << ' ' << (s < 0 ? 0 : edge.slots[slot_of(s, decay_window_)]);
    }
    out << '\n';
  }
}

void SemanticGraph::save(std::ostream& out) const {
  out << kMagic << '\n';
  write_body(out);
  out << "end\n";
}

bool SemanticGraph::consume_body_line(const std::string& line,
                                      std::optional<SemanticGraph>& graph) {
  std::istringstream in(line);
  std::string tag;
  in >> tag;
  if (tag == "graph") {
    int decay = 0;
    int freq = 0;
    int started = 0;
    SegmentId current = 0;
    if (!(in >> decay >> freq >> started >> current) || decay < 1 ||
        freq < decay) {
      throw SnapshotError("malformed graph header line");
    }
    graph.emplace(decay, freq);
    graph->started_ = started != 0;
    graph->current_ = current;
    return true;
  }
  if (tag != "node" && tag != "edge") {
    return false;
  }
  if (!graph.has_value()) {
    throw SnapshotError("snapshot record precedes the graph header");
  }
  SemanticGraph& g = *graph;
  if (tag == "node") {
    std::string kw;
    if (!(in >> kw)) {
      throw SnapshotError("malformed node line");
    }
    NodeState& node = g.nodes_[kw];  // keeps neighbor links if already seen
    node.slots.assign(g.freq_window_, 0);
    node.freq_total = 0;
    for (int age = g.freq_window_ - 1; age >= 0; --age) {
      std::int64_t value = 0;
      if (!(in >> value) || value < 0) {
        throw SnapshotError("malformed node line");
      }
      SegmentId s = g.current_ - age;
      if (s >= 0) {
        node.slots[slot_of(s, g.freq_window_)] =
            static_cast<std::int32_t>(value);
        node.freq_total += value;
      } else if (value != 0) {
        throw SnapshotError("node count recorded before segment 0");
      }
    }
    return true;
  }
  std::string a;
  std::string b;
  if (!(in >> a >> b) || a >= b) {
    throw SnapshotError("malformed edge line");
  }
  EdgeState edge;
  edge.slots.assign(g.decay_window_, 0);
  for (int age = g.decay_window_ - 1; age >= 0; --age) {
    std::int64_t value = 0;
    if (!(in >> value) || value < 0) {
      throw SnapshotError("malformed edge line");
    }
    SegmentId s = g.current_ - age;
    if (s >= 0) {
      edge.slots[slot_of(s, g.decay_window_)] = static_cast<std::int32_t>(value);
      edge.weight += value;
    } else if (value != 0) {
      throw SnapshotError("edge count recorded before segment 0");
    }
  }
  if (edge.weight == 0) {
    throw SnapshotError("snapshot contains a zero-weight edge");
  }
  g.nodes_[a].neighbors.insert(b);
  g.nodes_[b].neighbors.insert(a);
  if (g.nodes_[a].slots.empty()) {
    g.nodes_[a].slots.assign(g.freq_window_, 0);
  }
  if (g.nodes_[b].slots.empty()) {
    g.nodes_[b].slots.assign(g.freq_window_, 0);
  }
  g.edges_[{a, b}] = std::move(edge);
  return true;
}

SemanticGraph SemanticGraph::restore(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kMagic) {
    throw SnapshotError("not a trendgraph snapshot (bad magic header)");
  }
  std::optional<SemanticGraph> graph;
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
    std::string tag = line.substr(0, line.find(' '));
    if (tag == "pipeline" || tag == "hist") {
      continue;  // pipeline state sections; irrelevant for a bare graph
    }
    throw SnapshotError("unknown snapshot record: " + tag);
  }
  if (!terminated) {
    throw SnapshotError("snapshot truncated (missing end marker)");
  }
  if (!graph.has_value()) {
    throw SnapshotError("snapshot has no graph header");
  }
  return std::move(*graph);
}

}  // namespace trendstream
