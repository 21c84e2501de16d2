#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "trendstream/stream.hpp"

namespace trendstream {

struct PlantedEvent {
  std::string keyword;
  SegmentId onset = 0;
  int duration = 1;        // active segments: onset .. onset+duration-1
  double intensity = 0.1;  // fraction of the segment's documents injected
};

/// "keyword@onset:duration:intensity"; throws std::invalid_argument on a
/// malformed spec.
PlantedEvent parse_event_spec(const std::string& spec);

struct SynthConfig {
  int vocab = 2000;
  int docs_per_segment = 200;
  int segments = 60;
  double zipf_exponent = 1.1;
  std::uint64_t seed = 42;
  int min_tokens = 3;  // background tokens per document
  int max_tokens = 5;
  std::int64_t origin = 1609459200;  // 2021-01-01 00:00 UTC, hour-aligned
  std::int64_t segment_width = 3600;
  std::vector<PlantedEvent> events;

  void validate() const;
};

/// Background vocabulary token for a Zipf rank (0 = most frequent). Tokens
/// are built from a letter alphabet that no suffix rule or stop word
/// matches, so they pass normalization unchanged.
std::string synth_token(int rank);

/// The three fixed companion keywords co-injected with event `index`:
/// mid-rank background words, so an event raises co-occurrence with already
/// well-connected nodes and not just the keyword's frequency.
std::vector<std::string> companion_keywords(const SynthConfig& config,
                                            int event_index);

/// Writes a line-delimited document stream in the ingest input format.
/// Deterministic for a fixed config (including the seed).
void generate_stream(const SynthConfig& config, std::ostream& out);

}  // namespace trendstream
