#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "trendstream/centrality.hpp"

namespace trendstream {

/// Sum over the target keywords of their raw occurrence counts in the
/// document (tf).
std::int64_t document_weight(std::span<const std::string> tokens,
                             const std::set<std::string>& targets);

struct CoverCandidate {
  std::string doc_id;
  std::string text;
  std::map<std::string, std::int64_t> tf;  // token -> occurrence count
};

/// A set-cover instance: targets to cover and the segment's documents that
/// contain at least one of them.
struct CoverInstance {
  std::vector<std::string> targets;
  std::vector<CoverCandidate> candidates;
};

enum class CoverRule {
  // Pick the document covering the most new keywords (ties: larger weight,
  // then smaller id).
  kMaxNewKeywords,
  // Pick the document minimizing weight / newly-covered count, same
  // tie-breaks.
  kLiteralRatio,
};

struct SummaryPick {
  std::string doc_id;
  std::string text;
  std::vector<std::string> new_keywords;  // sorted
  std::int64_t weight = 0;                // sum of target tf in the document
};

struct Summary {
  std::vector<SummaryPick> picks;
  std::vector<std::string> uncovered;  // targets no candidate contains
};

/// Greedy weighted set cover. Stops when every coverable target is covered;
/// every pick covers at least one new keyword.
Summary greedy_cover(const CoverInstance& instance,
                     CoverRule rule = CoverRule::kMaxNewKeywords);

struct SegmentDocument {
  std::string id;
  std::string text;
  std::vector<std::string> tokens;
};

/// Builds the CoverInstance for the ranked keywords over the segment's
/// documents and runs greedy_cover.
Summary summarize_segment(const RankedKeywords& ranked,
                          std::span<const SegmentDocument> documents,
                          CoverRule rule = CoverRule::kMaxNewKeywords);

}  // namespace trendstream
