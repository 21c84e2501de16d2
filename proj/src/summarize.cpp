#include "trendstream/summarize.hpp"

#include <algorithm>

namespace trendstream {

std::int64_t document_weight(std::span<const std::string> tokens,
                             const std::set<std::string>& targets) {
  std::int64_t weight = 0;
  for (const std::string& token : tokens) {
    if (targets.count(token)) {
      ++weight;
    }
  }
  return weight;
}

Summary greedy_cover(const CoverInstance& instance, CoverRule rule) {
  Summary summary;
  const std::set<std::string> targets(instance.targets.begin(),
                                      instance.targets.end());

  struct Entry {
    const CoverCandidate* candidate;
    std::set<std::string> covers;  // targets present in the document
    std::int64_t weight;
    bool used = false;
  };
  std::vector<Entry> entries;
  entries.reserve(instance.candidates.size());
  for (const CoverCandidate& candidate : instance.candidates) {
    Entry entry{&candidate, {}, 0};
    for (const auto& [token, count] : candidate.tf) {
      if (targets.count(token)) {
        entry.covers.insert(token);
        entry.weight += count;
      }
    }
    entries.push_back(std::move(entry));
  }

  std::set<std::string> uncovered = targets;
  while (!uncovered.empty()) {
    std::size_t best = entries.size();
    std::size_t best_new = 0;
    for (std::size_t i = 0; i < entries.size(); ++i) {
      const Entry& entry = entries[i];
      if (entry.used) {
        continue;
      }
      std::size_t new_count = 0;
      for (const std::string& kw : entry.covers) {
        new_count += uncovered.count(kw);
      }
      if (new_count == 0) {
        continue;
      }
      bool better = false;
      if (best == entries.size()) {
        better = true;
      } else if (rule == CoverRule::kMaxNewKeywords) {
        if (new_count != best_new) {
          better = new_count > best_new;
        } else if (entry.weight != entries[best].weight) {
          better = entry.weight > entries[best].weight;
        } else {
          better = entry.candidate->doc_id < entries[best].candidate->doc_id;
        }
      } else {
        // ratio comparison via cross-multiplication: w_a/n_a < w_b/n_b
        const std::int64_t lhs =
            entry.weight * static_cast<std::int64_t>(best_new);
        const std::int64_t rhs =
            entries[best].weight * static_cast<std::int64_t>(new_count);
        if (lhs != rhs) {
          better = lhs < rhs;
        } else if (entry.weight != entries[best].weight) {
          better = entry.weight > entries[best].weight;
        } else {
          better = entry.candidate->doc_id < entries[best].candidate->doc_id;
        }
      }
      if (better) {
        best = i;
        best_new = new_count;
      }
    }
    if (best == entries.size()) {
      break;  // remaining targets appear in no candidate
    }
    Entry& chosen = entries[best];
    chosen.used = true;
    SummaryPick pick;
    pick.doc_id = chosen.candidate->doc_id;
    pick.text = chosen.candidate->text;
    pick.weight = chosen.weight;
    for (const std::string& kw : chosen.covers) {
      if (uncovered.erase(kw)) {
        pick.new_keywords.push_back(kw);
      }
    }
    summary.picks.push_back(std::move(pick));
  }
  summary.uncovered.assign(uncovered.begin(), uncovered.end());
  return summary;
}

Summary summarize_segment(const RankedKeywords& ranked,
                          std::span<const SegmentDocument> documents,
                          CoverRule rule) {
  CoverInstance instance;
  std::set<std::string> targets;
  for (const auto& [kw, score] : ranked) {
    instance.targets.push_back(kw);
    targets.insert(kw);
  }
  for (const SegmentDocument& doc : documents) {
    CoverCandidate candidate;
    bool relevant = false;
    for (const std::string& token : doc.tokens) {
      ++candidate.tf[token];
      relevant = relevant || targets.count(token) > 0;
    }
    if (!relevant) {
      continue;
    }
    candidate.doc_id = doc.id;
    candidate.text = doc.text;
    instance.candidates.push_back(std::move(candidate));
  }
  return greedy_cover(instance, rule);
}

}  // namespace trendstream
