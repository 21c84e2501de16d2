#include "trendstream/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "json.hpp"

namespace trendstream {

namespace {

// No token built from this alphabet can end in -s/-es/-ed/-ing (no s, d or
// g), and the leading 'q' keeps every token clear of the stop-word list.
constexpr char kAlphabet[] = "abcefhijklmnopqrtuvwxyz";
constexpr int kAlphabetSize = 23;

// 53-bit uniform double in [0, 1); hand-rolled so output does not depend on
// the standard library's distribution implementations.
double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  return rng() % bound;
}

}  // namespace

std::string synth_token(int rank) {
  if (rank < 0) {
    throw std::invalid_argument("rank must be non-negative");
  }
  std::string digits;
  int value = rank;
  do {
    digits.push_back(kAlphabet[value % kAlphabetSize]);
    value /= kAlphabetSize;
  } while (value > 0);
  while (digits.size() < 3) {
    digits.push_back(kAlphabet[0]);
  }
  std::reverse(digits.begin(), digits.end());
  return "q" + digits;
}

PlantedEvent parse_event_spec(const std::string& spec) {
  const std::size_t at = spec.find('@');
  if (at == std::string::npos || at == 0) {
    throw std::invalid_argument("event spec must be keyword@onset:duration:intensity");
  }
  PlantedEvent event;
  event.keyword = spec.substr(0, at);
  const std::string rest = spec.substr(at + 1);
  const std::size_t colon1 = rest.find(':');
  const std::size_t colon2 =
      colon1 == std::string::npos ? std::string::npos : rest.find(':', colon1 + 1);
  if (colon1 == std::string::npos || colon2 == std::string::npos) {
    throw std::invalid_argument("event spec must be keyword@onset:duration:intensity");
  }
  try {
    std::size_t used = 0;
    const std::string onset_text = rest.substr(0, colon1);
    event.onset = std::stoll(onset_text, &used);
    if (used != onset_text.size()) {
      throw std::invalid_argument("trailing characters");
    }
    const std::string duration_text = rest.substr(colon1 + 1, colon2 - colon1 - 1);
    event.duration = std::stoi(duration_text, &used);
    if (used != duration_text.size()) {
      throw std::invalid_argument("trailing characters");
    }
    const std::string intensity_text = rest.substr(colon2 + 1);
    event.intensity = std::stod(intensity_text, &used);
    if (used != intensity_text.size()) {
      throw std::invalid_argument("trailing characters");
    }
  } catch (const std::exception&) {
    throw std::invalid_argument("cannot parse event spec: " + spec);
  }
  if (event.onset < 0 || event.duration < 1 || event.intensity <= 0.0 ||
      event.intensity > 1.0) {
    throw std::invalid_argument("event spec out of range: " + spec);
  }
  return event;
}

void SynthConfig::validate() const {
  if (vocab < 1 || docs_per_segment < 1 || segments < 1) {
    throw std::invalid_argument("vocab, docs and segments must be positive");
  }
  if (zipf_exponent <= 0.0) {
    throw std::invalid_argument("zipf exponent must be positive");
  }
  if (min_tokens < 1 || max_tokens < min_tokens) {
    throw std::invalid_argument("token count range is invalid");
  }
  if (segment_width <= 0) {
    throw std::invalid_argument("segment width must be positive");
  }
  for (const PlantedEvent& event : events) {
    if (event.keyword.empty()) {
      throw std::invalid_argument("event keyword must be non-empty");
    }
    if (event.onset + event.duration > segments) {
      throw std::invalid_argument("event extends past the last segment");
    }
    if (event.intensity <= 0.0 || event.intensity > 1.0) {
      throw std::invalid_argument("event intensity must be in (0, 1]");
    }
  }
}

std::vector<std::string> companion_keywords(const SynthConfig& config,
                                            int event_index) {
  std::vector<std::string> companions;
  const int base = 4 + 2 * event_index;
  for (int offset = 0; offset < 3; ++offset) {
    companions.push_back(synth_token(std::min(base + offset, config.vocab - 1)));
  }
  return companions;
}

void generate_stream(const SynthConfig& config, std::ostream& out) {
  config.validate();
  std::mt19937_64 rng(config.seed);

  // Zipf CDF over ranks 1..vocab with the configured exponent.
  std::vector<double> cdf(config.vocab);
  double total = 0.0;
  for (int r = 0; r < config.vocab; ++r) {
    total += std::pow(static_cast<double>(r + 1), -config.zipf_exponent);
    cdf[r] = total;
  }
  for (double& value : cdf) {
    value /= total;
  }
  auto sample_rank = [&]() {
    const double u = uniform01(rng);
    return static_cast<int>(
        std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
  };

  std::vector<std::vector<std::string>> companions;
  companions.reserve(config.events.size());
  for (std::size_t i = 0; i < config.events.size(); ++i) {
    companions.push_back(companion_keywords(config, static_cast<int>(i)));
  }

  std::int64_t doc_counter = 0;
  std::vector<int> doc_order(config.docs_per_segment);
  for (SegmentId seg = 0; seg < config.segments; ++seg) {
    // Injection targets per active event: an exact `intensity` fraction of
    // the segment's documents, chosen by a partial Fisher-Yates shuffle.
    std::vector<std::vector<bool>> injected(
        config.events.size(),
        std::vector<bool>(config.docs_per_segment, false));
    for (std::size_t e = 0; e < config.events.size(); ++e) {
      const PlantedEvent& event = config.events[e];
      if (seg < event.onset || seg >= event.onset + event.duration) {
        continue;
      }
      const int count = static_cast<int>(
          std::lround(event.intensity * config.docs_per_segment));
      for (int i = 0; i < config.docs_per_segment; ++i) {
        doc_order[i] = i;
      }
      for (int i = 0; i < count; ++i) {
        const int j = i + static_cast<int>(uniform_below(
                              rng, config.docs_per_segment - i));
        std::swap(doc_order[i], doc_order[j]);
        injected[e][doc_order[i]] = true;
      }
    }

    for (int d = 0; d < config.docs_per_segment; ++d) {
      const int length =
          config.min_tokens +
          static_cast<int>(uniform_below(
              rng, static_cast<std::uint64_t>(config.max_tokens -
                                              config.min_tokens + 1)));
      std::string text;
      for (int t = 0; t < length; ++t) {
        if (!text.empty()) {
          text += ' ';
        }
        text += synth_token(sample_rank());
      }
      for (std::size_t e = 0; e < config.events.size(); ++e) {
        if (!injected[e][d]) {
          continue;
        }
        text += ' ';
        text += config.events[e].keyword;
        for (const std::string& companion : companions[e]) {
          if (uniform01(rng) < 0.5) {
            text += ' ';
            text += companion;
          }
        }
      }

      nlohmann::ordered_json record;
      char id[24];
      std::snprintf(id, sizeof(id), "d%08lld",
                    static_cast<long long>(doc_counter++));
      record["id"] = id;
      record["timestamp"] =
          config.origin + seg * config.segment_width +
          (config.segment_width * static_cast<std::int64_t>(d)) /
              config.docs_per_segment;
      record["text"] = text;
      out << record.dump() << '\n';
    }
  }
}

}  // namespace trendstream
