#include "trendstream/normalize.hpp"

#include <algorithm>
#include <cctype>

namespace trendstream {

namespace {

bool is_ascii_lower(char c) { return c >= 'a' && c <= 'z'; }
bool is_ascii_digit(char c) { return c >= '0' && c <= '9'; }

bool is_scheme_char(char c) {
  return is_ascii_lower(c) || is_ascii_digit(c) || c == '+' || c == '-' ||
         c == '.';
}

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

// Blanks out maximal substrings that look like URLs: either a
// "scheme://" run or a token starting with "www.". A URL extends to the
// next whitespace character.
void blank_urls(std::string& text) {
  for (std::size_t i = 0; i < text.size();) {
    std::size_t start = std::string::npos;
    if (text.compare(i, 3, "://") == 0) {
      start = i;
      while (start > 0 && is_scheme_char(text[start - 1])) {
        --start;
      }
      if (start == i || !is_ascii_lower(text[start])) {
        i += 3;
        continue;
      }
    } else if (text.compare(i, 4, "www.") == 0 &&
               (i == 0 || is_space(text[i - 1]))) {
      start = i;
    }
    if (start == std::string::npos) {
      ++i;
      continue;
    }
    std::size_t end = start;
    while (end < text.size() && !is_space(text[end])) {
      ++end;
    }
    for (std::size_t j = start; j < end; ++j) {
      text[j] = ' ';
    }
    i = end;
  }
}

// Decodes the handful of entities that show up in tweet text. Unknown or
// non-ASCII entities become spaces so they cannot glue words together.
void decode_entities(std::string& text) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size();) {
    if (text[i] != '&') {
      out.push_back(text[i]);
      ++i;
      continue;
    }
    std::size_t semi = text.find(';', i + 1);
    if (semi == std::string::npos || semi - i > 8) {
      out.push_back(text[i]);
      ++i;
      continue;
    }
    std::string_view name(text.data() + i + 1, semi - i - 1);
    char decoded = 0;
    if (name == "amp") {
      decoded = '&';
    } else if (name == "lt") {
      decoded = '<';
    } else if (name == "gt") {
      decoded = '>';
    } else if (name == "quot") {
      decoded = '"';
    } else if (name == "apos") {
      decoded = '\'';
    } else if (name.size() > 1 && name[0] == '#') {
      int code = 0;
      bool ok = true;
      for (char c : name.substr(1)) {
        if (!is_ascii_digit(c)) {
          ok = false;
          break;
        }
        code = code * 10 + (c - '0');
        if (code > 0x10FFFF) {
          ok = false;
          break;
        }
      }
      decoded = (ok && code > 0 && code < 128) ? static_cast<char>(code) : ' ';
      if (!ok) {
        out.push_back(text[i]);
        ++i;
        continue;
      }
    } else {
      out.push_back(text[i]);
      ++i;
      continue;
    }
    out.push_back(decoded);
    i = semi + 1;
  }
  text = std::move(out);
}

bool matches_suffix(const std::string& token, const SuffixRule& rule) {
  return token.size() > rule.suffix.size() &&
         token.compare(token.size() - rule.suffix.size(), rule.suffix.size(),
                       rule.suffix) == 0;
}

// Letters that commonly double before -ing/-ed ("running", "stopped").
// 'l', 's' and 'f' are excluded so "fall", "pass" and "stuff" survive.
bool doubling_consonant(char c) {
  switch (c) {
    case 'b':
    case 'd':
    case 'g':
    case 'k':
    case 'm':
    case 'n':
    case 'p':
    case 'r':
    case 't':
    case 'v':
    case 'z':
      return true;
    default:
      return false;
  }
}

bool ends_with(const std::string& s, std::string_view suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

// A candidate stem is rejected when its shape tells us the strip was wrong
// (guards per rule) or when another rule would still fire on it; the second
// check keeps lemmatization a fixed point under re-normalization.
bool stem_guards_ok(const std::string& stem, const SuffixRule& rule) {
  if (static_cast<int>(stem.size()) < rule.min_stem) {
    return false;
  }
  if (rule.suffix == "s") {
    if (ends_with(stem, "s") || ends_with(stem, "i") || ends_with(stem, "'")) {
      return false;
    }
  } else if (rule.suffix == "es") {
    if (!(ends_with(stem, "ss") || ends_with(stem, "x") ||
          ends_with(stem, "z") || ends_with(stem, "ch") ||
          ends_with(stem, "sh") || ends_with(stem, "o"))) {
      return false;
    }
  } else if (rule.suffix == "ed") {
    if (ends_with(stem, "e")) {  // protects "-eed" words like "need"
      return false;
    }
  }
  return true;
}

std::string apply_rule(const std::string& token, const SuffixRule& rule) {
  std::string stem =
      token.substr(0, token.size() - rule.suffix.size()) + rule.replacement;
  if (rule.undo_doubling && stem.size() >= 2 &&
      stem[stem.size() - 1] == stem[stem.size() - 2] &&
      doubling_consonant(stem.back())) {
    stem.pop_back();
  }
  return stem;
}

std::vector<SuffixRule> longest_first(const std::vector<SuffixRule>& rules) {
  std::vector<SuffixRule> ordered(rules);
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const SuffixRule& a, const SuffixRule& b) {
                     return a.suffix.size() > b.suffix.size();
                   });
  return ordered;
}

bool any_rule_applies(const std::string& token,
                      const std::vector<SuffixRule>& rules) {
  for (const SuffixRule& rule : rules) {
    if (matches_suffix(token, rule) &&
        stem_guards_ok(apply_rule(token, rule), rule)) {
      return true;
    }
  }
  return false;
}

// `rules` must already be ordered longest suffix first.
std::string lemmatize_once(const std::string& token,
                           const std::vector<SuffixRule>& rules) {
  for (const SuffixRule& rule : rules) {
    if (!matches_suffix(token, rule)) {
      continue;
    }
    std::string stem = apply_rule(token, rule);
    if (!stem_guards_ok(stem, rule)) {
      continue;
    }
    if (any_rule_applies(stem, rules)) {
      continue;  // would not be a fixed point; skip this rule
    }
    return stem;
  }
  return token;
}

}  // namespace

std::vector<SuffixRule> default_suffix_rules() {
  // Longest suffix first; ties keep this declaration order.
  return {
      {"ing", "", 3, true},
      {"'s", "", 2, false},
      {"es", "", 2, false},
      {"ed", "", 3, true},
      {"s", "", 3, false},
  };
}

NormalizationConfig NormalizationConfig::defaults() {
  NormalizationConfig config;
  config.stopwords = default_stopwords();
  config.suffix_rules = default_suffix_rules();
  return config;
}

std::string lemmatize_token(const std::string& token,
                            const std::vector<SuffixRule>& rules) {
  return lemmatize_once(token, longest_first(rules));
}

std::vector<std::string> normalize(std::string_view text,
                                   const NormalizationConfig& config) {
  std::string work(text);
  for (char& c : work) {
    if (c >= 'A' && c <= 'Z') {
      c = static_cast<char>(c - 'A' + 'a');
    }
  }
  if (config.remove_urls) {
    blank_urls(work);
  }
  decode_entities(work);
  for (char& c : work) {
    bool keep = is_ascii_lower(c) || c == '\'' || c == '#' ||
                (is_ascii_digit(c) && !config.remove_numbers);
    if (!keep) {
      c = ' ';
    }
  }

  const std::vector<SuffixRule> rules = longest_first(config.suffix_rules);

  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < work.size()) {
    while (i < work.size() && work[i] == ' ') {
      ++i;
    }
    std::size_t start = i;
    while (i < work.size() && work[i] != ' ') {
      ++i;
    }
    if (i == start) {
      continue;
    }
    std::size_t lo = start;
    std::size_t hi = i;
    while (lo < hi && (work[lo] == '\'' || work[lo] == '#')) {
      ++lo;
    }
    while (hi > lo && (work[hi - 1] == '\'' || work[hi - 1] == '#')) {
      --hi;
    }
    if (lo == hi) {
      continue;
    }
    std::string token = work.substr(lo, hi - lo);
    if (!rules.empty()) {
      token = lemmatize_once(token, rules);
    }
    if (config.stopwords.count(token)) {
      continue;
    }
    tokens.push_back(std::move(token));
  }
  return tokens;
}

double ascii_letter_fraction(std::string_view text) {
  std::size_t ascii_letters = 0;
  std::size_t non_ascii = 0;
  for (unsigned char c : text) {
    if (std::isalpha(c) && c < 128) {
      ++ascii_letters;
    } else if (c >= 128 && (c & 0xC0) != 0x80) {
      ++non_ascii;  // count UTF-8 lead bytes, not continuations
    }
  }
  std::size_t total = ascii_letters + non_ascii;
  if (total == 0) {
    return 1.0;
  }
  return static_cast<double>(ascii_letters) / static_cast<double>(total);
}

}  // namespace trendstream
