#pragma once

#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace trendstream {

/// One suffix-rewrite step of the lemmatizer. A rule fires when the token
/// ends with `suffix`, the remaining stem has at least `min_stem` characters
/// and the stem passes the rule-specific guards. At most one rule is applied
/// per token, longest suffix first.
struct SuffixRule {
  std::string suffix;
  std::string replacement;
  int min_stem = 2;
  bool undo_doubling = false;
};

/// Returns the built-in rule table: possessive 's, -ing, -ed, plural -es/-s
/// (with consonant-doubling undo for -ing/-ed).
std::vector<SuffixRule> default_suffix_rules();

struct NormalizationConfig {
  std::set<std::string> stopwords;
  bool remove_urls = true;
  bool remove_numbers = true;
  std::vector<SuffixRule> suffix_rules;  // empty disables lemmatization
  // Fraction of ASCII letters among letter-like characters below which a
  // document is treated as non-English. Disabled when negative.
  double english_threshold = -1.0;

  static NormalizationConfig defaults();
};

/// Text -> keyword tokens. Applies, in order: lowercasing, URL removal,
/// HTML-entity decoding, removal of characters other than letters, digits,
/// apostrophe and '#' (digits too when configured), whitespace tokenization,
/// boundary stripping of apostrophes and '#', suffix-rule lemmatization, and
/// stop-word removal. Duplicates and token order are preserved.
std::vector<std::string> normalize(std::string_view text,
                                   const NormalizationConfig& config);

/// Applies the suffix-rule table to a single already-clean token.
std::string lemmatize_token(const std::string& token,
                            const std::vector<SuffixRule>& rules);

/// ASCII letters divided by (ASCII letters + non-ASCII characters).
/// Returns 1.0 when the text has neither.
double ascii_letter_fraction(std::string_view text);

/// Built-in English stop-word list (closed-class words and contractions).
const std::set<std::string>& default_stopwords();

/// Loads one stop word per line; lines starting with '#' are ignored.
std::set<std::string> load_stopwords(const std::string& path);

}  // namespace trendstream
