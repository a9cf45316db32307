#pragma once

#include <istream>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace tokeval {

struct NormalizationConfig {
  bool lowercase = true;
  bool collapse_whitespace = true;
  bool strip_punctuation = true;

  bool operator==(const NormalizationConfig&) const = default;
};

// Applies lowercase -> strip punctuation -> collapse whitespace, in that
// order. Idempotent: normalize(normalize(x, c), c) == normalize(x, c).
//
// Lowercasing covers ASCII plus the Latin-1 and ligature range used by
// French (À..Þ, Œ, Ÿ). Punctuation stripping keeps apostrophes (' and ’)
// and hyphens, which are word-internal in French ("l'état", "peut-être").
// Collapsing maps runs of whitespace (including NBSP and narrow NBSP) to
// a single ASCII space and trims the ends.
std::string normalize(std::string_view text, const NormalizationConfig& config);

// Splits on the same whitespace set normalize() collapses. No empty words.
std::vector<std::string> split_words(std::string_view text);

struct Corpus {
  std::vector<std::string> utterances;  // normalized, one per input line
  std::string source_name;
  NormalizationConfig normalization;  // how the utterances were normalized
};

// One utterance per input line (CR before LF stripped); lines that are
// empty after normalization are dropped. Throws DataError with the byte
// offset on invalid UTF-8.
Corpus load_corpus(std::istream& in, const NormalizationConfig& config,
                   std::string source_name = "");
Corpus load_corpus_file(const std::string& path, const NormalizationConfig& config);

struct WordSet {
  std::set<std::string> words;
  std::string source;

  bool contains(const std::string& w) const { return words.count(w) != 0; }
  std::size_t size() const { return words.size(); }
};

// Union of whitespace-split words over all utterances of all corpora.
// Throws UsageError on an empty corpus list.
WordSet build_word_set(const std::vector<Corpus>& corpora);

}  // namespace tokeval
