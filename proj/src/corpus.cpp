#include "tokeval/corpus.hpp"

#include <fstream>
#include <sstream>

#include "tokeval/errors.hpp"
#include "tokeval/utf8.hpp"

namespace tokeval {

namespace {

bool is_space_cp(uint32_t cp) {
  switch (cp) {
    case ' ':
    case '\t':
    case '\n':
    case '\r':
    case '\f':
    case '\v':
    case 0x00A0:  // no-break space
    case 0x202F:  // narrow no-break space (French usage before ! ? : ;)
      return true;
    default:
      return false;
  }
}

// Punctuation removed by strip_punctuation. Apostrophes (' and ’) and the
// hyphen-minus are deliberately absent: they are word-internal in French.
bool is_strippable_punct(uint32_t cp) {
  if (cp < 0x80) {
    switch (static_cast<char>(cp)) {
      case '!': case '"': case '#': case '$': case '%': case '&':
      case '(': case ')': case '*': case '+': case ',': case '.':
      case '/': case ':': case ';': case '<': case '=': case '>':
      case '?': case '@': case '[': case '\\': case ']': case '^':
      case '_': case '`': case '{': case '|': case '}': case '~':
        return true;
      default:
        return false;
    }
  }
  switch (cp) {
    case 0x00A1:  // ¡
    case 0x00AB:  // «
    case 0x00BB:  // »
    case 0x00BF:  // ¿
    case 0x2013:  // –
    case 0x2014:  // —
    case 0x2015:  // ―
    case 0x2018:  // ‘
    case 0x201C:  // “
    case 0x201D:  // ”
    case 0x201E:  // „
    case 0x2026:  // …
    case 0x2039:  // ‹
    case 0x203A:  // ›
      return true;
    default:
      return false;
  }
}

uint32_t to_lower_cp(uint32_t cp) {
  if (cp >= 'A' && cp <= 'Z') return cp + 0x20;
  // Latin-1 supplement: À..Þ map to à..þ, excluding ×.
  if (cp >= 0x00C0 && cp <= 0x00DE && cp != 0x00D7) return cp + 0x20;
  if (cp == 0x0152) return 0x0153;  // Œ -> œ
  if (cp == 0x0178) return 0x00FF;  // Ÿ -> ÿ
  return cp;
}

}  // namespace

std::string normalize(std::string_view text, const NormalizationConfig& config) {
  std::vector<uint32_t> cps = utf8::decode(text);
  std::vector<uint32_t> out;
  out.reserve(cps.size());

  bool pending_space = false;
  bool seen_content = false;
  for (uint32_t cp : cps) {
    if (config.lowercase) cp = to_lower_cp(cp);
    if (config.strip_punctuation && is_strippable_punct(cp)) continue;
    if (config.collapse_whitespace) {
      if (is_space_cp(cp)) {
        pending_space = seen_content;
        continue;
      }
      if (pending_space) {
        out.push_back(' ');
        pending_space = false;
      }
      seen_content = true;
    }
    out.push_back(cp);
  }
  return utf8::encode(out);
}

std::vector<std::string> split_words(std::string_view text) {
  std::vector<uint32_t> cps = utf8::decode(text);
  std::vector<std::string> words;
  std::vector<uint32_t> current;
  for (uint32_t cp : cps) {
    if (is_space_cp(cp)) {
      if (!current.empty()) {
        words.push_back(utf8::encode(current));
        current.clear();
      }
    } else {
      current.push_back(cp);
    }
  }
  if (!current.empty()) words.push_back(utf8::encode(current));
  return words;
}

Corpus load_corpus(std::istream& in, const NormalizationConfig& config,
                   std::string source_name) {
  std::ostringstream buffer;
  buffer << in.rdbuf();
  std::string content = buffer.str();

  if (std::size_t off = utf8::invalid_offset(content); off != utf8::npos) {
    throw DataError(source_name.empty()
                        ? "invalid UTF-8 at byte offset " + std::to_string(off)
                        : source_name + ": invalid UTF-8 at byte offset " +
                              std::to_string(off));
  }

  Corpus corpus;
  corpus.source_name = std::move(source_name);
  corpus.normalization = config;
  std::size_t pos = 0;
  while (pos <= content.size()) {
    std::size_t nl = content.find('\n', pos);
    std::string_view line;
    if (nl == std::string::npos) {
      if (pos == content.size()) break;
      line = std::string_view(content).substr(pos);
      pos = content.size() + 1;
    } else {
      line = std::string_view(content).substr(pos, nl - pos);
      pos = nl + 1;
    }
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    std::string utt = normalize(line, config);
    if (!utt.empty()) corpus.utterances.push_back(std::move(utt));
  }
  return corpus;
}

Corpus load_corpus_file(const std::string& path, const NormalizationConfig& config) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open corpus file: " + path);
  return load_corpus(in, config, path);
}

WordSet build_word_set(const std::vector<Corpus>& corpora) {
  if (corpora.empty()) throw UsageError("build_word_set: no corpora given");
  WordSet set;
  for (const Corpus& corpus : corpora) {
    if (!set.source.empty() && !corpus.source_name.empty()) set.source += "+";
    set.source += corpus.source_name;
    for (const std::string& utt : corpus.utterances) {
      for (std::string& w : split_words(utt)) set.words.insert(std::move(w));
    }
  }
  return set;
}

}  // namespace tokeval
