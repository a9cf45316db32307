#include <algorithm>
#include <map>
#include <set>
#include <utility>

#include "tokeval/errors.hpp"
#include "tokeval/tokenizer.hpp"
#include "tokeval/utf8.hpp"
#include "tokenizer_internal.hpp"

namespace tokeval {

std::string_view to_string(TokenizerKind kind) {
  switch (kind) {
    case TokenizerKind::character: return "character";
    case TokenizerKind::bpe: return "bpe";
    case TokenizerKind::wordpiece: return "wordpiece";
    case TokenizerKind::unigram: return "unigram";
  }
  return "?";
}

std::optional<TokenizerKind> parse_tokenizer_kind(std::string_view name) {
  if (name == "character") return TokenizerKind::character;
  if (name == "bpe") return TokenizerKind::bpe;
  if (name == "wordpiece") return TokenizerKind::wordpiece;
  if (name == "unigram") return TokenizerKind::unigram;
  return std::nullopt;
}

namespace detail {

std::map<std::string, std::size_t> collect_units(const Corpus& corpus,
                                                 bool word_split,
                                                 const std::string& meta_symbol) {
  std::map<std::string, std::size_t> units;
  for (const std::string& utt : corpus.utterances) {
    if (word_split) {
      for (std::string& w : split_words(utt)) ++units[std::move(w)];
    } else {
      std::string line;
      for (char c : utt)
        if (c == ' ') line += meta_symbol; else line += c;
      if (!line.empty()) ++units[std::move(line)];
    }
  }
  return units;
}

std::vector<std::string> observed_chars(
    const std::map<std::string, std::size_t>& units,
    const std::string& meta_symbol) {
  std::set<std::string> chars;
  for (const auto& [unit, count] : units)
    for (std::string& c : utf8::split(unit))
      if (c != meta_symbol) chars.insert(std::move(c));
  return {chars.begin(), chars.end()};
}

std::vector<std::string> greedy_segments(
    const std::vector<std::string>& chars,
    const std::unordered_set<std::string>& pieces, std::size_t max_len) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < chars.size()) {
    std::size_t take = 1;
    std::string best = chars[i];
    std::string candidate = chars[i];
    for (std::size_t len = 2; len <= max_len && i + len <= chars.size(); ++len) {
      candidate += chars[i + len - 1];
      if (pieces.count(candidate)) {
        take = len;
        best = candidate;
      }
    }
    out.push_back(std::move(best));
    i += take;
  }
  return out;
}

TrainedTokenizer make_base(TokenizerKind kind, const TokenizerTrainConfig& config,
                           const Corpus& corpus) {
  TrainedTokenizer tok;
  tok.kind = kind;
  tok.word_split = config.word_split;
  tok.normalization = corpus.normalization;
  tok.vocab.add(tok.unknown_token);  // id 0
  tok.vocab.add(tok.meta_symbol);    // id 1
  return tok;
}

namespace {

struct WorkUnit {
  std::vector<std::string> symbols;
  std::size_t count;
};

using Pair = std::pair<std::string, std::string>;

// Every adjacency counts, overlapping included; replacement is greedy
// left-to-right, so count(x,x) on "xxx" is 2 but only one merge applies.
std::map<Pair, std::size_t> count_pairs(const std::vector<WorkUnit>& work) {
  std::map<Pair, std::size_t> counts;
  for (const WorkUnit& u : work)
    for (std::size_t i = 0; i + 1 < u.symbols.size(); ++i)
      counts[{u.symbols[i], u.symbols[i + 1]}] += u.count;
  return counts;
}

std::map<std::string, std::size_t> count_symbols(
    const std::vector<WorkUnit>& work) {
  std::map<std::string, std::size_t> counts;
  for (const WorkUnit& u : work)
    for (const std::string& s : u.symbols) counts[s] += u.count;
  return counts;
}

void apply_merge(std::vector<WorkUnit>& work, const Pair& pair,
                 const std::string& merged) {
  for (WorkUnit& u : work) {
    std::vector<std::string> next;
    next.reserve(u.symbols.size());
    std::size_t i = 0;
    while (i < u.symbols.size()) {
      if (i + 1 < u.symbols.size() && u.symbols[i] == pair.first &&
          u.symbols[i + 1] == pair.second) {
        next.push_back(merged);
        i += 2;
      } else {
        next.push_back(u.symbols[i]);
        ++i;
      }
    }
    u.symbols = std::move(next);
  }
}

// (count, merged string, pair) ordering shared by BPE and WordPiece:
// higher rank wins; ties fall through to the lexicographically smaller
// merged string, then the smaller pair.
bool better_candidate(const std::string& merged1, const Pair& p1,
                      const std::string& merged2, const Pair& p2) {
  if (merged1 != merged2) return merged1 < merged2;
  return p1 < p2;
}

TrainedTokenizer train_merge_based(TokenizerKind kind, const Corpus& corpus,
                                   const TokenizerTrainConfig& config) {
  if (corpus.utterances.empty()) throw UsageError("training corpus is empty");
  TrainedTokenizer tok = detail::make_base(kind, config, corpus);

  auto units = detail::collect_units(corpus, config.word_split, tok.meta_symbol);
  if (units.empty()) throw UsageError("training corpus has no words");
  std::vector<std::string> alphabet = detail::observed_chars(units, tok.meta_symbol);

  // Initial pieces: observed characters, plus any initial_tokens (grapheme
  // initialization) that actually occur in the greedy segmentation.
  std::unordered_set<std::string> seg_pieces(alphabet.begin(), alphabet.end());
  std::size_t max_seg_len = 1;
  for (const std::string& t : config.initial_tokens) {
    if (t.empty()) throw UsageError("empty initial token");
    seg_pieces.insert(t);
    max_seg_len = std::max(max_seg_len, utf8::length(t));
  }

  std::vector<WorkUnit> work;
  work.reserve(units.size());
  std::set<std::string> used_initials;  // multi-codepoint initial tokens seen
  for (const auto& [unit, count] : units) {
    std::vector<std::string> symbols =
        detail::greedy_segments(utf8::split(unit), seg_pieces, max_seg_len);
    for (const std::string& s : symbols)
      if (utf8::length(s) > 1) used_initials.insert(s);
    work.push_back({std::move(symbols), count});
  }

  for (const std::string& c : alphabet)
    if (c != tok.unknown_token) tok.vocab.add(c);
  // Inventory order for the observed multi-character initial tokens.
  for (const std::string& t : config.initial_tokens)
    if (used_initials.count(t) && !tok.vocab.contains(t)) tok.vocab.add(t);

  if (config.target_vocab_size < tok.content_size())
    throw UsageError("target vocab size " +
                     std::to_string(config.target_vocab_size) +
                     " is below the initial alphabet size " +
                     std::to_string(tok.content_size()));

  std::size_t min_freq = std::max<std::size_t>(config.min_pair_frequency, 1);
  while (tok.content_size() < config.target_vocab_size) {
    std::map<Pair, std::size_t> pair_counts = count_pairs(work);
    std::map<std::string, std::size_t> symbol_counts;
    if (kind == TokenizerKind::wordpiece) symbol_counts = count_symbols(work);

    bool found = false;
    Pair best;
    std::string best_merged;
    std::size_t best_count = 0;
    unsigned __int128 best_den = 1;  // wordpiece score = count / (cx*cy)
    for (const auto& [pair, count] : pair_counts) {
      if (count < min_freq) continue;
      std::string merged = pair.first + pair.second;
      if (tok.vocab.contains(merged)) continue;  // would duplicate a token
      unsigned __int128 den = 1;
      if (kind == TokenizerKind::wordpiece)
        den = static_cast<unsigned __int128>(symbol_counts[pair.first]) *
              symbol_counts[pair.second];
      bool wins;
      if (!found) {
        wins = true;
      } else if (kind == TokenizerKind::bpe) {
        wins = count > best_count ||
               (count == best_count &&
                better_candidate(merged, pair, best_merged, best));
      } else {
        // Scores compared exactly by cross-multiplication.
        unsigned __int128 lhs = static_cast<unsigned __int128>(count) * best_den;
        unsigned __int128 rhs = static_cast<unsigned __int128>(best_count) * den;
        wins = lhs > rhs ||
               (lhs == rhs && better_candidate(merged, pair, best_merged, best));
      }
      if (wins) {
        found = true;
        best = pair;
        best_merged = std::move(merged);
        best_count = count;
        best_den = den;
      }
    }

    if (!found) {
      tok.target_shortfall = config.target_vocab_size - tok.content_size();
      break;
    }
    tok.vocab.add(best_merged);
    tok.merges.push_back(best);
    apply_merge(work, best, best_merged);
  }
  return tok;
}

}  // namespace
}  // namespace detail

TrainedTokenizer train_character(const Corpus& corpus,
                                 const TokenizerTrainConfig& config) {
  if (corpus.utterances.empty()) throw UsageError("training corpus is empty");
  TrainedTokenizer tok =
      detail::make_base(TokenizerKind::character, config, corpus);
  auto units = detail::collect_units(corpus, config.word_split, tok.meta_symbol);
  if (units.empty()) throw UsageError("training corpus has no words");
  for (const std::string& c : detail::observed_chars(units, tok.meta_symbol))
    if (c != tok.unknown_token) tok.vocab.add(c);
  return tok;
}

TrainedTokenizer train_bpe(const Corpus& corpus,
                           const TokenizerTrainConfig& config) {
  return detail::train_merge_based(TokenizerKind::bpe, corpus, config);
}

TrainedTokenizer train_wordpiece(const Corpus& corpus,
                                 const TokenizerTrainConfig& config) {
  return detail::train_merge_based(TokenizerKind::wordpiece, corpus, config);
}

TrainedTokenizer train_tokenizer(TokenizerKind kind, const Corpus& corpus,
                                 const TokenizerTrainConfig& config) {
  switch (kind) {
    case TokenizerKind::character: return train_character(corpus, config);
    case TokenizerKind::bpe: return train_bpe(corpus, config);
    case TokenizerKind::wordpiece: return train_wordpiece(corpus, config);
    case TokenizerKind::unigram: return train_unigram(corpus, config);
  }
  throw UsageError("unknown tokenizer kind");
}

}  // namespace tokeval
