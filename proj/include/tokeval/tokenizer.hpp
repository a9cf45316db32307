#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "tokeval/corpus.hpp"
#include "tokeval/vocabulary.hpp"

namespace tokeval {

enum class TokenizerKind { character, bpe, wordpiece, unigram };

std::string_view to_string(TokenizerKind kind);
std::optional<TokenizerKind> parse_tokenizer_kind(std::string_view name);

struct TokenizerTrainConfig {
  // Number of content tokens (specials excluded, see TrainedTokenizer).
  std::size_t target_vocab_size = 0;
  // Optional pre-segmentation units (grapheme initialization for BPE).
  // Entries never observed in the training data's greedy segmentation are
  // ignored; observed ones join the initial vocabulary before any merge.
  std::vector<std::string> initial_tokens;
  bool word_split = true;
  std::size_t unigram_seed_multiplier = 10;
  double unigram_prune_fraction = 0.2;
  std::size_t unigram_em_iterations = 2;
  std::size_t unigram_max_piece_length = 8;
  std::size_t min_pair_frequency = 2;
};

// Vocabulary layout: id 0 is the unknown token, id 1 the word-boundary meta
// symbol, content tokens from id 2. target_vocab_size counts content tokens
// only; the two specials ride along for free.
//
// word_split=true: text is split into words, each segmented independently,
// and the boundary id is emitted between words. word_split=false: whitespace
// is replaced by the meta symbol and the whole line is one symbol sequence,
// so merges/pieces may span former word boundaries.
struct TrainedTokenizer {
  static constexpr std::size_t kUnknownId = 0;
  static constexpr std::size_t kBoundaryId = 1;
  static constexpr std::size_t kNumSpecials = 2;

  TokenizerKind kind = TokenizerKind::character;
  bool word_split = true;
  Vocabulary vocab;
  std::vector<std::pair<std::string, std::string>> merges;  // bpe/wordpiece
  std::vector<double> token_logprob;  // unigram; parallel to vocab ids
  NormalizationConfig normalization;
  std::string meta_symbol = "▁";
  std::string unknown_token = "<unk>";
  // Content tokens short of target when training stopped early (no pair
  // reached min_pair_frequency). Training report, not persisted.
  std::size_t target_shortfall = 0;

  std::size_t content_size() const { return vocab.size() - kNumSpecials; }
};

struct EncodeResult {
  std::vector<std::size_t> ids;
  std::size_t unknown_count = 0;  // inputs mapped to the unknown id
};

struct DecodeResult {
  std::string text;
  bool contains_unknown = false;
};

TrainedTokenizer train_character(const Corpus& corpus,
                                 const TokenizerTrainConfig& config = {});
TrainedTokenizer train_bpe(const Corpus& corpus, const TokenizerTrainConfig& config);
TrainedTokenizer train_wordpiece(const Corpus& corpus,
                                 const TokenizerTrainConfig& config);
TrainedTokenizer train_unigram(const Corpus& corpus,
                               const TokenizerTrainConfig& config);
TrainedTokenizer train_tokenizer(TokenizerKind kind, const Corpus& corpus,
                                 const TokenizerTrainConfig& config);

// Precomputes lookup tables; use for batch encoding. encode() normalizes its
// input with the tokenizer's recorded NormalizationConfig first.
class Encoder {
 public:
  explicit Encoder(const TrainedTokenizer& tok);

  EncodeResult encode(std::string_view text) const;

 private:
  EncodeResult encode_symbols(const std::vector<std::string>& symbols) const;
  std::vector<std::string> initial_segments(
      const std::vector<std::string>& chars) const;

  const TrainedTokenizer& tok_;
  std::unordered_set<std::string> initial_pieces_;  // bpe/wordpiece greedy set
  std::size_t max_initial_len_ = 1;                 // in codepoints
  std::size_t max_piece_len_ = 1;                   // unigram viterbi window
};

EncodeResult encode(const TrainedTokenizer& tok, std::string_view text);
DecodeResult decode(const TrainedTokenizer& tok,
                    const std::vector<std::size_t>& ids);

// Subword tokens per word over the corpus; boundary ids excluded from the
// numerator. Throws UsageError when the corpus has no words.
double avg_tokens_per_word(const TrainedTokenizer& tok, const Corpus& corpus);

// Versioned JSON model document; byte-identical for identical tokenizers.
std::string save_tokenizer(const TrainedTokenizer& tok);
void save_tokenizer_file(const TrainedTokenizer& tok, const std::string& path);
TrainedTokenizer load_tokenizer(std::string_view document,
                                const std::string& source_name = "");
TrainedTokenizer load_tokenizer_file(const std::string& path);

}  // namespace tokeval
