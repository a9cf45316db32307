#include <doctest.h>

#include <sstream>
#include <string>
#include <vector>

#include "tokeval/errors.hpp"
#include "tokeval/tokenizer.hpp"
#include "tokeval/utf8.hpp"

using namespace tokeval;

static Corpus corpus_of(const std::string& text) {
  std::istringstream in(text);
  return load_corpus(in, NormalizationConfig{}, "test");
}

static std::vector<std::string> content_tokens(const TrainedTokenizer& tok) {
  std::vector<std::string> out(tok.vocab.tokens().begin() + 2,
                               tok.vocab.tokens().end());
  return out;
}

TEST_CASE("bpe hand case: ab ab ab with target 3") {
  TokenizerTrainConfig config;
  config.target_vocab_size = 3;
  TrainedTokenizer tok = train_bpe(corpus_of("ab ab ab\n"), config);
  REQUIRE(tok.merges.size() == 1);
  CHECK(tok.merges[0] == std::pair<std::string, std::string>("a", "b"));
  CHECK(tok.content_size() == 3);
  CHECK(tok.vocab.contains("ab"));
  CHECK(tok.vocab.contains("a"));
  CHECK(tok.vocab.contains("b"));
  CHECK(tok.vocab.token(0) == "<unk>");
  CHECK(tok.vocab.token(1) == "▁");
  CHECK(tok.target_shortfall == 0);
}

TEST_CASE("bpe hand case: abc abd with target 5") {
  TokenizerTrainConfig config;
  config.target_vocab_size = 5;
  TrainedTokenizer tok = train_bpe(corpus_of("abc abd\n"), config);
  // alphabet {a,b,c,d}; only pair (a,b) reaches frequency 2
  REQUIRE(tok.merges.size() == 1);
  CHECK(tok.merges[0] == std::pair<std::string, std::string>("a", "b"));
  std::vector<std::string> content = content_tokens(tok);
  REQUIRE(content.size() == 5);
  CHECK(content[0] == "a");
  CHECK(content[1] == "b");
  CHECK(content[2] == "c");
  CHECK(content[3] == "d");
  CHECK(content[4] == "ab");
}

TEST_CASE("bpe counts overlapping adjacencies") {
  // "aaa" has two (a,a) adjacencies per occurrence, beating (b,c)'s two.
  TokenizerTrainConfig config;
  config.target_vocab_size = 5;
  TrainedTokenizer tok = train_bpe(corpus_of("aaa bc bc\n"), config);
  REQUIRE(!tok.merges.empty());
  CHECK(tok.merges[0] == std::pair<std::string, std::string>("a", "a"));
}

TEST_CASE("bpe stops with a shortfall below min pair frequency") {
  TokenizerTrainConfig config;
  config.target_vocab_size = 10;
  TrainedTokenizer tok = train_bpe(corpus_of("abc abd\n"), config);
  CHECK(tok.merges.size() == 1);  // only (a,b) is frequent enough
  CHECK(tok.content_size() == 5);
  CHECK(tok.target_shortfall == 5);

  config.min_pair_frequency = 1;
  TrainedTokenizer greedy = train_bpe(corpus_of("abc abd\n"), config);
  // merges continue down to count 1: (a,b), (ab,c), (ab,d), then no pairs left
  CHECK(greedy.content_size() == 7);
  CHECK(greedy.target_shortfall == 3);
}

TEST_CASE("bpe breaks count ties by merged string") {
  // (a,b) and (c,d) both occur twice; "ab" < "cd" so (a,b) merges first.
  TokenizerTrainConfig config;
  config.target_vocab_size = 6;
  TrainedTokenizer tok = train_bpe(corpus_of("ab cd ab cd\n"), config);
  REQUIRE(tok.merges.size() == 2);
  CHECK(tok.merges[0] == std::pair<std::string, std::string>("a", "b"));
  CHECK(tok.merges[1] == std::pair<std::string, std::string>("c", "d"));
}

TEST_CASE("bpe weights pairs by word frequency") {
  // "xy" appears three times as a word, (p,q) only twice.
  TokenizerTrainConfig config;
  config.target_vocab_size = 5;
  TrainedTokenizer tok = train_bpe(corpus_of("xy pq xy\nxy pq\n"), config);
  REQUIRE(!tok.merges.empty());
  CHECK(tok.merges[0] == std::pair<std::string, std::string>("x", "y"));
}

TEST_CASE("wordpiece prefers high likelihood ratio over raw count") {
  // (a,b) count 5 but a,b are frequent singles: score 5/(9*9).
  // (c,d) count 2 with rare singles: score 2/(2*2) wins.
  TokenizerTrainConfig config;
  config.target_vocab_size = 6;
  TrainedTokenizer wp =
      train_wordpiece(corpus_of("ab ab ab ab ab cd cd aaaa bbbb\n"), config);
  REQUIRE(!wp.merges.empty());
  CHECK(wp.merges[0] == std::pair<std::string, std::string>("c", "d"));

  TrainedTokenizer bp =
      train_bpe(corpus_of("ab ab ab ab ab cd cd aaaa bbbb\n"), config);
  REQUIRE(!bp.merges.empty());
  CHECK(bp.merges[0] == std::pair<std::string, std::string>("a", "b"));
}

TEST_CASE("character training takes the sorted alphabet and ignores target") {
  TrainedTokenizer tok = train_character(corpus_of("ba cab\n"));
  std::vector<std::string> content = content_tokens(tok);
  REQUIRE(content.size() == 3);
  CHECK(content[0] == "a");
  CHECK(content[1] == "b");
  CHECK(content[2] == "c");
  CHECK(tok.merges.empty());
}

TEST_CASE("grapheme-initialized bpe seeds observed inventory entries") {
  TokenizerTrainConfig config;
  // 7 observed characters + "ch" + "eau" = 9 initial tokens, then 3 merges
  config.target_vocab_size = 12;
  config.initial_tokens = {"ch", "eau", "qu"};  // "qu" never observed
  TrainedTokenizer tok = train_bpe(corpus_of("chateau chateau gateau\n"), config);

  CHECK(tok.vocab.contains("ch"));
  CHECK(tok.vocab.contains("eau"));
  CHECK(!tok.vocab.contains("qu"));
  CHECK(tok.vocab.contains("c"));  // every observed character stays reachable
  CHECK(tok.vocab.contains("e"));

  // derived merge sequence: (a,t), (at,eau), (ch,ateau)
  REQUIRE(tok.merges.size() == 3);
  CHECK(tok.merges[0] == std::pair<std::string, std::string>("a", "t"));
  CHECK(tok.merges[1] == std::pair<std::string, std::string>("at", "eau"));
  CHECK(tok.merges[2] == std::pair<std::string, std::string>("ch", "ateau"));
  CHECK(tok.content_size() == 12);

  EncodeResult r = encode(tok, "chateau");
  REQUIRE(r.ids.size() == 1);
  CHECK(tok.vocab.token(r.ids[0]) == "chateau");
  CHECK(r.unknown_count == 0);

  EncodeResult g = encode(tok, "gateau");
  REQUIRE(g.ids.size() == 2);
  CHECK(tok.vocab.token(g.ids[0]) == "g");
  CHECK(tok.vocab.token(g.ids[1]) == "ateau");

  // "ch", "u", "e" are known; "q" and "i" fall back to the unknown id
  EncodeResult q = encode(tok, "quiche");
  CHECK(q.unknown_count == 2);
}

TEST_CASE("no-word-split training merges across word boundaries") {
  TokenizerTrainConfig config;
  config.target_vocab_size = 12;
  config.word_split = false;
  config.min_pair_frequency = 2;
  TrainedTokenizer tok = train_bpe(corpus_of("le chat\nle chat\nle chat\n"), config);
  CHECK_FALSE(tok.word_split);

  bool spans_boundary = false;
  for (const auto& token : tok.vocab.tokens())
    if (token.size() > 3 && token.find("▁") != std::string::npos)
      spans_boundary = true;
  CHECK(spans_boundary);

  EncodeResult r = encode(tok, "le chat");
  DecodeResult d = decode(tok, r.ids);
  CHECK(d.text == "le chat");
  CHECK_FALSE(d.contains_unknown);
}

TEST_CASE("vocab size equals initial size plus merge count") {
  TokenizerTrainConfig config;
  config.target_vocab_size = 30;
  config.min_pair_frequency = 1;
  Corpus c = corpus_of("le chat mange\nle chien dort\nle chat dort bien\n");
  for (TokenizerKind kind : {TokenizerKind::bpe, TokenizerKind::wordpiece}) {
    TrainedTokenizer tok = train_tokenizer(kind, c, config);
    std::size_t alphabet = 0;
    for (const auto& t : content_tokens(tok))
      if (utf8::length(t) == 1) ++alphabet;
    // every merge adds exactly one token and no merge duplicates another
    CHECK(tok.content_size() == alphabet + tok.merges.size());
  }
}

TEST_CASE("training rejects unreachable targets") {
  TokenizerTrainConfig config;
  config.target_vocab_size = 2;  // alphabet alone is 3
  CHECK_THROWS_AS(train_bpe(corpus_of("abc\n"), config), UsageError);
  config.target_vocab_size = 0;
  CHECK_THROWS_AS(train_bpe(corpus_of("abc\n"), config), UsageError);
}

TEST_CASE("training on an empty corpus is a usage error") {
  TokenizerTrainConfig config;
  config.target_vocab_size = 5;
  Corpus empty;
  CHECK_THROWS_AS(train_bpe(empty, config), UsageError);
  CHECK_THROWS_AS(train_character(empty), UsageError);
}

TEST_CASE("merge training is deterministic across runs") {
  TokenizerTrainConfig config;
  config.target_vocab_size = 25;
  config.min_pair_frequency = 1;
  Corpus c = corpus_of("le chat mange\nle chien dort\nle chat dort\nbonjour\n");
  for (TokenizerKind kind :
       {TokenizerKind::bpe, TokenizerKind::wordpiece, TokenizerKind::character}) {
    TrainedTokenizer a = train_tokenizer(kind, c, config);
    TrainedTokenizer b = train_tokenizer(kind, c, config);
    CHECK(save_tokenizer(a) == save_tokenizer(b));
  }
}

TEST_CASE("trainers record the normalization they saw") {
  NormalizationConfig norm;
  norm.lowercase = false;
  std::istringstream in("AB AB\n");
  Corpus c = load_corpus(in, norm, "t");
  TokenizerTrainConfig config;
  config.target_vocab_size = 3;
  TrainedTokenizer tok = train_bpe(c, config);
  CHECK(tok.normalization == norm);
  CHECK(tok.vocab.contains("A"));

  // encode applies the recorded normalization: input stays upper-case
  EncodeResult r = encode(tok, "AB");
  REQUIRE(r.ids.size() == 1);
  CHECK(tok.vocab.token(r.ids[0]) == "AB");
}
