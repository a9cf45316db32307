#include <doctest.h>

#include <sstream>
#include <string>
#include <vector>

#include "tokeval/corpus.hpp"
#include "tokeval/errors.hpp"

using namespace tokeval;

static const NormalizationConfig kDefault{};

TEST_CASE("normalize lowercases French text") {
  CHECK(normalize("Le Chat", kDefault) == "le chat");
  CHECK(normalize("ÉTÉ À NOËL", kDefault) == "été à noël");
  CHECK(normalize("ŒUF Ça Ÿ", kDefault) == "œuf ça ÿ");
  // multiplication sign sits between Ö and Ø but is not a letter
  CHECK(normalize("a×b", kDefault) == "a×b");
}

TEST_CASE("normalize strips punctuation but keeps apostrophes and hyphens") {
  CHECK(normalize("Bonjour, le monde !", kDefault) == "bonjour le monde");
  CHECK(normalize("l'état, c'est moi.", kDefault) == "l'état c'est moi");
  CHECK(normalize("peut-être…", kDefault) == "peut-être");
  CHECK(normalize("«guillemets» et “quotes”", kDefault) == "guillemets et quotes");
  CHECK(normalize("j’aime", kDefault) == "j’aime");  // U+2019 apostrophe kept
}

TEST_CASE("normalize collapses whitespace runs including NBSP") {
  CHECK(normalize("  le \t chat \n", kDefault) == "le chat");
  CHECK(normalize("le chat", kDefault) == "le chat");
  CHECK(normalize("le chat", kDefault) == "le chat");
  CHECK(normalize("", kDefault) == "");
  CHECK(normalize(" \t ", kDefault) == "");
  CHECK(normalize("!!!", kDefault) == "");
}

TEST_CASE("normalize is idempotent") {
  std::vector<std::string> samples = {
      "Le Chat ! ", "  ÉTÉ  à Noël, c'est ça. ", "peut-être…«oui»", "a×b - c"};
  for (const auto& s : samples) {
    std::string once = normalize(s, kDefault);
    CHECK(normalize(once, kDefault) == once);
  }
}

TEST_CASE("normalize respects disabled steps") {
  NormalizationConfig keep_case = kDefault;
  keep_case.lowercase = false;
  CHECK(normalize("Le Chat", keep_case) == "Le Chat");

  NormalizationConfig keep_punct = kDefault;
  keep_punct.strip_punctuation = false;
  CHECK(normalize("le chat!", keep_punct) == "le chat!");

  NormalizationConfig keep_ws = kDefault;
  keep_ws.collapse_whitespace = false;
  CHECK(normalize("le  chat", keep_ws) == "le  chat");
}

TEST_CASE("split_words splits on the collapsed whitespace set") {
  std::vector<std::string> words = split_words("le chat\tmange vite");
  REQUIRE(words.size() == 4);
  CHECK(words[0] == "le");
  CHECK(words[3] == "vite");
  CHECK(split_words("").empty());
  CHECK(split_words("   ").empty());
}

TEST_CASE("load_corpus reads one normalized utterance per line") {
  std::istringstream in("Le chat mange.\r\n\n  \nLE CHIEN !\n");
  Corpus c = load_corpus(in, kDefault, "mini");
  REQUIRE(c.utterances.size() == 2);
  CHECK(c.utterances[0] == "le chat mange");
  CHECK(c.utterances[1] == "le chien");
  CHECK(c.source_name == "mini");
  CHECK(c.normalization == kDefault);
}

TEST_CASE("load_corpus keeps a final line without newline") {
  std::istringstream in("un\ndeux");
  Corpus c = load_corpus(in, kDefault);
  REQUIRE(c.utterances.size() == 2);
  CHECK(c.utterances[1] == "deux");
}

TEST_CASE("load_corpus rejects invalid utf-8 with a byte offset") {
  std::istringstream in("ok\nbad\xff\n");
  CHECK_THROWS_AS(load_corpus(in, kDefault, "f"), DataError);
  std::istringstream in2("bad\xff\n");
  try {
    load_corpus(in2, kDefault, "f");
    FAIL("expected DataError");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("f") != std::string::npos);
  }
}

TEST_CASE("build_word_set unions words across corpora") {
  std::istringstream a("le chat dort\n"), b("le chien aboie\n");
  Corpus ca = load_corpus(a, kDefault, "a");
  Corpus cb = load_corpus(b, kDefault, "b");
  WordSet ws = build_word_set({ca, cb});
  CHECK(ws.size() == 5);
  CHECK(ws.contains("le"));
  CHECK(ws.contains("aboie"));
  CHECK(!ws.contains("gambade"));
  CHECK(ws.source == "a+b");
  CHECK_THROWS_AS(build_word_set({}), UsageError);
}
