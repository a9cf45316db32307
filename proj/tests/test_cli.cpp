#include <doctest.h>

#include <string>
#include <vector>

#include "json.hpp"

#include "test_env.hpp"

using nlohmann::json;

namespace {

std::string bin() {
  REQUIRE(!g_cli_bin.empty());
  return shell_quote(g_cli_bin);
}

CommandResult tokeval(const std::string& args, bool merge_stderr = false) {
  std::string cmd = bin() + " " + args;
  cmd += merge_stderr ? " 2>&1" : " 2>/dev/null";
  return run_command(cmd);
}

}  // namespace

TEST_CASE("cli help exits zero and lists the subcommands") {
  CommandResult r = tokeval("--help");
  CHECK(r.exit_code == 0);
  for (const char* sub :
       {"train-tokenizer", "tokenize", "stats", "evaluate", "correlate"})
    CHECK(r.output.find(sub) != std::string::npos);
}

TEST_CASE("cli rejects bad invocations with exit 1") {
  CHECK(tokeval("").exit_code == 1);
  CHECK(tokeval("frobnicate").exit_code == 1);
  CHECK(tokeval("tokenize --no-such-flag").exit_code == 1);
  CHECK(tokeval("train-tokenizer --kind bpe --corpus /nonexistent.txt "
                "--vocab-size 10").exit_code == 1);
}

TEST_CASE("cli train, tokenize, and stats round trip") {
  TempDir dir("cli_train");
  write_text_file(dir.file("train.txt"),
                  "le chat mange\nle chien dort\nle chat dort\n");

  CommandResult train = tokeval("train-tokenizer --kind bpe --vocab-size 15 "
                                "--min-pair-frequency 1 --corpus " +
                                shell_quote(dir.file("train.txt")) + " --out " +
                                shell_quote(dir.file("model.json")), true);
  CHECK(train.exit_code == 0);
  CHECK(train.output.find("15 content tokens") != std::string::npos);

  write_text_file(dir.file("input.txt"), "le chat dort\n");
  CommandResult tok = tokeval("tokenize --model " +
                              shell_quote(dir.file("model.json")) + " --input " +
                              shell_quote(dir.file("input.txt")));
  CHECK(tok.exit_code == 0);
  CHECK(tok.output.find("le") != std::string::npos);
  CHECK(tok.output.find('\n') != std::string::npos);

  CommandResult ids = tokeval("tokenize --ids --model " +
                              shell_quote(dir.file("model.json")) + " --input " +
                              shell_quote(dir.file("input.txt")));
  CHECK(ids.exit_code == 0);
  CHECK(ids.output.find_first_not_of("0123456789 \n") == std::string::npos);

  CommandResult stats = tokeval("stats --model " +
                                shell_quote(dir.file("model.json")) +
                                " --corpus " + shell_quote(dir.file("train.txt")));
  CHECK(stats.exit_code == 0);
  json doc = json::parse(stats.output);
  CHECK(doc["kind"] == "bpe");
  CHECK(doc["content_vocab_size"] == 15);
  CHECK(doc["vocab_size"] == 17);
  CHECK(doc["avg_tokens_per_word"].is_number());
  CHECK(!doc.contains("grapheme_coverage"));
}

TEST_CASE("cli stats reports grapheme coverage when asked") {
  TempDir dir("cli_cov");
  write_text_file(dir.file("train.txt"), "chateau chateau gateau\n");
  write_text_file(dir.file("graphemes.txt"), "ch\neau\nqu\n");
  CommandResult train = tokeval("train-tokenizer --kind bpe --vocab-size 12 "
                                "--initial-tokens " +
                                shell_quote(dir.file("graphemes.txt")) +
                                " --corpus " + shell_quote(dir.file("train.txt")) +
                                " --out " + shell_quote(dir.file("model.json")));
  REQUIRE(train.exit_code == 0);
  CommandResult stats = tokeval(
      "stats --model " + shell_quote(dir.file("model.json")) + " --corpus " +
      shell_quote(dir.file("train.txt")) + " --graphemes " +
      shell_quote(dir.file("graphemes.txt")));
  CHECK(stats.exit_code == 0);
  json doc = json::parse(stats.output);
  CHECK(doc["grapheme_inventory_size"] == 3);
  // "ch" and "eau" are vocab tokens, "qu" never observed: 2/3
  CHECK(doc["grapheme_coverage"] == doctest::Approx(200.0 / 3.0));
}

TEST_CASE("cli train rejects invalid kinds and exits 1") {
  TempDir dir("cli_kind");
  write_text_file(dir.file("t.txt"), "abc\n");
  CommandResult r = tokeval("train-tokenizer --kind trigram --vocab-size 5 "
                            "--corpus " + shell_quote(dir.file("t.txt")), true);
  CHECK(r.exit_code == 1);
}

TEST_CASE("cli surfaces data errors with exit 2") {
  TempDir dir("cli_data");
  write_text_file(dir.file("bad.txt"), std::string("le\xff chat\n"));
  CommandResult bad_corpus =
      tokeval("train-tokenizer --kind character --corpus " +
              shell_quote(dir.file("bad.txt")), true);
  CHECK(bad_corpus.exit_code == 2);

  write_text_file(dir.file("model.json"), "{\"format_version\": 9}\n");
  write_text_file(dir.file("in.txt"), "le\n");
  CommandResult bad_model = tokeval("tokenize --model " +
                                    shell_quote(dir.file("model.json")) +
                                    " --input " + shell_quote(dir.file("in.txt")),
                                    true);
  CHECK(bad_model.exit_code == 2);
}

TEST_CASE("cli leaves no partial file when the output path is unwritable") {
  TempDir dir("cli_atomic");
  write_text_file(dir.file("t.txt"), "le chat\n");
  std::string out = dir.file("no_such_dir/model.json");
  CommandResult r = tokeval("train-tokenizer --kind character --corpus " +
                            shell_quote(dir.file("t.txt")) + " --out " +
                            shell_quote(out), true);
  CHECK(r.exit_code == 2);
  CHECK(run_command("test -e " + shell_quote(out)).exit_code != 0);
}

TEST_CASE("cli evaluate computes the requested metrics in order") {
  TempDir dir("cli_eval");
  write_text_file(dir.file("pairs.tsv"),
                  "u1\tle chat dort\tle chien dort\n"
                  "u2\tbonjour le monde\tbonjour le monde\n");
  CommandResult text = tokeval("evaluate --pairs " +
                               shell_quote(dir.file("pairs.tsv")) +
                               " --metrics wer,cer");
  CHECK(text.exit_code == 0);
  CHECK(text.output.find("WER") != std::string::npos);
  CHECK(text.output.find("CER") != std::string::npos);
  CHECK(text.output.find("WER") < text.output.find("CER"));
  CHECK(text.output.find("16.67") != std::string::npos);  // 1 error, 6 words

  CommandResult as_json = tokeval("evaluate --pairs " +
                                  shell_quote(dir.file("pairs.tsv")) +
                                  " --metrics cer,wer --format json");
  CHECK(as_json.exit_code == 0);
  json doc = json::parse(as_json.output);
  REQUIRE(doc["metrics"].size() == 2);
  CHECK(doc["metrics"][0]["name"] == "CER");  // requested order preserved
  CHECK(doc["metrics"][1]["name"] == "WER");
  CHECK(doc["metrics"][1]["corpus_score"] == doctest::Approx(100.0 / 6.0));
  CHECK(!doc["metrics"][0].contains("per_utterance"));

  CommandResult per = tokeval("evaluate --pairs " +
                              shell_quote(dir.file("pairs.tsv")) +
                              " --metrics wer --format json --per-utterance");
  json per_doc = json::parse(per.output);
  CHECK(per_doc["metrics"][0]["per_utterance"]["u1"] ==
        doctest::Approx(100.0 / 3.0));
}

TEST_CASE("cli evaluate handles uwer, phoner, and semdist dependencies") {
  TempDir dir("cli_deps");
  write_text_file(dir.file("pairs.tsv"), "u1\tle chat dort\tle chat sort\n");
  write_text_file(dir.file("train.txt"), "le chat mange\n");

  // uwer without --train-words is a usage error
  CommandResult missing = tokeval("evaluate --pairs " +
                                  shell_quote(dir.file("pairs.tsv")) +
                                  " --metrics uwer", true);
  CHECK(missing.exit_code == 1);

  CommandResult with_words = tokeval(
      "evaluate --pairs " + shell_quote(dir.file("pairs.tsv")) +
      " --metrics uwer --train-words " + shell_quote(dir.file("train.txt")));
  CHECK(with_words.exit_code == 0);
  CHECK(with_words.output.find("100.00") != std::string::npos);

  // phoner needs either a table or the built-in g2p
  CHECK(tokeval("evaluate --pairs " + shell_quote(dir.file("pairs.tsv")) +
                " --metrics phoner", true).exit_code == 1);
  CommandResult g2p = tokeval("evaluate --pairs " +
                              shell_quote(dir.file("pairs.tsv")) +
                              " --metrics phoner --g2p");
  CHECK(g2p.exit_code == 0);

  write_text_file(dir.file("phonemes.tsv"), "u1\tl ə ʃ a\tl ə ʃ o\n");
  CommandResult table = tokeval(
      "evaluate --pairs " + shell_quote(dir.file("pairs.tsv")) +
      " --metrics phoner --phonemes " + shell_quote(dir.file("phonemes.tsv")));
  CHECK(table.exit_code == 0);
  CHECK(table.output.find("25.00") != std::string::npos);

  // semdist needs embeddings from a file, a flag endpoint, or the env var
  CHECK(run_command("env -u TOKEVAL_EMBED_ENDPOINT " + bin() +
                    " evaluate --pairs " + shell_quote(dir.file("pairs.tsv")) +
                    " --metrics semdist 2>/dev/null")
            .exit_code == 1);
  write_text_file(dir.file("embeddings.jsonl"),
                  "{\"id\": \"u1\", \"ref\": [1.0, 0.0], \"hyp\": [0.0, 1.0]}\n");
  CommandResult sem = tokeval(
      "evaluate --pairs " + shell_quote(dir.file("pairs.tsv")) +
      " --metrics semdist --embeddings " + shell_quote(dir.file("embeddings.jsonl")));
  CHECK(sem.exit_code == 0);
  CHECK(sem.output.find("100.00") != std::string::npos);

  // an unreachable endpoint is a data error after retries
  CommandResult dead = tokeval("evaluate --pairs " +
                               shell_quote(dir.file("pairs.tsv")) +
                               " --metrics semdist --embed-endpoint "
                               "http://127.0.0.1:1", true);
  CHECK(dead.exit_code == 2);

  // --embeddings and --embed-endpoint are mutually exclusive
  CHECK(tokeval("evaluate --pairs " + shell_quote(dir.file("pairs.tsv")) +
                " --metrics semdist --embeddings " +
                shell_quote(dir.file("embeddings.jsonl")) +
                " --embed-endpoint http://127.0.0.1:1", true).exit_code == 1);

  // unknown metric names are usage errors
  CHECK(tokeval("evaluate --pairs " + shell_quote(dir.file("pairs.tsv")) +
                " --metrics wer,bleu", true).exit_code == 1);
}

TEST_CASE("cli evaluate reads json-lines pair files too") {
  TempDir dir("cli_jsonl");
  write_text_file(dir.file("pairs.jsonl"),
                  "{\"id\": \"u1\", \"reference\": \"le chat dort\", "
                  "\"hypothesis\": \"le chien dort\"}\n");
  CommandResult r = tokeval("evaluate --pairs " +
                            shell_quote(dir.file("pairs.jsonl")) +
                            " --metrics wer");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("33.33") != std::string::npos);
}

TEST_CASE("cli correlate reports the matrix and discrepancies") {
  CommandResult r = tokeval("correlate --scorecards " +
                            shell_quote(g_data_dir + "/tokenizer_systems.tsv"));
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("n_systems: 20") != std::string::npos);
  CHECK(r.output.find("unigram-150") != std::string::npos);
  CHECK(r.output.find("PhonER") != std::string::npos);

  CommandResult as_json = tokeval("correlate --format json --scorecards " +
                                  shell_quote(g_data_dir +
                                              "/tokenizer_systems.tsv"));
  CHECK(as_json.exit_code == 0);
  json doc = json::parse(as_json.output);
  CHECK(doc["n_systems"] == 20);
  CHECK(doc["metrics"].size() == 5);
  CHECK(doc["rho"].size() == 5);
  CHECK(doc["discrepancy"]["best_by_metric"]["WER"][0] == "unigram-150");

  // restricting the metric list works
  CommandResult two = tokeval("correlate --metrics wer,semdist --scorecards " +
                              shell_quote(g_data_dir + "/tokenizer_systems.tsv") +
                              " --format json");
  CHECK(two.exit_code == 0);
  CHECK(json::parse(two.output)["metrics"].size() == 2);
}

TEST_CASE("cli runs are byte-deterministic") {
  TempDir dir("cli_det");
  write_text_file(dir.file("train.txt"),
                  "le chat mange bien\nle chien dort\nbonjour le monde\n");
  for (const char* kind : {"bpe", "unigram"}) {
    std::string args = std::string("train-tokenizer --kind ") + kind +
                       " --vocab-size 18 --corpus " +
                       shell_quote(dir.file("train.txt"));
    CHECK(tokeval(args + " --out " + shell_quote(dir.file("m1.json"))).exit_code ==
          0);
    CHECK(tokeval(args + " --out " + shell_quote(dir.file("m2.json"))).exit_code ==
          0);
    std::string a = read_text_file(dir.file("m1.json"));
    CHECK(!a.empty());
    CHECK(a == read_text_file(dir.file("m2.json")));
  }

  write_text_file(dir.file("pairs.tsv"), "u1\tle chat dort\tle chien dort\n");
  CommandResult e1 = tokeval("evaluate --pairs " +
                             shell_quote(dir.file("pairs.tsv")) +
                             " --metrics wer,cer --format json");
  CommandResult e2 = tokeval("evaluate --pairs " +
                             shell_quote(dir.file("pairs.tsv")) +
                             " --metrics wer,cer --format json");
  CHECK(e1.exit_code == 0);
  CHECK(e1.output == e2.output);
}
