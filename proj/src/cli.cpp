#include "tokeval/cli.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "tokeval/adapters.hpp"
#include "tokeval/analysis.hpp"
#include "tokeval/corpus.hpp"
#include "tokeval/errors.hpp"
#include "tokeval/graphemes.hpp"
#include "tokeval/io_util.hpp"
#include "tokeval/metrics.hpp"
#include "tokeval/reports.hpp"
#include "tokeval/tokenizer.hpp"
#include "tokeval/utf8.hpp"

namespace tokeval {
namespace {

// stdout when --out is absent, atomic file replacement otherwise.
void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty())
    std::cout << content;
  else
    write_file_atomic(out_path, content);
}

void add_normalization_flags(CLI::App* cmd, NormalizationConfig* config) {
  cmd->add_flag("--no-lowercase", [config](std::int64_t) { config->lowercase = false; },
                "Keep letter case");
  cmd->add_flag("--no-strip-punctuation",
                [config](std::int64_t) { config->strip_punctuation = false; },
                "Keep punctuation");
  cmd->add_flag("--no-collapse-whitespace",
                [config](std::int64_t) { config->collapse_whitespace = false; },
                "Keep whitespace runs");
}

struct TrainArgs {
  std::string kind;
  std::string corpus_path;
  std::string out_path;
  std::string initial_tokens_path;
  TokenizerTrainConfig config;
  NormalizationConfig normalization;
  bool vocab_size_given = false;
};

int cmd_train(const TrainArgs& args) {
  auto kind = parse_tokenizer_kind(args.kind);
  if (!kind) throw UsageError("unknown tokenizer kind '" + args.kind + "'");
  if (*kind != TokenizerKind::character && !args.vocab_size_given)
    throw UsageError("--vocab-size is required for kind '" + args.kind + "'");

  TokenizerTrainConfig config = args.config;
  if (!args.initial_tokens_path.empty())
    config.initial_tokens =
        load_inventory_file(args.initial_tokens_path).graphemes;

  Corpus corpus = load_corpus_file(args.corpus_path, args.normalization);
  TrainedTokenizer tok = train_tokenizer(*kind, corpus, config);

  std::cerr << "trained " << to_string(tok.kind) << " model: "
            << tok.content_size() << " content tokens ("
            << tok.vocab.size() << " with reserved ids)\n";
  if (tok.target_shortfall > 0)
    std::cerr << "warning: vocabulary is " << tok.target_shortfall
              << " short of the target (no candidate pair reached the minimum "
                 "frequency)\n";

  emit(args.out_path, save_tokenizer(tok));
  return 0;
}

struct TokenizeArgs {
  std::string model_path;
  std::string input_path;
  std::string out_path;
  bool ids = false;
};

int cmd_tokenize(const TokenizeArgs& args) {
  TrainedTokenizer tok = load_tokenizer_file(args.model_path);
  Encoder encoder(tok);

  std::ifstream file;
  std::istream* in = &std::cin;
  if (!args.input_path.empty()) {
    file.open(args.input_path, std::ios::binary);
    if (!file) throw DataError("cannot open input: " + args.input_path);
    in = &file;
  }
  const std::string source =
      args.input_path.empty() ? "stdin" : args.input_path;

  std::ostringstream out;
  std::string line;
  std::size_t lineno = 0, unknown_total = 0;
  while (std::getline(*in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (std::size_t off = utf8::invalid_offset(line); off != utf8::npos)
      throw DataError(source + ": line " + std::to_string(lineno) +
                      ": invalid UTF-8 at byte " + std::to_string(off));
    EncodeResult result = encoder.encode(line);
    unknown_total += result.unknown_count;
    for (std::size_t i = 0; i < result.ids.size(); ++i) {
      if (i) out << ' ';
      if (args.ids)
        out << result.ids[i];
      else
        out << tok.vocab.token(result.ids[i]);
    }
    out << '\n';
  }
  if (unknown_total > 0)
    std::cerr << unknown_total << " symbol(s) mapped to the unknown token\n";
  emit(args.out_path, out.str());
  return 0;
}

struct StatsArgs {
  std::string model_path;
  std::string corpus_path;
  std::string graphemes_path;
  std::string out_path;
};

int cmd_stats(const StatsArgs& args) {
  TrainedTokenizer tok = load_tokenizer_file(args.model_path);
  Corpus corpus = load_corpus_file(args.corpus_path, tok.normalization);

  nlohmann::ordered_json doc;
  doc["kind"] = std::string(to_string(tok.kind));
  doc["word_split"] = tok.word_split;
  doc["vocab_size"] = tok.vocab.size();
  doc["content_vocab_size"] = tok.content_size();
  doc["avg_tokens_per_word"] = avg_tokens_per_word(tok, corpus);
  if (!args.graphemes_path.empty()) {
    GraphemeInventory inv = load_inventory_file(args.graphemes_path);
    doc["grapheme_inventory_size"] = inv.size();
    doc["grapheme_coverage"] = grapheme_coverage(tok.vocab, inv, tok.meta_symbol);
  }
  emit(args.out_path, doc.dump(2) + "\n");
  return 0;
}

struct EvaluateArgs {
  std::string pairs_path;
  std::string metrics_csv = "wer,cer";
  std::string train_words_path;
  std::string phonemes_path;
  bool use_g2p = false;
  std::string embeddings_path;
  std::string endpoint;
  std::string format = "text";
  std::string out_path;
  bool per_utterance = false;
  bool cer_exclude_spaces = false;
  NormalizationConfig normalization;
};

int cmd_evaluate(const EvaluateArgs& args) {
  std::vector<std::string> requested;
  {
    std::istringstream in(args.metrics_csv);
    std::string name;
    while (std::getline(in, name, ','))
      if (!name.empty()) requested.push_back(name);
  }
  if (requested.empty()) throw UsageError("no metrics requested");
  for (const std::string& name : requested)
    if (name != "wer" && name != "cer" && name != "uwer" && name != "phoner" &&
        name != "semdist")
      throw UsageError("unknown metric '" + name +
                       "' (expected wer, cer, uwer, phoner, semdist)");
  auto wants = [&](const char* name) {
    return std::find(requested.begin(), requested.end(), name) != requested.end();
  };

  if (wants("uwer") && args.train_words_path.empty())
    throw UsageError("uwer needs --train-words (the training corpus)");
  if (wants("phoner") && args.phonemes_path.empty() && !args.use_g2p)
    throw UsageError("phoner needs --phonemes or --g2p");

  std::string endpoint = args.endpoint;
  if (endpoint.empty())
    if (const char* env = std::getenv(kEmbedEndpointEnv)) endpoint = env;
  if (wants("semdist") && args.embeddings_path.empty() && endpoint.empty())
    throw UsageError("semdist needs --embeddings, --embed-endpoint, or " +
                     std::string(kEmbedEndpointEnv));

  std::vector<EvalPair> pairs =
      load_eval_pairs_file(args.pairs_path, args.normalization);

  if (wants("phoner")) {
    if (!args.phonemes_path.empty())
      attach_phonemes(pairs, load_phoneme_table_file(args.phonemes_path));
    else
      attach_g2p_phonemes(pairs);
  }
  if (wants("semdist")) {
    if (!args.embeddings_path.empty()) {
      attach_embeddings(pairs, load_embedding_table_file(args.embeddings_path));
    } else {
      EmbeddingClientConfig config;
      config.endpoint = endpoint;
      attach_fetched_embeddings(pairs, EmbeddingClient(std::move(config)));
    }
  }

  std::vector<MetricReport> reports;
  for (const std::string& name : requested) {
    if (name == "wer") {
      reports.push_back(wer(pairs));
    } else if (name == "cer") {
      reports.push_back(cer(pairs, !args.cer_exclude_spaces));
    } else if (name == "uwer") {
      Corpus train = load_corpus_file(args.train_words_path, args.normalization);
      reports.push_back(uwer(pairs, build_word_set({train})));
    } else if (name == "phoner") {
      reports.push_back(phoner(pairs));
    } else {
      reports.push_back(semdist(pairs));
    }
  }

  emit(args.out_path, args.format == "json"
                          ? metrics_report_json(reports, args.per_utterance)
                          : metrics_report_text(reports));
  return 0;
}

struct CorrelateArgs {
  std::string scorecards_path;
  std::string metrics_csv;
  std::string format = "text";
  std::string out_path;
};

int cmd_correlate(const CorrelateArgs& args) {
  std::vector<SystemScorecard> cards = load_scorecards_file(args.scorecards_path);
  std::vector<std::string> metrics = kCanonicalMetrics;
  if (!args.metrics_csv.empty()) {
    metrics.clear();
    std::istringstream in(args.metrics_csv);
    std::string name;
    while (std::getline(in, name, ',')) {
      if (name.empty()) continue;
      // accept any casing of the canonical names; other headers verbatim
      auto canonical = std::find_if(
          kCanonicalMetrics.begin(), kCanonicalMetrics.end(),
          [&](const std::string& c) {
            return std::equal(c.begin(), c.end(), name.begin(), name.end(),
                              [](char a, char b) {
                                return std::tolower(static_cast<unsigned char>(a)) ==
                                       std::tolower(static_cast<unsigned char>(b));
                              });
          });
      metrics.push_back(canonical != kCanonicalMetrics.end() ? *canonical
                                                             : name);
    }
  }
  CorrelationMatrix matrix = correlation_matrix(cards, metrics);
  DiscrepancyReport discrepancy = discrepancy_report(cards, metrics);
  emit(args.out_path, args.format == "json"
                          ? correlate_report_json(matrix, discrepancy)
                          : correlate_report_text(matrix, discrepancy));
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Subword tokenization and ASR transcript evaluation toolkit"};
  app.require_subcommand(1);

  TrainArgs train_args;
  CLI::App* train = app.add_subcommand("train-tokenizer", "Train a tokenizer model");
  train->add_option("--kind", train_args.kind,
                    "character, bpe, wordpiece, or unigram")->required();
  train->add_option("--corpus", train_args.corpus_path, "Training text, one utterance per line")
      ->required()->check(CLI::ExistingFile);
  train->add_option("--out", train_args.out_path, "Model file (default stdout)");
  train->add_option("--vocab-size", train_args.config.target_vocab_size,
                    "Content vocabulary size target")
      ->check(CLI::PositiveNumber);
  train->add_flag("--no-word-split",
                  [&](std::int64_t) { train_args.config.word_split = false; },
                  "Segment whole lines instead of words (SentencePiece style)");
  train->add_option("--initial-tokens", train_args.initial_tokens_path,
                    "Inventory file of initial tokens (grapheme-initialized BPE)")
      ->check(CLI::ExistingFile);
  train->add_option("--min-pair-frequency", train_args.config.min_pair_frequency,
                    "Stop merging below this pair frequency (default 2)");
  train->add_option("--unigram-seed-multiplier",
                    train_args.config.unigram_seed_multiplier,
                    "Seed vocabulary size = multiplier * target (default 10)");
  train->add_option("--unigram-prune-fraction",
                    train_args.config.unigram_prune_fraction,
                    "Fraction of removable tokens pruned per round (default 0.2)");
  train->add_option("--unigram-em-iterations",
                    train_args.config.unigram_em_iterations,
                    "EM iterations per pruning round (default 2)");
  train->add_option("--unigram-max-piece-length",
                    train_args.config.unigram_max_piece_length,
                    "Seed substring length cap in codepoints (default 8)");
  add_normalization_flags(train, &train_args.normalization);

  TokenizeArgs tokenize_args;
  CLI::App* tokenize = app.add_subcommand("tokenize", "Apply a trained model to text");
  tokenize->add_option("--model", tokenize_args.model_path, "Model file")
      ->required()->check(CLI::ExistingFile);
  tokenize->add_option("--input", tokenize_args.input_path,
                       "Input text (default stdin)")->check(CLI::ExistingFile);
  tokenize->add_option("--out", tokenize_args.out_path, "Output (default stdout)");
  tokenize->add_flag("--ids", tokenize_args.ids, "Emit token ids instead of strings");

  StatsArgs stats_args;
  CLI::App* stats = app.add_subcommand("stats", "Tokenizer statistics over a corpus");
  stats->add_option("--model", stats_args.model_path, "Model file")
      ->required()->check(CLI::ExistingFile);
  stats->add_option("--corpus", stats_args.corpus_path, "Corpus to measure on")
      ->required()->check(CLI::ExistingFile);
  stats->add_option("--graphemes", stats_args.graphemes_path,
                    "Grapheme inventory for coverage")->check(CLI::ExistingFile);
  stats->add_option("--out", stats_args.out_path, "Output (default stdout)");

  EvaluateArgs evaluate_args;
  CLI::App* evaluate = app.add_subcommand("evaluate", "Score hypothesis transcripts");
  evaluate->add_option("--pairs", evaluate_args.pairs_path,
                       "TSV or JSON-lines {id, reference, hypothesis}")
      ->required()->check(CLI::ExistingFile);
  evaluate->add_option("--metrics", evaluate_args.metrics_csv,
                       "Comma list of wer,cer,uwer,phoner,semdist (default wer,cer)");
  evaluate->add_option("--train-words", evaluate_args.train_words_path,
                       "Training corpus defining seen words (uwer)")
      ->check(CLI::ExistingFile);
  evaluate->add_option("--phonemes", evaluate_args.phonemes_path,
                       "Phoneme TSV: id, ref phonemes, hyp phonemes (phoner)")
      ->check(CLI::ExistingFile);
  evaluate->add_flag("--g2p", evaluate_args.use_g2p,
                     "Use the builtin naive grapheme-to-phoneme rules (phoner)");
  CLI::Option* emb_file =
      evaluate->add_option("--embeddings", evaluate_args.embeddings_path,
                           "Embedding JSON-lines: id, ref, hyp (semdist)")
          ->check(CLI::ExistingFile);
  evaluate->add_option("--embed-endpoint", evaluate_args.endpoint,
                       "POST /embed endpoint (semdist); falls back to $" +
                           std::string(kEmbedEndpointEnv))
      ->excludes(emb_file);
  evaluate->add_option("--format", evaluate_args.format, "text or json")
      ->check(CLI::IsMember({"text", "json"}));
  evaluate->add_option("--out", evaluate_args.out_path, "Output (default stdout)");
  evaluate->add_flag("--per-utterance", evaluate_args.per_utterance,
                     "Include per-utterance scores (json format)");
  evaluate->add_flag("--cer-exclude-spaces", evaluate_args.cer_exclude_spaces,
                     "Drop spaces before computing CER");
  add_normalization_flags(evaluate, &evaluate_args.normalization);

  CorrelateArgs correlate_args;
  CLI::App* correlate = app.add_subcommand(
      "correlate", "Spearman matrix and discrepancy report over scorecards");
  correlate->add_option("--scorecards", correlate_args.scorecards_path,
                        "TSV: system, WER, CER, SemDist, UWER, PhonER")
      ->required()->check(CLI::ExistingFile);
  correlate->add_option("--metrics", correlate_args.metrics_csv,
                        "Comma list of header metric names (default all five)");
  correlate->add_option("--format", correlate_args.format, "text or json")
      ->check(CLI::IsMember({"text", "json"}));
  correlate->add_option("--out", correlate_args.out_path, "Output (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);  // prints help, exits 0
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (train->parsed()) {
      train_args.vocab_size_given = train->count("--vocab-size") > 0;
      return cmd_train(train_args);
    }
    if (tokenize->parsed()) return cmd_tokenize(tokenize_args);
    if (stats->parsed()) return cmd_stats(stats_args);
    if (evaluate->parsed()) return cmd_evaluate(evaluate_args);
    if (correlate->parsed()) return cmd_correlate(correlate_args);
    throw UsageError("no subcommand given");
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace tokeval
