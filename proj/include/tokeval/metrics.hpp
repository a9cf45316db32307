#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tokeval/corpus.hpp"

namespace tokeval {

struct EvalPair {
  std::string id;
  std::string reference;   // normalized text
  std::string hypothesis;  // normalized text
  std::optional<std::vector<std::string>> ref_phonemes;
  std::optional<std::vector<std::string>> hyp_phonemes;
  std::optional<std::vector<double>> ref_embedding;
  std::optional<std::vector<double>> hyp_embedding;
};

struct MetricReport {
  std::string metric_name;
  // Micro-average for the error rates (100 * total errors / total reference
  // units), mean over utterances for SemDist — never the mean of the
  // per-utterance error rates.
  double corpus_score = 0.0;
  // UWER over a corpus with no unseen reference words is not applicable;
  // corpus_score is meaningless when this is false.
  bool applicable = true;
  // Pairs whose per-utterance denominator is zero are omitted.
  std::map<std::string, double> per_utterance;
  std::map<std::string, double> aggregation_detail;
};

MetricReport wer(const std::vector<EvalPair>& pairs);
MetricReport cer(const std::vector<EvalPair>& pairs, bool include_spaces = true);
// Errors over reference words absent from train_words: substitutions and
// deletions of unseen words count, insertions have no reference word to be
// unseen and are not attributed.
MetricReport uwer(const std::vector<EvalPair>& pairs, const WordSet& train_words);
MetricReport phoner(const std::vector<EvalPair>& pairs);
// Per utterance: (1 - cosine(ref_embedding, hyp_embedding)) * 100.
MetricReport semdist(const std::vector<EvalPair>& pairs);

}  // namespace tokeval
