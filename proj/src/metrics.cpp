#include "tokeval/metrics.hpp"

#include <cmath>

#include "tokeval/alignment.hpp"
#include "tokeval/errors.hpp"
#include "tokeval/utf8.hpp"

namespace tokeval {
namespace {

void check_nonempty(const std::vector<EvalPair>& pairs, const char* metric) {
  if (pairs.empty())
    throw UsageError(std::string(metric) + ": no evaluation pairs");
}

}  // namespace

MetricReport wer(const std::vector<EvalPair>& pairs) {
  check_nonempty(pairs, "wer");
  MetricReport report;
  report.metric_name = "WER";
  std::size_t errors = 0, ref_words = 0;
  for (const EvalPair& pair : pairs) {
    std::vector<std::string> ref = split_words(pair.reference);
    std::vector<std::string> hyp = split_words(pair.hypothesis);
    std::size_t d = edit_distance(ref, hyp);
    errors += d;
    ref_words += ref.size();
    if (!ref.empty())
      report.per_utterance[pair.id] =
          100.0 * static_cast<double>(d) / static_cast<double>(ref.size());
  }
  if (ref_words == 0) throw UsageError("wer: zero reference words");
  report.corpus_score =
      100.0 * static_cast<double>(errors) / static_cast<double>(ref_words);
  report.aggregation_detail["errors"] = static_cast<double>(errors);
  report.aggregation_detail["reference_words"] = static_cast<double>(ref_words);
  return report;
}

MetricReport cer(const std::vector<EvalPair>& pairs, bool include_spaces) {
  check_nonempty(pairs, "cer");
  MetricReport report;
  report.metric_name = "CER";
  auto chars_of = [include_spaces](const std::string& text) {
    std::vector<uint32_t> cps = utf8::decode(text);
    if (!include_spaces) std::erase(cps, static_cast<uint32_t>(' '));
    return cps;
  };
  std::size_t errors = 0, ref_chars = 0;
  for (const EvalPair& pair : pairs) {
    std::vector<uint32_t> ref = chars_of(pair.reference);
    std::vector<uint32_t> hyp = chars_of(pair.hypothesis);
    std::size_t d = edit_distance(ref, hyp);
    errors += d;
    ref_chars += ref.size();
    if (!ref.empty())
      report.per_utterance[pair.id] =
          100.0 * static_cast<double>(d) / static_cast<double>(ref.size());
  }
  if (ref_chars == 0) throw UsageError("cer: zero reference characters");
  report.corpus_score =
      100.0 * static_cast<double>(errors) / static_cast<double>(ref_chars);
  report.aggregation_detail["errors"] = static_cast<double>(errors);
  report.aggregation_detail["reference_characters"] =
      static_cast<double>(ref_chars);
  return report;
}

MetricReport uwer(const std::vector<EvalPair>& pairs, const WordSet& train_words) {
  check_nonempty(pairs, "uwer");
  MetricReport report;
  report.metric_name = "UWER";
  std::size_t unseen_total = 0, unseen_errors = 0;
  std::size_t substituted = 0, deleted = 0;
  for (const EvalPair& pair : pairs) {
    std::vector<std::string> ref = split_words(pair.reference);
    std::vector<std::string> hyp = split_words(pair.hypothesis);
    AlignmentResult alignment = levenshtein(ref, hyp);
    std::size_t pair_unseen = 0, pair_errors = 0;
    for (const AlignedOp& op : alignment.ops) {
      if (!op.ref_index) continue;  // insertion: no reference word involved
      if (train_words.contains(ref[*op.ref_index])) continue;
      ++pair_unseen;
      if (op.kind == OpKind::sub || op.kind == OpKind::del) {
        ++pair_errors;
        if (op.kind == OpKind::sub) ++substituted; else ++deleted;
      }
    }
    unseen_total += pair_unseen;
    unseen_errors += pair_errors;
    if (pair_unseen > 0)
      report.per_utterance[pair.id] = 100.0 * static_cast<double>(pair_errors) /
                                      static_cast<double>(pair_unseen);
  }
  report.aggregation_detail["unseen_errors"] = static_cast<double>(unseen_errors);
  report.aggregation_detail["unseen_reference_words"] =
      static_cast<double>(unseen_total);
  report.aggregation_detail["substituted"] = static_cast<double>(substituted);
  report.aggregation_detail["deleted"] = static_cast<double>(deleted);
  if (unseen_total == 0) {
    report.applicable = false;  // distinct from a true 0.0
    return report;
  }
  report.corpus_score = 100.0 * static_cast<double>(unseen_errors) /
                        static_cast<double>(unseen_total);
  return report;
}

MetricReport phoner(const std::vector<EvalPair>& pairs) {
  check_nonempty(pairs, "phoner");
  MetricReport report;
  report.metric_name = "PhonER";
  std::size_t errors = 0, ref_phones = 0;
  for (const EvalPair& pair : pairs) {
    if (!pair.ref_phonemes || !pair.hyp_phonemes)
      throw UsageError("phoner: utterance '" + pair.id +
                       "' has no phoneme sequences");
    std::size_t d = edit_distance(*pair.ref_phonemes, *pair.hyp_phonemes);
    errors += d;
    ref_phones += pair.ref_phonemes->size();
    if (!pair.ref_phonemes->empty())
      report.per_utterance[pair.id] = 100.0 * static_cast<double>(d) /
                                      static_cast<double>(pair.ref_phonemes->size());
  }
  if (ref_phones == 0) throw UsageError("phoner: zero reference phonemes");
  report.corpus_score =
      100.0 * static_cast<double>(errors) / static_cast<double>(ref_phones);
  report.aggregation_detail["errors"] = static_cast<double>(errors);
  report.aggregation_detail["reference_phonemes"] =
      static_cast<double>(ref_phones);
  return report;
}

MetricReport semdist(const std::vector<EvalPair>& pairs) {
  check_nonempty(pairs, "semdist");
  MetricReport report;
  report.metric_name = "SemDist";
  double total = 0.0;
  for (const EvalPair& pair : pairs) {
    if (!pair.ref_embedding || !pair.hyp_embedding)
      throw UsageError("semdist: utterance '" + pair.id + "' has no embeddings");
    const std::vector<double>& a = *pair.ref_embedding;
    const std::vector<double>& b = *pair.hyp_embedding;
    if (a.size() != b.size() || a.empty())
      throw UsageError("semdist: utterance '" + pair.id +
                       "' has mismatched embedding dimensions");
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      dot += a[i] * b[i];
      na += a[i] * a[i];
      nb += b[i] * b[i];
    }
    if (na == 0.0 || nb == 0.0)
      throw UsageError("semdist: utterance '" + pair.id +
                       "' has a zero-norm embedding");
    double cosine = dot / (std::sqrt(na) * std::sqrt(nb));
    double score = (1.0 - cosine) * 100.0;
    report.per_utterance[pair.id] = score;
    total += score;
  }
  report.corpus_score = total / static_cast<double>(pairs.size());
  report.aggregation_detail["utterances"] = static_cast<double>(pairs.size());
  return report;
}

}  // namespace tokeval
