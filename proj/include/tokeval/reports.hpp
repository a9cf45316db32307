#pragma once

#include <string>
#include <vector>

#include "tokeval/analysis.hpp"
#include "tokeval/metrics.hpp"

namespace tokeval {

// Loads {id, reference, hypothesis} records from TSV ("id<TAB>ref<TAB>hyp")
// or JSON-lines (objects with those field names); the format is detected
// from the first non-empty line. Texts are normalized with `config`.
std::vector<EvalPair> load_eval_pairs(std::istream& in,
                                      const NormalizationConfig& config,
                                      const std::string& source = "");
std::vector<EvalPair> load_eval_pairs_file(const std::string& path,
                                           const NormalizationConfig& config);

std::string metrics_report_json(const std::vector<MetricReport>& reports,
                                bool per_utterance = false);
std::string metrics_report_text(const std::vector<MetricReport>& reports);

std::string correlate_report_json(const CorrelationMatrix& matrix,
                                  const DiscrepancyReport& discrepancy);
std::string correlate_report_text(const CorrelationMatrix& matrix,
                                  const DiscrepancyReport& discrepancy);

}  // namespace tokeval
