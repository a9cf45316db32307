#pragma once

#include <istream>
#include <map>
#include <string>
#include <vector>

namespace tokeval {

// Column order of Tables II/III and of the scorecard TSV header.
inline const std::vector<std::string> kCanonicalMetrics = {
    "WER", "CER", "SemDist", "UWER", "PhonER"};

// 1-based ranks; ties share the average (fractional) rank.
std::vector<double> fractional_ranks(const std::vector<double>& values);

// Pearson correlation of the fractional rank vectors. UsageError on length
// mismatch, fewer than two points, or zero rank variance (constant input).
double spearman(const std::vector<double>& x, const std::vector<double>& y);

struct SystemScorecard {
  std::string system_id;
  std::map<std::string, double> scores;  // metric name -> percentage
};

struct CorrelationMatrix {
  std::vector<std::string> metrics;
  std::vector<std::vector<double>> rho;  // symmetric, unit diagonal
  std::size_t n_systems = 0;
};

CorrelationMatrix correlation_matrix(
    const std::vector<SystemScorecard>& cards,
    const std::vector<std::string>& metrics = kCanonicalMetrics);

struct RankedSystem {
  std::string system_id;
  double score = 0.0;
  double rank = 0.0;  // fractional on ties
};

// Sorted best-first; lower_is_better=true suits all five canonical metrics.
std::vector<RankedSystem> rank_systems(const std::vector<SystemScorecard>& cards,
                                       const std::string& metric,
                                       bool lower_is_better = true);

struct MetricDisagreement {
  std::string metric_a;
  std::string metric_b;
  std::size_t discordant_pairs = 0;  // system pairs the two metrics order oppositely
  std::size_t compared_pairs = 0;
};

struct DiscrepancyReport {
  // metric -> argmin systems; more than one entry flags a tie.
  std::map<std::string, std::vector<std::string>> best_by_metric;
  std::vector<std::string> best_anywhere;  // best under >= 1 metric, sorted
  std::vector<MetricDisagreement> disagreements;
};

DiscrepancyReport discrepancy_report(
    const std::vector<SystemScorecard>& cards,
    const std::vector<std::string>& metrics = kCanonicalMetrics);

// TSV with header "system<TAB>WER<TAB>CER<TAB>SemDist<TAB>UWER<TAB>PhonER";
// any non-empty metric subset is accepted as long as the header names it.
std::vector<SystemScorecard> load_scorecards(std::istream& in,
                                             const std::string& source = "");
std::vector<SystemScorecard> load_scorecards_file(const std::string& path);

}  // namespace tokeval
