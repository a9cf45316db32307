#include "tokeval/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <set>

#include "tokeval/errors.hpp"

namespace tokeval {

std::vector<double> fractional_ranks(const std::vector<double>& values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    // Positions i..j (0-based) share the average of ranks i+1..j+1.
    double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
    i = j + 1;
  }
  return ranks;
}

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size())
    throw UsageError("spearman: length mismatch (" + std::to_string(x.size()) +
                     " vs " + std::to_string(y.size()) + ")");
  if (x.size() < 2) throw UsageError("spearman: need at least two points");
  std::vector<double> rx = fractional_ranks(x);
  std::vector<double> ry = fractional_ranks(y);

  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (double v : rx) mx += v;
  for (double v : ry) my += v;
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double dx = rx[i] - mx, dy = ry[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0)
    throw UsageError("spearman: constant input has no rank variance");
  return sxy / std::sqrt(sxx * syy);
}

namespace {

std::vector<double> metric_column(const std::vector<SystemScorecard>& cards,
                                  const std::string& metric) {
  std::vector<double> column;
  column.reserve(cards.size());
  for (const SystemScorecard& card : cards) {
    auto it = card.scores.find(metric);
    if (it == card.scores.end())
      throw UsageError("scorecard '" + card.system_id + "' is missing metric '" +
                       metric + "'");
    if (!std::isfinite(it->second))
      throw UsageError("scorecard '" + card.system_id +
                       "' has a non-finite value for '" + metric + "'");
    column.push_back(it->second);
  }
  return column;
}

}  // namespace

CorrelationMatrix correlation_matrix(const std::vector<SystemScorecard>& cards,
                                     const std::vector<std::string>& metrics) {
  if (cards.size() < 3)
    throw UsageError("correlation_matrix: need at least 3 scorecards, got " +
                     std::to_string(cards.size()));
  if (metrics.size() < 2)
    throw UsageError("correlation_matrix: need at least 2 metrics");

  CorrelationMatrix matrix;
  matrix.metrics = metrics;
  matrix.n_systems = cards.size();
  std::vector<std::vector<double>> columns;
  columns.reserve(metrics.size());
  for (const std::string& metric : metrics)
    columns.push_back(metric_column(cards, metric));

  matrix.rho.assign(metrics.size(), std::vector<double>(metrics.size(), 1.0));
  for (std::size_t a = 0; a < metrics.size(); ++a)
    for (std::size_t b = a + 1; b < metrics.size(); ++b) {
      double rho = spearman(columns[a], columns[b]);
      matrix.rho[a][b] = rho;
      matrix.rho[b][a] = rho;
    }
  return matrix;
}

std::vector<RankedSystem> rank_systems(const std::vector<SystemScorecard>& cards,
                                       const std::string& metric,
                                       bool lower_is_better) {
  if (cards.empty()) throw UsageError("rank_systems: no scorecards");
  std::vector<double> column = metric_column(cards, metric);
  std::vector<double> oriented = column;
  if (!lower_is_better)
    for (double& v : oriented) v = -v;
  std::vector<double> ranks = fractional_ranks(oriented);

  std::vector<RankedSystem> out;
  out.reserve(cards.size());
  for (std::size_t i = 0; i < cards.size(); ++i)
    out.push_back({cards[i].system_id, column[i], ranks[i]});
  std::stable_sort(out.begin(), out.end(),
                   [](const RankedSystem& a, const RankedSystem& b) {
                     return a.rank < b.rank;
                   });
  return out;
}

DiscrepancyReport discrepancy_report(const std::vector<SystemScorecard>& cards,
                                     const std::vector<std::string>& metrics) {
  if (cards.size() < 2)
    throw UsageError("discrepancy_report: need at least 2 scorecards");

  DiscrepancyReport report;
  std::set<std::string> best_set;
  std::vector<std::vector<double>> rank_columns;
  for (const std::string& metric : metrics) {
    std::vector<double> column = metric_column(cards, metric);
    double best = *std::min_element(column.begin(), column.end());
    std::vector<std::string> argmins;
    for (std::size_t i = 0; i < cards.size(); ++i)
      if (column[i] == best) argmins.push_back(cards[i].system_id);
    for (const std::string& s : argmins) best_set.insert(s);
    report.best_by_metric[metric] = std::move(argmins);
    rank_columns.push_back(fractional_ranks(column));
  }
  report.best_anywhere.assign(best_set.begin(), best_set.end());

  for (std::size_t a = 0; a < metrics.size(); ++a)
    for (std::size_t b = a + 1; b < metrics.size(); ++b) {
      MetricDisagreement d;
      d.metric_a = metrics[a];
      d.metric_b = metrics[b];
      for (std::size_t i = 0; i < cards.size(); ++i)
        for (std::size_t j = i + 1; j < cards.size(); ++j) {
          double da = rank_columns[a][i] - rank_columns[a][j];
          double db = rank_columns[b][i] - rank_columns[b][j];
          ++d.compared_pairs;
          if (da * db < 0.0) ++d.discordant_pairs;
        }
      report.disagreements.push_back(std::move(d));
    }
  return report;
}

std::vector<SystemScorecard> load_scorecards(std::istream& in,
                                             const std::string& source) {
  const std::string name = source.empty() ? "scorecards" : source;
  std::string line;
  std::size_t lineno = 0;

  auto fields_of = [](const std::string& text) {
    std::vector<std::string> fields;
    std::size_t pos = 0;
    while (true) {
      std::size_t next = text.find('\t', pos);
      if (next == std::string::npos) {
        fields.push_back(text.substr(pos));
        break;
      }
      fields.push_back(text.substr(pos, next - pos));
      pos = next + 1;
    }
    return fields;
  };

  if (!std::getline(in, line)) throw DataError(name + ": empty scorecard file");
  ++lineno;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::vector<std::string> header = fields_of(line);
  if (header.size() < 2 || header[0] != "system")
    throw DataError(name + ": header must be 'system<TAB><metric>...'");
  std::vector<std::string> metrics(header.begin() + 1, header.end());

  std::vector<SystemScorecard> cards;
  std::set<std::string> seen;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields = fields_of(line);
    if (fields.size() != header.size())
      throw DataError(name + ": line " + std::to_string(lineno) + ": expected " +
                      std::to_string(header.size()) + " fields, got " +
                      std::to_string(fields.size()));
    SystemScorecard card;
    card.system_id = fields[0];
    if (card.system_id.empty())
      throw DataError(name + ": line " + std::to_string(lineno) +
                      ": empty system id");
    if (!seen.insert(card.system_id).second)
      throw DataError(name + ": duplicate system '" + card.system_id + "'");
    for (std::size_t i = 0; i < metrics.size(); ++i) {
      const std::string& text = fields[i + 1];
      char* end = nullptr;
      double value = std::strtod(text.c_str(), &end);
      if (text.empty() || end != text.c_str() + text.size() ||
          !std::isfinite(value))
        throw DataError(name + ": line " + std::to_string(lineno) +
                        ": bad value '" + text + "' for " + metrics[i]);
      card.scores[metrics[i]] = value;
    }
    cards.push_back(std::move(card));
  }
  if (cards.empty()) throw DataError(name + ": no scorecard rows");
  return cards;
}

std::vector<SystemScorecard> load_scorecards_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open scorecard file: " + path);
  return load_scorecards(in, path);
}

}  // namespace tokeval
