#include "tokeval/reports.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "tokeval/errors.hpp"
#include "tokeval/utf8.hpp"

namespace tokeval {
namespace {

using ordered_json = nlohmann::ordered_json;

std::string format_score(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string format_detail_value(double v) {
  // Totals are usually integral counts; print those without decimals.
  if (v == std::floor(v) && std::abs(v) < 1e15) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.0f", v);
    return buf;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

}  // namespace

std::vector<EvalPair> load_eval_pairs(std::istream& in,
                                      const NormalizationConfig& config,
                                      const std::string& source) {
  const std::string name = source.empty() ? "evaluation pairs" : source;
  std::vector<EvalPair> pairs;
  std::set<std::string> seen;
  std::string line;
  std::size_t lineno = 0;
  bool json_lines = false, detected = false;

  auto add_pair = [&](std::string id, const std::string& ref,
                      const std::string& hyp) {
    if (id.empty())
      throw DataError(name + ": line " + std::to_string(lineno) + ": empty id");
    if (!seen.insert(id).second)
      throw DataError(name + ": duplicate id '" + id + "'");
    EvalPair pair;
    pair.id = std::move(id);
    pair.reference = normalize(ref, config);
    pair.hypothesis = normalize(hyp, config);
    pairs.push_back(std::move(pair));
  };

  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (std::size_t off = utf8::invalid_offset(line); off != utf8::npos)
      throw DataError(name + ": line " + std::to_string(lineno) +
                      ": invalid UTF-8 at byte " + std::to_string(off));
    if (!detected) {
      json_lines = line.front() == '{';
      detected = true;
    }
    if (json_lines) {
      nlohmann::json doc;
      try {
        doc = nlohmann::json::parse(line);
      } catch (const nlohmann::json::exception& e) {
        throw DataError(name + ": line " + std::to_string(lineno) +
                        ": malformed JSON: " + e.what());
      }
      if (!doc.is_object() || !doc.contains("id") || !doc["id"].is_string() ||
          !doc.contains("reference") || !doc["reference"].is_string() ||
          !doc.contains("hypothesis") || !doc["hypothesis"].is_string())
        throw DataError(name + ": line " + std::to_string(lineno) +
                        ": expected {\"id\", \"reference\", \"hypothesis\"}");
      add_pair(doc["id"].get<std::string>(), doc["reference"].get<std::string>(),
               doc["hypothesis"].get<std::string>());
    } else {
      std::size_t t1 = line.find('\t');
      std::size_t t2 = t1 == std::string::npos ? std::string::npos
                                               : line.find('\t', t1 + 1);
      if (t1 == std::string::npos || t2 == std::string::npos ||
          line.find('\t', t2 + 1) != std::string::npos)
        throw DataError(name + ": line " + std::to_string(lineno) +
                        ": expected 'id<TAB>reference<TAB>hypothesis'");
      add_pair(line.substr(0, t1), line.substr(t1 + 1, t2 - t1 - 1),
               line.substr(t2 + 1));
    }
  }
  if (pairs.empty()) throw DataError(name + ": no evaluation pairs");
  return pairs;
}

std::vector<EvalPair> load_eval_pairs_file(const std::string& path,
                                           const NormalizationConfig& config) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open evaluation pairs: " + path);
  return load_eval_pairs(in, config, path);
}

std::string metrics_report_json(const std::vector<MetricReport>& reports,
                                bool per_utterance) {
  ordered_json doc;
  doc["metrics"] = ordered_json::array();
  for (const MetricReport& report : reports) {
    ordered_json entry;
    entry["name"] = report.metric_name;
    entry["applicable"] = report.applicable;
    if (report.applicable)
      entry["corpus_score"] = report.corpus_score;
    else
      entry["corpus_score"] = nullptr;
    ordered_json detail;
    for (const auto& [key, value] : report.aggregation_detail) detail[key] = value;
    entry["detail"] = std::move(detail);
    if (per_utterance) {
      ordered_json per;
      for (const auto& [id, score] : report.per_utterance) per[id] = score;
      entry["per_utterance"] = std::move(per);
    }
    doc["metrics"].push_back(std::move(entry));
  }
  return doc.dump(2) + "\n";
}

std::string metrics_report_text(const std::vector<MetricReport>& reports) {
  std::size_t name_width = 6;
  for (const MetricReport& report : reports)
    name_width = std::max(name_width, report.metric_name.size());

  std::ostringstream out;
  for (const MetricReport& report : reports) {
    out << report.metric_name
        << std::string(name_width - report.metric_name.size(), ' ');
    if (report.applicable) {
      std::string score = format_score(report.corpus_score);
      out << std::string(score.size() < 9 ? 9 - score.size() : 1, ' ') << score;
    } else {
      out << std::string(6, ' ') << "n/a";
    }
    out << "  ";
    bool first = true;
    for (const auto& [key, value] : report.aggregation_detail) {
      if (!first) out << " ";
      first = false;
      out << key << "=" << format_detail_value(value);
    }
    out << "\n";
  }
  return out.str();
}

std::string correlate_report_json(const CorrelationMatrix& matrix,
                                  const DiscrepancyReport& discrepancy) {
  ordered_json doc;
  doc["n_systems"] = matrix.n_systems;
  doc["metrics"] = matrix.metrics;
  doc["rho"] = matrix.rho;
  ordered_json best;
  for (const auto& [metric, systems] : discrepancy.best_by_metric)
    best[metric] = systems;
  doc["discrepancy"]["best_by_metric"] = std::move(best);
  doc["discrepancy"]["best_anywhere"] = discrepancy.best_anywhere;
  doc["discrepancy"]["disagreements"] = ordered_json::array();
  for (const MetricDisagreement& d : discrepancy.disagreements) {
    ordered_json entry;
    entry["metric_a"] = d.metric_a;
    entry["metric_b"] = d.metric_b;
    entry["discordant_pairs"] = d.discordant_pairs;
    entry["compared_pairs"] = d.compared_pairs;
    doc["discrepancy"]["disagreements"].push_back(std::move(entry));
  }
  return doc.dump(2) + "\n";
}

std::string correlate_report_text(const CorrelationMatrix& matrix,
                                  const DiscrepancyReport& discrepancy) {
  std::ostringstream out;
  out << "n_systems: " << matrix.n_systems << "\n\n";

  std::size_t name_width = 0;
  for (const std::string& m : matrix.metrics)
    name_width = std::max(name_width, m.size());
  const std::size_t col_width = std::max<std::size_t>(name_width + 2, 9);

  out << std::string(name_width, ' ');
  for (const std::string& m : matrix.metrics)
    out << std::string(col_width - m.size(), ' ') << m;
  out << "\n";
  for (std::size_t a = 0; a < matrix.metrics.size(); ++a) {
    out << matrix.metrics[a]
        << std::string(name_width - matrix.metrics[a].size(), ' ');
    for (std::size_t b = 0; b < matrix.metrics.size(); ++b) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.3f", matrix.rho[a][b]);
      std::string cell = buf;
      out << std::string(col_width - cell.size(), ' ') << cell;
    }
    out << "\n";
  }

  out << "\nbest system by metric:\n";
  for (const auto& [metric, systems] : discrepancy.best_by_metric) {
    out << "  " << metric << ": ";
    for (std::size_t i = 0; i < systems.size(); ++i) {
      if (i) out << ", ";
      out << systems[i];
    }
    if (systems.size() > 1) out << "  (tie)";
    out << "\n";
  }
  out << "best under at least one metric:";
  for (const std::string& s : discrepancy.best_anywhere) out << " " << s;
  out << "\n\nrank disagreements (discordant pairs / compared):\n";
  for (const MetricDisagreement& d : discrepancy.disagreements)
    out << "  " << d.metric_a << " vs " << d.metric_b << ": "
        << d.discordant_pairs << " / " << d.compared_pairs << "\n";
  return out.str();
}

}  // namespace tokeval
