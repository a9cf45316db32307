#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <unordered_set>

#include "json.hpp"
#include "tokeval/errors.hpp"
#include "tokeval/io_util.hpp"
#include "tokeval/tokenizer.hpp"
#include "tokeval/utf8.hpp"

namespace tokeval {
namespace {

using json = nlohmann::ordered_json;

std::string format_logprob(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

[[noreturn]] void fail(const std::string& source, const std::string& message) {
  throw DataError((source.empty() ? "tokenizer model" : source) + ": " + message);
}

double parse_logprob(const json& value, std::size_t index,
                     const std::string& source) {
  double v;
  if (value.is_number()) {
    v = value.get<double>();
  } else if (value.is_string()) {
    const std::string s = value.get<std::string>();
    char* end = nullptr;
    v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size() || s.empty())
      fail(source, "logprobs[" + std::to_string(index) + "] is not a number");
  } else {
    fail(source, "logprobs[" + std::to_string(index) + "] is not a number");
  }
  if (!std::isfinite(v))
    fail(source, "logprobs[" + std::to_string(index) + "] is not finite");
  return v;
}

}  // namespace

std::string save_tokenizer(const TrainedTokenizer& tok) {
  json doc;
  doc["format_version"] = 1;
  doc["kind"] = std::string(to_string(tok.kind));
  doc["word_split"] = tok.word_split;
  doc["normalization"] = {
      {"lowercase", tok.normalization.lowercase},
      {"collapse_whitespace", tok.normalization.collapse_whitespace},
      {"strip_punctuation", tok.normalization.strip_punctuation},
  };
  doc["tokens"] = tok.vocab.tokens();
  json merges = json::array();
  for (const auto& [x, y] : tok.merges) merges.push_back(json::array({x, y}));
  doc["merges"] = std::move(merges);
  if (tok.kind == TokenizerKind::unigram) {
    json logprobs = json::array();
    for (double lp : tok.token_logprob) logprobs.push_back(format_logprob(lp));
    doc["logprobs"] = std::move(logprobs);
  }
  doc["meta_symbol"] = tok.meta_symbol;
  doc["unknown_token"] = tok.unknown_token;
  return doc.dump(2) + "\n";
}

void save_tokenizer_file(const TrainedTokenizer& tok, const std::string& path) {
  write_file_atomic(path, save_tokenizer(tok));
}

TrainedTokenizer load_tokenizer(std::string_view document,
                                const std::string& source_name) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::exception& e) {
    fail(source_name, std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) fail(source_name, "top-level value is not an object");

  auto require = [&](const char* key) -> const json& {
    auto it = doc.find(key);
    if (it == doc.end())
      fail(source_name, std::string("missing field '") + key + "'");
    return *it;
  };

  const json& version = require("format_version");
  if (!version.is_number_integer() || version.get<int>() != 1)
    fail(source_name, "unsupported format_version (expected 1)");

  TrainedTokenizer tok;
  const json& kind = require("kind");
  if (!kind.is_string())
    fail(source_name, "field 'kind' is not a string");
  if (auto parsed = parse_tokenizer_kind(kind.get<std::string>()))
    tok.kind = *parsed;
  else
    fail(source_name, "unknown tokenizer kind '" + kind.get<std::string>() + "'");

  const json& word_split = require("word_split");
  if (!word_split.is_boolean())
    fail(source_name, "field 'word_split' is not a boolean");
  tok.word_split = word_split.get<bool>();

  const json& norm = require("normalization");
  if (!norm.is_object()) fail(source_name, "field 'normalization' is not an object");
  for (const char* key : {"lowercase", "collapse_whitespace", "strip_punctuation"}) {
    auto it = norm.find(key);
    if (it == norm.end() || !it->is_boolean())
      fail(source_name, std::string("normalization.") + key + " must be a boolean");
  }
  tok.normalization.lowercase = norm["lowercase"].get<bool>();
  tok.normalization.collapse_whitespace = norm["collapse_whitespace"].get<bool>();
  tok.normalization.strip_punctuation = norm["strip_punctuation"].get<bool>();

  const json& meta = require("meta_symbol");
  const json& unknown = require("unknown_token");
  if (!meta.is_string() || !unknown.is_string())
    fail(source_name, "meta_symbol and unknown_token must be strings");
  tok.meta_symbol = meta.get<std::string>();
  tok.unknown_token = unknown.get<std::string>();
  if (utf8::length(tok.meta_symbol) != 1)
    fail(source_name, "meta_symbol must be a single codepoint");
  if (tok.unknown_token.empty())
    fail(source_name, "unknown_token must be non-empty");

  const json& tokens = require("tokens");
  if (!tokens.is_array() || tokens.size() < TrainedTokenizer::kNumSpecials)
    fail(source_name, "field 'tokens' must list the reserved tokens first");
  std::unordered_set<std::string> seen;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (!tokens[i].is_string())
      fail(source_name, "tokens[" + std::to_string(i) + "] is not a string");
    std::string t = tokens[i].get<std::string>();
    if (t.empty()) fail(source_name, "tokens[" + std::to_string(i) + "] is empty");
    if (!seen.insert(t).second)
      fail(source_name, "duplicate token '" + t + "'");
    tok.vocab.add(std::move(t));
  }
  if (tok.vocab.token(TrainedTokenizer::kUnknownId) != tok.unknown_token)
    fail(source_name, "tokens[0] must equal unknown_token");
  if (tok.vocab.token(TrainedTokenizer::kBoundaryId) != tok.meta_symbol)
    fail(source_name, "tokens[1] must equal meta_symbol");

  if (auto it = doc.find("merges"); it != doc.end()) {
    if (!it->is_array()) fail(source_name, "field 'merges' is not an array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const json& m = (*it)[i];
      if (!m.is_array() || m.size() != 2 || !m[0].is_string() || !m[1].is_string())
        fail(source_name, "merges[" + std::to_string(i) + "] is not a string pair");
      std::string x = m[0].get<std::string>(), y = m[1].get<std::string>();
      if (!tok.vocab.contains(x) || !tok.vocab.contains(y) ||
          !tok.vocab.contains(x + y))
        fail(source_name,
             "merges[" + std::to_string(i) + "] references absent tokens");
      tok.merges.emplace_back(std::move(x), std::move(y));
    }
  }
  if (!tok.merges.empty() && tok.kind != TokenizerKind::bpe &&
      tok.kind != TokenizerKind::wordpiece)
    fail(source_name, "merges are only valid for bpe/wordpiece models");

  if (tok.kind == TokenizerKind::unigram) {
    const json& logprobs = require("logprobs");
    if (!logprobs.is_array() || logprobs.size() != tok.vocab.size())
      fail(source_name, "field 'logprobs' must parallel 'tokens'");
    double total = 0.0;
    for (std::size_t i = 0; i < logprobs.size(); ++i) {
      double lp = parse_logprob(logprobs[i], i, source_name);
      tok.token_logprob.push_back(lp);
      total += std::exp(lp);
    }
    if (std::abs(total - 1.0) > 1e-4)
      fail(source_name, "token probabilities do not sum to 1 (got " +
                            std::to_string(total) + ")");
  } else if (doc.contains("logprobs")) {
    fail(source_name, "logprobs are only valid for unigram models");
  }

  return tok;
}

TrainedTokenizer load_tokenizer_file(const std::string& path) {
  return load_tokenizer(read_file(path), path);
}

}  // namespace tokeval
