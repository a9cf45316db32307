#include "tokeval/adapters.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "tokeval/errors.hpp"
#include "tokeval/graphemes.hpp"

namespace tokeval {
namespace {

std::string label(const std::string& source, const char* fallback) {
  return source.empty() ? fallback : source;
}

std::vector<std::string> split_fields(const std::string& line, char sep) {
  std::vector<std::string> fields;
  std::size_t pos = 0;
  while (true) {
    std::size_t next = line.find(sep, pos);
    if (next == std::string::npos) {
      fields.push_back(line.substr(pos));
      break;
    }
    fields.push_back(line.substr(pos, next - pos));
    pos = next + 1;
  }
  return fields;
}

std::vector<std::string> split_symbols(const std::string& text) {
  std::vector<std::string> symbols;
  std::istringstream in(text);
  std::string s;
  while (in >> s) symbols.push_back(s);
  return symbols;
}

}  // namespace

PhonemeTable load_phoneme_table(std::istream& in, const std::string& source) {
  const std::string name = label(source, "phoneme table");
  PhonemeTable table;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields = split_fields(line, '\t');
    if (fields.size() != 3)
      throw DataError(name + ": line " + std::to_string(lineno) +
                      ": expected 3 tab-separated fields, got " +
                      std::to_string(fields.size()));
    std::vector<std::string> ref = split_symbols(fields[1]);
    std::vector<std::string> hyp = split_symbols(fields[2]);
    if (ref.empty())
      throw DataError(name + ": line " + std::to_string(lineno) +
                      ": empty reference phoneme sequence");
    auto [it, inserted] =
        table.entries.emplace(fields[0], std::make_pair(std::move(ref), std::move(hyp)));
    if (!inserted)
      throw DataError(name + ": duplicate id '" + fields[0] + "' on line " +
                      std::to_string(lineno));
  }
  return table;
}

PhonemeTable load_phoneme_table_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open phoneme table: " + path);
  return load_phoneme_table(in, path);
}

EmbeddingTable load_embedding_table(std::istream& in, const std::string& source) {
  const std::string name = label(source, "embedding table");
  EmbeddingTable table;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw DataError(name + ": line " + std::to_string(lineno) +
                      ": malformed JSON: " + e.what());
    }
    if (!doc.is_object() || !doc.contains("id") || !doc["id"].is_string() ||
        !doc.contains("ref") || !doc.contains("hyp"))
      throw DataError(name + ": line " + std::to_string(lineno) +
                      ": expected {\"id\", \"ref\", \"hyp\"}");
    const std::string id = doc["id"].get<std::string>();
    auto read_vector = [&](const char* key) {
      const nlohmann::json& arr = doc[key];
      if (!arr.is_array() || arr.empty())
        throw DataError(name + ": id '" + id + "': '" + key +
                        "' must be a non-empty number array");
      std::vector<double> v;
      v.reserve(arr.size());
      for (const auto& x : arr) {
        if (!x.is_number())
          throw DataError(name + ": id '" + id + "': non-numeric component");
        double value = x.get<double>();
        if (!std::isfinite(value))
          throw DataError(name + ": id '" + id + "': non-finite component");
        v.push_back(value);
      }
      return v;
    };
    std::vector<double> ref = read_vector("ref");
    std::vector<double> hyp = read_vector("hyp");
    if (table.dimension == 0) table.dimension = ref.size();
    if (ref.size() != table.dimension || hyp.size() != table.dimension)
      throw DataError(name + ": id '" + id + "': dimension mismatch (expected " +
                      std::to_string(table.dimension) + ")");
    auto [it, inserted] =
        table.entries.emplace(id, std::make_pair(std::move(ref), std::move(hyp)));
    if (!inserted) throw DataError(name + ": duplicate id '" + id + "'");
  }
  return table;
}

EmbeddingTable load_embedding_table_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open embedding table: " + path);
  return load_embedding_table(in, path);
}

void write_embedding_table(const EmbeddingTable& table, std::ostream& out) {
  for (const auto& [id, vectors] : table.entries) {
    nlohmann::ordered_json doc;
    doc["id"] = id;
    doc["ref"] = vectors.first;
    doc["hyp"] = vectors.second;
    out << doc.dump() << "\n";
  }
}

std::vector<std::string> naive_g2p(const std::string& word) {
  // Longest-match rules over common French graphemes; placeholder symbols
  // only — this exists so the PhonER plumbing is testable offline.
  static const std::vector<std::pair<std::string, std::string>> kRules = {
      {"eau", "o"},  {"ain", "ɛ̃"}, {"ein", "ɛ̃"}, {"oin", "wɛ̃"},
      {"ch", "ʃ"},   {"gn", "ɲ"},   {"ph", "f"},   {"qu", "k"},
      {"ou", "u"},   {"oi", "wa"},  {"au", "o"},   {"ai", "ɛ"},
      {"ei", "ɛ"},   {"eu", "ø"},   {"on", "ɔ̃"},  {"an", "ɑ̃"},
      {"en", "ɑ̃"},  {"in", "ɛ̃"},  {"un", "œ̃"},  {"é", "e"},
      {"è", "ɛ"},    {"ê", "ɛ"},    {"à", "a"},    {"â", "a"},
      {"ô", "o"},    {"î", "i"},    {"û", "y"},    {"ù", "y"},
      {"ç", "s"},    {"œ", "ø"},
  };
  static const GraphemeInventory kInventory = [] {
    GraphemeInventory inv;
    inv.name = "naive-g2p";
    for (const auto& [grapheme, phone] : kRules) inv.graphemes.push_back(grapheme);
    return inv;
  }();
  static const std::map<std::string, std::string> kLookup(kRules.begin(),
                                                          kRules.end());
  std::vector<std::string> phones;
  for (const std::string& segment : segment_graphemes(word, kInventory)) {
    auto it = kLookup.find(segment);
    phones.push_back(it != kLookup.end() ? it->second : segment);
  }
  return phones;
}

void attach_phonemes(std::vector<EvalPair>& pairs, const PhonemeTable& table) {
  for (EvalPair& pair : pairs) {
    auto it = table.entries.find(pair.id);
    if (it == table.entries.end())
      throw DataError("phoneme table has no entry for id '" + pair.id + "'");
    pair.ref_phonemes = it->second.first;
    pair.hyp_phonemes = it->second.second;
  }
}

void attach_embeddings(std::vector<EvalPair>& pairs, const EmbeddingTable& table) {
  for (EvalPair& pair : pairs) {
    auto it = table.entries.find(pair.id);
    if (it == table.entries.end())
      throw DataError("embedding table has no entry for id '" + pair.id + "'");
    pair.ref_embedding = it->second.first;
    pair.hyp_embedding = it->second.second;
  }
}

void attach_g2p_phonemes(std::vector<EvalPair>& pairs) {
  auto phonemize = [](const std::string& text) {
    std::vector<std::string> phones;
    for (const std::string& word : split_words(text))
      for (std::string& p : naive_g2p(word)) phones.push_back(std::move(p));
    return phones;
  };
  for (EvalPair& pair : pairs) {
    pair.ref_phonemes = phonemize(pair.reference);
    pair.hyp_phonemes = phonemize(pair.hypothesis);
  }
}

}  // namespace tokeval
