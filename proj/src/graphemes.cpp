#include "tokeval/graphemes.hpp"

#include <algorithm>
#include <fstream>
#include <unordered_set>

#include "tokeval/errors.hpp"
#include "tokeval/utf8.hpp"

namespace tokeval {

GraphemeInventory load_inventory(std::istream& in, std::string name) {
  GraphemeInventory inv;
  inv.name = std::move(name);
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    // Trim surrounding ASCII whitespace; graphemes themselves never carry it.
    std::size_t b = line.find_first_not_of(" \t");
    std::size_t e = line.find_last_not_of(" \t");
    std::string entry = line.substr(b, e - b + 1);
    if (utf8::invalid_offset(entry) != utf8::npos)
      throw DataError(inv.name + ": invalid UTF-8 on line " +
                      std::to_string(lineno));
    if (!seen.insert(entry).second)
      throw DataError(inv.name + ": duplicate grapheme '" + entry +
                      "' on line " + std::to_string(lineno));
    inv.graphemes.push_back(std::move(entry));
  }
  return inv;
}

GraphemeInventory load_inventory_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open grapheme inventory: " + path);
  return load_inventory(in, path);
}

std::vector<std::string> segment_graphemes(std::string_view word,
                                           const GraphemeInventory& inv) {
  std::unordered_set<std::string_view> entries(inv.graphemes.begin(),
                                               inv.graphemes.end());
  std::size_t max_len = 1;
  for (const std::string& g : inv.graphemes)
    max_len = std::max(max_len, utf8::length(g));

  std::vector<std::string> chars = utf8::split(word);
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < chars.size()) {
    std::size_t take = 1;
    std::string best = chars[i];
    std::string candidate = chars[i];
    for (std::size_t len = 2; len <= max_len && i + len <= chars.size(); ++len) {
      candidate += chars[i + len - 1];
      if (entries.count(candidate)) {
        take = len;
        best = candidate;
      }
    }
    out.push_back(std::move(best));
    i += take;
  }
  return out;
}

double grapheme_coverage(const Vocabulary& vocab, const GraphemeInventory& inv,
                         std::string_view meta_symbol) {
  if (inv.graphemes.empty())
    throw UsageError("grapheme_coverage: empty inventory");

  std::unordered_set<std::string> stripped;
  for (const std::string& token : vocab.tokens()) {
    std::string t;
    if (meta_symbol.empty()) {
      t = token;
    } else {
      std::string_view rest = token;
      while (!rest.empty()) {
        std::size_t pos = rest.find(meta_symbol);
        if (pos == std::string_view::npos) {
          t.append(rest);
          break;
        }
        t.append(rest.substr(0, pos));
        rest.remove_prefix(pos + meta_symbol.size());
      }
    }
    if (!t.empty()) stripped.insert(std::move(t));
  }

  std::size_t covered = 0;
  for (const std::string& g : inv.graphemes)
    if (stripped.count(g)) ++covered;
  return 100.0 * static_cast<double>(covered) /
         static_cast<double>(inv.graphemes.size());
}

}  // namespace tokeval
