#pragma once

#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include "tokeval/vocabulary.hpp"

namespace tokeval {

// Ordered list of grapheme strings (multi-character, e.g. "eau", "ch").
struct GraphemeInventory {
  std::vector<std::string> graphemes;
  std::string name;

  std::size_t size() const { return graphemes.size(); }
};

// One grapheme per line, '#' starts a comment line, blank lines ignored.
// Duplicate or empty entries are data errors.
GraphemeInventory load_inventory(std::istream& in, std::string name = "");
GraphemeInventory load_inventory_file(const std::string& path);

// Greedy longest-match left to right; single-character fallback for anything
// the inventory does not cover. Concatenation of the output equals the input.
std::vector<std::string> segment_graphemes(std::string_view word,
                                           const GraphemeInventory& inv);

// 100 * |inventory entries present as vocab tokens| / |inventory|.
// Tokens are compared after removing the word-boundary meta symbol, so
// vocabularies from the no-word-split mode count e.g. "▁ch" as "ch".
double grapheme_coverage(const Vocabulary& vocab, const GraphemeInventory& inv,
                         std::string_view meta_symbol = "▁");

}  // namespace tokeval
