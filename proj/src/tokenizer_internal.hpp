#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <unordered_set>
#include <vector>

#include "tokeval/corpus.hpp"
#include "tokeval/tokenizer.hpp"

namespace tokeval::detail {

// Training units: (string, count), lexicographically ordered so every pass
// over them is deterministic. word_split=true → words; word_split=false →
// whole utterances with spaces replaced by the meta symbol.
std::map<std::string, std::size_t> collect_units(const Corpus& corpus,
                                                 bool word_split,
                                                 const std::string& meta_symbol);

// Observed single codepoints over all units, sorted by codepoint; the meta
// symbol is excluded (it already has a reserved id).
std::vector<std::string> observed_chars(
    const std::map<std::string, std::size_t>& units,
    const std::string& meta_symbol);

// Greedy longest-match left to right over `pieces`, single-character
// fallback. `max_len` is the longest piece in codepoints.
std::vector<std::string> greedy_segments(
    const std::vector<std::string>& chars,
    const std::unordered_set<std::string>& pieces, std::size_t max_len);

// Fills the reserved ids and returns a tokenizer with kind/word_split/
// normalization set; content tokens are appended by the caller.
TrainedTokenizer make_base(TokenizerKind kind, const TokenizerTrainConfig& config,
                           const Corpus& corpus);

}  // namespace tokeval::detail
