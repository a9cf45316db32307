#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "tokeval/errors.hpp"
#include "tokeval/tokenizer.hpp"
#include "tokeval/utf8.hpp"
#include "tokenizer_internal.hpp"

namespace tokeval {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
// Effectively-zero log-probability for pieces EM assigned no mass.
constexpr double kFloorLogProb = -1e4;

double log_sum_exp(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  double hi = std::max(a, b), lo = std::min(a, b);
  return hi + std::log1p(std::exp(lo - hi));
}

struct Unit {
  std::vector<std::string> chars;
  std::size_t count;
};

std::string join_range(const std::vector<std::string>& chars, std::size_t begin,
                       std::size_t end) {
  std::string s;
  for (std::size_t i = begin; i < end; ++i) s += chars[i];
  return s;
}

// One EM round: forward-backward expected piece counts, then re-normalize.
void em_step(const std::vector<Unit>& units, std::map<std::string, double>& logp,
             std::size_t max_len) {
  std::map<std::string, double> expected;
  for (const Unit& u : units) {
    const std::size_t n = u.chars.size();
    std::vector<double> fwd(n + 1, kNegInf), bwd(n + 1, kNegInf);
    fwd[0] = 0.0;
    for (std::size_t j = 1; j <= n; ++j)
      for (std::size_t len = 1; len <= std::min(max_len, j); ++len) {
        auto it = logp.find(join_range(u.chars, j - len, j));
        if (it == logp.end()) continue;
        fwd[j] = log_sum_exp(fwd[j], fwd[j - len] + it->second);
      }
    bwd[n] = 0.0;
    for (std::size_t i = n; i-- > 0;)
      for (std::size_t len = 1; len <= std::min(max_len, n - i); ++len) {
        auto it = logp.find(join_range(u.chars, i, i + len));
        if (it == logp.end()) continue;
        bwd[i] = log_sum_exp(bwd[i], it->second + bwd[i + len]);
      }
    const double z = fwd[n];
    if (z == kNegInf) continue;  // unsegmentable; cannot happen with singles
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t len = 1; len <= std::min(max_len, n - i); ++len) {
        std::string piece = join_range(u.chars, i, i + len);
        auto it = logp.find(piece);
        if (it == logp.end()) continue;
        double post = fwd[i] + it->second + bwd[i + len] - z;
        expected[std::move(piece)] +=
            static_cast<double>(u.count) * std::exp(post);
      }
  }

  double total = 0.0;
  for (const auto& [piece, e] : expected) total += e;
  const double log_total = std::log(total);
  for (auto& [piece, lp] : logp) {
    auto it = expected.find(piece);
    lp = (it != expected.end() && it->second > 0.0)
             ? std::log(it->second) - log_total
             : kFloorLogProb;
  }
}

struct Segmentation {
  std::vector<std::string> pieces;
  double ll = kNegInf;
};

// Maximum-likelihood segmentation; ties prefer the longer final piece so the
// result is order-independent of the piece map.
Segmentation viterbi_unit(const std::vector<std::string>& chars,
                          const std::map<std::string, double>& logp,
                          std::size_t max_len, const std::string* banned) {
  const std::size_t n = chars.size();
  std::vector<double> best(n + 1, kNegInf);
  std::vector<std::size_t> back(n + 1, 0);
  best[0] = 0.0;
  for (std::size_t j = 1; j <= n; ++j)
    for (std::size_t len = 1; len <= std::min(max_len, j); ++len) {
      std::string piece = join_range(chars, j - len, j);
      if (banned && piece == *banned) continue;
      auto it = logp.find(piece);
      if (it == logp.end()) continue;
      double cand = best[j - len] + it->second;
      if (best[j - len] == kNegInf) continue;
      if (cand > best[j] || (cand == best[j] && len > back[j])) {
        best[j] = cand;
        back[j] = len;
      }
    }

  Segmentation seg;
  seg.ll = best[n];
  if (seg.ll == kNegInf) return seg;
  std::vector<std::string> rev;
  for (std::size_t j = n; j > 0; j -= back[j])
    rev.push_back(join_range(chars, j - back[j], j));
  seg.pieces.assign(rev.rbegin(), rev.rend());
  return seg;
}

}  // namespace

TrainedTokenizer train_unigram(const Corpus& corpus,
                               const TokenizerTrainConfig& config) {
  if (corpus.utterances.empty()) throw UsageError("training corpus is empty");
  if (config.unigram_prune_fraction <= 0.0 || config.unigram_prune_fraction >= 1.0)
    throw UsageError("unigram prune fraction must lie in (0, 1)");
  if (config.unigram_seed_multiplier == 0 || config.unigram_em_iterations == 0 ||
      config.unigram_max_piece_length == 0)
    throw UsageError("unigram hyperparameters must be positive");

  TrainedTokenizer tok = detail::make_base(TokenizerKind::unigram, config, corpus);
  auto unit_counts = detail::collect_units(corpus, config.word_split, tok.meta_symbol);
  if (unit_counts.empty()) throw UsageError("training corpus has no words");

  std::vector<std::string> singles = detail::observed_chars(unit_counts, tok.meta_symbol);
  if (config.target_vocab_size < singles.size())
    throw UsageError("target vocab size " +
                     std::to_string(config.target_vocab_size) +
                     " is below the observed character count " +
                     std::to_string(singles.size()));

  std::vector<Unit> units;
  units.reserve(unit_counts.size());
  for (const auto& [unit, count] : unit_counts)
    units.push_back({utf8::split(unit), count});

  const std::size_t max_len = config.unigram_max_piece_length;

  // Seed: every substring up to max_len, scored frequency * length. Single
  // characters (and the meta symbol in no-split mode) are always kept.
  std::map<std::string, std::size_t> freq;
  for (const Unit& u : units)
    for (std::size_t i = 0; i < u.chars.size(); ++i)
      for (std::size_t len = 1; len <= std::min(max_len, u.chars.size() - i); ++len)
        freq[join_range(u.chars, i, i + len)] += u.count;

  std::vector<std::pair<std::string, std::size_t>> multi_candidates;
  std::map<std::string, double> logp;  // working piece set, log score for now
  for (const auto& [piece, count] : freq) {
    std::size_t len = utf8::length(piece);
    if (len == 1)
      logp[piece] = static_cast<double>(count);  // raw score until normalized
    else
      multi_candidates.push_back({piece, count * len});
  }

  std::size_t seed_budget = config.unigram_seed_multiplier * config.target_vocab_size;
  std::size_t multi_budget = seed_budget > logp.size() ? seed_budget - logp.size() : 0;
  std::sort(multi_candidates.begin(), multi_candidates.end(),
            [](const auto& a, const auto& b) {
              if (a.second != b.second) return a.second > b.second;
              return a.first < b.first;
            });
  if (multi_candidates.size() > multi_budget)
    multi_candidates.resize(multi_budget);
  for (const auto& [piece, score] : multi_candidates)
    logp[piece] = static_cast<double>(score);

  // Scores -> initial log-probabilities.
  double total = 0.0;
  for (const auto& [piece, score] : logp) total += score;
  for (auto& [piece, lp] : logp) lp = std::log(lp) - std::log(total);

  auto content_size = [&] {
    // The meta symbol piece has a reserved id and is not a content token.
    return logp.size() - (logp.count(tok.meta_symbol) ? 1 : 0);
  };

  while (content_size() > config.target_vocab_size) {
    for (std::size_t i = 0; i < config.unigram_em_iterations; ++i)
      em_step(units, logp, max_len);

    // Viterbi usage index, then per-piece loss in corpus log-likelihood if
    // that piece were removed. Pieces no segmentation uses lose nothing.
    std::map<std::string, std::vector<std::size_t>> used_by;
    std::vector<Segmentation> segs(units.size());
    for (std::size_t ui = 0; ui < units.size(); ++ui) {
      segs[ui] = viterbi_unit(units[ui].chars, logp, max_len, nullptr);
      for (const std::string& piece : segs[ui].pieces)
        if (utf8::length(piece) > 1) used_by[piece].push_back(ui);
    }

    std::vector<std::pair<double, std::string>> removable;  // (loss, piece)
    for (const auto& [piece, lp] : logp) {
      if (utf8::length(piece) <= 1) continue;  // singles are never removable
      double loss = 0.0;
      auto it = used_by.find(piece);
      if (it != used_by.end())
        for (std::size_t ui : it->second) {
          Segmentation alt = viterbi_unit(units[ui].chars, logp, max_len, &piece);
          loss += static_cast<double>(units[ui].count) * (segs[ui].ll - alt.ll);
        }
      removable.push_back({loss, piece});
    }
    if (removable.empty()) break;

    std::sort(removable.begin(), removable.end(), [](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first < b.first;
      return a.second < b.second;
    });
    std::size_t k = std::max<std::size_t>(
        1, static_cast<std::size_t>(config.unigram_prune_fraction *
                                    static_cast<double>(removable.size())));
    k = std::min(k, content_size() - config.target_vocab_size);
    k = std::min(k, removable.size());
    for (std::size_t i = 0; i < k; ++i) logp.erase(removable[i].second);
  }

  if (content_size() < config.target_vocab_size)
    tok.target_shortfall = config.target_vocab_size - content_size();

  for (std::size_t i = 0; i < config.unigram_em_iterations; ++i)
    em_step(units, logp, max_len);

  // Final vocabulary: singles (sorted), then surviving multis (sorted). The
  // smoothing constant gives every id (specials included) finite mass while
  // keeping the total at exactly 1.
  std::vector<std::string> multis;
  for (const auto& [piece, lp] : logp)
    if (utf8::length(piece) > 1) multis.push_back(piece);
  std::sort(multis.begin(), multis.end());
  for (const std::string& c : singles) tok.vocab.add(c);
  for (const std::string& m : multis) tok.vocab.add(m);

  constexpr double kAlpha = 1e-6;
  const double denom = 1.0 + kAlpha * static_cast<double>(tok.vocab.size());
  tok.token_logprob.resize(tok.vocab.size());
  for (std::size_t id = 0; id < tok.vocab.size(); ++id) {
    auto it = logp.find(tok.vocab.token(id));
    double mass = it != logp.end() ? std::exp(it->second) : 0.0;
    tok.token_logprob[id] = std::log((mass + kAlpha) / denom);
  }
  return tok;
}

}  // namespace tokeval
