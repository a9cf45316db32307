#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <vector>

namespace tokeval {

struct EditCounts {
  std::size_t substitutions = 0;
  std::size_t deletions = 0;
  std::size_t insertions = 0;
  std::size_t hits = 0;
  std::size_t ref_length = 0;

  std::size_t distance() const { return substitutions + deletions + insertions; }
};

enum class OpKind { hit, sub, del, ins };

struct AlignedOp {
  OpKind kind;
  std::optional<std::size_t> ref_index;  // absent for insertions
  std::optional<std::size_t> hyp_index;  // absent for deletions
};

struct AlignmentResult {
  std::vector<AlignedOp> ops;
  EditCounts counts;
};

// Unit-cost edit distance only; two-row DP, no backtrace.
template <typename Seq>
std::size_t edit_distance(const Seq& ref, const Seq& hyp) {
  const std::size_t n = ref.size(), m = hyp.size();
  std::vector<std::size_t> prev(m + 1), cur(m + 1);
  for (std::size_t j = 0; j <= m; ++j) prev[j] = j;
  for (std::size_t i = 1; i <= n; ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= m; ++j) {
      std::size_t diag = prev[j - 1] + (ref[i - 1] == hyp[j - 1] ? 0 : 1);
      cur[j] = std::min({diag, prev[j] + 1, cur[j - 1] + 1});
    }
    std::swap(prev, cur);
  }
  return prev[m];
}

// Full DP with backtrace. Tie-break during backtracking prefers
// hit > substitution > deletion > insertion so alignments are reproducible.
template <typename Seq>
AlignmentResult levenshtein(const Seq& ref, const Seq& hyp) {
  const std::size_t n = ref.size(), m = hyp.size();
  std::vector<std::vector<std::size_t>> d(n + 1, std::vector<std::size_t>(m + 1));
  for (std::size_t i = 0; i <= n; ++i) d[i][0] = i;
  for (std::size_t j = 0; j <= m; ++j) d[0][j] = j;
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = 1; j <= m; ++j) {
      std::size_t diag = d[i - 1][j - 1] + (ref[i - 1] == hyp[j - 1] ? 0 : 1);
      d[i][j] = std::min({diag, d[i - 1][j] + 1, d[i][j - 1] + 1});
    }

  AlignmentResult result;
  result.counts.ref_length = n;
  std::vector<AlignedOp> rev;
  std::size_t i = n, j = m;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0 && ref[i - 1] == hyp[j - 1] &&
        d[i][j] == d[i - 1][j - 1]) {
      rev.push_back({OpKind::hit, i - 1, j - 1});
      --i, --j;
    } else if (i > 0 && j > 0 && d[i][j] == d[i - 1][j - 1] + 1) {
      rev.push_back({OpKind::sub, i - 1, j - 1});
      --i, --j;
    } else if (i > 0 && d[i][j] == d[i - 1][j] + 1) {
      rev.push_back({OpKind::del, i - 1, std::nullopt});
      --i;
    } else {
      rev.push_back({OpKind::ins, std::nullopt, j - 1});
      --j;
    }
  }
  result.ops.assign(rev.rbegin(), rev.rend());
  for (const AlignedOp& op : result.ops) {
    switch (op.kind) {
      case OpKind::hit: ++result.counts.hits; break;
      case OpKind::sub: ++result.counts.substitutions; break;
      case OpKind::del: ++result.counts.deletions; break;
      case OpKind::ins: ++result.counts.insertions; break;
    }
  }
  return result;
}

}  // namespace tokeval
