#pragma once

#include <vector>

#include "holmatch/pattern.hpp"

namespace holmatch {

enum class Scheme { score0, score1, score2 };

struct ScoreConfig {
  Scheme scheme = Scheme::score2;
};

struct ScoredPair {
  Symbol c1;
  Symbol c2;
  double score = 0;
  uint32_t shared_count = 0;  // k, the number of common relative patterns
};

// w0 = 1; w1 = 1 / |cset[p]|.  Throws UnknownPatternError if p is unindexed.
double weight(const PatternIndex& idx, uint32_t rel_id, int scheme);

// score0 = k; score1 = sum of w1*w1 over the common patterns;
// score2 = score1 / ln(2 + n1*n2).
ScoredPair score_pair(Symbol c1, Symbol c2, const PatternIndex& idx1,
                      const PatternIndex& idx2, const ScoreConfig& cfg);

// Constant pairs sharing at least one relative-pattern id.
std::vector<std::pair<Symbol, Symbol>> prune_candidates(
    const PatternIndex& idx1, const PatternIndex& idx2);

// All positive-score pairs, descending by score; ties broken by
// (c1 name, c2 name) ascending.
std::vector<ScoredPair> rank_pairs(const PatternIndex& idx1,
                                   const PatternIndex& idx2,
                                   const ScoreConfig& cfg, int jobs = 1);

// Deterministic ranking order shared by every scorer and the matcher.
inline bool ranked_before(const ScoredPair& a, const ScoredPair& b) {
  if (a.score != b.score) return a.score > b.score;
  if (a.c1 != b.c1) return sym_less(a.c1, b.c1);
  return sym_less(a.c2, b.c2);
}

}  // namespace holmatch
