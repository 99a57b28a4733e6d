#include "holmatch/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "holmatch/errors.hpp"
#include "holmatch/util.hpp"

namespace holmatch {

double weight(const PatternIndex& idx, uint32_t rel_id, int scheme) {
  auto it = idx.cset.find(rel_id);
  if (it == idx.cset.end() || it->second.empty())
    throw UnknownPatternError("pattern id " + std::to_string(rel_id) +
                              " not present in index " + idx.library);
  if (scheme == 0) return 1.0;
  return 1.0 / static_cast<double>(it->second.size());
}

ScoredPair score_pair(Symbol c1, Symbol c2, const PatternIndex& idx1,
                      const PatternIndex& idx2, const ScoreConfig& cfg) {
  std::vector<uint32_t> shared = common_patterns(idx1, c1, idx2, c2);
  ScoredPair out{c1, c2, 0.0, static_cast<uint32_t>(shared.size())};
  if (shared.empty()) return out;
  if (cfg.scheme == Scheme::score0) {
    out.score = static_cast<double>(shared.size());
    return out;
  }
  double s1 = 0;
  for (uint32_t rid : shared) s1 += weight(idx1, rid, 1) * weight(idx2, rid, 1);
  if (cfg.scheme == Scheme::score1) {
    out.score = s1;
    return out;
  }
  double n1 = static_cast<double>(idx1.npatterns.at(c1));
  double n2 = static_cast<double>(idx2.npatterns.at(c2));
  out.score = s1 / std::log(2.0 + n1 * n2);
  return out;
}

std::vector<std::pair<Symbol, Symbol>> prune_candidates(
    const PatternIndex& idx1, const PatternIndex& idx2) {
  struct PairHash {
    size_t operator()(const std::pair<Symbol, Symbol>& p) const {
      return (static_cast<size_t>(p.first) << 32) ^ p.second;
    }
  };
  std::unordered_set<std::pair<Symbol, Symbol>, PairHash> seen;
  for (const auto& [rid, cs1] : idx1.cset) {
    auto it = idx2.cset.find(rid);
    if (it == idx2.cset.end()) continue;
    for (Symbol a : cs1)
      for (Symbol b : it->second) seen.emplace(a, b);
  }
  std::vector<std::pair<Symbol, Symbol>> out(seen.begin(), seen.end());
  std::sort(out.begin(), out.end(),
            [](const std::pair<Symbol, Symbol>& a,
               const std::pair<Symbol, Symbol>& b) {
              if (a.first != b.first) return sym_less(a.first, b.first);
              return sym_less(a.second, b.second);
            });
  return out;
}

std::vector<ScoredPair> rank_pairs(const PatternIndex& idx1,
                                   const PatternIndex& idx2,
                                   const ScoreConfig& cfg, int jobs) {
  std::vector<std::pair<Symbol, Symbol>> cands = prune_candidates(idx1, idx2);
  std::vector<ScoredPair> scored(cands.size());
  parallel_for(cands.size(), jobs, [&](size_t begin, size_t end) {
    for (size_t i = begin; i < end; ++i)
      scored[i] = score_pair(cands[i].first, cands[i].second, idx1, idx2, cfg);
  });
  scored.erase(std::remove_if(scored.begin(), scored.end(),
                              [](const ScoredPair& p) { return p.score <= 0; }),
               scored.end());
  std::sort(scored.begin(), scored.end(), ranked_before);
  return scored;
}

}  // namespace holmatch
