#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "holmatch/corpusgen.hpp"
#include "holmatch/errors.hpp"
#include "holmatch/scoring.hpp"
#include "oracles.hpp"

using namespace holmatch;

namespace {

// Hand-assembled index: every listed constant carries the given rel ids.
PatternIndex make_index(
    const char* name,
    const std::vector<std::pair<const char*, std::vector<uint32_t>>>& rows) {
  PatternIndex idx;
  idx.library = name;
  for (const auto& [cname, rids] : rows) {
    Symbol c = intern(cname);
    idx.pset[c] = rids;
    idx.npatterns[c] = static_cast<uint32_t>(rids.size());
    idx.constants.push_back(c);
    for (uint32_t r : rids) idx.cset[r].push_back(c);
  }
  std::sort(idx.constants.begin(), idx.constants.end(), sym_less);
  for (auto& [r, v] : idx.cset) {
    (void)r;
    std::sort(v.begin(), v.end(), sym_less);
  }
  return idx;
}

// The production ranking must equal the oracle ranking except that pairs
// whose scores differ by at most eps may swap (float summation order).
bool same_ranking(const std::vector<ScoredPair>& prod,
                  const std::vector<oracles::BrutePair>& brute, double eps) {
  if (prod.size() != brute.size()) return false;
  size_t i = 0;
  while (i < prod.size()) {
    size_t j = i + 1;
    while (j < brute.size() &&
           std::abs(brute[j].score - brute[i].score) <= eps)
      ++j;
    std::set<std::pair<std::string, std::string>> a, b;
    for (size_t k = i; k < j; ++k) {
      if (std::abs(prod[k].score - brute[k].score) > eps) return false;
      a.emplace(sym_name(prod[k].c1), sym_name(prod[k].c2));
      b.emplace(brute[k].c1, brute[k].c2);
    }
    if (a != b) return false;
    i = j;
  }
  return true;
}

}  // namespace

TEST_CASE("pattern weights depend only on cset size") {
  PatternIndex idx = make_index("w", {{"cw.x.a", {0}},
                                      {"cw.x.b", {0}},
                                      {"cw.x.c", {0}},
                                      {"cw.x.d", {0, 1}}});
  CHECK(weight(idx, 0, 0) == 1.0);
  CHECK(weight(idx, 0, 1) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(weight(idx, 1, 1) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(weight(idx, 9, 1), UnknownPatternError);
}

TEST_CASE("the three scoring formulas agree with direct computation") {
  PatternIndex i1 = make_index("one", {{"c1.x.a", {0, 1}},
                                       {"c1.x.z", {0}}});
  PatternIndex i2 = make_index("two", {{"c2.x.b", {0, 1, 2}},
                                       {"c2.x.y", {1}},
                                       {"c2.x.w", {1}}});
  Symbol a = intern("c1.x.a"), b = intern("c2.x.b");
  ScoreConfig cfg;
  cfg.scheme = Scheme::score0;
  ScoredPair s0 = score_pair(a, b, i1, i2, cfg);
  CHECK(s0.shared_count == 2);
  CHECK(s0.score == 2.0);

  cfg.scheme = Scheme::score1;
  double expect1 = 1.0 / (2 * 1) + 1.0 / (1 * 3);
  CHECK(score_pair(a, b, i1, i2, cfg).score ==
        doctest::Approx(expect1).epsilon(1e-12));

  cfg.scheme = Scheme::score2;
  double expect2 = expect1 / std::log(2.0 + 2 * 3);
  CHECK(score_pair(a, b, i1, i2, cfg).score ==
        doctest::Approx(expect2).epsilon(1e-12));
}

TEST_CASE("candidate pruning is exactly the shared-pattern relation") {
  GenConfig gc;
  gc.seed = 61;
  gc.n_constants = 14;
  gc.n_theorems = 36;
  gc.noise = 0.2;
  TwinCorpus tc = generate_twins(gc);
  NormConfig ncfg;
  PatternInterner interner;
  PatternIndex i1 = build_index(tc.lib1, ncfg, interner);
  PatternIndex i2 = build_index(tc.lib2, ncfg, interner);

  auto cands = prune_candidates(i1, i2);
  std::set<std::pair<Symbol, Symbol>> got(cands.begin(), cands.end());
  CHECK(got.size() == cands.size());
  std::set<std::pair<Symbol, Symbol>> want;
  for (const auto& [c1, p1] : i1.pset)
    for (const auto& [c2, p2] : i2.pset) {
      std::vector<uint32_t> common;
      std::set_intersection(p1.begin(), p1.end(), p2.begin(), p2.end(),
                            std::back_inserter(common));
      if (!common.empty()) want.emplace(c1, c2);
    }
  CHECK(got == want);
}

TEST_CASE("rankings agree with the brute-force oracle") {
  for (uint64_t seed : {71, 72, 73}) {
    GenConfig gc;
    gc.seed = seed;
    gc.n_constants = 13;
    gc.n_theorems = 34;
    gc.noise = 0.25;
    TwinCorpus tc = generate_twins(gc);
    NormConfig ncfg;
    PatternInterner interner;
    PatternIndex i1 = build_index(tc.lib1, ncfg, interner);
    PatternIndex i2 = build_index(tc.lib2, ncfg, interner);
    oracles::NaiveIndex n1 = oracles::expand_index(i1, interner);
    oracles::NaiveIndex n2 = oracles::expand_index(i2, interner);
    for (int scheme = 0; scheme < 3; ++scheme) {
      CAPTURE(seed);
      CAPTURE(scheme);
      ScoreConfig cfg;
      cfg.scheme = static_cast<Scheme>(scheme);
      auto prod = rank_pairs(i1, i2, cfg);
      auto par = rank_pairs(i1, i2, cfg, 4);
      REQUIRE(prod.size() == par.size());
      for (size_t i = 0; i < prod.size(); ++i) {
        CHECK(prod[i].c1 == par[i].c1);
        CHECK(prod[i].c2 == par[i].c2);
        CHECK(prod[i].score == par[i].score);
      }
      for (const ScoredPair& sp : prod) {
        CHECK(sp.score > 0);
        CHECK(sp.shared_count >= 1);
      }
      CHECK(std::is_sorted(prod.begin(), prod.end(), ranked_before));
      CHECK(same_ranking(prod, oracles::brute_rank(n1, n2, scheme), 1e-9));
    }
  }
}
