#pragma once

#include <cstdint>
#include <memory>
#include <set>
#include <unordered_map>
#include <vector>

#include "holmatch/library.hpp"
#include "holmatch/normalize.hpp"
#include "holmatch/pattern.hpp"
#include "holmatch/scoring.hpp"

namespace holmatch {

struct MatchConfig {
  NormConfig norm;
  ScoreConfig score;
  enum class Mode { single_pass, iterative };
  Mode mode = Mode::iterative;
  uint32_t iterations = 500;  // must be 1 in single_pass mode
  bool typecheck = true;
  int jobs = 1;
  // Rebuild indices and candidate scores from scratch every iteration
  // instead of refreshing incrementally; for differential testing.
  bool full_rebuild = false;
};

struct AcceptedPair {
  Symbol c1;
  Symbol c2;
  Symbol fresh;  // the shared defined constant d
  double score;
  uint32_t shared_count;
};

struct AcceptedTypePair {
  Symbol t1;
  Symbol t2;
  Symbol fresh;
};

struct MatchState {
  std::vector<AcceptedPair> const_pairs;     // in acceptance order
  std::vector<AcceptedTypePair> type_pairs;  // in acceptance order
  Library lib1;
  Library lib2;
  size_t discarded_by_type = 0;  // distinct pairs rejected by the type filter
};

// Stepwise matcher driver.  Construction ingests the libraries, harvests the
// per-library AC sets when level 2 is configured without an explicit list,
// builds both indices, and scores the pruned candidate set.  step() performs
// one accept-substitute-rescore iteration.
class MatchSession {
 public:
  MatchSession(Library lib1, Library lib2, MatchConfig cfg);
  ~MatchSession();
  MatchSession(MatchSession&&) noexcept;

  // One iteration: accept the best type-valid pair, substitute, refresh.
  // Returns false when no acceptable positive-score pair remains.
  bool step();

  // Runs to completion per the configured mode and iteration budget.
  void run();

  const MatchState& state() const;
  size_t iterations_done() const;

  // Current indices materialized from the incremental structures.
  PatternIndex snapshot1() const;
  PatternIndex snapshot2() const;

  // Shared interner behind both snapshots' relative-pattern ids.
  const PatternInterner& interner() const;

  // The current candidate ranking, fully sorted (descending).
  std::vector<ScoredPair> current_ranking() const;

  NormStats& norm_stats();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

MatchState run_match(Library lib1, Library lib2, const MatchConfig& cfg);

struct TruthMetrics {
  static constexpr uint64_t kNoError = UINT64_MAX;
  uint64_t first_error_rank = kNoError;  // 1-based acceptance position
  size_t correct_before_first_error = 0;
  size_t total_correct = 0;
  size_t total_checked = 0;
};

TruthMetrics evaluate_against_truth(
    const MatchState& state, const std::unordered_map<Symbol, Symbol>& truth);

}  // namespace holmatch
