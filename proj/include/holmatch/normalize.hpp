#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "holmatch/symbol.hpp"
#include "holmatch/term.hpp"

namespace holmatch {

struct NormConfig {
  int level = 1;                     // 0 identity, 1 full pipeline, 2 = 1 + AC
  std::vector<Symbol> ac_constants;  // consulted only at level 2
  uint32_t distribution_size_cap = 512;
};

struct NormStats {
  // One "SKIP-DIST <theorem-name> <node-count>" line per skipped distribution.
  std::vector<std::string> skipped_distributions;
};

// Turns one closed theorem statement into its set of normalized statements.
// Level 0 returns the input unchanged.  Levels 1 and 2 run: implication
// removal, negation pushing, universal-quantifier prenexing (existentials are
// a barrier), or-over-and distribution (bounded by distribution_size_cap),
// associativity flattening, commutativity sorting, and finally splitting of
// the top-level conjunction with per-conjunct re-quantification.  Output is
// deduplicated and ordered by canonical form.
std::vector<TermPtr> normalize(const TermPtr& t, const NormConfig& cfg,
                               std::string_view thm_name = "?",
                               NormStats* stats = nullptr);

// The level-2 AC rewriting alone: flatten nested applications of each listed
// constant, sort the operands canonically, rebuild right-nested.
TermPtr ac_normalize(const TermPtr& t, const std::vector<Symbol>& ac);

}  // namespace holmatch
