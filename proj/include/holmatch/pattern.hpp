#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "holmatch/library.hpp"
#include "holmatch/normalize.hpp"
#include "holmatch/term.hpp"
#include "holmatch/type.hpp"

namespace holmatch {

// Closed abstraction of a theorem over its undefined constants: the leading
// `arity` binders are the constant slots in first-occurrence order.
struct Pattern {
  std::string canonical_body;
  uint32_t arity = 0;
};

// Assigns small integer ids to patterns and to (pattern, slot) relative
// patterns.  One interner must be shared by every index that will be
// compared, so equal ids mean equal patterns across libraries.
class PatternInterner {
 public:
  uint32_t pattern_id(const std::string& canonical_body, uint32_t arity);
  uint32_t rel_id(uint32_t pattern_id, uint32_t index);

  const Pattern& pattern(uint32_t pattern_id) const {
    return patterns_[pattern_id];
  }
  std::pair<uint32_t, uint32_t> rel(uint32_t rel_id) const {
    return rels_[rel_id];
  }
  size_t pattern_count() const { return patterns_.size(); }
  size_t rel_count() const { return rels_.size(); }

 private:
  std::unordered_map<std::string, uint32_t> ids_;
  std::vector<Pattern> patterns_;
  std::map<std::pair<uint32_t, uint32_t>, uint32_t> rel_ids_;
  std::vector<std::pair<uint32_t, uint32_t>> rels_;
};

Pattern extract_pattern(const TermPtr& t,
                        const std::unordered_set<Symbol>& defined);

struct RelPatternEntry {
  Symbol constant;
  Pattern pattern;
  uint32_t index;  // slot of `constant` within the pattern
};
// One entry per undefined constant, in first-occurrence order.
std::vector<RelPatternEntry> relative_patterns(
    const TermPtr& t, const std::unordered_set<Symbol>& defined);

// P^set / C^set over interned relative-pattern ids.  pset values and cset
// values are sorted (ids ascending, constants by name) and duplicate-free.
struct PatternIndex {
  std::string library;
  std::unordered_map<Symbol, std::vector<uint32_t>> pset;
  std::unordered_map<uint32_t, std::vector<Symbol>> cset;
  std::unordered_map<Symbol, uint32_t> npatterns;
  std::vector<Symbol> constants;  // keys of pset, sorted by name
};

PatternIndex build_index(const Library& lib, const NormConfig& cfg,
                         PatternInterner& interner, int jobs = 1,
                         NormStats* stats = nullptr);

// pset1[c1] intersect pset2[c2]; throws UnknownConstantError when a constant
// has no patterns in its index.
std::vector<uint32_t> common_patterns(const PatternIndex& idx1, Symbol c1,
                                      const PatternIndex& idx2, Symbol c2);

// Full pset/cset inverse-relation check (plus npatterns consistency).
bool check_duality(const PatternIndex& idx);

// ---- Type patterns ----

struct TypeLeaf {
  bool is_var = false;
  Symbol con = 0;  // meaningful when !is_var
};

struct TypePattern {
  std::string shape;            // holes "P<k>" numbered by first occurrence
  std::vector<TypeLeaf> leaves; // abstracted atoms in hole order
};

// Abstracts undefined constructors and all type variables; defined types stay
// literal.  The function constructor is always treated as defined here.
TypePattern type_pattern(const TypePtr& ty,
                         const std::unordered_set<Symbol>& defined_types);

// When the shapes coincide: the leaf pairs with every pair containing a type
// variable removed; otherwise nullopt.
std::optional<std::vector<std::pair<Symbol, Symbol>>> match_type_patterns(
    const TypePattern& a, const TypePattern& b);

// ---- Named-property mining ----

struct PropertyTemplate {
  std::string name;
  TermPtr statement;      // over placeholder constants cprop.tmpl.c0/c1
  uint32_t nconsts;       // placeholder count (1 or 2)
  bool reconstructed;     // false for the externally fixed definitions
};
const std::vector<PropertyTemplate>& property_catalog();

struct PropertyRow {
  std::string name;
  size_t const_count;  // distinct constants (or ordered pairs)
  size_t thm_count;    // distinct theorems with a matching normalized piece
};
std::vector<PropertyRow> property_report(const Library& lib,
                                         const NormConfig& cfg);
std::string property_report_tsv(const Library& lib, const NormConfig& cfg);

// Constants exhibiting both the associativity and the commutativity template
// at level 1 — the default AC set for level-2 normalization.
std::vector<Symbol> harvest_ac_constants(const Library& lib,
                                         uint32_t distribution_size_cap = 512);

}  // namespace holmatch
