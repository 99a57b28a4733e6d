#pragma once

#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "holmatch/symbol.hpp"
#include "holmatch/term.hpp"
#include "holmatch/type.hpp"

namespace holmatch {

struct Theorem {
  Symbol name;
  TermPtr statement;  // closed term
};

// One prover library after parsing: theorems plus constant signatures and the
// evolving defined sets.  defined_constants starts as the logical basis and
// grows as the matcher introduces fresh shared constants; defined_types starts
// as {bool} (the function type is handled by the type-pattern extractor).
struct Library {
  std::string name;
  std::vector<Theorem> theorems;
  std::unordered_map<Symbol, TypePtr> constants;  // signature per constant
  std::vector<Symbol> const_order;                // declaration order
  std::vector<Symbol> type_order;                 // constructor first-appearance
  std::unordered_set<Symbol> defined_constants;
  std::unordered_set<Symbol> defined_types;
  std::vector<Symbol> ac_constants;  // designated for level-2 normalization

  // Installs the canonical logical constants with their signatures and seeds
  // the defined sets.
  void install_basis();

  // Records a signature; re-declaration with an equal type is a no-op,
  // a conflicting one raises ParseError.
  void declare_const(Symbol name, TypePtr ty);

  bool has_const(Symbol s) const { return constants.count(s) != 0; }
  const TypePtr& signature(Symbol s) const;

  void note_types_of(const TypePtr& ty);  // extend type_order
};

std::string serialize_library(const Library& lib);

}  // namespace holmatch
