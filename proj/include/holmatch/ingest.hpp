#pragma once

#include <string>
#include <utility>
#include <vector>

#include "holmatch/library.hpp"

namespace holmatch {

// Maps prover-specific logical operators onto the canonical basis.  Targets
// are restricted to the seven basis constants (an iff-style operator is
// expected to be mapped to equality by the exporter's table).
struct BasisMap {
  std::vector<std::pair<Symbol, Symbol>> entries;  // source -> canonical
};

// Basis file: one "<source-qname> <target>" pair per line, target either a
// full canonical name or one of forall/exists/and/or/imp/neg/eq; comments '#'.
BasisMap parse_basis(std::string_view text);
BasisMap parse_basis_file(const std::string& path);

// Rewrites all source-operator occurrences to canonical names.  Absent
// sources are ignored; theorem count is preserved.
Library apply_basis(Library lib, const BasisMap& basis);

// Substitutes c1 by c2 for every theorem of the exact shape |- c1 = c2,
// transitively to a fixed point; the equality theorems themselves are
// dropped.  Cycles pick the lexicographically smallest member as the
// representative and emit a warning instead of failing.
Library collapse_equalities(Library lib,
                            std::vector<std::string>* warnings = nullptr);

// Substitutes each manually listed constant by canonical equality; names
// absent from the library produce a warning.
Library collapse_extensional_equalities(
    Library lib, const std::vector<Symbol>& manual,
    std::vector<std::string>* warnings = nullptr);

}  // namespace holmatch
