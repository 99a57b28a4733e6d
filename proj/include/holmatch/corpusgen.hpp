#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "holmatch/library.hpp"

namespace holmatch {

struct GenConfig {
  uint64_t seed = 1;
  uint32_t n_constants = 50;
  uint32_t n_theorems = 120;
  // Frequency weight per theorem shape.  Keys are the property-template
  // names (Asso, Comm, Lcomm, Idempo, Neutr, Inv, Inj, Refl, Trans, App,
  // Class) plus "filler" for random well-typed formulas.  Empty map =
  // default_property_mix().  Weights must be non-negative.
  std::map<std::string, double> property_mix;
  // Probability that a theorem survives on only one (random) side.
  double noise = 0.0;
  // Twin side renames type constructors too; with false both sides share
  // the original type names.
  bool rename_types = true;
  // Added to every generated numeric name tail so two corpora can be merged
  // without collisions.
  uint32_t name_offset = 0;
};

std::map<std::string, double> default_property_mix();

struct TwinCorpus {
  Library lib1;  // "alpha" side
  Library lib2;  // "beta" side, a renamed copy modulo noise and order
  std::vector<std::pair<Symbol, Symbol>> const_truth;
  std::vector<std::pair<Symbol, Symbol>> type_truth;
};

TwinCorpus generate_twins(const GenConfig& cfg);

// Appends src's theorems and signatures to dst; conflicting re-declarations
// throw like declare_const does.
void merge_libraries(Library& dst, const Library& src);

}  // namespace holmatch
