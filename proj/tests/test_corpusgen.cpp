#include <doctest.h>

#include <set>
#include <string>
#include <unordered_set>

#include "holmatch/corpusgen.hpp"
#include "holmatch/errors.hpp"
#include "holmatch/library.hpp"
#include "holmatch/logic.hpp"
#include "holmatch/parser.hpp"
#include "holmatch/pattern.hpp"
#include "holmatch/term.hpp"

using namespace holmatch;

TEST_CASE("generation is a pure function of its configuration") {
  GenConfig gc;
  gc.seed = 91;
  gc.n_constants = 22;
  gc.n_theorems = 55;
  gc.noise = 0.1;
  TwinCorpus a = generate_twins(gc);
  TwinCorpus b = generate_twins(gc);
  CHECK(serialize_library(a.lib1) == serialize_library(b.lib1));
  CHECK(serialize_library(a.lib2) == serialize_library(b.lib2));
  CHECK(a.const_truth == b.const_truth);
  CHECK(a.type_truth == b.type_truth);

  gc.seed = 92;
  TwinCorpus c = generate_twins(gc);
  CHECK(serialize_library(a.lib1) != serialize_library(c.lib1));
}

TEST_CASE("empty requests produce empty libraries") {
  GenConfig gc;
  gc.n_constants = 0;
  TwinCorpus a = generate_twins(gc);
  CHECK(a.lib1.theorems.empty());
  CHECK(a.const_truth.empty());
  CHECK(serialize_library(a.lib1).empty());

  gc.n_constants = 5;
  gc.n_theorems = 0;
  TwinCorpus b = generate_twins(gc);
  CHECK(b.lib1.theorems.empty());
}

TEST_CASE("configuration validation") {
  GenConfig gc;
  gc.noise = 1.5;
  CHECK_THROWS_AS(generate_twins(gc), ConfigError);
  gc.noise = -0.1;
  CHECK_THROWS_AS(generate_twins(gc), ConfigError);
  gc.noise = 0;
  gc.property_mix = {{"Comm", -1.0}};
  CHECK_THROWS_AS(generate_twins(gc), ConfigError);
}

TEST_CASE("every declared constant occurs in its own library") {
  for (uint64_t seed : {101, 102}) {
    GenConfig gc;
    gc.seed = seed;
    gc.n_constants = 30;
    gc.n_theorems = 40;  // fewer theorems than needed to cover naturally
    TwinCorpus tc = generate_twins(gc);
    for (const Library* lib : {&tc.lib1, &tc.lib2}) {
      std::unordered_set<Symbol> used;
      for (const Theorem& th : lib->theorems)
        for (Symbol c : constants_in_order(th.statement)) used.insert(c);
      for (Symbol c : lib->const_order)
        CHECK(used.count(c) == 1);
    }
  }
}

TEST_CASE("twin names swap the library prefix and keep the tail") {
  GenConfig gc;
  gc.seed = 111;
  gc.n_constants = 15;
  gc.n_theorems = 30;
  TwinCorpus tc = generate_twins(gc);
  CHECK(tc.lib1.name == "alpha");
  CHECK(tc.lib2.name == "beta");
  for (const auto& [c1, c2] : tc.const_truth) {
    std::string n1 = sym_name(c1), n2 = sym_name(c2);
    CHECK(n1.rfind("calpha.", 0) == 0);
    CHECK(n2 == "cbeta." + n1.substr(7));
  }
  for (const auto& [t1, t2] : tc.type_truth) {
    std::string n1 = sym_name(t1), n2 = sym_name(t2);
    CHECK(n1.rfind("talpha.", 0) == 0);
    CHECK(n2 == "tbeta." + n1.substr(7));
  }

  gc.rename_types = false;
  TwinCorpus same = generate_twins(gc);
  for (const auto& [t1, t2] : same.type_truth) CHECK(t1 == t2);
}

TEST_CASE("noise-free twins have identical pattern sets pairwise") {
  GenConfig gc;
  gc.seed = 121;
  gc.n_constants = 25;
  gc.n_theorems = 60;
  TwinCorpus tc = generate_twins(gc);
  NormConfig cfg;
  PatternInterner interner;
  PatternIndex i1 = build_index(tc.lib1, cfg, interner);
  PatternIndex i2 = build_index(tc.lib2, cfg, interner);
  for (const auto& [c1, c2] : tc.const_truth) {
    CAPTURE(sym_name(c1));
    CHECK(i1.pset.at(c1) == i2.pset.at(c2));
  }
}

TEST_CASE("offsets keep merged corpora collision-free") {
  GenConfig ga;
  ga.seed = 131;
  ga.n_constants = 12;
  ga.n_theorems = 25;
  GenConfig gb = ga;
  gb.seed = 132;
  gb.name_offset = 1000;
  TwinCorpus a = generate_twins(ga);
  TwinCorpus b = generate_twins(gb);

  // both sides share only the implicit logical basis
  std::set<Symbol> aset;
  size_t b_own = 0;
  for (Symbol c : a.lib2.const_order)
    if (!logic::is_basis(c)) aset.insert(c);
  for (Symbol c : b.lib2.const_order) {
    if (logic::is_basis(c)) continue;
    ++b_own;
    CHECK(aset.count(c) == 0);
  }

  Library merged = a.lib2;
  size_t nconst = merged.const_order.size();
  size_t nthm = merged.theorems.size();
  merge_libraries(merged, b.lib2);
  CHECK(merged.const_order.size() == nconst + b_own);
  CHECK(merged.theorems.size() == nthm + b.lib2.theorems.size());
  // merged output still parses back
  Library re = parse_library(serialize_library(merged), "merged");
  CHECK(re.theorems.size() == merged.theorems.size());
}

TEST_CASE("the property mix steers the generated shapes") {
  GenConfig gc;
  gc.seed = 141;
  gc.n_constants = 12;
  gc.n_theorems = 40;
  gc.property_mix = {{"Comm", 1.0}};  // no filler at all
  TwinCorpus tc = generate_twins(gc);
  NormConfig cfg;
  auto rows = property_report(tc.lib1, cfg);
  for (const auto& r : rows)
    if (r.name == "Comm") CHECK(r.thm_count >= gc.n_theorems / 2);
}
