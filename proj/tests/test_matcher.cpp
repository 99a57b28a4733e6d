#include <doctest.h>

#include <algorithm>
#include <string>
#include <unordered_set>
#include <vector>

#include "holmatch/corpusgen.hpp"
#include "holmatch/errors.hpp"
#include "holmatch/matcher.hpp"
#include "holmatch/parser.hpp"
#include "oracles.hpp"

using namespace holmatch;

namespace {

const char kMu[] = "\xc2\xb5";

std::unordered_map<Symbol, Symbol> as_map(
    const std::vector<std::pair<Symbol, Symbol>>& v) {
  return {v.begin(), v.end()};
}

MatchConfig quick_cfg(int level = 1) {
  MatchConfig cfg;
  cfg.norm.level = level;
  cfg.iterations = 200;
  return cfg;
}

void check_disjoint_and_fresh(const MatchState& st) {
  std::unordered_set<Symbol> seen1, seen2, fresh;
  for (const AcceptedPair& p : st.const_pairs) {
    CHECK(seen1.insert(p.c1).second);
    CHECK(seen2.insert(p.c2).second);
    CHECK(fresh.insert(p.fresh).second);
    CHECK(sym_name(p.fresh).rfind(std::string(kMu) + ".defined.", 0) == 0);
    CHECK(st.lib1.defined_constants.count(p.fresh) == 1);
    CHECK(st.lib2.defined_constants.count(p.fresh) == 1);
  }
  for (const AcceptedTypePair& p : st.type_pairs)
    CHECK(sym_name(p.fresh).rfind(std::string(kMu) + ".deftype.", 0) == 0);
}

}  // namespace

TEST_CASE("noise-free twins are recovered without an error") {
  GenConfig gc;
  gc.seed = 21;
  gc.n_constants = 16;
  gc.n_theorems = 40;
  TwinCorpus tc = generate_twins(gc);
  MatchState st = run_match(tc.lib1, tc.lib2, quick_cfg());
  check_disjoint_and_fresh(st);
  TruthMetrics tm = evaluate_against_truth(st, as_map(tc.const_truth));
  CHECK(tm.first_error_rank == TruthMetrics::kNoError);
  CHECK(tm.total_correct == st.const_pairs.size());
  CHECK(st.const_pairs.size() >= tc.const_truth.size() / 2);
  auto ttruth = as_map(tc.type_truth);
  for (const AcceptedTypePair& p : st.type_pairs) {
    auto it = ttruth.find(p.t1);
    REQUIRE(it != ttruth.end());
    CHECK(it->second == p.t2);
  }
}

TEST_CASE("the type filter rejects shape-incompatible signatures") {
  Library l1 = parse_library(
      "const cl1.a.p tlogic.basis.fun(tl1.t.ty,tlogic.basis.bool)\n"
      "const cl1.a.f tlogic.basis.fun(tl1.t.ty,tl1.t.ty)\n"
      "thm cl1.t.one (clogic.basis.forall (\\V0. (cl1.a.p (cl1.a.f V0))))\n");
  Library l2 = parse_library(
      "const cl2.a.q tlogic.basis.fun(tl2.t.ty,tlogic.basis.bool)\n"
      "const cl2.a.g tlogic.basis.fun(tl2.t.ty,tlogic.basis.bool)\n"
      "thm cl2.t.one (clogic.basis.forall (\\V0. (cl2.a.q (cl2.a.g V0))))\n");

  MatchState st = run_match(l1, l2, quick_cfg());
  REQUIRE(st.const_pairs.size() == 1);
  CHECK(st.const_pairs[0].c1 == intern("cl1.a.p"));
  CHECK(st.const_pairs[0].c2 == intern("cl2.a.q"));
  // (f, g) outranks (p, q) by name but its signature shapes disagree
  CHECK(st.discarded_by_type == 1);
  REQUIRE(st.type_pairs.size() == 1);
  CHECK(st.type_pairs[0].t1 == intern("tl1.t.ty"));
  CHECK(st.type_pairs[0].t2 == intern("tl2.t.ty"));
  // derived pair propagates into the surviving signatures
  CHECK(write_type(st.lib1.signature(st.const_pairs[0].fresh)) ==
        write_type(st.lib2.signature(st.const_pairs[0].fresh)));

  MatchConfig off = quick_cfg();
  off.typecheck = false;
  MatchState st2 = run_match(l1, l2, off);
  CHECK(st2.const_pairs.size() == 2);
  CHECK(st2.const_pairs[0].c1 == intern("cl1.a.f"));
  CHECK(st2.discarded_by_type == 0);
  CHECK(st2.type_pairs.empty());
}

TEST_CASE("AC status transfers only when both sides have it") {
  std::string thms1 =
      "const cl1.num.add tlogic.basis.fun(tl1.t.ty,"
      "tlogic.basis.fun(tl1.t.ty,tl1.t.ty))\n"
      "const cl1.num.zero tl1.t.ty\n"
      "thm cl1.t.comm (clogic.basis.forall (\\V0. (clogic.basis.forall "
      "(\\V1. ((clogic.basis.eq ((cl1.num.add V0) V1)) "
      "((cl1.num.add V1) V0))))))\n"
      "thm cl1.t.asso (clogic.basis.forall (\\V0. (clogic.basis.forall "
      "(\\V1. (clogic.basis.forall (\\V2. ((clogic.basis.eq "
      "((cl1.num.add V0) ((cl1.num.add V1) V2))) "
      "((cl1.num.add ((cl1.num.add V0) V1)) V2))))))))\n"
      "thm cl1.t.neut (clogic.basis.forall (\\V0. ((clogic.basis.eq "
      "((cl1.num.add cl1.num.zero) V0)) V0)))\n";
  std::string thms2 = thms1;
  size_t pos = 0;
  while ((pos = thms2.find("l1.", pos)) != std::string::npos)
    thms2.replace(pos, 3, "l2.");
  Library l1 = parse_library(thms1);
  Library l2 = parse_library(thms2);

  MatchState st = run_match(l1, l2, quick_cfg(2));
  Symbol addfresh = 0;
  for (const AcceptedPair& p : st.const_pairs)
    if (p.c1 == intern("cl1.num.add")) addfresh = p.fresh;
  REQUIRE(addfresh != 0);
  auto& ac1 = st.lib1.ac_constants;
  auto& ac2 = st.lib2.ac_constants;
  CHECK(std::count(ac1.begin(), ac1.end(), addfresh) == 1);
  CHECK(std::count(ac2.begin(), ac2.end(), addfresh) == 1);
}

TEST_CASE("incremental refresh equals rebuilding from scratch") {
  for (uint64_t seed : {31, 32, 33}) {
    GenConfig gc;
    gc.seed = seed;
    gc.n_constants = 18;
    gc.n_theorems = 45;
    gc.noise = 0.15;
    TwinCorpus tc = generate_twins(gc);

    MatchConfig fast = quick_cfg(2);
    fast.iterations = 100;
    MatchConfig slow = fast;
    slow.full_rebuild = true;

    MatchState a = run_match(tc.lib1, tc.lib2, fast);
    MatchState b = run_match(tc.lib1, tc.lib2, slow);
    REQUIRE(a.const_pairs.size() == b.const_pairs.size());
    for (size_t i = 0; i < a.const_pairs.size(); ++i) {
      CAPTURE(seed);
      CAPTURE(i);
      CHECK(a.const_pairs[i].c1 == b.const_pairs[i].c1);
      CHECK(a.const_pairs[i].c2 == b.const_pairs[i].c2);
      CHECK(a.const_pairs[i].shared_count == b.const_pairs[i].shared_count);
      CHECK(a.const_pairs[i].score == b.const_pairs[i].score);
    }
    CHECK(a.discarded_by_type == b.discarded_by_type);
    REQUIRE(a.type_pairs.size() == b.type_pairs.size());
    for (size_t i = 0; i < a.type_pairs.size(); ++i) {
      CHECK(a.type_pairs[i].t1 == b.type_pairs[i].t1);
      CHECK(a.type_pairs[i].t2 == b.type_pairs[i].t2);
    }
  }
}

TEST_CASE("mid-run snapshots match a full recomputation") {
  GenConfig gc;
  gc.seed = 41;
  gc.n_constants = 14;
  gc.n_theorems = 35;
  gc.noise = 0.1;
  TwinCorpus tc = generate_twins(gc);
  MatchSession session(tc.lib1, tc.lib2, quick_cfg());
  for (int i = 0; i < 5; ++i)
    if (!session.step()) break;
  PatternIndex s1 = session.snapshot1();
  PatternIndex s2 = session.snapshot2();
  CHECK(check_duality(s1));
  CHECK(check_duality(s2));
  NormConfig cfg;
  CHECK(oracles::same_index(oracles::expand_index(s1, session.interner()),
                            oracles::naive_index(session.state().lib1, cfg)));
  CHECK(oracles::same_index(oracles::expand_index(s2, session.interner()),
                            oracles::naive_index(session.state().lib2, cfg)));
}

TEST_CASE("single pass walks one frozen ranking greedily") {
  GenConfig gc;
  gc.seed = 51;
  gc.n_constants = 15;
  gc.n_theorems = 38;
  gc.noise = 0.1;
  TwinCorpus tc = generate_twins(gc);

  MatchConfig sp = quick_cfg();
  sp.mode = MatchConfig::Mode::single_pass;
  sp.iterations = 1;
  MatchState st = run_match(tc.lib1, tc.lib2, sp);
  check_disjoint_and_fresh(st);
  for (size_t i = 1; i < st.const_pairs.size(); ++i)
    CHECK(st.const_pairs[i - 1].score >= st.const_pairs[i].score);

  MatchConfig it1 = quick_cfg();
  it1.iterations = 1;
  MatchState one = run_match(tc.lib1, tc.lib2, it1);
  REQUIRE(one.const_pairs.size() == 1);
  REQUIRE(!st.const_pairs.empty());
  CHECK(one.const_pairs[0].c1 == st.const_pairs[0].c1);
  CHECK(one.const_pairs[0].c2 == st.const_pairs[0].c2);

  MatchConfig bad = sp;
  bad.iterations = 7;
  CHECK_THROWS_AS(MatchSession(tc.lib1, tc.lib2, bad), ConfigError);
}

TEST_CASE("truth evaluation counts ranks and errors") {
  MatchState st;
  auto add = [&](const char* a, const char* b) {
    st.const_pairs.push_back({intern(a), intern(b), 0, 1.0, 1});
  };
  add("ca.x.one", "cb.x.one");
  add("ca.x.two", "cb.x.wrong");
  add("ca.x.three", "cb.x.three");
  std::unordered_map<Symbol, Symbol> truth{
      {intern("ca.x.one"), intern("cb.x.one")},
      {intern("ca.x.two"), intern("cb.x.two")},
      {intern("ca.x.three"), intern("cb.x.three")}};
  TruthMetrics tm = evaluate_against_truth(st, truth);
  CHECK(tm.total_checked == 3);
  CHECK(tm.total_correct == 2);
  CHECK(tm.first_error_rank == 2);
  CHECK(tm.correct_before_first_error == 1);

  MatchState empty;
  TruthMetrics t0 = evaluate_against_truth(empty, truth);
  CHECK(t0.first_error_rank == TruthMetrics::kNoError);
  CHECK(t0.total_checked == 0);
}
