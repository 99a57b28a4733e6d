#include <doctest.h>

#include <string>
#include <vector>

#include "holmatch/corpusgen.hpp"
#include "holmatch/logic.hpp"
#include "holmatch/normalize.hpp"
#include "holmatch/term.hpp"
#include "holmatch/util.hpp"
#include "oracles.hpp"

using namespace holmatch;
using namespace holmatch::logic;

namespace {

TermPtr C(const char* name) { return Term::constant(intern(name)); }

std::vector<std::string> canon_all(const std::vector<TermPtr>& ts) {
  std::vector<std::string> out;
  for (const auto& t : ts) out.push_back(serialize_term(t));
  return out;
}

std::vector<std::string> norm1(const TermPtr& t) {
  NormConfig cfg;
  return canon_all(normalize(t, cfg));
}

// Random closed boolean formula; quantifiers range over the two truth
// values, so the evaluation oracle covers every node we emit.
TermPtr random_formula(Rng& rng, int depth, uint32_t nbound) {
  if (depth == 0 || (nbound > 0 && rng.chance(0.25)))
    return Term::bound(rng.below(nbound));
  switch (rng.below(7)) {
    case 0: return mk_and(random_formula(rng, depth - 1, nbound),
                          random_formula(rng, depth - 1, nbound));
    case 1: return mk_or(random_formula(rng, depth - 1, nbound),
                         random_formula(rng, depth - 1, nbound));
    case 2: return mk_imp(random_formula(rng, depth - 1, nbound),
                          random_formula(rng, depth - 1, nbound));
    case 3: return mk_eq(random_formula(rng, depth - 1, nbound),
                         random_formula(rng, depth - 1, nbound));
    case 4: return mk_neg(random_formula(rng, depth - 1, nbound));
    case 5: return mk_forall(random_formula(rng, depth - 1, nbound + 1));
    default: return mk_exists(random_formula(rng, depth - 1, nbound + 1));
  }
}

}  // namespace

TEST_CASE("implications are rewritten and negations pushed to atoms") {
  TermPtr P = C("ch.x.p"), Q = C("ch.x.q");
  CHECK(norm1(mk_imp(P, Q)) ==
        std::vector<std::string>{
            "@ @ c:clogic.basis.or @ c:clogic.basis.neg c:ch.x.p c:ch.x.q"});
  CHECK(norm1(mk_neg(mk_and(P, Q))) ==
        std::vector<std::string>{
            "@ @ c:clogic.basis.or @ c:clogic.basis.neg c:ch.x.p "
            "@ c:clogic.basis.neg c:ch.x.q"});
  CHECK(norm1(mk_neg(mk_neg(P))) == std::vector<std::string>{"c:ch.x.p"});
  TermPtr r = C("ch.x.r");
  CHECK(norm1(mk_neg(mk_forall(Term::app(r, Term::bound(0))))) ==
        std::vector<std::string>{
            "@ c:clogic.basis.exists L @ c:clogic.basis.neg @ c:ch.x.r b0"});
}

TEST_CASE("universal prefixes merge and conjunctions split back out") {
  TermPtr p = C("ch.x.p"), q = C("ch.x.q");
  TermPtr t = mk_and(mk_forall(Term::app(p, Term::bound(0))),
                     mk_forall(Term::app(q, Term::bound(0))));
  CHECK(norm1(t) ==
        std::vector<std::string>{"@ c:clogic.basis.forall L @ c:ch.x.p b0",
                                 "@ c:clogic.basis.forall L @ c:ch.x.q b0"});
  // existentials block both prenexing and splitting
  TermPtr barrier =
      mk_exists(mk_and(Term::app(p, Term::bound(0)), C("ch.x.q")));
  auto pieces = norm1(barrier);
  REQUIRE(pieces.size() == 1);
  CHECK(pieces[0] ==
        "@ c:clogic.basis.exists L @ @ c:clogic.basis.and @ c:ch.x.p b0 "
        "c:ch.x.q");
}

TEST_CASE("or distributes over and, bounded by the size cap") {
  TermPtr P = C("ch.x.p"), Q = C("ch.x.q"), R = C("ch.x.r");
  TermPtr t = mk_or(P, mk_and(Q, R));
  CHECK(norm1(t) ==
        std::vector<std::string>{
            "@ @ c:clogic.basis.or c:ch.x.p c:ch.x.q",
            "@ @ c:clogic.basis.or c:ch.x.p c:ch.x.r"});

  NormConfig capped;
  capped.distribution_size_cap = 1;
  NormStats stats;
  auto out = normalize(t, capped, "ch.t.capped", &stats);
  REQUIRE(out.size() == 1);
  // untouched disjunction survives, recorded as a skip
  REQUIRE(stats.skipped_distributions.size() == 1);
  CHECK(stats.skipped_distributions[0].rfind("SKIP-DIST ch.t.capped ", 0) ==
        0);
  CHECK(serialize_term(out[0]).find("c:clogic.basis.and") !=
        std::string::npos);
}

TEST_CASE("the size cap flips exactly at the distributed node count") {
  TermPtr a = C("ch.x.a"), b = C("ch.x.b"), c = C("ch.x.c"), d = C("ch.x.d"),
          e = C("ch.x.e");
  auto splits_at = [](const TermPtr& t, int64_t cap) {
    NormConfig cfg;
    cfg.distribution_size_cap = cap;
    NormStats stats;
    normalize(t, cfg, "ch.t.flip", &stats);
    return stats.skipped_distributions.empty();
  };
  // p \/ (q /\ r): clauses (p\/q), (p\/r) of 5 nodes each plus one join.
  TermPtr t1 = mk_or(a, mk_and(b, c));
  CHECK(splits_at(t1, 13));
  CHECK(!splits_at(t1, 12));
  // (a /\ b) \/ (c /\ d): four 5-node clauses, three joins.
  TermPtr t2 = mk_or(mk_and(a, b), mk_and(c, d));
  CHECK(splits_at(t2, 29));
  CHECK(!splits_at(t2, 28));
  // Nested disjunction; the count must not depend on bracketing sides.
  TermPtr t3 = mk_or(mk_or(mk_and(a, b), c), mk_and(d, e));
  TermPtr t3m = mk_or(mk_and(d, e), mk_or(c, mk_and(b, a)));
  for (const TermPtr& t : {t3, t3m}) {
    CHECK(splits_at(t, 45));
    CHECK(!splits_at(t, 44));
  }
}

TEST_CASE("commutative operands and equality children sort canonically") {
  TermPtr P = C("ch.x.p"), Q = C("ch.x.q"), R = C("ch.x.r");
  CHECK(norm1(mk_eq(Q, P)) ==
        std::vector<std::string>{
            "@ @ c:clogic.basis.eq c:ch.x.p c:ch.x.q"});
  // all bracketings and orders of a flat conjunction agree
  auto expect = norm1(mk_and(P, mk_and(Q, R)));
  CHECK(norm1(mk_and(mk_and(R, Q), P)) == expect);
  CHECK(norm1(mk_and(Q, mk_and(P, R))) == expect);
  CHECK(norm1(mk_and(mk_and(P, R), Q)) == expect);
}

TEST_CASE("independent adjacent binders reach one canonical order") {
  TermPtr r = C("ch.x.r");
  auto app2 = [&](TermPtr a, TermPtr b) {
    return Term::app(Term::app(r, std::move(a)), std::move(b));
  };
  TermPtr t1 = mk_forall(mk_forall(app2(Term::bound(1), Term::bound(0))));
  TermPtr t2 = mk_forall(mk_forall(app2(Term::bound(0), Term::bound(1))));
  CHECK(norm1(t1) == norm1(t2));
}

TEST_CASE("random operand shuffles cannot change the result") {
  Rng rng(77);
  TermPtr atoms[] = {C("ch.x.p"), C("ch.x.q"), C("ch.x.r"), C("ch.x.s"),
                     C("ch.x.t")};
  for (int iter = 0; iter < 120; ++iter) {
    size_t n = 2 + rng.below(4);
    std::vector<TermPtr> ops(atoms, atoms + n);
    bool disj = rng.chance(0.5);
    auto join = [&](std::vector<TermPtr> v) {
      rng.shuffle(v);
      TermPtr acc = v[0];
      for (size_t i = 1; i < v.size(); ++i) {
        TermPtr next = v[i];
        if (rng.chance(0.5))
          acc = disj ? mk_or(acc, next) : mk_and(acc, next);
        else
          acc = disj ? mk_or(next, acc) : mk_and(next, acc);
      }
      return acc;
    };
    CHECK(norm1(join(ops)) == norm1(join(ops)));
  }
}

TEST_CASE("normalization is idempotent on generated corpora") {
  GenConfig gc;
  gc.seed = 5;
  gc.n_constants = 24;
  gc.n_theorems = 60;
  TwinCorpus tc = generate_twins(gc);
  NormConfig cfg;
  size_t pieces_seen = 0;
  for (const Theorem& th : tc.lib1.theorems) {
    for (const TermPtr& piece : normalize(th.statement, cfg)) {
      auto again = normalize(piece, cfg);
      REQUIRE(again.size() == 1);
      CHECK(serialize_term(again[0]) == serialize_term(piece));
      ++pieces_seen;
    }
  }
  CHECK(pieces_seen >= tc.lib1.theorems.size());
}

TEST_CASE("normalization preserves two-valued semantics") {
  Rng rng(4242);
  NormConfig cfg;
  for (int iter = 0; iter < 150; ++iter) {
    TermPtr f = mk_forall(random_formula(rng, 3, 1));
    bool before = oracles::eval_closed(f);
    bool after = true;
    for (const TermPtr& piece : normalize(f, cfg))
      after = after && oracles::eval_closed(piece);
    CHECK(before == after);
  }
}

TEST_CASE("designated AC constants flatten and sort at level 2") {
  TermPtr a = C("ch.x.a"), b = C("ch.x.b"), cc = C("ch.x.c");
  TermPtr f = C("ch.x.f"), g = C("ch.x.g");
  auto bin = [](const TermPtr& op, TermPtr x, TermPtr y) {
    return Term::app(Term::app(op, std::move(x)), std::move(y));
  };
  std::vector<Symbol> ac{intern("ch.x.f")};
  TermPtr left = bin(f, bin(f, cc, b), a);
  CHECK(serialize_term(ac_normalize(left, ac)) ==
        "@ @ c:ch.x.f c:ch.x.a @ @ c:ch.x.f c:ch.x.b c:ch.x.c");
  // non-designated operators keep their operand order
  CHECK(serialize_term(ac_normalize(bin(g, b, a), ac)) ==
        "@ @ c:ch.x.g c:ch.x.b c:ch.x.a");

  NormConfig cfg2;
  cfg2.level = 2;
  cfg2.ac_constants = ac;
  auto out = normalize(mk_eq(bin(f, a, b), bin(f, b, a)), cfg2);
  REQUIRE(out.size() == 1);
  CHECK(serialize_term(out[0]) ==
        "@ @ c:clogic.basis.eq @ @ c:ch.x.f c:ch.x.a c:ch.x.b "
        "@ @ c:ch.x.f c:ch.x.a c:ch.x.b");
}

TEST_CASE("level 0 is the identity and duplicates collapse") {
  TermPtr P = C("ch.x.p");
  NormConfig cfg0;
  cfg0.level = 0;
  TermPtr t = mk_imp(P, P);
  auto out = normalize(t, cfg0);
  REQUIRE(out.size() == 1);
  CHECK(term_eq(out[0], t));
  CHECK(norm1(mk_and(P, P)) == std::vector<std::string>{"c:ch.x.p"});
}
