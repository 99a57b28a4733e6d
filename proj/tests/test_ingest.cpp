#include <doctest.h>

#include <algorithm>

#include "holmatch/errors.hpp"
#include "holmatch/ingest.hpp"
#include "holmatch/logic.hpp"
#include "holmatch/parser.hpp"

using namespace holmatch;

namespace {

// A toy export with prover-specific operator names.
const char* kRawLib =
    "const chol.bool.! tlogic.basis.fun(tlogic.basis.fun(A0,"
    "tlogic.basis.bool),tlogic.basis.bool)\n"
    "const chol.bool.= tlogic.basis.fun(A0,tlogic.basis.fun(A0,"
    "tlogic.basis.bool))\n"
    "const chol.num.add tlogic.basis.fun(thol.num.num,"
    "tlogic.basis.fun(thol.num.num,thol.num.num))\n"
    "thm chol.num.comm (chol.bool.! (\\V0. (chol.bool.! (\\V1. "
    "((chol.bool.= ((chol.num.add V0) V1)) ((chol.num.add V1) V0))))))\n";

}  // namespace

TEST_CASE("basis mapping rewrites operators and defines targets") {
  Library lib = parse_library(kRawLib);
  BasisMap bm = parse_basis(
      "# exporter table\n"
      "chol.bool.! forall\n"
      "chol.bool.= clogic.basis.eq\n");
  Library mapped = apply_basis(std::move(lib), bm);
  std::string s = serialize_library(mapped);
  CHECK(s.find("chol.bool.!") == std::string::npos);
  CHECK(s.find("clogic.basis.forall") != std::string::npos);
  CHECK(s.find("clogic.basis.eq") != std::string::npos);
  // source signatures disappear; canonical names are defined
  CHECK(mapped.constants.count(intern("chol.bool.!")) == 0);
  CHECK(mapped.defined_constants.count(logic::forall()) == 1);
  // untouched constants keep their signatures
  CHECK(mapped.constants.count(intern("chol.num.add")) == 1);

  CHECK_THROWS_AS(parse_basis("chol.bool.! nonsense\n"), ConfigError);
}

TEST_CASE("equality collapse follows chains and reports cycles") {
  std::string text =
      "const ch.a.x th.t.ty\n"
      "const ch.a.y th.t.ty\n"
      "const ch.a.z th.t.ty\n"
      "const ch.a.p tlogic.basis.fun(th.t.ty,tlogic.basis.bool)\n"
      "thm ch.t.e1 ((clogic.basis.eq ch.a.x) ch.a.y)\n"
      "thm ch.t.e2 ((clogic.basis.eq ch.a.y) ch.a.z)\n"
      "thm ch.t.use (ch.a.p ch.a.x)\n";
  std::vector<std::string> warnings;
  Library lib = collapse_equalities(parse_library(text), &warnings);
  // both equations consumed, use-site rewritten to the chain's end
  CHECK(lib.theorems.size() == 1);
  CHECK(serialize_library(lib).find("ch.a.z") != std::string::npos);
  CHECK(serialize_library(lib).find("ch.a.x") == std::string::npos);
  CHECK(lib.constants.count(intern("ch.a.x")) == 0);
  CHECK(warnings.empty());

  // a cycle resolves to the lexicographically smallest member, with warning
  std::string cyc =
      "const ch.a.x th.t.ty\n"
      "const ch.a.y th.t.ty\n"
      "const ch.a.p tlogic.basis.fun(th.t.ty,tlogic.basis.bool)\n"
      "thm ch.t.e1 ((clogic.basis.eq ch.a.x) ch.a.y)\n"
      "thm ch.t.e2 ((clogic.basis.eq ch.a.y) ch.a.x)\n"
      "thm ch.t.use (ch.a.p ch.a.y)\n";
  warnings.clear();
  Library clib = collapse_equalities(parse_library(cyc), &warnings);
  CHECK(clib.theorems.size() == 1);
  CHECK(serialize_library(clib).find("ch.a.x") != std::string::npos);
  CHECK(!warnings.empty());

  // only the literal  c1 = c2  shape collapses
  std::string wrapped =
      "const ch.a.x th.t.ty\n"
      "const ch.a.y th.t.ty\n"
      "thm ch.t.q (clogic.basis.forall (\\V0. ((clogic.basis.eq ch.a.x) "
      "ch.a.y)))\n";
  warnings.clear();
  Library wlib = collapse_equalities(parse_library(wrapped), &warnings);
  CHECK(wlib.theorems.size() == 1);
  CHECK(serialize_library(wlib).find("ch.a.x") != std::string::npos);
}

TEST_CASE("multiple outgoing equalities pick the smallest target") {
  std::string text =
      "const ch.a.x th.t.ty\n"
      "const ch.a.b th.t.ty\n"
      "const ch.a.c th.t.ty\n"
      "const ch.a.p tlogic.basis.fun(th.t.ty,tlogic.basis.bool)\n"
      "thm ch.t.e1 ((clogic.basis.eq ch.a.x) ch.a.c)\n"
      "thm ch.t.e2 ((clogic.basis.eq ch.a.x) ch.a.b)\n"
      "thm ch.t.use (ch.a.p ch.a.x)\n";
  std::vector<std::string> warnings;
  Library lib = collapse_equalities(parse_library(text), &warnings);
  CHECK(lib.theorems.size() == 1);
  CHECK(serialize_library(lib).find("(ch.a.p ch.a.b)") != std::string::npos);
  CHECK(!warnings.empty());
}
