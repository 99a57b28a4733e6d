#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <unordered_set>

#include "holmatch/commands.hpp"
#include "holmatch/corpusgen.hpp"
#include "holmatch/library.hpp"
#include "holmatch/matcher.hpp"
#include "holmatch/normalize.hpp"
#include "holmatch/parser.hpp"
#include "holmatch/pattern.hpp"
#include "holmatch/scoring.hpp"
#include "holmatch/term.hpp"

namespace py = pybind11;
using namespace holmatch;

namespace {

std::unordered_set<Symbol> to_symbols(const std::vector<std::string>& names) {
  std::unordered_set<Symbol> out;
  for (const std::string& n : names) out.insert(intern(n));
  return out;
}

MatchConfig make_config(int norm, int score, const std::string& mode,
                        uint32_t iterations, bool typecheck, int jobs) {
  MatchConfig cfg;
  cfg.norm.level = norm;
  cfg.score.scheme = score == 0   ? Scheme::score0
                     : score == 1 ? Scheme::score1
                                  : Scheme::score2;
  cfg.mode = mode == "single" ? MatchConfig::Mode::single_pass
                              : MatchConfig::Mode::iterative;
  cfg.iterations = iterations;
  cfg.typecheck = typecheck;
  cfg.jobs = jobs;
  return cfg;
}

py::dict state_to_dict(const MatchState& st, size_t iterations_done) {
  py::list cps;
  for (const AcceptedPair& p : st.const_pairs)
    cps.append(py::make_tuple(sym_name(p.c1), sym_name(p.c2),
                              sym_name(p.fresh), p.score, p.shared_count));
  py::list tps;
  for (const AcceptedTypePair& p : st.type_pairs)
    tps.append(
        py::make_tuple(sym_name(p.t1), sym_name(p.t2), sym_name(p.fresh)));
  py::dict out;
  out["const_pairs"] = cps;
  out["type_pairs"] = tps;
  out["discarded_by_type"] = st.discarded_by_type;
  out["iterations"] = iterations_done;
  return out;
}

}  // namespace

PYBIND11_MODULE(holmatch, m) {
  m.doc() = "Cross-library constant and type alignment for prover corpora";
  m.attr("__version__") = kToolVersion;

  m.def(
      "canonical_term",
      [](const std::string& text) { return canonical(parse_term(text)); },
      py::arg("text"),
      "Canonical serialization of a closed term in exchange syntax");

  m.def(
      "normalize_term",
      [](const std::string& text, int level,
         const std::vector<std::string>& ac) {
        NormConfig cfg;
        cfg.level = level;
        for (const std::string& s : ac) cfg.ac_constants.push_back(intern(s));
        std::vector<std::string> out;
        for (const TermPtr& piece : normalize(parse_term(text), cfg))
          out.push_back(canonical(piece));
        return out;
      },
      py::arg("text"), py::arg("level") = 1,
      py::arg("ac") = std::vector<std::string>{},
      "Normalized pieces of a closed formula, canonically serialized");

  m.def(
      "extract_pattern",
      [](const std::string& text, const std::vector<std::string>& defined) {
        Pattern p = extract_pattern(parse_term(text), to_symbols(defined));
        return py::make_tuple(p.canonical_body, p.arity);
      },
      py::arg("text"), py::arg("defined") = std::vector<std::string>{},
      "(canonical_body, arity) of the term's pattern over the defined set");

  m.def(
      "relative_patterns",
      [](const std::string& text, const std::vector<std::string>& defined) {
        py::list out;
        for (const RelPatternEntry& e :
             relative_patterns(parse_term(text), to_symbols(defined)))
          out.append(py::make_tuple(sym_name(e.constant),
                                    e.pattern.canonical_body, e.index));
        return out;
      },
      py::arg("text"), py::arg("defined") = std::vector<std::string>{},
      "(constant, canonical_body, slot) per undefined constant");

  m.def(
      "mine",
      [](const std::string& library_text, int norm) {
        Library lib = parse_library(library_text);
        NormConfig cfg;
        cfg.level = norm;
        if (norm == 2) cfg.ac_constants = harvest_ac_constants(lib);
        return property_report_tsv(lib, cfg);
      },
      py::arg("library_text"), py::arg("norm") = 1,
      "Named-property report (TSV) of one library");

  m.def(
      "match",
      [](const std::string& lib1_text, const std::string& lib2_text, int norm,
         int score, const std::string& mode, uint32_t iterations,
         bool typecheck, int jobs) {
        MatchSession session(parse_library(lib1_text), parse_library(lib2_text),
                             make_config(norm, score, mode, iterations,
                                         typecheck, jobs));
        session.run();
        return state_to_dict(session.state(), session.iterations_done());
      },
      py::arg("lib1_text"), py::arg("lib2_text"), py::arg("norm") = 2,
      py::arg("score") = 2, py::arg("mode") = "iter",
      py::arg("iterations") = 500, py::arg("typecheck") = true,
      py::arg("jobs") = 1,
      "Align two libraries given as exchange-format text");

  m.def(
      "generate_twins",
      [](uint64_t seed, uint32_t constants, uint32_t theorems, double noise,
         bool rename_types) {
        GenConfig cfg;
        cfg.seed = seed;
        cfg.n_constants = constants;
        cfg.n_theorems = theorems;
        cfg.noise = noise;
        cfg.rename_types = rename_types;
        TwinCorpus tc = generate_twins(cfg);
        py::list ct, tt;
        for (const auto& [a, b] : tc.const_truth)
          ct.append(py::make_tuple(sym_name(a), sym_name(b)));
        for (const auto& [a, b] : tc.type_truth)
          tt.append(py::make_tuple(sym_name(a), sym_name(b)));
        py::dict out;
        out["lib1"] = serialize_library(tc.lib1);
        out["lib2"] = serialize_library(tc.lib2);
        out["const_truth"] = ct;
        out["type_truth"] = tt;
        return out;
      },
      py::arg("seed") = 1, py::arg("constants") = 50,
      py::arg("theorems") = 120, py::arg("noise") = 0.0,
      py::arg("rename_types") = true,
      "Twin corpus with ground truth, serialized in exchange format");
}
