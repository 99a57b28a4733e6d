#include "holmatch/pattern.hpp"

#include <algorithm>
#include <mutex>
#include <set>

#include "holmatch/errors.hpp"
#include "holmatch/logic.hpp"
#include "holmatch/util.hpp"

namespace holmatch {

uint32_t PatternInterner::pattern_id(const std::string& canonical_body,
                                     uint32_t arity) {
  auto it = ids_.find(canonical_body);
  if (it != ids_.end()) return it->second;
  uint32_t id = static_cast<uint32_t>(patterns_.size());
  patterns_.push_back({canonical_body, arity});
  ids_.emplace(canonical_body, id);
  return id;
}

uint32_t PatternInterner::rel_id(uint32_t pattern_id, uint32_t index) {
  auto key = std::make_pair(pattern_id, index);
  auto it = rel_ids_.find(key);
  if (it != rel_ids_.end()) return it->second;
  uint32_t id = static_cast<uint32_t>(rels_.size());
  rels_.push_back(key);
  rel_ids_.emplace(key, id);
  return id;
}

namespace {

// Undefined constants in first-occurrence order.
std::vector<Symbol> undefined_in_order(
    const TermPtr& t, const std::unordered_set<Symbol>& defined) {
  std::vector<Symbol> out;
  for (Symbol s : constants_in_order(t))
    if (!defined.count(s)) out.push_back(s);
  return out;
}

TermPtr abstract_rec(const TermPtr& t, uint32_t depth, uint32_t m,
                     const std::unordered_map<Symbol, uint32_t>& slot) {
  switch (t->kind()) {
    case TermKind::Const: {
      auto it = slot.find(t->sym());
      if (it == slot.end()) return t;
      // Slot i is bound by the i-th leading binder (outermost first).
      return Term::bound(depth + m - 1 - it->second);
    }
    case TermKind::Bound:
      return t;
    case TermKind::Abs: {
      TermPtr b = abstract_rec(t->body(), depth + 1, m, slot);
      return b.get() == t->body().get() ? t : Term::abs(std::move(b));
    }
    case TermKind::App: {
      TermPtr f = abstract_rec(t->fun(), depth, m, slot);
      TermPtr a = abstract_rec(t->arg(), depth, m, slot);
      if (f.get() == t->fun().get() && a.get() == t->arg().get()) return t;
      return Term::app(std::move(f), std::move(a));
    }
  }
  return t;
}

TermPtr abstract_term(const TermPtr& t, const std::vector<Symbol>& order) {
  uint32_t m = static_cast<uint32_t>(order.size());
  std::unordered_map<Symbol, uint32_t> slot;
  for (uint32_t i = 0; i < m; ++i) slot.emplace(order[i], i);
  TermPtr body = abstract_rec(t, 0, m, slot);
  for (uint32_t i = 0; i < m; ++i) body = Term::abs(std::move(body));
  return body;
}

}  // namespace

Pattern extract_pattern(const TermPtr& t,
                        const std::unordered_set<Symbol>& defined) {
  std::vector<Symbol> order = undefined_in_order(t, defined);
  TermPtr abs = abstract_term(t, order);
  return {canonical(abs), static_cast<uint32_t>(order.size())};
}

std::vector<RelPatternEntry> relative_patterns(
    const TermPtr& t, const std::unordered_set<Symbol>& defined) {
  std::vector<Symbol> order = undefined_in_order(t, defined);
  std::vector<RelPatternEntry> out;
  if (order.empty()) return out;
  Pattern p{canonical(abstract_term(t, order)),
            static_cast<uint32_t>(order.size())};
  out.reserve(order.size());
  for (uint32_t i = 0; i < order.size(); ++i)
    out.push_back({order[i], p, i});
  return out;
}

PatternIndex build_index(const Library& lib, const NormConfig& cfg,
                         PatternInterner& interner, int jobs,
                         NormStats* stats) {
  struct RawEntry {
    Symbol constant;
    std::string body;
    uint32_t arity;
    uint32_t index;
  };
  size_t n = lib.theorems.size();
  std::vector<std::vector<RawEntry>> raw(n);
  std::vector<NormStats> local_stats(n);
  parallel_for(n, jobs, [&](size_t begin, size_t end) {
    for (size_t i = begin; i < end; ++i) {
      const Theorem& th = lib.theorems[i];
      std::vector<TermPtr> pieces =
          normalize(th.statement, cfg, sym_name(th.name),
                    stats ? &local_stats[i] : nullptr);
      for (const TermPtr& piece : pieces)
        for (const RelPatternEntry& e :
             relative_patterns(piece, lib.defined_constants))
          raw[i].push_back(
              {e.constant, e.pattern.canonical_body, e.pattern.arity, e.index});
    }
  });
  if (stats)
    for (NormStats& ls : local_stats)
      for (std::string& line : ls.skipped_distributions)
        stats->skipped_distributions.push_back(std::move(line));

  // Merge in theorem order so interned ids do not depend on the job count.
  PatternIndex idx;
  idx.library = lib.name;
  std::unordered_map<Symbol, std::set<uint32_t>> pset;
  std::unordered_map<uint32_t, std::set<Symbol>> cset;
  for (const auto& entries : raw) {
    for (const RawEntry& e : entries) {
      uint32_t pid = interner.pattern_id(e.body, e.arity);
      uint32_t rid = interner.rel_id(pid, e.index);
      pset[e.constant].insert(rid);
      cset[rid].insert(e.constant);
    }
  }
  for (auto& [c, rids] : pset) {
    idx.pset.emplace(c, std::vector<uint32_t>(rids.begin(), rids.end()));
    idx.npatterns.emplace(c, static_cast<uint32_t>(rids.size()));
    idx.constants.push_back(c);
  }
  std::sort(idx.constants.begin(), idx.constants.end(), sym_less);
  for (auto& [rid, cs] : cset) {
    std::vector<Symbol> v(cs.begin(), cs.end());
    std::sort(v.begin(), v.end(), sym_less);
    idx.cset.emplace(rid, std::move(v));
  }
  return idx;
}

std::vector<uint32_t> common_patterns(const PatternIndex& idx1, Symbol c1,
                                      const PatternIndex& idx2, Symbol c2) {
  auto it1 = idx1.pset.find(c1);
  if (it1 == idx1.pset.end())
    throw UnknownConstantError("constant not indexed: " + sym_name(c1));
  auto it2 = idx2.pset.find(c2);
  if (it2 == idx2.pset.end())
    throw UnknownConstantError("constant not indexed: " + sym_name(c2));
  std::vector<uint32_t> out;
  std::set_intersection(it1->second.begin(), it1->second.end(),
                        it2->second.begin(), it2->second.end(),
                        std::back_inserter(out));
  return out;
}

bool check_duality(const PatternIndex& idx) {
  for (const auto& [c, rids] : idx.pset) {
    auto np = idx.npatterns.find(c);
    if (np == idx.npatterns.end() || np->second != rids.size()) return false;
    for (uint32_t rid : rids) {
      auto it = idx.cset.find(rid);
      if (it == idx.cset.end()) return false;
      if (std::find(it->second.begin(), it->second.end(), c) ==
          it->second.end())
        return false;
    }
  }
  for (const auto& [rid, cs] : idx.cset) {
    for (Symbol c : cs) {
      auto it = idx.pset.find(c);
      if (it == idx.pset.end()) return false;
      if (!std::binary_search(it->second.begin(), it->second.end(), rid))
        return false;
    }
  }
  return true;
}

// ---- Type patterns ----

namespace {

struct TypeAbstractor {
  const std::unordered_set<Symbol>& defined;
  std::vector<TypeLeaf> leaves;
  std::map<std::pair<bool, uint64_t>, uint32_t> holes;  // (is_var, key) -> id

  bool is_defined(Symbol name) const {
    return name == logic::ty_fun() || defined.count(name) != 0;
  }

  uint32_t hole(bool is_var, uint64_t key, Symbol con) {
    auto mk = std::make_pair(is_var, key);
    auto it = holes.find(mk);
    if (it != holes.end()) return it->second;
    uint32_t id = static_cast<uint32_t>(holes.size());
    holes.emplace(mk, id);
    leaves.push_back({is_var, con});
    return id;
  }

  void shape(const TypePtr& t, std::string& out) {
    if (t->is_var()) {
      out += 'P';
      out += std::to_string(hole(true, t->id(), 0));
      return;
    }
    if (is_defined(t->name())) {
      out += sym_name(t->name());
    } else {
      out += 'P';
      out += std::to_string(hole(false, t->name(), t->name()));
    }
    if (!t->args().empty()) {
      out.push_back('(');
      for (size_t i = 0; i < t->args().size(); ++i) {
        if (i) out.push_back(',');
        shape(t->args()[i], out);
      }
      out.push_back(')');
    }
  }
};

}  // namespace

TypePattern type_pattern(const TypePtr& ty,
                         const std::unordered_set<Symbol>& defined_types) {
  TypeAbstractor abs{defined_types, {}, {}};
  std::string shape;
  abs.shape(ty, shape);
  return {std::move(shape), std::move(abs.leaves)};
}

std::optional<std::vector<std::pair<Symbol, Symbol>>> match_type_patterns(
    const TypePattern& a, const TypePattern& b) {
  if (a.shape != b.shape) return std::nullopt;
  std::vector<std::pair<Symbol, Symbol>> out;
  for (size_t i = 0; i < a.leaves.size() && i < b.leaves.size(); ++i) {
    if (a.leaves[i].is_var || b.leaves[i].is_var) continue;
    out.emplace_back(a.leaves[i].con, b.leaves[i].con);
  }
  return out;
}

// ---- Named-property mining ----

namespace {

TermPtr tc0() { return Term::constant(intern("cprop.tmpl.c0")); }
TermPtr tc1() { return Term::constant(intern("cprop.tmpl.c1")); }
TermPtr B(uint32_t i) { return Term::bound(i); }
TermPtr ap2(TermPtr f, TermPtr a, TermPtr b) {
  return Term::app(Term::app(std::move(f), std::move(a)), std::move(b));
}

std::vector<PropertyTemplate> make_catalog() {
  using namespace logic;
  std::vector<PropertyTemplate> v;
  auto add = [&v](std::string name, TermPtr t, uint32_t n, bool recon) {
    v.push_back({std::move(name), std::move(t), n, recon});
  };
  // One-constant shapes.
  add("Inj",
      mk_forall(mk_forall(mk_eq(
          mk_eq(Term::app(tc0(), B(1)), Term::app(tc0(), B(0))),
          mk_eq(B(1), B(0))))),
      1, true);
  add("Asso",
      mk_forall(mk_forall(mk_forall(mk_eq(
          ap2(tc0(), B(2), ap2(tc0(), B(1), B(0))),
          ap2(tc0(), ap2(tc0(), B(2), B(1)), B(0)))))),
      1, true);
  add("Comm",
      mk_forall(mk_forall(
          mk_eq(ap2(tc0(), B(1), B(0)), ap2(tc0(), B(0), B(1))))),
      1, true);
  add("Refl", mk_forall(ap2(tc0(), B(0), B(0))), 1, true);
  add("Lcomm",
      mk_forall(mk_forall(mk_forall(mk_eq(
          ap2(tc0(), B(2), ap2(tc0(), B(1), B(0))),
          ap2(tc0(), B(1), ap2(tc0(), B(2), B(0))))))),
      1, true);
  add("Idempo", mk_forall(mk_eq(ap2(tc0(), B(0), B(0)), B(0))), 1, true);
  add("Trans",
      mk_forall(mk_forall(mk_forall(mk_imp(
          ap2(tc0(), B(2), B(1)),
          mk_imp(ap2(tc0(), B(1), B(0)), ap2(tc0(), B(2), B(0))))))),
      1, true);
  add("App", mk_forall(Term::app(tc0(), B(0))), 1, true);
  add("Inj1",
      mk_forall(mk_forall(mk_imp(
          mk_eq(Term::app(tc0(), B(1)), Term::app(tc0(), B(0))),
          mk_eq(B(1), B(0))))),
      1, true);
  add("Inj2",
      mk_forall(mk_forall(mk_forall(mk_forall(mk_eq(
          mk_eq(ap2(tc0(), B(3), B(2)), ap2(tc0(), B(1), B(0))),
          mk_and(mk_eq(B(3), B(1)), mk_eq(B(2), B(0)))))))),
      1, true);
  add("App2", mk_forall(mk_forall(ap2(tc0(), B(1), B(0)))), 1, true);
  // Two-constant shapes; Class and Inv use their fixed definitions.
  add("Class", Term::app(tc0(), tc1()), 2, false);
  add("Inv",
      mk_forall(mk_eq(Term::app(tc0(), Term::app(tc1(), B(0))), B(0))), 2,
      false);
  add("Imp",
      mk_forall(mk_imp(Term::app(tc0(), B(0)), Term::app(tc1(), B(0)))), 2,
      true);
  add("Neutr", mk_forall(mk_eq(ap2(tc0(), tc1(), B(0)), B(0))), 2, true);
  add("Equal", mk_eq(tc0(), tc1()), 2, true);
  return v;
}

}  // namespace

const std::vector<PropertyTemplate>& property_catalog() {
  static const std::vector<PropertyTemplate> catalog = make_catalog();
  return catalog;
}

std::vector<PropertyRow> property_report(const Library& lib,
                                         const NormConfig& cfg) {
  const auto& catalog = property_catalog();

  // Normalized canonical form (and node count) per template, computed once.
  struct TemplateNorm {
    std::vector<std::string> canon;
    uint32_t nodes = 0;
  };
  std::vector<TemplateNorm> tnorm(catalog.size());
  for (size_t ti = 0; ti < catalog.size(); ++ti) {
    for (const TermPtr& p : normalize(catalog[ti].statement, cfg))
      tnorm[ti].canon.push_back(serialize_term(p));
    if (!tnorm[ti].canon.empty())
      tnorm[ti].nodes = parse_canonical(tnorm[ti].canon[0])->node_count();
  }

  Symbol q0 = intern("cprop.tmpl.c0");
  Symbol q1 = intern("cprop.tmpl.c1");

  std::vector<std::set<std::vector<Symbol>>> matched(catalog.size());
  std::vector<std::set<Symbol>> matched_thms(catalog.size());

  for (const Theorem& th : lib.theorems) {
    std::vector<TermPtr> pieces = normalize(th.statement, cfg, sym_name(th.name));
    for (const TermPtr& piece : pieces) {
      std::vector<Symbol> consts;
      for (Symbol s : constants_in_order(piece))
        if (!lib.defined_constants.count(s)) consts.push_back(s);
      if (consts.empty() || consts.size() > 2) continue;
      std::string piece_canon = serialize_term(piece);
      uint32_t piece_nodes = piece->node_count();
      for (size_t ti = 0; ti < catalog.size(); ++ti) {
        const PropertyTemplate& tmpl = catalog[ti];
        if (consts.size() > tmpl.nconsts) continue;
        if (tnorm[ti].canon.size() != 1 || tnorm[ti].nodes != piece_nodes)
          continue;
        // Try every surjection from placeholders onto the piece constants.
        std::vector<std::vector<Symbol>> assignments;
        if (tmpl.nconsts == 1) {
          assignments.push_back({consts[0]});
        } else if (consts.size() == 1) {
          assignments.push_back({consts[0], consts[0]});
        } else {
          assignments.push_back({consts[0], consts[1]});
          assignments.push_back({consts[1], consts[0]});
        }
        for (const std::vector<Symbol>& asg : assignments) {
          TermPtr inst = subst_const(tmpl.statement, q0, asg[0]);
          if (tmpl.nconsts == 2) inst = subst_const(inst, q1, asg[1]);
          std::vector<TermPtr> inst_pieces = normalize(inst, cfg);
          if (inst_pieces.size() != 1) continue;
          if (serialize_term(inst_pieces[0]) == piece_canon) {
            matched[ti].insert(asg);
            matched_thms[ti].insert(th.name);
          }
        }
      }
    }
  }

  std::vector<PropertyRow> rows;
  for (size_t ti = 0; ti < catalog.size(); ++ti)
    rows.push_back(
        {catalog[ti].name, matched[ti].size(), matched_thms[ti].size()});
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    if (a.const_count != b.const_count) return a.const_count > b.const_count;
    return a.name < b.name;
  });
  return rows;
}

std::string property_report_tsv(const Library& lib, const NormConfig& cfg) {
  const auto& catalog = property_catalog();
  std::string recon, fixed;
  for (const auto& t : catalog) {
    std::string& dst = t.reconstructed ? recon : fixed;
    if (!dst.empty()) dst += ", ";
    dst += t.name;
  }
  std::string out;
  out += "# property shapes — fixed definitions: " + fixed +
         "; standard reconstructions: " + recon + "\n";
  out += "pattern-name\tconstant-count\ttheorem-count\n";
  for (const PropertyRow& r : property_report(lib, cfg)) {
    out += r.name;
    out += '\t';
    out += std::to_string(r.const_count);
    out += '\t';
    out += std::to_string(r.thm_count);
    out += '\n';
  }
  return out;
}

std::vector<Symbol> harvest_ac_constants(const Library& lib,
                                         uint32_t distribution_size_cap) {
  NormConfig cfg;
  cfg.level = 1;
  cfg.distribution_size_cap = distribution_size_cap;

  const auto& catalog = property_catalog();
  std::string asso_canon, comm_canon;
  for (const auto& tmpl : catalog) {
    if (tmpl.name != "Asso" && tmpl.name != "Comm") continue;
    std::vector<TermPtr> pieces = normalize(tmpl.statement, cfg);
    if (pieces.size() != 1) continue;
    Pattern p = extract_pattern(pieces[0], lib.defined_constants);
    (tmpl.name == "Asso" ? asso_canon : comm_canon) = p.canonical_body;
  }

  std::set<Symbol> asso, comm;
  for (const Theorem& th : lib.theorems) {
    for (const TermPtr& piece :
         normalize(th.statement, cfg, sym_name(th.name))) {
      std::vector<RelPatternEntry> rels =
          relative_patterns(piece, lib.defined_constants);
      if (rels.size() != 1) continue;
      if (rels[0].pattern.canonical_body == asso_canon)
        asso.insert(rels[0].constant);
      else if (rels[0].pattern.canonical_body == comm_canon)
        comm.insert(rels[0].constant);
    }
  }
  std::vector<Symbol> out;
  for (Symbol s : asso)
    if (comm.count(s)) out.push_back(s);
  std::sort(out.begin(), out.end(), sym_less);
  return out;
}

}  // namespace holmatch
