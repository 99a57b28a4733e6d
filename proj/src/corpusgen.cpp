#include "holmatch/corpusgen.hpp"

#include <algorithm>
#include <functional>
#include <string>
#include <unordered_map>
#include <unordered_set>

#include "holmatch/errors.hpp"
#include "holmatch/logic.hpp"
#include "holmatch/term.hpp"
#include "holmatch/type.hpp"
#include "holmatch/util.hpp"

namespace holmatch {

using namespace logic;

namespace {

enum class Kind { element, binary, unary, relation, predicate };

struct CInfo {
  Symbol sym;
  Kind kind;
  size_t ty;
};

std::string pad(uint32_t v, size_t width) {
  std::string s = std::to_string(v);
  while (s.size() < width) s.insert(s.begin(), '0');
  return s;
}

TermPtr ap1(Symbol f, TermPtr a) {
  return Term::app(Term::constant(f), std::move(a));
}
TermPtr ap2(Symbol f, TermPtr a, TermPtr b) {
  return Term::app(Term::app(Term::constant(f), std::move(a)), std::move(b));
}
TermPtr B(uint32_t i) { return Term::bound(i); }
TermPtr C(Symbol s) { return Term::constant(s); }

TermPtr term_rename(const TermPtr& t,
                    const std::unordered_map<Symbol, Symbol>& m) {
  switch (t->kind()) {
    case TermKind::Const: {
      auto it = m.find(t->sym());
      return it == m.end() ? t : Term::constant(it->second);
    }
    case TermKind::Bound:
      return t;
    case TermKind::Abs: {
      TermPtr b = term_rename(t->body(), m);
      return b == t->body() ? t : Term::abs(std::move(b));
    }
    case TermKind::App: {
      TermPtr f = term_rename(t->fun(), m);
      TermPtr a = term_rename(t->arg(), m);
      return (f == t->fun() && a == t->arg())
                 ? t
                 : Term::app(std::move(f), std::move(a));
    }
  }
  return t;
}

TypePtr type_rename(const TypePtr& ty,
                    const std::unordered_map<Symbol, Symbol>& m) {
  if (ty->is_var()) return ty;
  std::vector<TypePtr> args;
  args.reserve(ty->args().size());
  bool changed = false;
  for (const TypePtr& a : ty->args()) {
    args.push_back(type_rename(a, m));
    changed = changed || args.back() != a;
  }
  auto it = m.find(ty->name());
  Symbol nm = it == m.end() ? ty->name() : it->second;
  if (!changed && nm == ty->name()) return ty;
  return Type::con(nm, std::move(args));
}

// Typed closed-formula generator over the drawn constant roster.
struct Builder {
  Rng& rng;
  const std::vector<CInfo>& consts;
  size_t ntypes;
  // per-type rosters, by index into `consts`
  std::vector<std::vector<size_t>> elems, binaries, unaries, relations, preds;
  std::vector<size_t> all_binaries, all_unaries, all_relations, all_preds;

  Builder(Rng& r, const std::vector<CInfo>& cs, size_t nt)
      : rng(r), consts(cs), ntypes(nt) {
    elems.resize(nt);
    binaries.resize(nt);
    unaries.resize(nt);
    relations.resize(nt);
    preds.resize(nt);
    for (size_t i = 0; i < cs.size(); ++i) {
      switch (cs[i].kind) {
        case Kind::element: elems[cs[i].ty].push_back(i); break;
        case Kind::binary:
          binaries[cs[i].ty].push_back(i);
          all_binaries.push_back(i);
          break;
        case Kind::unary:
          unaries[cs[i].ty].push_back(i);
          all_unaries.push_back(i);
          break;
        case Kind::relation:
          relations[cs[i].ty].push_back(i);
          all_relations.push_back(i);
          break;
        case Kind::predicate:
          preds[cs[i].ty].push_back(i);
          all_preds.push_back(i);
          break;
      }
    }
  }

  // env holds the type of each enclosing binder, outermost first.
  TermPtr elem(size_t ty, uint32_t depth, const std::vector<size_t>& env) {
    bool ops = !binaries[ty].empty() || !unaries[ty].empty();
    if (depth > 0 && ops && rng.chance(0.55)) {
      size_t nb = binaries[ty].size();
      size_t pickidx = rng.below(nb + unaries[ty].size());
      if (pickidx < nb) {
        Symbol op = consts[binaries[ty][pickidx]].sym;
        return ap2(op, elem(ty, depth - 1, env), elem(ty, depth - 1, env));
      }
      Symbol op = consts[unaries[ty][pickidx - nb]].sym;
      return ap1(op, elem(ty, depth - 1, env));
    }
    std::vector<TermPtr> atoms;
    for (size_t j = 0; j < env.size(); ++j)
      if (env[j] == ty) atoms.push_back(B(uint32_t(env.size() - 1 - j)));
    for (size_t i : elems[ty]) atoms.push_back(C(consts[i].sym));
    return atoms[rng.below(atoms.size())];
  }

  TermPtr formula(uint32_t depth, std::vector<size_t>& env) {
    std::vector<double> w;
    std::vector<int> opt;
    auto add = [&](int o, double weight) {
      opt.push_back(o);
      w.push_back(weight);
    };
    if (depth > 0) {
      add(0, 0.20);  // quantifier
      add(1, 0.26);  // binary connective
      add(2, 0.07);  // negation
    }
    add(3, 0.22);  // equation
    if (!all_relations.empty()) add(4, 0.17);
    if (!all_preds.empty()) add(5, 0.08);
    switch (opt[rng.pick_weighted(w)]) {
      case 0: {
        size_t ty = rng.below(ntypes);
        bool fa = rng.chance(0.72);
        env.push_back(ty);
        TermPtr body = formula(depth - 1, env);
        env.pop_back();
        return fa ? mk_forall(std::move(body)) : mk_exists(std::move(body));
      }
      case 1: {
        TermPtr a = formula(depth - 1, env);
        TermPtr b = formula(depth - 1, env);
        switch (rng.below(3)) {
          case 0: return mk_and(std::move(a), std::move(b));
          case 1: return mk_or(std::move(a), std::move(b));
          default: return mk_imp(std::move(a), std::move(b));
        }
      }
      case 2:
        return mk_neg(formula(depth - 1, env));
      case 3: {
        size_t ty = rng.below(ntypes);
        uint32_t d = depth == 0 ? 0 : depth - 1;
        return mk_eq(elem(ty, d, env), elem(ty, d, env));
      }
      case 4: {
        const CInfo& r = consts[all_relations[rng.below(all_relations.size())]];
        uint32_t d = depth == 0 ? 0 : depth - 1;
        return ap2(r.sym, elem(r.ty, d, env), elem(r.ty, d, env));
      }
      default: {
        const CInfo& p = consts[all_preds[rng.below(all_preds.size())]];
        uint32_t d = depth == 0 ? 0 : depth - 1;
        return ap1(p.sym, elem(p.ty, d, env));
      }
    }
  }

  TermPtr filler() {
    std::vector<size_t> env;
    return formula(2 + uint32_t(rng.below(4)), env);
  }

  bool available(const std::string& name) const {
    if (name == "filler") return true;
    if (name == "Asso" || name == "Comm" || name == "Lcomm" ||
        name == "Idempo" || name == "Neutr")
      return !all_binaries.empty();
    if (name == "Inv" || name == "Inj") return !all_unaries.empty();
    if (name == "Refl" || name == "Trans") return !all_relations.empty();
    if (name == "App" || name == "Class") return !all_preds.empty();
    return false;
  }

  TermPtr instance(const std::string& name) {
    auto pick = [&](const std::vector<size_t>& v) -> const CInfo& {
      return consts[v[rng.below(v.size())]];
    };
    if (name == "Asso") {
      const CInfo& c = pick(all_binaries);
      return mk_forall(mk_forall(mk_forall(
          mk_eq(ap2(c.sym, ap2(c.sym, B(2), B(1)), B(0)),
                ap2(c.sym, B(2), ap2(c.sym, B(1), B(0)))))));
    }
    if (name == "Comm") {
      const CInfo& c = pick(all_binaries);
      return mk_forall(mk_forall(
          mk_eq(ap2(c.sym, B(1), B(0)), ap2(c.sym, B(0), B(1)))));
    }
    if (name == "Lcomm") {
      const CInfo& c = pick(all_binaries);
      return mk_forall(mk_forall(mk_forall(
          mk_eq(ap2(c.sym, B(2), ap2(c.sym, B(1), B(0))),
                ap2(c.sym, B(1), ap2(c.sym, B(2), B(0)))))));
    }
    if (name == "Idempo") {
      const CInfo& c = pick(all_binaries);
      return mk_forall(mk_eq(ap2(c.sym, B(0), B(0)), B(0)));
    }
    if (name == "Neutr") {
      const CInfo& c = pick(all_binaries);
      Symbol e = consts[elems[c.ty][rng.below(elems[c.ty].size())]].sym;
      return mk_forall(mk_eq(ap2(c.sym, B(0), C(e)), B(0)));
    }
    if (name == "Inv") {
      const CInfo& u = pick(all_unaries);
      Symbol v = consts[unaries[u.ty][rng.below(unaries[u.ty].size())]].sym;
      return mk_forall(mk_eq(ap1(u.sym, ap1(v, B(0))), B(0)));
    }
    if (name == "Inj") {
      const CInfo& u = pick(all_unaries);
      return mk_forall(mk_forall(mk_eq(
          mk_eq(ap1(u.sym, B(1)), ap1(u.sym, B(0))), mk_eq(B(1), B(0)))));
    }
    if (name == "Refl") {
      const CInfo& r = pick(all_relations);
      return mk_forall(ap2(r.sym, B(0), B(0)));
    }
    if (name == "Trans") {
      const CInfo& r = pick(all_relations);
      return mk_forall(mk_forall(mk_forall(
          mk_imp(mk_and(ap2(r.sym, B(2), B(1)), ap2(r.sym, B(1), B(0))),
                 ap2(r.sym, B(2), B(0))))));
    }
    if (name == "App") {
      const CInfo& p = pick(all_preds);
      return mk_forall(ap1(p.sym, B(0)));
    }
    if (name == "Class") {
      const CInfo& p = pick(all_preds);
      Symbol e = consts[elems[p.ty][rng.below(elems[p.ty].size())]].sym;
      return ap1(p.sym, C(e));
    }
    return filler();
  }

  TermPtr patch(const CInfo& c) {
    switch (c.kind) {
      case Kind::element:
        return mk_exists(mk_eq(B(0), C(c.sym)));
      case Kind::binary:
        return mk_forall(
            mk_forall(mk_exists(mk_eq(B(0), ap2(c.sym, B(2), B(1))))));
      case Kind::unary:
        return mk_forall(mk_exists(mk_eq(B(0), ap1(c.sym, B(1)))));
      case Kind::relation:
        return mk_forall(mk_forall(
            mk_imp(ap2(c.sym, B(1), B(0)), ap2(c.sym, B(1), B(0)))));
      case Kind::predicate:
        return mk_forall(mk_imp(ap1(c.sym, B(0)), ap1(c.sym, B(0))));
    }
    return nullptr;
  }
};

}  // namespace

std::map<std::string, double> default_property_mix() {
  return {{"filler", 6.50}, {"Comm", 0.60},   {"Asso", 0.60},
          {"Refl", 0.36},   {"Trans", 0.24},  {"Idempo", 0.24},
          {"Lcomm", 0.15},  {"Neutr", 0.21},  {"Inv", 0.18},
          {"Inj", 0.15},    {"App", 0.15},    {"Class", 0.12}};
}

TwinCorpus generate_twins(const GenConfig& cfg) {
  if (cfg.noise < 0 || cfg.noise > 1)
    throw ConfigError("noise must lie in [0, 1]");
  std::map<std::string, double> mix =
      cfg.property_mix.empty() ? default_property_mix() : cfg.property_mix;
  for (const auto& [name, wgt] : mix)
    if (wgt < 0)
      throw ConfigError("negative frequency for template " + name);

  TwinCorpus out;
  out.lib1.name = "alpha";
  out.lib1.install_basis();
  out.lib2.name = "beta";
  out.lib2.install_basis();
  if (cfg.n_constants == 0 || cfg.n_theorems == 0) return out;

  Rng rng(cfg.seed);
  size_t ntypes =
      std::min<size_t>(26, std::max<size_t>(2, cfg.n_constants / 12));
  ntypes = std::min<size_t>(ntypes, cfg.n_constants);

  std::vector<Symbol> tsyms;
  std::vector<TypePtr> tys;
  for (size_t i = 0; i < ntypes; ++i) {
    Symbol s = intern("talpha.gen.y" + pad(cfg.name_offset + uint32_t(i), 2));
    tsyms.push_back(s);
    tys.push_back(Type::con(s, {}));
  }

  // Roster: one guaranteed element per type, then a weighted mix.
  std::vector<CInfo> consts;
  for (uint32_t i = 0; i < cfg.n_constants; ++i) {
    Symbol s = intern("calpha.gen.k" + pad(cfg.name_offset + i, 4));
    CInfo info{s, Kind::element, i % ntypes};
    if (i >= ntypes) {
      static const std::vector<double> kw = {0.17, 0.30, 0.18, 0.20, 0.15};
      info.kind = Kind(rng.pick_weighted(kw));
      info.ty = rng.below(ntypes);
    }
    consts.push_back(info);
  }
  auto signature_of = [&](const CInfo& c) -> TypePtr {
    TypePtr t = tys[c.ty];
    switch (c.kind) {
      case Kind::element: return t;
      case Kind::binary: return ty_fun_t(t, ty_fun_t(t, t));
      case Kind::unary: return ty_fun_t(t, t);
      case Kind::relation: return ty_fun_t(t, ty_fun_t(t, ty_bool_t()));
      case Kind::predicate: return ty_fun_t(t, ty_bool_t());
    }
    return t;
  };

  Builder bld(rng, consts, ntypes);
  std::vector<std::string> shapes;
  std::vector<double> weights;
  for (const auto& [name, wgt] : mix) {
    if (wgt <= 0 || !bld.available(name)) continue;
    shapes.push_back(name);
    weights.push_back(wgt);
  }
  if (shapes.empty()) {
    shapes.push_back("filler");
    weights.push_back(1.0);
  }

  std::vector<std::pair<std::string, TermPtr>> thms;
  for (uint32_t i = 0; i < cfg.n_theorems; ++i) {
    const std::string& shape = shapes[rng.pick_weighted(weights)];
    TermPtr stmt = shape == "filler" ? bld.filler() : bld.instance(shape);
    thms.push_back(
        {"calpha.thm.h" + pad(cfg.name_offset + i, 4), std::move(stmt)});
  }
  std::unordered_set<Symbol> used;
  for (const auto& [name, stmt] : thms)
    for (Symbol c : constants_in_order(stmt)) used.insert(c);
  uint32_t extra = cfg.n_theorems;
  for (const CInfo& c : consts) {
    if (used.count(c.sym)) continue;
    thms.push_back(
        {"calpha.thm.h" + pad(cfg.name_offset + extra++, 4), bld.patch(c)});
  }

  // Twin rename maps: the alpha prefixes swap to beta, tails survive.
  auto beta_name = [](const std::string& n) {
    if (n.rfind("calpha.", 0) == 0) return "cbeta." + n.substr(7);
    if (n.rfind("talpha.", 0) == 0) return "tbeta." + n.substr(7);
    return n;
  };
  std::unordered_map<Symbol, Symbol> cmap, tmap;
  for (const CInfo& c : consts) {
    Symbol b = intern(beta_name(sym_name(c.sym)));
    cmap.emplace(c.sym, b);
    out.const_truth.push_back({c.sym, b});
  }
  for (Symbol t : tsyms) {
    Symbol b = cfg.rename_types ? intern(beta_name(sym_name(t))) : t;
    if (cfg.rename_types) tmap.emplace(t, b);
    out.type_truth.push_back({t, b});
  }

  for (const CInfo& c : consts) {
    TypePtr sig = signature_of(c);
    out.lib1.declare_const(c.sym, sig);
    out.lib2.declare_const(cmap.at(c.sym), type_rename(sig, tmap));
  }

  // Noise decides which sides keep each theorem; each side then shuffles
  // independently.
  std::vector<size_t> order1, order2;
  for (size_t i = 0; i < thms.size(); ++i) {
    bool keep1 = true, keep2 = true;
    if (cfg.noise > 0 && rng.chance(cfg.noise)) {
      if (rng.below(2) == 0) keep2 = false;
      else keep1 = false;
    }
    if (keep1) order1.push_back(i);
    if (keep2) order2.push_back(i);
  }
  rng.shuffle(order1);
  rng.shuffle(order2);
  for (size_t i : order1)
    out.lib1.theorems.push_back({intern(thms[i].first), thms[i].second});
  for (size_t i : order2)
    out.lib2.theorems.push_back({intern(beta_name(thms[i].first)),
                                 term_rename(thms[i].second, cmap)});
  return out;
}

void merge_libraries(Library& dst, const Library& src) {
  for (Symbol c : src.const_order) dst.declare_const(c, src.constants.at(c));
  for (Symbol s : src.defined_constants) dst.defined_constants.insert(s);
  for (Symbol s : src.defined_types) dst.defined_types.insert(s);
  for (Symbol s : src.ac_constants)
    if (std::find(dst.ac_constants.begin(), dst.ac_constants.end(), s) ==
        dst.ac_constants.end())
      dst.ac_constants.push_back(s);
  for (const Theorem& t : src.theorems) dst.theorems.push_back(t);
}

}  // namespace holmatch
