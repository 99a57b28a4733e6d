#include "holmatch/ingest.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "holmatch/errors.hpp"
#include "holmatch/logic.hpp"

namespace holmatch {
namespace {

// Simultaneous constant-for-constant substitution.
TermPtr subst_map(const TermPtr& t,
                  const std::unordered_map<Symbol, Symbol>& m) {
  switch (t->kind()) {
    case TermKind::Const: {
      auto it = m.find(t->sym());
      return it == m.end() ? t : Term::constant(it->second);
    }
    case TermKind::Bound:
      return t;
    case TermKind::Abs: {
      TermPtr b = subst_map(t->body(), m);
      return b.get() == t->body().get() ? t : Term::abs(std::move(b));
    }
    case TermKind::App: {
      TermPtr f = subst_map(t->fun(), m);
      TermPtr a = subst_map(t->arg(), m);
      if (f.get() == t->fun().get() && a.get() == t->arg().get()) return t;
      return Term::app(std::move(f), std::move(a));
    }
  }
  return t;
}

void drop_signature(Library& lib, Symbol s) {
  lib.constants.erase(s);
  lib.const_order.erase(
      std::remove(lib.const_order.begin(), lib.const_order.end(), s),
      lib.const_order.end());
}

Symbol resolve_basis_target(std::string_view tok) {
  static const std::unordered_map<std::string, Symbol> short_names = {
      {"forall", logic::forall()}, {"exists", logic::exists()},
      {"and", logic::and_c()},     {"or", logic::or_c()},
      {"imp", logic::imp()},       {"neg", logic::neg()},
      {"eq", logic::eq()}};
  auto it = short_names.find(std::string(tok));
  if (it != short_names.end()) return it->second;
  Symbol s = intern(tok);
  if (!logic::is_basis(s))
    throw ConfigError("basis target must be a logical constant: " +
                      std::string(tok));
  return s;
}

}  // namespace

BasisMap parse_basis(std::string_view text) {
  BasisMap map;
  std::istringstream in{std::string(text)};
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string src, dst;
    if (!(ls >> src) || src[0] == '#') continue;
    if (!(ls >> dst))
      throw ParseError("basis entry needs two columns", line_no, 1);
    map.entries.emplace_back(intern(src), resolve_basis_target(dst));
  }
  return map;
}

BasisMap parse_basis_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_basis(ss.str());
}

Library apply_basis(Library lib, const BasisMap& basis) {
  std::unordered_map<Symbol, Symbol> m;
  for (const auto& [src, dst] : basis.entries)
    if (src != dst) m.emplace(src, dst);
  if (m.empty()) return lib;
  for (Theorem& th : lib.theorems) th.statement = subst_map(th.statement, m);
  for (const auto& [src, dst] : m) {
    drop_signature(lib, src);
    lib.defined_constants.insert(dst);
  }
  return lib;
}

Library collapse_equalities(Library lib, std::vector<std::string>* warnings) {
  auto warn = [&](const std::string& msg) {
    if (warnings) warnings->push_back(msg);
  };

  // Edges c1 -> c2 from theorems of the literal shape |- c1 = c2.
  std::unordered_map<Symbol, Symbol> next;
  std::vector<char> consumed(lib.theorems.size(), 0);
  for (size_t i = 0; i < lib.theorems.size(); ++i) {
    const TermPtr& t = lib.theorems[i].statement;
    if (t->kind() != TermKind::App) continue;
    const TermPtr& lhs_app = t->fun();
    if (lhs_app->kind() != TermKind::App) continue;
    if (lhs_app->fun()->kind() != TermKind::Const ||
        lhs_app->fun()->sym() != logic::eq())
      continue;
    if (lhs_app->arg()->kind() != TermKind::Const ||
        t->arg()->kind() != TermKind::Const)
      continue;
    Symbol c1 = lhs_app->arg()->sym();
    Symbol c2 = t->arg()->sym();
    if (c1 == c2) continue;
    consumed[i] = 1;
    auto it = next.find(c1);
    if (it == next.end()) {
      next.emplace(c1, c2);
    } else if (it->second != c2) {
      Symbol keep = sym_less(it->second, c2) ? it->second : c2;
      warn("multiple equalities for " + sym_name(c1) + "; keeping " +
           sym_name(keep));
      it->second = keep;
    }
  }
  if (next.empty()) return lib;

  // Resolve each source transitively; cycles pick the smallest member.
  std::unordered_map<Symbol, Symbol> rep;
  for (const auto& [start, unused] : next) {
    (void)unused;
    if (rep.count(start)) continue;
    std::vector<Symbol> path;
    std::unordered_map<Symbol, size_t> at;
    Symbol cur = start;
    Symbol target;
    for (;;) {
      auto done = rep.find(cur);
      if (done != rep.end()) {
        target = done->second;
        break;
      }
      auto hit = at.find(cur);
      if (hit != at.end()) {
        // Cycle: path[hit->second..] loops; choose its smallest name.
        Symbol best = cur;
        for (size_t i = hit->second; i < path.size(); ++i)
          if (sym_less(path[i], best)) best = path[i];
        warn("equality cycle through " + sym_name(cur) + "; using " +
             sym_name(best));
        target = best;
        break;
      }
      auto step = next.find(cur);
      if (step == next.end()) {
        target = cur;  // terminal representative
        break;
      }
      at.emplace(cur, path.size());
      path.push_back(cur);
      cur = step->second;
    }
    for (Symbol s : path) rep[s] = target;
  }

  std::unordered_map<Symbol, Symbol> subst;
  for (const auto& [c, r] : rep)
    if (c != r) subst.emplace(c, r);

  Library out = std::move(lib);
  std::vector<Theorem> kept;
  kept.reserve(out.theorems.size());
  for (size_t i = 0; i < out.theorems.size(); ++i) {
    if (consumed[i]) continue;
    Theorem th = std::move(out.theorems[i]);
    th.statement = subst_map(th.statement, subst);
    kept.push_back(std::move(th));
  }
  out.theorems = std::move(kept);
  for (const auto& [c, r] : subst) {
    (void)r;
    drop_signature(out, c);
  }
  return out;
}

Library collapse_extensional_equalities(Library lib,
                                        const std::vector<Symbol>& manual,
                                        std::vector<std::string>* warnings) {
  std::unordered_map<Symbol, Symbol> m;
  for (Symbol c : manual) {
    if (!lib.has_const(c)) {
      if (warnings)
        warnings->push_back("extensional-equality constant not in library: " +
                            sym_name(c));
      continue;
    }
    m.emplace(c, logic::eq());
  }
  if (m.empty()) return lib;
  for (Theorem& th : lib.theorems) th.statement = subst_map(th.statement, m);
  for (const auto& [c, r] : m) {
    (void)r;
    drop_signature(lib, c);
  }
  return lib;
}

}  // namespace holmatch
