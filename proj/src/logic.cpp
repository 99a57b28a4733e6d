#include "holmatch/logic.hpp"

#include <algorithm>

#include "holmatch/errors.hpp"

namespace holmatch {
namespace logic {

Symbol forall() {
  static Symbol s = intern("clogic.basis.forall");
  return s;
}
Symbol exists() {
  static Symbol s = intern("clogic.basis.exists");
  return s;
}
Symbol and_c() {
  static Symbol s = intern("clogic.basis.and");
  return s;
}
Symbol or_c() {
  static Symbol s = intern("clogic.basis.or");
  return s;
}
Symbol imp() {
  static Symbol s = intern("clogic.basis.imp");
  return s;
}
Symbol neg() {
  static Symbol s = intern("clogic.basis.neg");
  return s;
}
Symbol eq() {
  static Symbol s = intern("clogic.basis.eq");
  return s;
}

Symbol ty_bool() {
  static Symbol s = intern("tlogic.basis.bool");
  return s;
}
Symbol ty_fun() {
  static Symbol s = intern("tlogic.basis.fun");
  return s;
}

const std::vector<Symbol>& basis_constants() {
  static std::vector<Symbol> v = {forall(), exists(), and_c(), or_c(),
                                  imp(),    neg(),    eq()};
  return v;
}

bool is_basis(Symbol s) {
  const auto& v = basis_constants();
  return std::find(v.begin(), v.end(), s) != v.end();
}

TypePtr ty_bool_t() { return Type::con(ty_bool()); }
TypePtr ty_fun_t(TypePtr from, TypePtr to) {
  return Type::con(ty_fun(), {std::move(from), std::move(to)});
}

TypePtr basis_signature(Symbol s) {
  TypePtr b = ty_bool_t();
  TypePtr a = Type::var(0);
  if (s == forall() || s == exists())
    return ty_fun_t(ty_fun_t(a, b), b);  // (a -> bool) -> bool
  if (s == and_c() || s == or_c() || s == imp())
    return ty_fun_t(b, ty_fun_t(b, b));
  if (s == neg()) return ty_fun_t(b, b);
  if (s == eq()) return ty_fun_t(a, ty_fun_t(a, b));
  throw Error("basis_signature: not a basis constant: " + sym_name(s));
}

TermPtr mk_forall(TermPtr abs_body) {
  return Term::app(Term::constant(forall()), Term::abs(std::move(abs_body)));
}
TermPtr mk_exists(TermPtr abs_body) {
  return Term::app(Term::constant(exists()), Term::abs(std::move(abs_body)));
}
TermPtr mk_and(TermPtr a, TermPtr b) {
  return Term::app(Term::app(Term::constant(and_c()), std::move(a)),
                   std::move(b));
}
TermPtr mk_or(TermPtr a, TermPtr b) {
  return Term::app(Term::app(Term::constant(or_c()), std::move(a)),
                   std::move(b));
}
TermPtr mk_imp(TermPtr a, TermPtr b) {
  return Term::app(Term::app(Term::constant(imp()), std::move(a)),
                   std::move(b));
}
TermPtr mk_neg(TermPtr a) {
  return Term::app(Term::constant(neg()), std::move(a));
}
TermPtr mk_eq(TermPtr a, TermPtr b) {
  return Term::app(Term::app(Term::constant(eq()), std::move(a)),
                   std::move(b));
}

}  // namespace logic
}  // namespace holmatch
