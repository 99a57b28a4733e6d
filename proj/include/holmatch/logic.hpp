#pragma once

#include <vector>

#include "holmatch/symbol.hpp"
#include "holmatch/term.hpp"
#include "holmatch/type.hpp"

namespace holmatch {
namespace logic {

// Canonical logical basis every library is mapped onto.
Symbol forall();
Symbol exists();
Symbol and_c();
Symbol or_c();
Symbol imp();
Symbol neg();
Symbol eq();

Symbol ty_bool();
Symbol ty_fun();

const std::vector<Symbol>& basis_constants();
bool is_basis(Symbol s);

// Most general signature of a basis constant.
TypePtr basis_signature(Symbol s);

// Formula-building helpers (terms of type bool).
TermPtr mk_forall(TermPtr abs_body);  // body already under one binder
TermPtr mk_exists(TermPtr abs_body);
TermPtr mk_and(TermPtr a, TermPtr b);
TermPtr mk_or(TermPtr a, TermPtr b);
TermPtr mk_imp(TermPtr a, TermPtr b);
TermPtr mk_neg(TermPtr a);
TermPtr mk_eq(TermPtr a, TermPtr b);

TypePtr ty_bool_t();
TypePtr ty_fun_t(TypePtr from, TypePtr to);

}  // namespace logic
}  // namespace holmatch
