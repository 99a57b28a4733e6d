#include "holmatch/library.hpp"

#include <algorithm>

#include "holmatch/errors.hpp"
#include "holmatch/logic.hpp"
#include "holmatch/parser.hpp"

namespace holmatch {

void Library::install_basis() {
  for (Symbol s : logic::basis_constants()) {
    if (!constants.count(s)) {
      constants.emplace(s, logic::basis_signature(s));
      const_order.push_back(s);
    }
    defined_constants.insert(s);
  }
  defined_types.insert(logic::ty_bool());
  for (Symbol t : {logic::ty_bool(), logic::ty_fun()})
    if (std::find(type_order.begin(), type_order.end(), t) == type_order.end())
      type_order.push_back(t);
}

void Library::declare_const(Symbol name, TypePtr ty) {
  auto it = constants.find(name);
  if (it != constants.end()) {
    if (!type_eq(it->second, ty))
      throw ParseError("conflicting signature for constant " + sym_name(name));
    return;
  }
  note_types_of(ty);
  constants.emplace(name, std::move(ty));
  const_order.push_back(name);
}

const TypePtr& Library::signature(Symbol s) const {
  auto it = constants.find(s);
  if (it == constants.end())
    throw UnknownConstantError("no signature for constant " + sym_name(s));
  return it->second;
}

void Library::note_types_of(const TypePtr& ty) {
  for (Symbol t : tycons_in_order(ty))
    if (std::find(type_order.begin(), type_order.end(), t) == type_order.end())
      type_order.push_back(t);
}

std::string serialize_library(const Library& lib) {
  std::string out;
  for (Symbol c : lib.const_order) {
    if (logic::is_basis(c)) continue;  // installed implicitly by every parse
    out += "const ";
    out += sym_name(c);
    out.push_back(' ');
    out += write_type(lib.constants.at(c));
    out.push_back('\n');
  }
  for (const Theorem& th : lib.theorems) {
    out += "thm ";
    out += sym_name(th.name);
    out.push_back(' ');
    out += write_term(th.statement);
    out.push_back('\n');
  }
  return out;
}

}  // namespace holmatch
