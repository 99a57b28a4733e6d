#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "holmatch/symbol.hpp"

namespace holmatch {

// First-order type: a variable or a constructor applied to argument types.
// Variable ids are positional: within one signature they are numbered by
// first occurrence (the parser renumbers whatever tails the source used).
class Type {
 public:
  using Ptr = std::shared_ptr<const Type>;

  static Ptr var(uint32_t id) {
    auto t = std::make_shared<Type>(Private{});
    t->is_var_ = true;
    t->id_ = id;
    return t;
  }
  static Ptr con(Symbol name, std::vector<Ptr> args = {}) {
    auto t = std::make_shared<Type>(Private{});
    t->name_ = name;
    t->args_ = std::move(args);
    return t;
  }

  bool is_var() const { return is_var_; }
  uint32_t id() const { return id_; }
  Symbol name() const { return name_; }
  const std::vector<Ptr>& args() const { return args_; }

  struct Private {};
  explicit Type(Private) {}

 private:
  bool is_var_ = false;
  uint32_t id_ = 0;
  Symbol name_ = 0;
  std::vector<Ptr> args_;
};

using TypePtr = Type::Ptr;

bool type_eq(const TypePtr& a, const TypePtr& b);

// Exchange syntax: "A<id>" for variables, "name" or "name(arg,...)" for
// constructors; no spaces.
std::string write_type(const TypePtr& t);

// Renumber variables by first occurrence (left to right).
TypePtr renumber_type_vars(const TypePtr& t);

// Replace every constructor named `from` with `to`, keeping arguments.
TypePtr subst_tycon(const TypePtr& t, Symbol from, Symbol to);

// Constructor names in first-occurrence order.
std::vector<Symbol> tycons_in_order(const TypePtr& t);

}  // namespace holmatch
