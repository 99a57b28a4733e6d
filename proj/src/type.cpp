#include "holmatch/type.hpp"

#include <algorithm>
#include <unordered_map>

namespace holmatch {

bool type_eq(const TypePtr& a, const TypePtr& b) {
  if (a.get() == b.get()) return true;
  if (a->is_var() != b->is_var()) return false;
  if (a->is_var()) return a->id() == b->id();
  if (a->name() != b->name() || a->args().size() != b->args().size())
    return false;
  for (size_t i = 0; i < a->args().size(); ++i)
    if (!type_eq(a->args()[i], b->args()[i])) return false;
  return true;
}

std::string write_type(const TypePtr& t) {
  if (t->is_var()) return "A" + std::to_string(t->id());
  std::string out = sym_name(t->name());
  if (!t->args().empty()) {
    out.push_back('(');
    for (size_t i = 0; i < t->args().size(); ++i) {
      if (i) out.push_back(',');
      out += write_type(t->args()[i]);
    }
    out.push_back(')');
  }
  return out;
}

namespace {

TypePtr renumber_rec(const TypePtr& t,
                     std::unordered_map<uint32_t, uint32_t>& seen) {
  if (t->is_var()) {
    auto it = seen.find(t->id());
    uint32_t id;
    if (it == seen.end()) {
      id = static_cast<uint32_t>(seen.size());
      seen.emplace(t->id(), id);
    } else {
      id = it->second;
    }
    return id == t->id() ? t : Type::var(id);
  }
  std::vector<TypePtr> args;
  args.reserve(t->args().size());
  bool changed = false;
  for (const TypePtr& a : t->args()) {
    args.push_back(renumber_rec(a, seen));
    changed |= args.back().get() != a.get();
  }
  return changed ? Type::con(t->name(), std::move(args)) : t;
}

}  // namespace

TypePtr renumber_type_vars(const TypePtr& t) {
  std::unordered_map<uint32_t, uint32_t> seen;
  return renumber_rec(t, seen);
}

TypePtr subst_tycon(const TypePtr& t, Symbol from, Symbol to) {
  if (t->is_var()) return t;
  std::vector<TypePtr> args;
  args.reserve(t->args().size());
  bool changed = false;
  for (const TypePtr& a : t->args()) {
    args.push_back(subst_tycon(a, from, to));
    changed |= args.back().get() != a.get();
  }
  if (t->name() == from)
    return Type::con(to, changed ? std::move(args) : t->args());
  return changed ? Type::con(t->name(), std::move(args)) : t;
}

namespace {

void tycons_rec(const TypePtr& t, std::vector<Symbol>& out) {
  if (t->is_var()) return;
  if (std::find(out.begin(), out.end(), t->name()) == out.end())
    out.push_back(t->name());
  for (const TypePtr& a : t->args()) tycons_rec(a, out);
}

}  // namespace

std::vector<Symbol> tycons_in_order(const TypePtr& t) {
  std::vector<Symbol> out;
  tycons_rec(t, out);
  return out;
}

}  // namespace holmatch
