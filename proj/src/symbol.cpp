#include "holmatch/symbol.hpp"

#include <deque>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>

namespace holmatch {
namespace {

struct SymbolTable {
  std::shared_mutex mu;
  std::deque<std::string> names;  // deque: stable references on growth
  std::unordered_map<std::string_view, Symbol> ids;
};

SymbolTable& table() {
  static SymbolTable t;
  return t;
}

}  // namespace

Symbol intern(std::string_view name) {
  SymbolTable& t = table();
  {
    std::shared_lock lock(t.mu);
    auto it = t.ids.find(name);
    if (it != t.ids.end()) return it->second;
  }
  std::unique_lock lock(t.mu);
  auto it = t.ids.find(name);
  if (it != t.ids.end()) return it->second;
  t.names.emplace_back(name);
  Symbol id = static_cast<Symbol>(t.names.size() - 1);
  t.ids.emplace(t.names.back(), id);
  return id;
}

const std::string& sym_name(Symbol s) {
  SymbolTable& t = table();
  std::shared_lock lock(t.mu);
  return t.names[s];
}

bool sym_less(Symbol a, Symbol b) {
  if (a == b) return false;
  SymbolTable& t = table();
  std::shared_lock lock(t.mu);
  return t.names[a] < t.names[b];
}

}  // namespace holmatch
