#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace holmatch {

// Interned identifier for qualified constant and type names.  Interning keeps
// term nodes small and makes name equality a single integer compare.  Ordering
// of Symbol values is an interning artifact; use sym_less for name order.
using Symbol = uint32_t;

Symbol intern(std::string_view name);
const std::string& sym_name(Symbol s);

// Lexicographic byte order on the underlying names.
bool sym_less(Symbol a, Symbol b);

}  // namespace holmatch
