#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "holmatch/symbol.hpp"

namespace holmatch {

enum class TermKind : uint8_t { Const, Bound, Abs, App };

// Immutable lambda term in de Bruijn form.  Subterms are shared; every node
// caches its structural hash, node count and the number of enclosing binders
// it needs to be closed.  Alpha-equivalence is plain structural equality.
class Term {
 public:
  using Ptr = std::shared_ptr<const Term>;

  static Ptr constant(Symbol s);
  static Ptr bound(uint32_t index);
  static Ptr abs(Ptr body);
  static Ptr app(Ptr fun, Ptr arg);

  TermKind kind() const { return kind_; }
  Symbol sym() const { return sym_; }        // Const only
  uint32_t index() const { return index_; }  // Bound only
  const Ptr& body() const { return a_; }     // Abs only
  const Ptr& fun() const { return a_; }      // App only
  const Ptr& arg() const { return b_; }      // App only

  uint64_t shash() const { return shash_; }
  uint32_t node_count() const { return nodes_; }
  // Smallest n such that the term is closed under n enclosing binders.
  uint32_t free_above() const { return free_above_; }
  bool is_closed() const { return free_above_ == 0; }

 private:
  Term() = default;
  TermKind kind_;
  Symbol sym_ = 0;
  uint32_t index_ = 0;
  Ptr a_;
  Ptr b_;
  uint64_t shash_ = 0;
  uint32_t nodes_ = 1;
  uint32_t free_above_ = 0;
};

using TermPtr = Term::Ptr;

// Structural equality on de Bruijn skeletons (= alpha-equivalence).
bool term_eq(const TermPtr& a, const TermPtr& b);
inline bool alpha_equal(const TermPtr& a, const TermPtr& b) {
  return term_eq(a, b);
}

// Flat prefix serialization: "@" application, "L" abstraction, "b<i>" bound
// variable, "c:<name>" constant; tokens separated by single spaces.  Total
// order on serializations doubles as the canonical term order.
std::string serialize_term(const TermPtr& t);

// serialize_term restricted to closed terms; throws UnboundVariableError.
std::string canonical(const TermPtr& t);

// Three-way comparison agreeing in sign with comparing the two
// serializations byte-wise, without materializing either string.
int term_cmp(const TermPtr& a, const TermPtr& b);

// Strict weak order on terms by canonical serialization.
struct TermLess {
  bool operator()(const TermPtr& a, const TermPtr& b) const {
    return term_cmp(a, b) < 0;
  }
};

// Inverse of serialize_term.  Throws ParseError on malformed input.
TermPtr parse_canonical(std::string_view s);

// Add delta to every bound index >= cutoff.  Throws UnboundVariableError if
// an index would become negative.
TermPtr shift(const TermPtr& t, int32_t delta, uint32_t cutoff = 0);

// Replace every occurrence of constant `from` with constant `to`.
TermPtr subst_const(const TermPtr& t, Symbol from, Symbol to);

// Constants in first-occurrence order under leftmost-outermost traversal.
std::vector<Symbol> constants_in_order(const TermPtr& t);

// Free de Bruijn indices relative to the root, sorted ascending.
std::vector<uint32_t> free_vars(const TermPtr& t);

// Renumber free indices at the root: index i becomes map[i].  Every free
// index must be a key of the map.
TermPtr remap_free(const TermPtr& t,
                   const std::vector<std::pair<uint32_t, uint32_t>>& map);

// Application spine helpers: f a b c <-> (head=f, args=[a,b,c]).
std::pair<TermPtr, std::vector<TermPtr>> spine(const TermPtr& t);
TermPtr make_app(TermPtr head, const std::vector<TermPtr>& args);

// Readable rendering with invented binder names, for diagnostics.
std::string to_display(const TermPtr& t);

}  // namespace holmatch
