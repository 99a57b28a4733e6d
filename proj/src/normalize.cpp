#include "holmatch/normalize.hpp"

#include <algorithm>
#include <set>

#include "holmatch/errors.hpp"
#include "holmatch/logic.hpp"

namespace holmatch {
namespace {

using logic::and_c;
using logic::eq;
using logic::exists;
using logic::forall;
using logic::imp;
using logic::neg;
using logic::or_c;

bool is_binary(const TermPtr& t, Symbol c, TermPtr* a, TermPtr* b) {
  if (t->kind() != TermKind::App) return false;
  const TermPtr& f = t->fun();
  if (f->kind() != TermKind::App) return false;
  if (f->fun()->kind() != TermKind::Const || f->fun()->sym() != c)
    return false;
  *a = f->arg();
  *b = t->arg();
  return true;
}

bool is_unary(const TermPtr& t, Symbol c, TermPtr* a) {
  if (t->kind() != TermKind::App) return false;
  if (t->fun()->kind() != TermKind::Const || t->fun()->sym() != c)
    return false;
  *a = t->arg();
  return true;
}

// Matches q (\x. body); returns the body under the binder.
bool is_quant(const TermPtr& t, Symbol q, TermPtr* body) {
  if (t->kind() != TermKind::App) return false;
  if (t->fun()->kind() != TermKind::Const || t->fun()->sym() != q)
    return false;
  if (t->arg()->kind() != TermKind::Abs) return false;
  *body = t->arg()->body();
  return true;
}

TermPtr mk_quant(Symbol q, TermPtr body) {
  return Term::app(Term::constant(q), Term::abs(std::move(body)));
}

TermPtr mk_bin(Symbol c, TermPtr a, TermPtr b) {
  return Term::app(Term::app(Term::constant(c), std::move(a)), std::move(b));
}

TermPtr recurse(const TermPtr& t, TermPtr (*fn)(const TermPtr&)) {
  switch (t->kind()) {
    case TermKind::Const:
    case TermKind::Bound:
      return t;
    case TermKind::Abs: {
      TermPtr b = fn(t->body());
      return b.get() == t->body().get() ? t : Term::abs(std::move(b));
    }
    case TermKind::App: {
      TermPtr f = fn(t->fun());
      TermPtr a = fn(t->arg());
      if (f.get() == t->fun().get() && a.get() == t->arg().get()) return t;
      return Term::app(std::move(f), std::move(a));
    }
  }
  return t;
}

// Step 1: a => b  ~>  ~a \/ b, at every level including inside atoms.
TermPtr rewrite_imp(const TermPtr& t) {
  TermPtr a, b;
  if (is_binary(t, imp(), &a, &b))
    return mk_bin(or_c(),
                  Term::app(Term::constant(neg()), rewrite_imp(a)),
                  rewrite_imp(b));
  return recurse(t, &rewrite_imp);
}

// Step 2: push negation inward; no skolemization, quantifiers just flip.
TermPtr push_neg(const TermPtr& t);

// Normalized form of ~x; `orig` is the enclosing ~x node, returned unchanged
// when x is an atom that normalization leaves alone.
TermPtr push_neg_of(const TermPtr& x, const TermPtr* orig = nullptr) {
  TermPtr a, b;
  if (is_binary(x, and_c(), &a, &b))
    return mk_bin(or_c(), push_neg_of(a), push_neg_of(b));
  if (is_binary(x, or_c(), &a, &b))
    return mk_bin(and_c(), push_neg_of(a), push_neg_of(b));
  if (is_unary(x, neg(), &a)) return push_neg(a);
  if (is_quant(x, forall(), &a)) return mk_quant(exists(), push_neg_of(a));
  if (is_quant(x, exists(), &a)) return mk_quant(forall(), push_neg_of(a));
  TermPtr nx = push_neg(x);
  if (orig && nx.get() == x.get()) return *orig;
  return Term::app(Term::constant(neg()), std::move(nx));
}

TermPtr push_neg(const TermPtr& t) {
  TermPtr a;
  if (is_unary(t, neg(), &a)) return push_neg_of(a, &t);
  return recurse(t, &push_neg);
}

// Peels a maximal chain of one quantifier; returns binder count.
uint32_t peel_chain(Symbol q, TermPtr& t) {
  uint32_t n = 0;
  TermPtr body;
  while (is_quant(t, q, &body)) {
    t = body;
    ++n;
  }
  return n;
}

TermPtr wrap_chain(Symbol q, uint32_t n, TermPtr core) {
  for (uint32_t i = 0; i < n; ++i) core = mk_quant(q, std::move(core));
  return core;
}

// Step 3: lift universal quantifiers over /\ and \/.  Existential bodies are
// left alone (never lifted past, not prenexed inside).  Atoms are opaque.
TermPtr lift_foralls(const TermPtr& t) {
  TermPtr a, b;
  if (is_binary(t, and_c(), &a, &b) || is_binary(t, or_c(), &a, &b)) {
    Symbol conn = t->fun()->fun()->sym();
    TermPtr A = lift_foralls(a);
    TermPtr B = lift_foralls(b);
    TermPtr A0 = A, B0 = B;
    uint32_t m = peel_chain(forall(), A0);
    uint32_t k = peel_chain(forall(), B0);
    if (m + k == 0) {
      if (A.get() == a.get() && B.get() == b.get()) return t;
      return mk_bin(conn, std::move(A), std::move(B));
    }
    // A's binders end up outermost: all of A0 shifts past B's k binders;
    // B0's references beyond its own k binders shift past A's m.
    TermPtr A1 = shift(A0, static_cast<int32_t>(k), 0);
    TermPtr B1 = shift(B0, static_cast<int32_t>(m), k);
    return wrap_chain(forall(), m + k,
                      mk_bin(conn, std::move(A1), std::move(B1)));
  }
  if (is_quant(t, forall(), &a)) {
    TermPtr body = lift_foralls(a);
    return body.get() == a.get() ? t : mk_quant(forall(), std::move(body));
  }
  return t;
}

// Step 4: distribute \/ over /\, guarded by a size prediction so the cap
// decision never depends on operand order or constant names.

constexpr uint64_t kSizeSat = uint64_t(1) << 62;

uint64_t sat_add(uint64_t a, uint64_t b) {
  return a > kSizeSat - b ? kSizeSat : a + b;
}

uint64_t sat_mul(uint64_t a, uint64_t b) {
  return b != 0 && a > kSizeSat / b ? kSizeSat : a * b;
}

// Clause count and summed clause sizes of the fully distributed form.  The
// node count of that form is nodes + 3*(count - 1) regardless of how the
// conjunction tree is bracketed, so the prediction is exact whenever it
// stays below the saturation threshold.
struct DistSize {
  uint64_t count;
  uint64_t nodes;
};

uint64_t dist_total(DistSize s) {
  return sat_add(s.nodes, sat_mul(3, s.count - 1));
}

DistSize dist_size(const TermPtr& t) {
  TermPtr a, b;
  if (is_binary(t, and_c(), &a, &b)) {
    DistSize A = dist_size(a), B = dist_size(b);
    return {sat_add(A.count, B.count), sat_add(A.nodes, B.nodes)};
  }
  if (is_binary(t, or_c(), &a, &b)) {
    DistSize A = dist_size(a), B = dist_size(b);
    uint64_t count = sat_mul(A.count, B.count);
    uint64_t nodes = sat_add(sat_add(sat_mul(B.count, A.nodes),
                                     sat_mul(A.count, B.nodes)),
                             sat_mul(3, count));
    return {count, nodes};
  }
  if (is_quant(t, forall(), &a) || is_quant(t, exists(), &a))
    return {1, sat_add(dist_total(dist_size(a)), 3)};
  return {1, t->node_count()};
}

TermPtr dist_or(TermPtr A, TermPtr B);

TermPtr distribute(const TermPtr& t) {
  TermPtr a, b;
  if (is_binary(t, and_c(), &a, &b)) {
    TermPtr A = distribute(a);
    TermPtr B = distribute(b);
    if (A.get() == a.get() && B.get() == b.get()) return t;
    return mk_bin(and_c(), std::move(A), std::move(B));
  }
  if (is_binary(t, or_c(), &a, &b)) {
    TermPtr A = distribute(a);
    TermPtr B = distribute(b);
    TermPtr p, q;
    if (A.get() == a.get() && B.get() == b.get() &&
        !is_binary(A, and_c(), &p, &q) && !is_binary(B, and_c(), &p, &q))
      return t;
    return dist_or(std::move(A), std::move(B));
  }
  if (is_quant(t, forall(), &a)) {
    TermPtr body = distribute(a);
    return body.get() == a.get() ? t : mk_quant(forall(), std::move(body));
  }
  if (is_quant(t, exists(), &a)) {
    TermPtr body = distribute(a);
    return body.get() == a.get() ? t : mk_quant(exists(), std::move(body));
  }
  return t;
}

TermPtr dist_or(TermPtr A, TermPtr B) {
  TermPtr p, q;
  if (is_binary(A, and_c(), &p, &q))
    return mk_bin(and_c(), dist_or(p, B), dist_or(q, B));
  if (is_binary(B, and_c(), &p, &q))
    return mk_bin(and_c(), dist_or(A, p), dist_or(A, q));
  return mk_bin(or_c(), std::move(A), std::move(B));
}

// Swap the bound variables j and j+1 relative to the root of t.
TermPtr swap_adjacent(const TermPtr& t, uint32_t j, uint32_t cutoff = 0) {
  if (t->free_above() <= cutoff + j) return t;
  switch (t->kind()) {
    case TermKind::Const:
      return t;
    case TermKind::Bound: {
      uint32_t idx = t->index();
      if (idx == cutoff + j) return Term::bound(idx + 1);
      if (idx == cutoff + j + 1) return Term::bound(idx - 1);
      return t;
    }
    case TermKind::Abs: {
      TermPtr b = swap_adjacent(t->body(), j, cutoff + 1);
      return b.get() == t->body().get() ? t : Term::abs(std::move(b));
    }
    case TermKind::App: {
      TermPtr f = swap_adjacent(t->fun(), j, cutoff);
      TermPtr a = swap_adjacent(t->arg(), j, cutoff);
      if (f.get() == t->fun().get() && a.get() == t->arg().get()) return t;
      return Term::app(std::move(f), std::move(a));
    }
  }
  return t;
}

// Steps 5+6 (and the AC rewriting of level 2): flatten associative spines,
// sort commutative operands by canonical form, rebuild right-nested, and
// bubble-sort adjacent same-quantifier binders toward the minimal form.
class FlattenSorter {
 public:
  explicit FlattenSorter(const std::vector<Symbol>& ac) : ac_(ac) {}

  TermPtr run(const TermPtr& t) {
    TermPtr a, b;
    if (is_binary(t, and_c(), &a, &b)) return assoc_comm(t, and_c());
    if (is_binary(t, or_c(), &a, &b)) return assoc_comm(t, or_c());
    if (is_binary(t, eq(), &a, &b)) {
      TermPtr A = run(a), B = run(b);
      if (term_cmp(B, A) < 0) std::swap(A, B);
      if (A.get() == a.get() && B.get() == b.get()) return t;
      return mk_bin(eq(), std::move(A), std::move(B));
    }
    for (Symbol c : ac_) {
      if (is_binary(t, c, &a, &b)) return assoc_comm(t, c);
    }
    TermPtr body;
    if (is_quant(t, forall(), &body)) return quant_chain(t, forall());
    if (is_quant(t, exists(), &body)) return quant_chain(t, exists());
    switch (t->kind()) {
      case TermKind::Const:
      case TermKind::Bound:
        return t;
      case TermKind::Abs: {
        TermPtr nb = run(t->body());
        return nb.get() == t->body().get() ? t : Term::abs(std::move(nb));
      }
      case TermKind::App: {
        TermPtr f = run(t->fun());
        TermPtr g = run(t->arg());
        if (f.get() == t->fun().get() && g.get() == t->arg().get()) return t;
        return Term::app(std::move(f), std::move(g));
      }
    }
    return t;
  }

 private:
  const std::vector<Symbol>& ac_;

  void collect(const TermPtr& t, Symbol c, std::vector<TermPtr>& leaves) {
    TermPtr a, b;
    if (is_binary(t, c, &a, &b)) {
      collect(a, c, leaves);
      collect(b, c, leaves);
    } else {
      leaves.push_back(run(t));
    }
  }

  // True when t is already the right-nested chain of exactly these leaves.
  static bool spine_matches(const TermPtr& t, Symbol c,
                            const std::vector<TermPtr>& leaves) {
    TermPtr cur = t, x, y;
    for (size_t i = 0; i + 1 < leaves.size(); ++i) {
      if (!is_binary(cur, c, &x, &y) || x.get() != leaves[i].get())
        return false;
      cur = y;
    }
    return cur.get() == leaves.back().get();
  }

  TermPtr assoc_comm(const TermPtr& t, Symbol c) {
    std::vector<TermPtr> leaves;
    collect(t, c, leaves);
    bool sorted = true;
    for (size_t i = 0; i + 1 < leaves.size(); ++i)
      if (term_cmp(leaves[i + 1], leaves[i]) < 0) {
        sorted = false;
        break;
      }
    if (sorted && spine_matches(t, c, leaves)) return t;
    std::stable_sort(leaves.begin(), leaves.end(), TermLess{});
    TermPtr acc = leaves.back();
    for (size_t i = leaves.size() - 1; i-- > 0;)
      acc = mk_bin(c, leaves[i], std::move(acc));
    return acc;
  }

  TermPtr quant_chain(const TermPtr& t, Symbol q) {
    TermPtr core0 = t;
    uint32_t n = peel_chain(q, core0);
    TermPtr core = run(core0);
    bool touched = core.get() != core0.get();
    if (n > 1) {
      bool changed = true;
      while (changed) {
        changed = false;
        for (uint32_t j = 0; j + 1 < n; ++j) {
          TermPtr swapped = swap_adjacent(core, j);
          if (term_cmp(swapped, core) < 0) {
            core = std::move(swapped);
            changed = true;
            touched = true;
          }
        }
      }
    }
    if (!touched) return t;
    return wrap_chain(q, n, std::move(core));
  }
};

// Left-to-right leaves of the top /\-spine.
std::vector<TermPtr> and_leaves(const TermPtr& t) {
  std::vector<TermPtr> leaves;
  std::vector<TermPtr> stack{t};
  while (!stack.empty()) {
    TermPtr cur = stack.back();
    stack.pop_back();
    TermPtr a, b;
    if (is_binary(cur, and_c(), &a, &b)) {
      stack.push_back(b);
      stack.push_back(a);
    } else {
      leaves.push_back(cur);
    }
  }
  return leaves;
}

struct Pipeline {
  const NormConfig& cfg;
  std::string_view thm_name;
  NormStats* stats;
  bool skip_recorded = false;
  const std::vector<Symbol>& ac;

  TermPtr fixpoint(TermPtr t) {
    for (int pass = 0; pass < 1000; ++pass) {
      TermPtr u = rewrite_imp(t);
      u = push_neg(u);
      u = lift_foralls(u);
      if (dist_total(dist_size(u)) >
          static_cast<uint64_t>(cfg.distribution_size_cap)) {
        if (!skip_recorded) {
          skip_recorded = true;
          if (stats)
            stats->skipped_distributions.push_back(
                "SKIP-DIST " + std::string(thm_name) + " " +
                std::to_string(u->node_count()));
        }
      } else {
        u = distribute(u);
      }
      u = FlattenSorter(ac).run(u);
      if (term_eq(u, t)) return u;
      t = std::move(u);
    }
    return t;
  }

  // Step 7: split the top conjunction under the universal prefix,
  // re-quantifying each conjunct over exactly its occurring variables.
  void split_into(const TermPtr& t, std::set<TermPtr, TermLess>& out) {
    TermPtr u = fixpoint(t);
    TermPtr core = u;
    peel_chain(forall(), core);
    std::vector<TermPtr> conjuncts = and_leaves(core);
    if (conjuncts.size() == 1) {
      out.insert(u);
      return;
    }
    for (const TermPtr& c : conjuncts) {
      std::vector<uint32_t> fv = free_vars(c);
      std::vector<std::pair<uint32_t, uint32_t>> remap;
      remap.reserve(fv.size());
      for (uint32_t i = 0; i < fv.size(); ++i) remap.emplace_back(fv[i], i);
      TermPtr piece = wrap_chain(
          forall(), static_cast<uint32_t>(fv.size()), remap_free(c, remap));
      split_into(piece, out);
    }
  }
};

}  // namespace

std::vector<TermPtr> normalize(const TermPtr& t, const NormConfig& cfg,
                               std::string_view thm_name, NormStats* stats) {
  if (!t->is_closed())
    throw UnboundVariableError("normalize: open term for " +
                               std::string(thm_name));
  if (cfg.level == 0) return {t};
  static const std::vector<Symbol> no_ac;
  const std::vector<Symbol>& ac = cfg.level >= 2 ? cfg.ac_constants : no_ac;
  Pipeline p{cfg, thm_name, stats, false, ac};
  std::set<TermPtr, TermLess> canon;
  p.split_into(t, canon);
  return std::vector<TermPtr>(canon.begin(), canon.end());
}

TermPtr ac_normalize(const TermPtr& t, const std::vector<Symbol>& ac) {
  if (ac.empty()) return t;
  TermPtr a, b;
  for (Symbol c : ac) {
    if (is_binary(t, c, &a, &b)) {
      // Flatten the c-spine, normalize the operands, sort, rebuild.
      std::vector<TermPtr> leaves;
      std::vector<TermPtr> stack{t};
      while (!stack.empty()) {
        TermPtr cur = stack.back();
        stack.pop_back();
        TermPtr x, y;
        if (is_binary(cur, c, &x, &y)) {
          stack.push_back(y);
          stack.push_back(x);
        } else {
          leaves.push_back(ac_normalize(cur, ac));
        }
      }
      std::stable_sort(leaves.begin(), leaves.end(), TermLess{});
      TermPtr acc = leaves.back();
      for (size_t i = leaves.size() - 1; i-- > 0;)
        acc = mk_bin(c, leaves[i], std::move(acc));
      return acc;
    }
  }
  switch (t->kind()) {
    case TermKind::Const:
    case TermKind::Bound:
      return t;
    case TermKind::Abs: {
      TermPtr nb = ac_normalize(t->body(), ac);
      return nb.get() == t->body().get() ? t : Term::abs(std::move(nb));
    }
    case TermKind::App: {
      TermPtr f = ac_normalize(t->fun(), ac);
      TermPtr g = ac_normalize(t->arg(), ac);
      if (f.get() == t->fun().get() && g.get() == t->arg().get()) return t;
      return Term::app(std::move(f), std::move(g));
    }
  }
  return t;
}

}  // namespace holmatch
